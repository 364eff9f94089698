from fractions import Fraction

import pytest

import talkfilter as tf


@pytest.fixture
def art() -> tf.Game:
    """Art-dealer game: action 1 = trade, action 0 = pass (both get 0)."""
    return tf.make_game([
        ("OG", "1/3", ("0", "1"), ("0", "1")),
        ("IF", "1/3", ("0", "1"), ("0", "-5")),
        ("DF", "1/3", ("0", "-5"), ("0", "-5")),
    ])


@pytest.fixture
def g3() -> tf.Game:
    """Three-state game whose receiver-optimal filter has an interior pivot."""
    return tf.make_game([
        ("w1", "1/3", ("1", "0"), ("1", "0")),
        ("w2", "1/3", ("0", "1"), ("0", "1")),
        ("w3", "1/3", ("0", "3"), ("1", "0")),
    ])


@pytest.fixture
def l2() -> tf.Game:
    """Two-sender game whose unanimous-0 LP has a fractional vertex."""
    return tf.make_game([
        ("w1", "1/2", [("0", "1"), ("2", "0")], ("1", "0")),
        ("w2", "1/2", [("2", "0"), ("0", "1")], ("0", "1")),
    ], num_senders=2)


@pytest.fixture
def art_optimal_filter() -> tf.BinaryFilter:
    return tf.BinaryFilter({"OG": Fraction(0), "IF": Fraction(1), "DF": Fraction(1)})


@pytest.fixture
def seeded_games():
    """Factory for reproducible random-game corpora."""

    def make(count: int, ks=(2, 3, 4, 5), num_senders: int = 1,
             seed0: int = 1000, utility_range: int = 5,
             prior: str = "uniform") -> list[tf.Game]:
        games = []
        for i in range(count):
            spec = tf.RandomGameSpec(
                seed=seed0 + i,
                num_states=ks[i % len(ks)],
                num_senders=num_senders,
                utility_range=utility_range,
                prior=prior)
            games.append(tf.random_game(spec))
        return games

    return make
