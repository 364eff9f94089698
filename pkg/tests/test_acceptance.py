"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest -v -s tests/test_acceptance.py`` to see the per-criterion
lines; the suite is self-contained and uses only seeded corpora.
"""
import math
import time
from fractions import Fraction

import pytest

import talkfilter as tf

F = Fraction

RECEIVER = tf.Objective.RECEIVER
SENDER = tf.Objective.SENDER

GRID8 = tf.GridSpec(resolution=8)


def _report(number: int, text: str) -> None:
    print(f"ACCEPTANCE {number}: PASS - {text}")


@pytest.fixture(scope="module")
def corpus():
    """200 seeded single-sender games, k cycling over 2..5, utilities in [-5, 5]."""
    games = []
    for i in range(200):
        spec = tf.RandomGameSpec(seed=1000 + i, num_states=2 + i % 4,
                                 utility_range=5)
        games.append(tf.random_game(spec))
    return games


@pytest.fixture(scope="module")
def art():
    return tf.make_game([
        ("OG", "1/3", ("0", "1"), ("0", "1")),
        ("IF", "1/3", ("0", "1"), ("0", "-5")),
        ("DF", "1/3", ("0", "-5"), ("0", "-5")),
    ])


@pytest.fixture(scope="module")
def g3():
    return tf.make_game([
        ("w1", "1/3", ("1", "0"), ("1", "0")),
        ("w2", "1/3", ("0", "1"), ("0", "1")),
        ("w3", "1/3", ("0", "3"), ("1", "0")),
    ])


def test_criterion_1_art_dealer_reproduction(art):
    started = time.perf_counter()
    res = tf.receiver_optimal_filter(art)
    elapsed = time.perf_counter() - started
    assert res.filter.signal0_prob == {"OG": F(0), "IF": F(1), "DF": F(1)}
    assert res.outcome.kind is tf.EquilibriumKind.INFORMATIVE
    assert res.outcome.utilities.sender == F(1, 3)
    assert res.outcome.utilities.receiver == F(1, 3)
    assert elapsed < 1.0
    _report(1, f"garbling the fakes gives both players exactly 1/3 "
               f"({elapsed * 1000:.1f} ms)")


def test_criterion_2_unfiltered_art_babbles(art):
    started = time.perf_counter()
    outcome = tf.canonical_equilibrium(art, tf.GeneralFilter.identity(art))
    elapsed = time.perf_counter() - started
    assert outcome.kind is tf.EquilibriumKind.BABBLING
    assert outcome.babbling_action == 0
    assert outcome.utilities.sender == 0
    assert outcome.utilities.receiver == 0
    assert elapsed < 1.0
    _report(2, f"full information collapses to babbling with utilities (0, 0) "
               f"({elapsed * 1000:.1f} ms)")


def test_criterion_3_interior_pivot_trace(g3):
    started = time.perf_counter()
    res = tf.receiver_optimal_filter(g3)
    assert res.filter.signal0_prob == {"w1": F(1), "w2": F(0), "w3": F(1, 3)}
    assert res.outcome.utilities.sender == F(4, 3)
    assert res.outcome.utilities.receiver == F(7, 9)
    unfiltered = tf.evaluate_sigma_s(
        g3, tf.merge_to_binary(g3, tf.GeneralFilter.identity(g3)))
    assert unfiltered.receiver == F(2, 3)
    assert res.outcome.utilities.receiver > unfiltered.receiver
    action, babble = tf.evaluate_babbling(g3)
    assert (action, babble.sender, babble.receiver) == (0, F(1, 3), F(2, 3))
    assert res.outcome.utilities.receiver > babble.receiver
    grid_filter, grid_value = tf.grid_search(g3, tf.GridSpec(resolution=3))
    assert grid_value == F(7, 9)
    assert grid_filter.signal0_prob == res.filter.signal0_prob
    elapsed = time.perf_counter() - started
    assert elapsed < 1.0
    _report(3, f"interior pivot 1/3 reaches 7/9 > 2/3, grid-confirmed "
               f"({elapsed * 1000:.1f} ms)")


def test_criterion_4_oracle_optimality_sweep(corpus):
    started = time.perf_counter()
    fallbacks = 0
    for game in corpus:
        res = tf.receiver_optimal_filter(game)
        if res.fell_back_to_constant:
            fallbacks += 1
        else:
            assert tf.sender_ic(game, res.filter).holds
            assert tf.receiver_ic(game, res.filter).holds
        assert tf.verify_filter_optimality(game, res.filter, GRID8, RECEIVER)
    elapsed = time.perf_counter() - started
    assert elapsed < 300.0
    _report(4, f"200/200 receiver-optimal filters certified at grid 8 "
               f"({fallbacks} babbling games, {elapsed:.1f} s)")


def test_criterion_5_pareto_property(corpus):
    started = time.perf_counter()
    improvements = 0
    for game in corpus:
        res = tf.sender_optimal_filter(game)
        if not res.fell_back_to_constant:
            assert tf.sender_ic(game, res.filter).holds
            assert tf.receiver_ic(game, res.filter).holds
        assert tf.verify_filter_optimality(game, res.filter, GRID8, SENDER)
        base = tf.canonical_equilibrium(game, tf.GeneralFilter.identity(game))
        if res.outcome.utilities.sender > base.utilities.sender:
            improvements += 1
            assert res.outcome.utilities.receiver >= base.utilities.receiver
    assert improvements > 0  # the corpus must actually exercise the property
    elapsed = time.perf_counter() - started
    assert elapsed < 300.0
    _report(5, f"sender gains never hurt the receiver "
               f"({improvements} strict improvements, {elapsed:.1f} s)")


def test_criterion_6_binary_reduction(corpus):
    started = time.perf_counter()
    checked = 0
    for j, game in enumerate(corpus[:100]):
        filt = tf.random_general_filter(game, seed=20000 + j, max_signals=5)
        merged = tf.merge_to_binary(game, filt)

        # Independent route: score the obeyed profile signal by signal.
        value_direct = {p: F(0) for p in (0, tf.RECEIVER)}
        pooled0 = F(0)
        pooled1 = F(0)
        for sig in filt.signals():
            try:
                post = tf.posterior(game, filt, sig)
            except tf.ZeroProbabilitySignal:
                continue
            mass = sum(rec.prior * filt.table[rec.name].get(sig, F(0))
                       for rec in game.states)
            s_gap = (tf.signal_utility(game, filt, sig, 0, 0)
                     - tf.signal_utility(game, filt, sig, 0, 1))
            r_gap = (tf.signal_utility(game, filt, sig, tf.RECEIVER, 0)
                     - tf.signal_utility(game, filt, sig, tf.RECEIVER, 1))
            action = 0 if (s_gap > 0 or (s_gap == 0 and r_gap >= 0)) else 1
            for p in (0, tf.RECEIVER):
                value_direct[p] += mass * tf.signal_utility(game, filt, sig, p, action)
            if action == 0:
                pooled0 += mass * r_gap
            else:
                pooled1 += mass * r_gap
            del post

        merged_value = tf.evaluate_sigma_s(game, merged)
        assert merged_value.sender == value_direct[0]
        assert merged_value.receiver == value_direct[tf.RECEIVER]
        ic_direct = pooled0 >= 0 and pooled1 <= 0
        assert tf.receiver_ic(game, merged).holds == ic_direct
        assert tf.sender_ic(game, merged).holds  # holds by construction
        checked += 1
    assert checked == 100
    elapsed = time.perf_counter() - started
    _report(6, f"100/100 general filters merge with values and receiver IC "
               f"intact ({elapsed:.1f} s)")


def test_criterion_7_two_sender_lp():
    started = time.perf_counter()
    l2 = tf.make_game([
        ("w1", "1/2", [("0", "1"), ("2", "0")], ("1", "0")),
        ("w2", "1/2", [("2", "0"), ("0", "1")], ("0", "1")),
    ], num_senders=2)
    lp = tf.build_lp(l2, tf.CandidateProfile.UNANIMOUS_0)
    x, value = tf.lp_solve(lp)
    assert x == (F(1), F(1, 2)) and value == F(1, 4)
    assert sum(1 for v in x if 0 < v < 1) <= 2
    best, candidates = tf.two_sender_optimal(l2)
    unanimous0 = next(c for c in candidates
                      if c.profile is tf.CandidateProfile.UNANIMOUS_0)
    assert unanimous0.feasible and unanimous0.receiver_utility == F(3, 4)
    grid_value, _, _ = tf.two_sender_grid_search(l2, GRID8)
    assert best.receiver_utility >= grid_value
    # The R=8 lattice contains (1, 1/2); obeying unanimous reports there is
    # worth exactly the LP's 3/4.
    direct = sum(rec.prior * (xi * rec.receiver_utils[0]
                              + (1 - xi) * rec.receiver_utils[1])
                 for rec, xi in zip(l2.states, x))
    assert direct == F(3, 4)

    failures = 0
    for i in range(100):
        spec = tf.RandomGameSpec(seed=30000 + i, num_states=2 + i % 3,
                                 num_senders=2, utility_range=5)
        game = tf.random_game(spec)
        best, _ = tf.two_sender_optimal(game)
        grid_value, _, _ = tf.two_sender_grid_search(game, GRID8)
        if best.receiver_utility < grid_value:
            failures += 1
    assert failures == 0
    elapsed = time.perf_counter() - started
    assert elapsed < 600.0
    _report(7, f"LP vertex (1, 1/2) worth 3/4 and 100/100 games at or above "
               f"the grid ({elapsed:.1f} s)")


def test_criterion_8_majority_baseline():
    started = time.perf_counter()
    for i in range(50):
        spec = tf.RandomGameSpec(seed=40000 + i, num_states=2 + i % 4,
                                 num_senders=3, utility_range=5)
        game = tf.random_game(spec)
        _, utilities = tf.majority_outcome(game)
        pointwise = sum(rec.prior * max(rec.receiver_utils) for rec in game.states)
        assert utilities.receiver == pointwise

        # Single- and two-sender candidates on the same receiver utilities
        # can never beat the full-information pointwise maximum.
        for j in range(3):
            single = tf.make_game(
                [(rec.name, rec.prior, [rec.sender_utils[j]], rec.receiver_utils)
                 for rec in game.states])
            res = tf.receiver_optimal_filter(single)
            assert res.outcome.utilities.receiver <= pointwise
        pair = tf.make_game(
            [(rec.name, rec.prior, list(rec.sender_utils[:2]), rec.receiver_utils)
             for rec in game.states], num_senders=2)
        best, candidates = tf.two_sender_optimal(pair)
        assert best.receiver_utility <= pointwise
        for cand in candidates:
            if cand.feasible:
                assert cand.receiver_utility <= pointwise
    elapsed = time.perf_counter() - started
    _report(8, f"majority play hits the pointwise maximum and caps every "
               f"candidate on 50 games ({elapsed:.1f} s)")


def test_criterion_9_complexity():
    timings = {}
    for k in (1_000, 10_000, 100_000):
        game = tf.random_game(tf.RandomGameSpec(seed=42, num_states=k,
                                                utility_range=5))
        runs = 5 if k < 100_000 else 3
        best = math.inf
        for _ in range(runs):
            t0 = time.perf_counter()
            tf.receiver_optimal_filter(game)
            best = min(best, time.perf_counter() - t0)
        timings[k] = best
    assert timings[100_000] < 1.0
    anchor = timings[1_000] / (1_000 * math.log(1_000))
    for k in (10_000, 100_000):
        assert timings[k] <= 2 * anchor * k * math.log(k), timings
    _report(9, "k=100000 in {:.0f} ms; growth within 2x of k log k "
               "({:.0f}/{:.0f}/{:.0f} ms)".format(
                   timings[100_000] * 1000, timings[1_000] * 1000,
                   timings[10_000] * 1000, timings[100_000] * 1000))
