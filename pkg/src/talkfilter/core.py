"""Exact data model for binary-action sender-receiver games.

Everything numeric is a ``fractions.Fraction``: the solver decides
incentive-compatibility on boundary cases (slacks exactly zero), so no
rounding is tolerable anywhere on the solve path.

Action convention: signal 0 stands for "play action 0". A binary filter is
described by the per-state probability of emitting signal 0.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

#: Alias for the exact scalar type used throughout the package.
Rational = Fraction

#: Marker accepted by ``signal_utility`` and friends to address the receiver.
RECEIVER = "receiver"

Player = Union[int, str]  # sender index, or RECEIVER


# ---------------------------------------------------------------------------
# Errors
# ---------------------------------------------------------------------------

class GameValidationError(ValueError):
    """A game description violates a structural invariant."""


class EmptyStateList(GameValidationError):
    pass


class DuplicateStateName(GameValidationError):
    pass


class NonPositivePrior(GameValidationError):
    pass


class PriorNotNormalized(GameValidationError):
    pass


class SenderCountMismatch(GameValidationError):
    pass


class FilterValidationError(ValueError):
    """A filter description violates a structural invariant."""


class FilterDomainMismatch(FilterValidationError):
    pass


class ZeroProbabilitySignal(ValueError):
    """Requested a posterior for a signal the filter never emits."""


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

def parse_rational(value: Union[str, int, Fraction]) -> Fraction:
    """Parse "a/b", integer, or finite decimal notation into a Fraction.

    Decimal strings are exact: "0.2" becomes 1/5, not the nearest double.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        # Floats are rejected on purpose: 0.1 as a double is not 1/10.
        raise ValueError(
            f"refusing float {value!r}; pass a string such as '1/10' instead")
    try:
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {value!r}") from exc


# ---------------------------------------------------------------------------
# Game
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StateRecord:
    """One state: prior mass plus per-player utilities for actions 0 and 1."""

    name: str
    prior: Fraction
    sender_utils: tuple[tuple[Fraction, Fraction], ...]  # one (u0, u1) per sender
    receiver_utils: tuple[Fraction, Fraction]


@dataclass(frozen=True)
class Game:
    """A validated game: ordered states and a fixed sender count.

    Instances are immutable and safe to share between threads; construct
    them through :func:`make_game` or :func:`validate_game`.
    """

    states: tuple[StateRecord, ...]
    num_senders: int
    _index: Mapping[str, StateRecord] = field(
        default=None, compare=False, repr=False)  # type: ignore[assignment]

    def __post_init__(self):
        object.__setattr__(self, "_index",
                           {rec.name: rec for rec in self.states})

    def state(self, name: str) -> StateRecord:
        return self._index[name]

    @property
    def state_names(self) -> tuple[str, ...]:
        return tuple(rec.name for rec in self.states)

    def utility(self, player: Player, rec: StateRecord, action: int) -> Fraction:
        if player == RECEIVER:
            return rec.receiver_utils[action]
        return rec.sender_utils[player][action]


def _check_states(states: Sequence[StateRecord], num_senders: int) -> Game:
    if num_senders < 1:
        raise SenderCountMismatch(f"need at least one sender, got {num_senders}")
    if not states:
        raise EmptyStateList("a game needs at least one state")
    seen: set[str] = set()
    total = Fraction(0)
    for rec in states:
        if rec.name in seen:
            raise DuplicateStateName(f"duplicate state name {rec.name!r}")
        seen.add(rec.name)
        if rec.prior <= 0:
            raise NonPositivePrior(
                f"state {rec.name!r} has prior {rec.prior}, which is not > 0")
        if len(rec.sender_utils) != num_senders:
            raise SenderCountMismatch(
                f"state {rec.name!r} carries {len(rec.sender_utils)} sender "
                f"utility pairs, expected {num_senders}")
        total += rec.prior
    if total != 1:
        raise PriorNotNormalized(f"priors sum to {total}, expected exactly 1")
    return Game(states=tuple(states), num_senders=num_senders)


def make_game(states: Iterable[tuple], num_senders: int = 1) -> Game:
    """Build a Game from plain tuples, mostly for tests and generators.

    Each entry is ``(name, prior, sender_pairs, receiver_pair)`` where
    ``sender_pairs`` is one ``(u0, u1)`` pair for a single-sender game or a
    list of such pairs, and every scalar is anything ``parse_rational``
    accepts.
    """
    records = []
    for name, prior, sender_pairs, receiver_pair in states:
        if sender_pairs and not isinstance(sender_pairs[0], (tuple, list)):
            sender_pairs = [sender_pairs]
        records.append(StateRecord(
            name=str(name),
            prior=parse_rational(prior),
            sender_utils=tuple(
                (parse_rational(u0), parse_rational(u1)) for u0, u1 in sender_pairs),
            receiver_utils=(
                parse_rational(receiver_pair[0]), parse_rational(receiver_pair[1])),
        ))
    return _check_states(records, num_senders)


def validate_game(raw: Mapping) -> Game:
    """Validate a parsed game-file mapping and return the Game.

    Expected shape::

        {"type": "transmission" | "aggregation",
         "states": [{"name": ..., "prior": ...,
                     "sender_utilities": [[u0, u1], ...],
                     "receiver_utility": [u0, u1]}, ...]}

    "transmission" demands exactly one sender utility pair per state.
    """
    kind = raw.get("type", "transmission")
    if kind not in ("transmission", "aggregation"):
        raise GameValidationError(f"unknown game type {kind!r}")
    raw_states = raw.get("states")
    if not raw_states:
        raise EmptyStateList("game file has no states")
    records = []
    num_senders = None
    for entry in raw_states:
        try:
            name = str(entry["name"])
            prior = parse_rational(entry["prior"])
            sender_utils = tuple(
                (parse_rational(p[0]), parse_rational(p[1]))
                for p in entry["sender_utilities"])
            ru = entry["receiver_utility"]
            receiver_utils = (parse_rational(ru[0]), parse_rational(ru[1]))
        except KeyError as exc:
            raise GameValidationError(f"state entry missing field {exc}") from exc
        except (TypeError, IndexError) as exc:
            raise GameValidationError(f"malformed state entry: {entry!r}") from exc
        if num_senders is None:
            num_senders = len(sender_utils)
        records.append(StateRecord(name, prior, sender_utils, receiver_utils))
    if kind == "transmission" and num_senders != 1:
        raise SenderCountMismatch(
            f"transmission games have exactly one sender, file has {num_senders}")
    return _check_states(records, num_senders or 0)


# ---------------------------------------------------------------------------
# Filters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BinaryFilter:
    """Per-state probability of emitting signal 0."""

    signal0_prob: Mapping[str, Fraction]

    def prob0(self, name: str) -> Fraction:
        return self.signal0_prob[name]

    def check_for(self, game: Game) -> None:
        names = set(game.state_names)
        have = set(self.signal0_prob)
        if names != have:
            missing = sorted(names - have)
            extra = sorted(have - names)
            raise FilterDomainMismatch(
                f"filter domain mismatch: missing states {missing}, unknown states {extra}")
        for name, x in self.signal0_prob.items():
            if not (0 <= x <= 1):
                raise FilterValidationError(
                    f"signal0 probability for {name!r} is {x}, outside [0, 1]")

    def to_general(self) -> "GeneralFilter":
        table = {}
        for name, x in self.signal0_prob.items():
            dist = {}
            if x > 0:
                dist["0"] = x
            if x < 1:
                dist["1"] = 1 - x
            table[name] = dist
        return GeneralFilter(table)


@dataclass(frozen=True)
class GeneralFilter:
    """Per-state distribution over arbitrary string signals."""

    table: Mapping[str, Mapping[str, Fraction]]

    def check_for(self, game: Game) -> None:
        names = set(game.state_names)
        have = set(self.table)
        if names != have:
            raise FilterDomainMismatch(
                f"filter domain mismatch: missing states {sorted(names - have)}, "
                f"unknown states {sorted(have - names)}")
        for name, dist in self.table.items():
            total = Fraction(0)
            for sig, prob in dist.items():
                if prob < 0:
                    raise FilterValidationError(
                        f"negative probability {prob} for signal {sig!r} on state {name!r}")
                total += prob
            if total != 1:
                raise FilterValidationError(
                    f"signal distribution on state {name!r} sums to {total}, expected 1")

    def signals(self) -> list[str]:
        seen: dict[str, None] = {}
        for dist in self.table.values():
            for sig in dist:
                seen.setdefault(sig, None)
        return list(seen)

    @staticmethod
    def identity(game: Game) -> "GeneralFilter":
        """Full information: each state maps to its own signal."""
        return GeneralFilter({name: {name: Fraction(1)} for name in game.state_names})

    @staticmethod
    def uninformative(game: Game, signal: str = "*") -> "GeneralFilter":
        """No information: the same signal on every state."""
        return GeneralFilter({name: {signal: Fraction(1)} for name in game.state_names})


# ---------------------------------------------------------------------------
# Deltas and classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StateDelta:
    """Action-0 minus action-1 utility, for one sender and the receiver."""

    name: str
    sender: Fraction
    receiver: Fraction


def state_deltas(game: Game, sender_index: int = 0) -> list[StateDelta]:
    out = []
    for rec in game.states:
        s0, s1 = rec.sender_utils[sender_index]
        r0, r1 = rec.receiver_utils
        out.append(StateDelta(rec.name, s0 - s1, r0 - r1))
    return out


@dataclass(frozen=True)
class StateClassification:
    """Partition of states by which action each side of the table prefers.

    agree0   both weakly prefer action 0 (sender ties resolved here when the
             receiver weakly prefers 0)
    agree1   both weakly prefer action 1
    split01  sender strictly prefers 0, receiver strictly prefers 1
    split10  sender strictly prefers 1, receiver strictly prefers 0
    """

    agree0: frozenset[str]
    agree1: frozenset[str]
    split01: frozenset[str]
    split10: frozenset[str]


def classify_states(game: Game, sender_index: int = 0) -> StateClassification:
    """Classify states by preference agreement.

    Indifference is folded into the agreement sets so the split sets hold
    strict disagreements only: a sender-indifferent state follows the
    receiver's side, a receiver-indifferent state follows the sender's, and
    a fully indifferent state lands in agree0.
    """
    agree0, agree1, split01, split10 = [], [], [], []
    for rec in game.states:
        s0, s1 = rec.sender_utils[sender_index]
        r0, r1 = rec.receiver_utils
        if s0 > s1:
            if r0 >= r1:
                agree0.append(rec.name)
            else:
                split01.append(rec.name)
        elif s0 < s1:
            if r0 <= r1:
                agree1.append(rec.name)
            else:
                split10.append(rec.name)
        else:
            (agree0 if r0 >= r1 else agree1).append(rec.name)
    return StateClassification(
        agree0=frozenset(agree0), agree1=frozenset(agree1),
        split01=frozenset(split01), split10=frozenset(split10))


# ---------------------------------------------------------------------------
# Posteriors and evaluation
# ---------------------------------------------------------------------------

def signal_weights(game: Game, filt: GeneralFilter, signal: str) -> dict[str, Fraction]:
    """Unnormalized posterior weights p(state) * P(signal | state)."""
    out = {}
    for rec in game.states:
        prob = filt.table[rec.name].get(signal, Fraction(0))
        if prob:
            out[rec.name] = rec.prior * prob
    return out


def posterior(game: Game, filt: GeneralFilter, signal: str) -> dict[str, Fraction]:
    """Exact Bayes posterior over states given one emitted signal."""
    weights = signal_weights(game, filt, signal)
    total = sum(weights.values(), Fraction(0))
    if total == 0:
        raise ZeroProbabilitySignal(f"signal {signal!r} is never emitted")
    return {name: w / total for name, w in weights.items()}


def signal_utility(game: Game, filt: GeneralFilter, signal: str,
                   player: Player, action: int) -> Fraction:
    """Posterior-weighted expected utility of playing ``action`` on ``signal``."""
    post = posterior(game, filt, signal)
    total = Fraction(0)
    for name, prob in post.items():
        total += prob * game.utility(player, game.state(name), action)
    return total


@dataclass(frozen=True)
class UtilityProfile:
    """Expected utilities for every player of a game."""

    senders: tuple[Fraction, ...]
    receiver: Fraction

    @property
    def sender(self) -> Fraction:
        if len(self.senders) != 1:
            raise ValueError("sender property needs a single-sender game")
        return self.senders[0]


def evaluate_sigma_s(game: Game, filt: BinaryFilter) -> UtilityProfile:
    """Value of obeying the binary signal: action 0 on signal 0, 1 on signal 1.

    Pure evaluation; whether that play is anyone's best response is the
    equilibrium module's business.
    """
    filt.check_for(game)
    sender_totals = [Fraction(0)] * game.num_senders
    receiver_total = Fraction(0)
    for rec in game.states:
        x = filt.signal0_prob[rec.name]
        for j, (u0, u1) in enumerate(rec.sender_utils):
            sender_totals[j] += rec.prior * (x * u0 + (1 - x) * u1)
        r0, r1 = rec.receiver_utils
        receiver_total += rec.prior * (x * r0 + (1 - x) * r1)
    return UtilityProfile(senders=tuple(sender_totals), receiver=receiver_total)


def constant_action_value(game: Game, action: int) -> UtilityProfile:
    """Expected utilities when the receiver plays one action unconditionally."""
    sender_totals = [Fraction(0)] * game.num_senders
    receiver_total = Fraction(0)
    for rec in game.states:
        for j, pair in enumerate(rec.sender_utils):
            sender_totals[j] += rec.prior * pair[action]
        receiver_total += rec.prior * rec.receiver_utils[action]
    return UtilityProfile(senders=tuple(sender_totals), receiver=receiver_total)


def evaluate_babbling(game: Game) -> tuple[int, UtilityProfile]:
    """Best uninformed receiver action (ties to 0) and the resulting utilities.

    Filters never enter this computation: babbling ignores all messages.
    """
    value0 = constant_action_value(game, 0)
    value1 = constant_action_value(game, 1)
    if value0.receiver >= value1.receiver:
        return 0, value0
    return 1, value1
