"""Receiver-optimal play with two or more equally informed senders.

With two senders, six candidate outcomes cover the receiver's optimum: the
receiver acts only on unanimous reports (one variant per action), follows a
single designated sender, or ignores everyone and plays a constant action.
The unanimous profiles reduce to a small exact linear program over the
filter's per-state signal probabilities; the follow-one-sender profiles
reduce to the single-sender optimizer; constants need no filter at all.

With three or more senders, majority reporting already gives the receiver
the full-information optimum, so no filter can help her further.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import _simplex
from .core import BinaryFilter, Game, UtilityProfile
from .filter_opt import receiver_optimal_filter


class WrongSenderCount(ValueError):
    pass


class CandidateProfile(enum.Enum):
    UNANIMOUS_0 = "unanimous-0"        # receiver plays 0 only when both report 0
    UNANIMOUS_1 = "unanimous-1"        # receiver plays 1 only when both report 1
    FOLLOW_SENDER_1 = "follow-sender-1"
    FOLLOW_SENDER_2 = "follow-sender-2"
    CONSTANT_0 = "constant-0"
    CONSTANT_1 = "constant-1"


#: Tie-break order for two_sender_optimal, fixed for determinism.
CANDIDATE_ORDER = (
    CandidateProfile.UNANIMOUS_0,
    CandidateProfile.UNANIMOUS_1,
    CandidateProfile.FOLLOW_SENDER_1,
    CandidateProfile.FOLLOW_SENDER_2,
    CandidateProfile.CONSTANT_0,
    CandidateProfile.CONSTANT_1,
)


@dataclass(frozen=True)
class TwoSenderDeltas:
    """Per-state action-0-minus-action-1 gaps for both senders and the receiver."""

    names: tuple[str, ...]
    sender1: tuple[Fraction, ...]
    sender2: tuple[Fraction, ...]
    receiver: tuple[Fraction, ...]

    @staticmethod
    def from_game(game: Game) -> "TwoSenderDeltas":
        _require_senders(game, 2)
        names, s1, s2, rc = [], [], [], []
        for rec in game.states:
            names.append(rec.name)
            s1.append(rec.sender_utils[0][0] - rec.sender_utils[0][1])
            s2.append(rec.sender_utils[1][0] - rec.sender_utils[1][1])
            rc.append(rec.receiver_utils[0] - rec.receiver_utils[1])
        return TwoSenderDeltas(tuple(names), tuple(s1), tuple(s2), tuple(rc))


@dataclass(frozen=True)
class LPInstance:
    """max objective.x subject to both rows >= 0 and 0 <= x <= 1.

    For the unanimous-1 target the variables are per-state probabilities of
    signal 1 (the action-swapped mirror); otherwise of signal 0.
    """

    target: CandidateProfile
    names: tuple[str, ...]
    objective: tuple[Fraction, ...]
    rows: tuple[tuple[Fraction, ...], tuple[Fraction, ...]]


def _require_senders(game: Game, count: int, at_least: bool = False) -> None:
    ok = game.num_senders >= count if at_least else game.num_senders == count
    if not ok:
        relation = "at least" if at_least else "exactly"
        raise WrongSenderCount(
            f"need {relation} {count} senders, game has {game.num_senders}")


def build_lp(game: Game, target: CandidateProfile) -> LPInstance:
    """Prior-weighted LP whose optimum is the best filter for a unanimous profile."""
    if target not in (CandidateProfile.UNANIMOUS_0, CandidateProfile.UNANIMOUS_1):
        raise ValueError(f"no LP for target {target}")
    deltas = TwoSenderDeltas.from_game(game)
    sign = 1 if target is CandidateProfile.UNANIMOUS_0 else -1
    priors = [rec.prior for rec in game.states]
    objective = tuple(sign * p * c for p, c in zip(priors, deltas.receiver))
    row_a = tuple(sign * p * a for p, a in zip(priors, deltas.sender1))
    row_b = tuple(sign * p * b for p, b in zip(priors, deltas.sender2))
    return LPInstance(target=target, names=deltas.names,
                      objective=objective, rows=(row_a, row_b))


def lp_solve(lp: LPInstance) -> tuple[tuple[Fraction, ...], Fraction]:
    """Exact optimal vertex; asserts feasibility and the vertex shape on every solve."""
    x, value = _simplex.maximize(lp.objective, lp.rows)
    for row in lp.rows:
        slack = sum((c * v for c, v in zip(row, x)), Fraction(0))
        assert slack >= 0, "simplex returned an infeasible point"
    assert all(0 <= v <= 1 for v in x)
    fractional = sum(1 for v in x if 0 < v < 1)
    assert fractional <= len(lp.rows), "vertex property violated"
    return tuple(x), value


def receiver_posthoc_ic(game: Game, target: CandidateProfile,
                        x: tuple[Fraction, ...]) -> bool:
    """Is obeying the unanimous report a receiver best response under x?

    Checks the trigger-signal preference on both branches; a branch with zero
    signal mass contributes an exactly-zero slack and passes vacuously.
    """
    deltas = TwoSenderDeltas.from_game(game)
    sign = 1 if target is CandidateProfile.UNANIMOUS_0 else -1
    slack0 = Fraction(0)
    slack1 = Fraction(0)
    for rec, c, xi in zip(game.states, deltas.receiver, x):
        slack0 += sign * rec.prior * c * xi
        slack1 += sign * rec.prior * c * (1 - xi)
    return slack0 >= 0 and slack1 <= 0


@dataclass(frozen=True)
class CandidateOutcome:
    profile: CandidateProfile
    filter: Optional[BinaryFilter]
    receiver_utility: Fraction
    feasible: bool


def _constant_receiver_value(game: Game, action: int) -> Fraction:
    return sum((rec.prior * rec.receiver_utils[action] for rec in game.states),
               Fraction(0))


def two_sender_optimal(game: Game) -> tuple[CandidateOutcome, list[CandidateOutcome]]:
    """Evaluate all six candidate outcomes and return the best feasible one.

    Both senders observe the same filtered signal. Ties break by the fixed
    candidate order.
    """
    _require_senders(game, 2)
    total_gap = sum(
        (rec.prior * (rec.receiver_utils[0] - rec.receiver_utils[1])
         for rec in game.states), Fraction(0))
    candidates: list[CandidateOutcome] = []
    for profile in CANDIDATE_ORDER:
        if profile in (CandidateProfile.UNANIMOUS_0, CandidateProfile.UNANIMOUS_1):
            lp = build_lp(game, profile)
            x, value = lp_solve(lp)
            feasible = receiver_posthoc_ic(game, profile, x)
            if profile is CandidateProfile.UNANIMOUS_0:
                base = sum((rec.prior * rec.receiver_utils[1] for rec in game.states),
                           Fraction(0))
                signal0 = dict(zip(lp.names, x))
            else:
                base = sum((rec.prior * rec.receiver_utils[0] for rec in game.states),
                           Fraction(0))
                signal0 = {name: 1 - xi for name, xi in zip(lp.names, x)}
            candidates.append(CandidateOutcome(
                profile=profile,
                filter=BinaryFilter(signal0_prob=signal0) if feasible else None,
                receiver_utility=base + value,
                feasible=feasible))
        elif profile in (CandidateProfile.FOLLOW_SENDER_1,
                         CandidateProfile.FOLLOW_SENDER_2):
            sender_index = 0 if profile is CandidateProfile.FOLLOW_SENDER_1 else 1
            result = receiver_optimal_filter(game, sender_index=sender_index)
            candidates.append(CandidateOutcome(
                profile=profile,
                filter=result.filter,
                receiver_utility=result.outcome.utilities.receiver,
                feasible=True))
        else:
            action = 0 if profile is CandidateProfile.CONSTANT_0 else 1
            feasible = total_gap >= 0 if action == 0 else total_gap <= 0
            candidates.append(CandidateOutcome(
                profile=profile,
                filter=None,
                receiver_utility=_constant_receiver_value(game, action),
                feasible=feasible))
    best = None
    for cand in candidates:
        if cand.feasible and (best is None or cand.receiver_utility > best.receiver_utility):
            best = cand
    assert best is not None  # the better constant action is always feasible
    return best, candidates


def majority_outcome(game: Game) -> tuple[dict[str, int], UtilityProfile]:
    """Full-information majority play for three or more senders.

    Everyone reports the state; the receiver plays her per-state best action
    (ties to 0). No filter enters: the receiver already extracts the maximal
    possible utility, state by state.
    """
    _require_senders(game, 3, at_least=True)
    actions: dict[str, int] = {}
    sender_totals = [Fraction(0)] * game.num_senders
    receiver_total = Fraction(0)
    for rec in game.states:
        action = 0 if rec.receiver_utils[0] >= rec.receiver_utils[1] else 1
        actions[rec.name] = action
        receiver_total += rec.prior * rec.receiver_utils[action]
        for j, pair in enumerate(rec.sender_utils):
            sender_totals[j] += rec.prior * pair[action]
    return actions, UtilityProfile(senders=tuple(sender_totals), receiver=receiver_total)
