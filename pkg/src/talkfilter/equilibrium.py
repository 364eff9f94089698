"""Incentive-compatibility checks and canonical equilibrium selection.

Two profiles matter for binary filters: obeying the signal (the informative
profile, where the sender reports her preferred action and the receiver
follows), and babbling (the receiver ignores messages and plays her best
uninformed action). Obeying the signal is a Nash equilibrium exactly when
both players' two signed linear inequalities hold:

    sum_w p(w) * d(w) * x(w)       >= 0      (prefer 0 on signal 0)
    sum_w p(w) * d(w) * (1 - x(w)) <= 0      (prefer 1 on signal 1)

with d(w) the action-0-minus-action-1 utility gap. Slacks of exactly zero
count as compatible, which is decidable because everything is rational.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Union

from .core import (
    BinaryFilter,
    Game,
    GeneralFilter,
    UtilityProfile,
    ZeroProbabilitySignal,
    evaluate_babbling,
    evaluate_sigma_s,
    signal_weights,
)


@dataclass(frozen=True)
class ICReport:
    """Both inequality left-hand sides for one player, plus the verdict."""

    holds: bool
    signal0_slack: Fraction
    signal1_slack: Fraction


def _ic_report(game: Game, filt: BinaryFilter, gaps: list[Fraction]) -> ICReport:
    slack0 = Fraction(0)
    slack1 = Fraction(0)
    for rec, gap in zip(game.states, gaps):
        if gap:
            x = filt.signal0_prob[rec.name]
            slack0 += rec.prior * gap * x
            slack1 += rec.prior * gap * (1 - x)
    return ICReport(holds=(slack0 >= 0 and slack1 <= 0),
                    signal0_slack=slack0, signal1_slack=slack1)


def sender_ic(game: Game, filt: BinaryFilter, sender_index: int = 0) -> ICReport:
    """Is obeying the signal a best response for the sender?"""
    filt.check_for(game)
    gaps = [rec.sender_utils[sender_index][0] - rec.sender_utils[sender_index][1]
            for rec in game.states]
    return _ic_report(game, filt, gaps)


def receiver_ic(game: Game, filt: BinaryFilter) -> ICReport:
    """Is obeying the signal a best response for the receiver?"""
    filt.check_for(game)
    gaps = [rec.receiver_utils[0] - rec.receiver_utils[1] for rec in game.states]
    return _ic_report(game, filt, gaps)


# ---------------------------------------------------------------------------
# Canonical equilibrium
# ---------------------------------------------------------------------------

class EquilibriumKind(enum.Enum):
    INFORMATIVE = "informative"
    BABBLING = "babbling"


@dataclass(frozen=True)
class EquilibriumOutcome:
    kind: EquilibriumKind
    utilities: UtilityProfile
    babbling_action: Optional[int] = None


def merge_to_binary(game: Game, filt: GeneralFilter, sender_index: int = 0) -> BinaryFilter:
    """Collapse a general filter onto {0, 1} by the sender's per-signal preference.

    Signal 0 collects every signal on which the sender weakly prefers action 0;
    a sender-indifferent signal goes to the receiver's preferred side, and 0 if
    the receiver is indifferent too. Obey-the-signal utilities are unchanged by
    the merge, and the merged filter is sender-compatible by construction.
    """
    filt.check_for(game)
    zero_side: list[str] = []
    for sig in filt.signals():
        weights = signal_weights(game, filt, sig)
        if not weights:
            continue  # never emitted; carries no mass anywhere
        s_gap = Fraction(0)
        r_gap = Fraction(0)
        for name, w in weights.items():
            rec = game.state(name)
            s0, s1 = rec.sender_utils[sender_index]
            r0, r1 = rec.receiver_utils
            s_gap += w * (s0 - s1)
            r_gap += w * (r0 - r1)
        prefers0 = s_gap > 0 or (s_gap == 0 and r_gap >= 0)
        if prefers0:
            zero_side.append(sig)
    chosen = set(zero_side)
    x = {}
    for rec in game.states:
        mass = Fraction(0)
        for sig, prob in filt.table[rec.name].items():
            if sig in chosen:
                mass += prob
        x[rec.name] = mass
    return BinaryFilter(signal0_prob=x)


def canonical_equilibrium(game: Game,
                          filt: Union[BinaryFilter, GeneralFilter],
                          sender_index: int = 0) -> EquilibriumOutcome:
    """Pick the informative profile when it is an equilibrium, else babbling.

    General filters are first merged to binary (which makes the sender side
    hold automatically); a raw binary filter is taken at its word, so both
    players' checks must pass for the informative outcome. When either check
    fails the Pareto-optimal equilibrium is babbling.
    """
    if isinstance(filt, GeneralFilter):
        filt = merge_to_binary(game, filt, sender_index)
    if sender_ic(game, filt, sender_index).holds and receiver_ic(game, filt).holds:
        return EquilibriumOutcome(kind=EquilibriumKind.INFORMATIVE,
                                  utilities=evaluate_sigma_s(game, filt))
    action, utilities = evaluate_babbling(game)
    return EquilibriumOutcome(kind=EquilibriumKind.BABBLING,
                              utilities=utilities, babbling_action=action)


# ---------------------------------------------------------------------------
# General profiles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GeneralProfile:
    """An arbitrary mixed profile over a general filter's signals.

    sender_strategy[signal][message] is the probability of sending that
    message on that signal; receiver_strategy[message] is the probability of
    playing action 0 on that message. The receiver strategy's key set is the
    whole message universe, so it also bounds the sender's deviations.
    """

    sender_strategy: Mapping[str, Mapping[str, Fraction]]
    receiver_strategy: Mapping[str, Fraction]


class MessageClass(enum.Enum):
    PREFERS_0 = "prefers-0"   # sent on some signal where the sender wants 0
    PREFERS_1 = "prefers-1"
    INDIFFERENT = "indifferent"


@dataclass(frozen=True)
class SenderICWitness:
    """Receiver play levels certifying sender incentive-compatibility.

    Messages sent where the sender wants 0 are played 0 with probability
    l_max, messages sent where she wants 1 with probability l_min, and
    indifferent-only messages sit in between. A message can carry several
    class labels when it is sent on signals of different preference.
    """

    l_min: Fraction
    l_max: Fraction
    message_classes: Mapping[str, frozenset[MessageClass]]


@dataclass(frozen=True)
class Deviation:
    """A profitable unilateral deviation found by the verifier."""

    player: str           # "sender" or "receiver"
    at: str               # signal (sender) or message (receiver)
    current: str
    better: str


def check_nash_general(game: Game, filt: GeneralFilter, profile: GeneralProfile,
                       sender_index: int = 0
                       ) -> tuple[bool, Union[SenderICWitness, Deviation]]:
    """Decide whether a general profile is a Nash equilibrium.

    The sender side uses the message-class conditions: every message sent on
    a prefers-0 signal must get the globally maximal probability of action 0,
    and every message sent on a prefers-1 signal the globally minimal one.
    The receiver side is a per-message posterior best-response check. Sender
    strategy entries for signals the filter never emits are rejected.
    """
    filt.check_for(game)
    live: dict[str, dict[str, Fraction]] = {}
    for sig in filt.signals():
        weights = signal_weights(game, filt, sig)
        if weights:
            live[sig] = weights
    for sig in profile.sender_strategy:
        if sig not in live:
            raise ZeroProbabilitySignal(
                f"profile defines behaviour on signal {sig!r}, which is never emitted")
    missing = [sig for sig in live if sig not in profile.sender_strategy]
    if missing:
        raise ValueError(f"profile missing sender behaviour for signals {sorted(missing)}")

    messages = dict.fromkeys(profile.receiver_strategy)
    for dist in profile.sender_strategy.values():
        for m in dist:
            if m not in messages:
                raise ValueError(f"message {m!r} has no receiver behaviour")

    # Sender signal classes by posterior preference.
    classes: dict[str, frozenset[MessageClass]] = {}
    sig_pref: dict[str, MessageClass] = {}
    for sig, weights in live.items():
        gap = Fraction(0)
        for name, w in weights.items():
            s0, s1 = game.state(name).sender_utils[sender_index]
            gap += w * (s0 - s1)
        if gap > 0:
            sig_pref[sig] = MessageClass.PREFERS_0
        elif gap < 0:
            sig_pref[sig] = MessageClass.PREFERS_1
        else:
            sig_pref[sig] = MessageClass.INDIFFERENT

    tags: dict[str, set[MessageClass]] = {m: set() for m in messages}
    for sig, dist in profile.sender_strategy.items():
        for m, prob in dist.items():
            if prob > 0:
                tags[m].add(sig_pref[sig])

    play0 = profile.receiver_strategy
    global_max = max(play0.values())
    global_min = min(play0.values())

    for m, t in tags.items():
        if MessageClass.PREFERS_0 in t and play0[m] != global_max:
            better = max(messages, key=lambda mm: play0[mm])
            sig = _first_supporting_signal(profile, m, sig_pref, MessageClass.PREFERS_0)
            return False, Deviation("sender", at=sig, current=m, better=better)
        if MessageClass.PREFERS_1 in t and play0[m] != global_min:
            better = min(messages, key=lambda mm: play0[mm])
            sig = _first_supporting_signal(profile, m, sig_pref, MessageClass.PREFERS_1)
            return False, Deviation("sender", at=sig, current=m, better=better)

    # Receiver: each action in the support of the reply must be optimal for
    # the posterior induced by the message.
    for m in messages:
        gap = Fraction(0)
        seen = False
        for sig, dist in profile.sender_strategy.items():
            prob = dist.get(m, Fraction(0))
            if not prob:
                continue
            for name, w in live[sig].items():
                r0, r1 = game.state(name).receiver_utils
                gap += w * prob * (r0 - r1)
                seen = True
        if not seen:
            continue  # message never sent; any reply is a best response
        if play0[m] > 0 and gap < 0:
            return False, Deviation("receiver", at=m, current="action 0", better="action 1")
        if play0[m] < 1 and gap > 0:
            return False, Deviation("receiver", at=m, current="action 1", better="action 0")

    for m, t in tags.items():
        classes[m] = frozenset(t) if t else frozenset()
    l_max = global_max if any(MessageClass.PREFERS_0 in t for t in tags.values()) else None
    l_min = global_min if any(MessageClass.PREFERS_1 in t for t in tags.values()) else None
    eq_vals = [play0[m] for m, t in tags.items() if MessageClass.INDIFFERENT in t]
    if l_max is None:
        candidates = eq_vals + ([l_min] if l_min is not None else [])
        l_max = max(candidates) if candidates else global_max
    if l_min is None:
        candidates = eq_vals + [l_max]
        l_min = min(candidates)
    return True, SenderICWitness(l_min=l_min, l_max=l_max, message_classes=classes)


def _first_supporting_signal(profile: GeneralProfile, message: str,
                             sig_pref: Mapping[str, MessageClass],
                             wanted: MessageClass) -> str:
    for sig, dist in profile.sender_strategy.items():
        if sig_pref.get(sig) == wanted and dist.get(message, Fraction(0)) > 0:
            return sig
    return "?"
