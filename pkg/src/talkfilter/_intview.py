"""Integer-normalized snapshots of a game for exact hot loops.

Priors and per-player utilities are rescaled to integers by the lcm of their
denominators, so sorting keys, incentive slacks and grid sweeps run on plain
ints (exact, and much faster than Fraction arithmetic at solver scale).
Fractions are reconstructed only at API boundaries by dividing the scales
back out.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm

from .core import Game


def scaled_ints(pairs: list[tuple[int, int]]) -> tuple[list[int], int]:
    """Rescale rationals given as (numerator, denominator) to a common integer scale."""
    scale = 1
    for _, d in pairs:
        if d != 1:
            scale = lcm(scale, d)
    if scale == 1:
        return [n for n, _ in pairs], 1
    return [n * (scale // d) for n, d in pairs], scale


class IntView:
    """All-integer tables for one game.

    Player index convention: senders are 0..num_senders-1 and the receiver is
    index num_senders. For player t, state i:

        utility(action a) = ua[t][i] / uscale[t]
        prior             = weight[i] / wscale
        gap[t][i]         = u0[t][i] - u1[t][i]   (same uscale[t] scale)

    An obey-the-signal slack computed as sum(weight * gap * x) therefore has
    scale wscale * uscale[t]; only signs and same-player comparisons are ever
    taken on raw ints.
    """

    __slots__ = ("names", "weight", "wscale", "u0", "u1", "gap", "uscale",
                 "num_senders", "num_players")

    def __init__(self, game: Game):
        self.num_senders = game.num_senders
        self.num_players = game.num_senders + 1
        states = game.states
        self.names = [rec.name for rec in states]

        self.weight, self.wscale = scaled_ints(
            [rec.prior.as_integer_ratio() for rec in states])

        self.u0 = []
        self.u1 = []
        self.uscale = []
        for t in range(self.num_players):
            if t < self.num_senders:
                raw = [(rec.sender_utils[t][0].as_integer_ratio(),
                        rec.sender_utils[t][1].as_integer_ratio()) for rec in states]
            else:
                raw = [(rec.receiver_utils[0].as_integer_ratio(),
                        rec.receiver_utils[1].as_integer_ratio()) for rec in states]
            flat: list[tuple[int, int]] = []
            for a, b in raw:
                flat.append(a)
                flat.append(b)
            vals, scale = scaled_ints(flat)
            self.u0.append(vals[0::2])
            self.u1.append(vals[1::2])
            self.uscale.append(scale)
        self.gap = [[a - b for a, b in zip(self.u0[t], self.u1[t])]
                    for t in range(self.num_players)]

    @property
    def receiver(self) -> int:
        return self.num_senders

    def slack_scale(self, player: int) -> int:
        return self.wscale * self.uscale[player]

    def gap_total(self, player: int) -> int:
        """sum(weight * gap), the slack-scale gap between constant actions 0 and 1."""
        g = self.gap[player]
        w = self.weight
        return sum(w[i] * g[i] for i in range(len(w)))

    def constant_value(self, player: int, action: int) -> Fraction:
        ua = self.u0[player] if action == 0 else self.u1[player]
        w = self.weight
        total = sum(w[i] * ua[i] for i in range(len(w)))
        return Fraction(total, self.slack_scale(player))

    def babbling(self) -> tuple[int, list[Fraction]]:
        """Best uninformed receiver action (ties to 0) and per-player values."""
        r = self.receiver
        action = 0 if self.gap_total(r) >= 0 else 1
        return action, [self.constant_value(t, action) for t in range(self.num_players)]
