"""Restricted-action games and the one-die Pig game.

The restricted games reuse the backward solver with part of the move set
removed, i.e. with the move-update steps for the missing actions deleted
from the sweep.  Note the fine print: this prices a move at the
destination's stop-or-roll value, so a removed composite move (say, two
fives at once) is genuinely gone; a player who could still chain two
single-five resignations between rolls would be playing a different,
slightly richer game.

Pig is solved directly: its state is the chip count alone, the die faces
2..6 add their face value and a rolled 1 ends the turn with nothing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .dice import ALL_ACTIONS, Action
from .solver import SolvedTable, solve_backward

#: Published ladder of restricted games, smallest action set first.
ACTION_SUBSETS: tuple[tuple[str, frozenset[Action]], ...] = (
    ("s,r", frozenset({Action.STOP, Action.ROLL})),
    ("s,r,m5", frozenset({Action.STOP, Action.ROLL, Action.M5})),
    ("s,r,m5,m1", frozenset({Action.STOP, Action.ROLL, Action.M5, Action.M1})),
    (
        "s,r,m5,m1,m55",
        frozenset({Action.STOP, Action.ROLL, Action.M5, Action.M1, Action.M55}),
    ),
    (
        "s,r,m5,m1,m55,m51",
        frozenset(
            {Action.STOP, Action.ROLL, Action.M5, Action.M1, Action.M55, Action.M51}
        ),
    ),
    ("all", ALL_ACTIONS),
)


def parse_action_subset(spec: str) -> frozenset[Action]:
    """Parse a comma-separated action list ("all" for the full game)."""
    if spec.strip().lower() == "all":
        return ALL_ACTIONS
    try:
        actions = frozenset(Action(part.strip()) for part in spec.split(","))
    except ValueError as exc:
        raise ValueError(f"unknown action in {spec!r}") from exc
    if not {Action.STOP, Action.ROLL} <= actions:
        raise ValueError("an action subset must contain s and r")
    return actions


def solve_restricted(subset: frozenset[Action]) -> SolvedTable:
    """Solve the game with moves outside ``subset`` removed."""
    return solve_backward(allowed=frozenset(subset))


PIG_FACES = (2, 3, 4, 5, 6)  # a rolled 1 busts


@dataclass(frozen=True)
class PigTable:
    """Exact value function of the solitaire Pig game."""

    threshold: int
    values: dict[int, Fraction]

    @property
    def game_value(self) -> Fraction:
        return self.value(0)

    def value(self, tau: int) -> Fraction:
        if tau >= self.threshold:
            return Fraction(tau)
        return self.values[tau]

    def roll_value(self, tau: int) -> Fraction:
        return sum(self.value(tau + face) for face in PIG_FACES) / 6


def pig_threshold() -> int:
    """Smallest tau at which stopping beats rolling once more."""
    tau = 1
    while 6 * tau < 5 * tau + sum(PIG_FACES):
        tau += 1
    return tau


def solve_pig() -> PigTable:
    """Backward solve below the Pig threshold with value tau at and above it."""
    threshold = pig_threshold()
    values: dict[int, Fraction] = {}

    def value(tau: int) -> Fraction:
        return Fraction(tau) if tau >= threshold else values[tau]

    for tau in range(threshold - 1, -1, -1):
        roll = sum(value(tau + face) for face in PIG_FACES) / 6
        values[tau] = max(Fraction(tau), roll)
    return PigTable(threshold=threshold, values=values)


def geometric_growth_rate(tolerance: float = 1e-14) -> float:
    """Positive root g > 1 of g^2 + g^3 + g^4 + g^5 + g^6 = 6, by bisection."""
    def excess(g: float) -> float:
        return sum(g**k for k in range(2, 7)) - 6.0

    lo, hi = 1.0, 2.0
    assert excess(lo) < 0 < excess(hi)
    while hi - lo > tolerance:
        mid = (lo + hi) / 2
        if excess(mid) < 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


@dataclass(frozen=True)
class GeometricWitness:
    """A strictly larger solution of Pig's unconstrained recurrence.

    Witnesses that the value function is only pinned down as the *minimal*
    solution: any geometric curve base * g**tau with the right growth rate
    also satisfies the roll recurrence, and dominates tau once the base is
    large enough.
    """

    base: float
    growth: float

    def value(self, tau: int) -> float:
        return self.base * self.growth**tau

    def residual(self, tau: int) -> float:
        roll = sum(self.value(tau + face) for face in PIG_FACES) / 6
        return abs(self.value(tau) - roll)


def demonstrate_nonuniqueness(base: float = 10.0) -> GeometricWitness:
    """Build the geometric super-solution; reject bases too small to dominate tau."""
    growth = geometric_growth_rate()
    witness = GeometricWitness(base=base, growth=growth)
    # g > 1, so tau / g**tau peaks near 1/ln(g) and decays afterwards.
    horizon = 10 * max(1, round(1 / math.log(growth)))
    for tau in range(horizon + 1):
        if witness.value(tau) < tau:
            raise ValueError(
                f"base {base} is too small: value({tau}) = {witness.value(tau):.3f} < {tau}"
            )
    return witness
