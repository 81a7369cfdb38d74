"""Exact backward solver for the solitaire game.

All values are exact rationals.  The solve rests on two facts, re-verified
at runtime: stopping is optimal in every state with at least ``THRESHOLD``
chips (so the table only needs chip counts below it), and within one
backward sweep over chip counts every value a cell depends on is already
final.  ``solve_backward`` fills the full state table; ``solve_efficient``
runs the gathered-class variant that tracks five value curves instead of
per-configuration cells, and ``reconcile`` proves both agree cell by cell.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator

from .dice import (
    ALL_ACTIONS,
    CONFIGS,
    MAX_DICE,
    Action,
    Configuration,
    GameState,
    IllegalActionError,
    apply_move,
    available_actions,
    configs_up_to,
    frequencies,
    move_between,
    movers_into,
    sub_configurations,
)

#: Smallest chip count at which stopping is optimal everywhere.
THRESHOLD = 56

Value = Fraction
Cell = tuple[Value, Action]
CellKey = tuple[int, Configuration, int]


class SolverError(RuntimeError):
    """Internal consistency failure (missing cell, bad ordering)."""


def critical_threshold(dice: int) -> int:
    """Smallest positive chip count tau with sum f(n,k)s(k) <= tau * f(n, zero)."""
    freq = frequencies()
    gain = sum(count * config.score for config, count in freq.support(dice))
    bust = freq.count(dice, Configuration(0, 0, 0))
    return max(1, -(-gain // bust))


@lru_cache(maxsize=None)
def _roll_support(dice: int) -> tuple[tuple[Configuration, int, int, int], ...]:
    """(config, count, score, dice-after-roll) for every scoring outcome."""
    support = []
    for config, count in frequencies().support(dice):
        left = dice - config.scoring_dice
        support.append((config, count, config.score, left if left else MAX_DICE))
    return tuple(support)


def roll_value(tau: int, dice: int, lookup: Callable[[int, Configuration, int], Value]) -> Value:
    """Expected value of rolling ``dice`` dice holding ``tau`` chips."""
    total = Fraction(0)
    for config, count, score, dice_after in _roll_support(dice):
        total += count * lookup(tau + score, config, dice_after)
    return total / 6**dice


def admissible_pairs() -> Iterator[tuple[Configuration, int]]:
    """(configuration, dice) pairs the state table stores."""
    for config in CONFIGS:
        yield config, MAX_DICE
    for dice in range(MAX_DICE - 1, 0, -1):
        for config in configs_up_to(MAX_DICE - dice):
            yield config, dice


@dataclass(frozen=True)
class SolvedTable:
    """Value and optimal action for every state with tau below the threshold."""

    cells: dict[CellKey, Cell]
    actions_allowed: frozenset[Action]
    threshold: int = THRESHOLD

    @property
    def game_value(self) -> Value:
        return self.cells[(0, CONFIGS[0], MAX_DICE)][0]

    def value(self, tau: int, config: Configuration, dice: int) -> Value:
        if tau >= self.threshold:
            return Fraction(tau)
        try:
            return self.cells[(tau, config, dice)][0]
        except KeyError:
            raise SolverError(f"no value for ({tau}, [{config}], {dice})") from None

    def action(self, tau: int, config: Configuration, dice: int) -> Action:
        if tau >= self.threshold:
            return Action.STOP
        try:
            return self.cells[(tau, config, dice)][1]
        except KeyError:
            raise SolverError(f"no action for ({tau}, [{config}], {dice})") from None

    def state_value(self, state: GameState) -> Value:
        if state.is_initial:
            return self.game_value
        return self.value(state.tau, state.config, state.n)

    def state_action(self, state: GameState) -> Action:
        if state.is_initial:
            return Action.ROLL
        return self.action(state.tau, state.config, state.n)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SolvedTable)
            and self.threshold == other.threshold
            and self.actions_allowed == other.actions_allowed
            and self.cells == other.cells
        )


def solve_backward(allowed: frozenset[Action] = ALL_ACTIONS) -> SolvedTable:
    """Backward sweep over chip counts, highest first.

    For each tau: every five-dice cell is a roll (rolling beats stopping
    strictly below the threshold); for n = 4..1 all cells sharing (tau, n)
    get the common stop-or-roll base, then every state that can move onto
    the cell just valued is raised to that roll value when it improves.
    Move updates only touch higher chip counts, which this sweep has
    already finished, and cells are only read at chip counts strictly
    above the ones still being written, so one pass is exact.
    """
    if not {Action.STOP, Action.ROLL} <= allowed:
        raise ValueError("stop and roll cannot be removed")
    cells: dict[CellKey, Cell] = {}
    boundary = THRESHOLD

    def lookup(tau: int, config: Configuration, dice: int) -> Value:
        if tau >= boundary:
            return Fraction(tau)
        try:
            return cells[(tau, config, dice)][0]
        except KeyError:
            raise SolverError(
                f"({tau}, [{config}], {dice}) read before it was written"
            ) from None

    allow_moves = any(a.is_move for a in allowed)
    for tau in range(boundary - 1, -1, -1):
        value_roll5 = roll_value(tau, MAX_DICE, lookup)
        assert value_roll5 > tau, "rolling five dice must win below the threshold"
        for config in CONFIGS:
            cells[(tau, config, MAX_DICE)] = (value_roll5, Action.ROLL)
        for dice in range(MAX_DICE - 1, 0, -1):
            aux = roll_value(tau, dice, lookup)
            assert aux < boundary
            for config in configs_up_to(MAX_DICE - dice):
                if aux <= tau:
                    cells[(tau, config, dice)] = (Fraction(tau), Action.STOP)
                    continue
                cells[(tau, config, dice)] = (aux, Action.ROLL)
                if not allow_moves:
                    continue
                for source in movers_into(config, dice):
                    move = move_between(source, config)
                    if move not in allowed:
                        continue
                    src_tau = tau - config.score + source.score
                    src_dice = dice - source.scoring_dice + config.scoring_dice
                    if src_tau >= boundary:
                        continue
                    key = (src_tau, source, src_dice)
                    if cells[key][0] < aux:
                        cells[key] = (aux, move)
    return SolvedTable(cells=cells, actions_allowed=allowed)


#: Gathered classes: configurations whose full action set stays relevant.
CLASS_OF_CONFIG: dict[Configuration, str] = {
    Configuration(2, 0, 0): "5",
    Configuration(1, 1, 0): "5",
    Configuration(0, 2, 0): "1",
    Configuration(2, 1, 0): "55",
    Configuration(1, 2, 0): "51",
}
CLASS_DICE_RANGE: dict[str, tuple[int, ...]] = {
    "0": (1, 2, 3, 4, 5),
    "5": (1, 2, 3),
    "1": (1, 2, 3),
    "55": (1, 2),
    "51": (1, 2),
}


def class_label(config: Configuration, dice: int) -> str:
    """Gathered-class label of an admissible (configuration, dice) cell."""
    if dice >= 4:
        return "0"
    return CLASS_OF_CONFIG.get(config, "0")


@dataclass(frozen=True)
class GatheredTable:
    """Per-class value curves produced by the gathered-class sweep."""

    cells: dict[tuple[str, int, int], Cell]
    threshold: int = THRESHOLD

    @property
    def game_value(self) -> Value:
        return self.cells[("0", 0, MAX_DICE)][0]

    def cell(self, label: str, tau: int, dice: int) -> Cell:
        return self.cells[(label, tau, dice)]

    def value(self, label: str, tau: int, dice: int) -> Value:
        return self.cells[(label, tau, dice)][0]


def solve_efficient() -> GatheredTable:
    """Gathered-class sweep: five curves instead of per-configuration cells.

    Roll expectations read the class curve of each scoring outcome (plain
    stop-or-roll states all share the "0" curve).  The only move updates
    needed are the one- and two-five resignations onto the "5"/"55"/"51"
    curves and the one-one resignation onto "1"; everything else is
    dominated, which ``reconcile`` re-proves against the full table.
    """
    cells: dict[tuple[str, int, int], Cell] = {}
    boundary = THRESHOLD

    def lookup(tau: int, config: Configuration, dice: int) -> Value:
        if tau >= boundary:
            return Fraction(tau)
        return cells[(class_label(config, dice), tau, dice)][0]

    def improve(label: str, tau: int, dice: int, value: Value, action: Action) -> None:
        if tau >= boundary:
            return
        key = (label, tau, dice)
        if cells[key][0] < value:
            cells[key] = (value, action)

    for tau in range(boundary - 1, -1, -1):
        cells[("0", tau, MAX_DICE)] = (roll_value(tau, MAX_DICE, lookup), Action.ROLL)
        for dice in range(MAX_DICE - 1, 0, -1):
            aux = roll_value(tau, dice, lookup)
            for label, dice_range in CLASS_DICE_RANGE.items():
                if dice in dice_range:
                    cell = (Fraction(tau), Action.STOP) if aux <= tau else (aux, Action.ROLL)
                    cells[(label, tau, dice)] = cell
            if aux <= tau:
                continue
            if dice >= 2:
                improve("5", tau + 1, dice - 1, aux, Action.M5)
                improve("1", tau + 2, dice - 1, aux, Action.M1)
            if 2 <= dice <= 3:
                improve("55", tau + 1, dice - 1, aux, Action.M5)
                improve("51", tau + 1, dice - 1, aux, Action.M5)
            if dice >= 3:
                improve("55", tau + 2, dice - 2, aux, Action.M55)
                improve("51", tau + 3, dice - 2, aux, Action.M51)
    return GatheredTable(cells=cells)


@dataclass
class ReconcileReport:
    """Outcome of the full-vs-gathered cross check."""

    cells_checked: int = 0
    mismatches: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def reconcile(full: SolvedTable, gathered: GatheredTable) -> ReconcileReport:
    """Assert exact (value, action) agreement of the two solve paths.

    Cells outside the five gathered configurations must carry the plain
    stop-or-roll curve value; gathered cells must match their curve.
    """
    report = ReconcileReport()
    for config, dice in admissible_pairs():
        label = class_label(config, dice)
        for tau in range(full.threshold):
            expected = gathered.cell(label, tau, dice)
            got = full.cells[(tau, config, dice)]
            report.cells_checked += 1
            if got != expected:
                report.mismatches.append(
                    f"({tau}, [{config}], {dice}): full {got[0]}/{got[1]}"
                    f" vs gathered {expected[0]}/{expected[1]}"
                )
    if full.game_value != gathered.game_value:
        report.mismatches.append("game values differ")
    return report


def state_moves(tau: int, config: Configuration, dice: int) -> list[tuple[Action, CellKey]]:
    """Move actions and destination cells for a table state (chips stay >= 0)."""
    if dice == MAX_DICE or config.scoring_combinations <= 1:
        return []
    moves = []
    for small in sub_configurations(config):
        dest_tau = tau - config.score + small.score
        if dest_tau < 0:
            continue
        dest_dice = dice + config.scoring_dice - small.scoring_dice
        moves.append((move_between(config, small), (dest_tau, small, dest_dice)))
    return moves


def bellman_residuals(table: SolvedTable) -> list[str]:
    """Exact one-step optimality check of every cell; returns mismatches.

    For the full game a move option is worth the destination cell's value
    (composite moves make chains redundant, so this is the plain one-step
    optimality equation).  A table solved with moves removed prices a move
    at the destination's stop-or-roll value instead: the line-removed
    sweep grants one move per roll, so destination cells may exceed what
    the move is actually worth there.
    """
    problems = []
    rolls: dict[tuple[int, int], Value] = {}

    def lookup(tau: int, config: Configuration, dice: int) -> Value:
        return table.value(tau, config, dice)

    for tau in range(table.threshold):
        for dice in range(1, MAX_DICE + 1):
            rolls[(tau, dice)] = roll_value(tau, dice, lookup)
    allowed = table.actions_allowed
    full_game = allowed == ALL_ACTIONS

    def move_worth(dest: CellKey) -> Value:
        if full_game:
            return table.value(*dest)
        dest_tau, _, dest_dice = dest
        return max(Fraction(dest_tau), rolls[(dest_tau, dest_dice)])

    for config, dice in admissible_pairs():
        for tau in range(table.threshold):
            best = max(Fraction(tau), rolls[(tau, dice)])
            for move, dest in state_moves(tau, config, dice):
                if move in allowed:
                    best = max(best, move_worth(dest))
            value, action = table.cells[(tau, config, dice)]
            if value != best:
                problems.append(
                    f"({tau}, [{config}], {dice}): value {value} != optimum {best}"
                )
                continue
            if action == Action.STOP:
                attained = Fraction(tau)
            elif action == Action.ROLL:
                attained = rolls[(tau, dice)]
            else:
                dests = [d for m, d in state_moves(tau, config, dice) if m == action]
                if not dests:
                    raise SolverError(
                        f"{action} not available at ({tau}, [{config}], {dice})"
                    )
                attained = move_worth(dests[0])
            if attained != value:
                problems.append(
                    f"({tau}, [{config}], {dice}): action {action} yields"
                    f" {attained}, not {value}"
                )
    return problems


def boundary_holds() -> bool:
    """Re-verify the stopping boundary: rolling at the threshold loses chips."""
    def clamp(tau: int, config: Configuration, dice: int) -> Value:
        return Fraction(tau)

    return all(
        roll_value(THRESHOLD, dice, clamp) < THRESHOLD
        for dice in range(1, MAX_DICE + 1)
    )


def threshold_inequality_holds(tau: int, dice: int) -> bool:
    """Integer form of the stopping inequality at ``tau`` for ``dice`` dice."""
    freq = frequencies()
    gain = sum(count * config.score for config, count in freq.support(dice))
    return gain - tau * freq.count(dice, Configuration(0, 0, 0)) < 0
