"""Dice combinatorics and one-step mechanics of solitaire Ten Thousand.

Scores are kept in "chips" (points divided by 50): each rolled 5 is worth
1 chip, each 1 is worth 2 chips, and a triple of face k in {2, 3, 4, 6} is
worth 2k chips.  Triples of fives and ones are folded into the five/one
counts (7 extra chips for three fives, 14 extra for three ones).

The scoring content of a roll is summarised by a configuration [f, o, t]:
f fives, o ones, and a flag t in {0, 2, 3, 4, 6} marking a triple of
twos/threes/fours/sixes (0 = no such triple).  Everything downstream
(transition kernel, solver, simulator) works on configurations; all roll
probabilities are exact rationals derived from exhaustive enumeration of
ordered outcomes.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, NamedTuple

DIE_FACES = 6
MAX_DICE = 5
TRIPLE_FACES = (2, 3, 4, 6)


class RollError(ValueError):
    """Malformed dice input (wrong count or face out of range)."""


class IllegalActionError(ValueError):
    """An action was applied to a state where it is not available."""


@dataclass(frozen=True)
class Configuration:
    """Scoring content of a roll: ``f`` fives, ``o`` ones, triple flag ``t``."""

    f: int
    o: int
    t: int

    def __post_init__(self) -> None:
        if not (0 <= self.f <= MAX_DICE and 0 <= self.o <= MAX_DICE):
            raise ValueError(f"five/one counts out of range: {self.f},{self.o}")
        if self.t != 0 and self.t not in TRIPLE_FACES:
            raise ValueError(f"triple flag must be 0 or one of {TRIPLE_FACES}")
        if self.scoring_dice > MAX_DICE:
            raise ValueError(f"configuration {self} needs more than {MAX_DICE} dice")

    @property
    def score(self) -> int:
        """Chips this configuration is worth."""
        return (
            self.f
            + 2 * self.o
            + 14 * (self.o >= 3)
            + 7 * (self.f >= 3)
            + 2 * self.t
        )

    @property
    def scoring_dice(self) -> int:
        """Number of dice bound by the scoring combinations."""
        return self.f + self.o + 3 * (self.t != 0)

    @property
    def scoring_combinations(self) -> int:
        """Number of individually resignable combinations (each 5, each 1, the triple)."""
        return self.f + self.o + (self.t != 0)

    def __str__(self) -> str:
        return f"{self.f},{self.o},{self.t}"

    @classmethod
    def parse(cls, text: str) -> "Configuration":
        parts = text.split(",")
        if len(parts) != 3:
            raise ValueError(f"expected 'f,o,t', got {text!r}")
        return cls(int(parts[0]), int(parts[1]), int(parts[2]))


ZERO = Configuration(0, 0, 0)


def classify_roll(faces: Iterable[int]) -> Configuration:
    """Classify an ordered roll of 1..5 dice into its configuration."""
    faces = list(faces)
    if not 1 <= len(faces) <= MAX_DICE:
        raise RollError(f"a roll uses 1..{MAX_DICE} dice, got {len(faces)}")
    if any(not isinstance(v, int) or not 1 <= v <= DIE_FACES for v in faces):
        raise RollError(f"faces must be integers 1..{DIE_FACES}: {faces}")
    fives = faces.count(5)
    ones = faces.count(1)
    triples = [k for k in TRIPLE_FACES if faces.count(k) >= 3]
    assert len(triples) <= 1  # two triples need six dice
    return Configuration(fives, ones, triples[0] if triples else 0)


def _config_sort_key(config: Configuration) -> tuple:
    # Order used throughout: by scoring dice, plain-five/one configurations
    # before triple-flag ones, then descending five count, ascending flag.
    return (config.scoring_dice, config.t != 0, -config.f, config.t)


def _enumerate_all() -> tuple[Configuration, ...]:
    configs = []
    for t in (0, *TRIPLE_FACES):
        budget = MAX_DICE - (3 if t else 0)
        for f in range(budget + 1):
            for o in range(budget - f + 1):
                config = Configuration(f, o, t)
                if config.score > 0:
                    configs.append(config)
    return tuple(sorted(configs, key=_config_sort_key))


#: All scoring configurations, in table order.
CONFIGS: tuple[Configuration, ...] = _enumerate_all()
CONFIG_INDEX: dict[Configuration, int] = {c: i for i, c in enumerate(CONFIGS)}


def enumerate_configs() -> tuple[Configuration, ...]:
    """All scoring configurations reachable with five dice."""
    return CONFIGS


@lru_cache(maxsize=None)
def configs_up_to(max_dice: int) -> tuple[Configuration, ...]:
    """Scoring configurations obtainable when rolling ``max_dice`` dice."""
    if not 1 <= max_dice <= MAX_DICE:
        raise ValueError(f"dice count must be 1..{MAX_DICE}")
    return tuple(c for c in CONFIGS if c.scoring_dice <= max_dice)


@lru_cache(maxsize=None)
def single_combo(max_dice: int) -> tuple[Configuration, ...]:
    """Configurations in ``configs_up_to(max_dice)`` with a single combination."""
    return tuple(c for c in configs_up_to(max_dice) if c.scoring_combinations == 1)


def smaller_than(small: Configuration, big: Configuration) -> bool:
    """True iff ``small``'s combinations form a non-void strict subset of ``big``'s."""
    if small == big or small == ZERO:
        return False
    if small.t not in (0, big.t):
        return False
    return small.f <= big.f and small.o <= big.o


@lru_cache(maxsize=None)
def sub_configurations(config: Configuration) -> tuple[Configuration, ...]:
    """Every configuration reachable by resigning part of ``config``'s combinations."""
    subs = []
    for f in range(config.f + 1):
        for o in range(config.o + 1):
            for t in {0, config.t}:
                candidate = Configuration(f, o, t)
                if candidate != config and candidate != ZERO:
                    subs.append(candidate)
    return tuple(sorted(subs, key=_config_sort_key))


@lru_cache(maxsize=None)
def movers_into(config: Configuration, dice: int) -> tuple[Configuration, ...]:
    """Configurations from which a move can land on ``(config, dice)``."""
    return tuple(
        big
        for big in CONFIGS
        if smaller_than(config, big) and big.scoring_dice < config.scoring_dice + dice
    )


class Action(Enum):
    """The 15 actions: stop, roll, and the 13 resignation moves."""

    STOP = "s"
    ROLL = "r"
    M5 = "m5"        # resign one 5
    M1 = "m1"        # resign one 1
    M55 = "m55"      # resign two 5s
    M51 = "m51"      # resign one 5 and one 1
    M11 = "m11"      # resign two 1s
    M551 = "m551"    # resign two 5s and one 1
    M511 = "m511"    # resign one 5 and two 1s
    MT1 = "mt1"      # resign a triple of 1s
    MT2 = "mt2"      # resign the triple of 2s
    MT3 = "mt3"      # resign the triple of 3s
    MT4 = "mt4"      # resign the triple of 4s
    MT5 = "mt5"      # resign a triple of 5s
    MT6 = "mt6"      # resign the triple of 6s

    @property
    def is_move(self) -> bool:
        return self not in (Action.STOP, Action.ROLL)

    def __str__(self) -> str:
        return self.value


#: fives resigned, ones resigned, triple face resigned (0 = none)
_RESIGNATIONS: dict[Action, tuple[int, int, int]] = {
    Action.M5: (1, 0, 0),
    Action.M1: (0, 1, 0),
    Action.M55: (2, 0, 0),
    Action.M51: (1, 1, 0),
    Action.M11: (0, 2, 0),
    Action.M551: (2, 1, 0),
    Action.M511: (1, 2, 0),
    Action.MT5: (3, 0, 0),
    Action.MT1: (0, 3, 0),
    Action.MT2: (0, 0, 2),
    Action.MT3: (0, 0, 3),
    Action.MT4: (0, 0, 4),
    Action.MT6: (0, 0, 6),
}

_RESIGNATION_TO_ACTION = {v: k for k, v in _RESIGNATIONS.items()}

MOVE_ACTIONS: tuple[Action, ...] = tuple(a for a in Action if a.is_move)
ALL_ACTIONS: frozenset[Action] = frozenset(Action)


def resign(config: Configuration, action: Action) -> Configuration:
    """Apply a resignation move to a configuration."""
    if not action.is_move:
        raise IllegalActionError(f"{action} is not a move")
    fives, ones, triple = _RESIGNATIONS[action]
    if triple and config.t != triple:
        raise IllegalActionError(f"{action} needs a triple of {triple}s in {config}")
    if fives > config.f or ones > config.o:
        raise IllegalActionError(f"{action} resigns more dice than {config} holds")
    result = Configuration(config.f - fives, config.o - ones, 0 if triple else config.t)
    if result == ZERO:
        raise IllegalActionError(f"{action} would resign all of {config}")
    return result


def move_between(big: Configuration, small: Configuration) -> Action:
    """The move that turns ``big`` into ``small`` by resigning the difference."""
    if not smaller_than(small, big):
        raise IllegalActionError(f"{small} is not smaller than {big}")
    fives = big.f - small.f
    ones = big.o - small.o
    triple = big.t if (big.t != 0 and small.t == 0) else 0
    if triple and (fives or ones):
        # A triple plus loose dice is not a single named action; it never
        # arises in play (it would need five scoring dice and a move).
        raise IllegalActionError(f"no single action resigns {big} -> {small}")
    try:
        return _RESIGNATION_TO_ACTION[(fives, ones, triple)]
    except KeyError:
        raise IllegalActionError(f"no single action resigns {big} -> {small}") from None


@dataclass(frozen=True)
class GameState:
    """A solitaire state: accumulated chips, last configuration, dice to roll.

    ``config`` is None only for the initial state (nothing rolled yet); the
    terminal absorbing state has ``n == 0``.
    """

    tau: int
    config: Configuration | None
    n: int

    def __post_init__(self) -> None:
        if self.config is None:
            if (self.tau, self.n) != (0, MAX_DICE):
                raise ValueError("initial state must be (0, None, 5)")
            return
        if self.n == 0:
            if (self.tau, self.config) != (0, ZERO):
                raise ValueError("terminal state must be (0, zero, 0)")
            return
        if self.tau < 0 or not 1 <= self.n <= MAX_DICE:
            raise ValueError(f"bad active state ({self.tau}, {self.config}, {self.n})")
        if self.config.score == 0:
            raise ValueError("active states carry a scoring configuration")
        if self.n != MAX_DICE and self.config.scoring_dice > MAX_DICE - self.n:
            raise ValueError(
                f"{self.config} cannot leave {self.n} dice to roll"
            )

    @property
    def is_initial(self) -> bool:
        return self.config is None

    @property
    def is_terminal(self) -> bool:
        return self.config is not None and self.n == 0

    @property
    def is_active(self) -> bool:
        return not self.is_initial and not self.is_terminal

    def __str__(self) -> str:
        if self.is_initial:
            return "(initial)"
        if self.is_terminal:
            return "(terminal)"
        return f"({self.tau}, [{self.config}], {self.n})"


INITIAL = GameState(0, None, MAX_DICE)
TERMINAL = GameState(0, ZERO, 0)


class FrequencyTable:
    """Counts of ordered ``n``-dice outcomes per configuration."""

    def __init__(self, counts: dict[tuple[int, Configuration], int]):
        self._counts = counts

    def count(self, dice: int, config: Configuration) -> int:
        return self._counts.get((dice, config), 0)

    def total(self, dice: int) -> int:
        return DIE_FACES**dice

    def support(self, dice: int) -> tuple[tuple[Configuration, int], ...]:
        """Scoring configurations with nonzero count for ``dice`` dice."""
        return tuple(
            (config, self.count(dice, config))
            for config in configs_up_to(dice)
            if self.count(dice, config) > 0
        )

    def items(self):
        return self._counts.items()


def build_frequency_table() -> FrequencyTable:
    """Tally every ordered outcome of 1..5 dice by configuration."""
    counts: dict[tuple[int, Configuration], int] = {}
    for dice in range(1, MAX_DICE + 1):
        for outcome in itertools.product(range(1, DIE_FACES + 1), repeat=dice):
            config = classify_roll(outcome)
            key = (dice, config)
            counts[key] = counts.get(key, 0) + 1
    return FrequencyTable(counts)


@lru_cache(maxsize=1)
def frequencies() -> FrequencyTable:
    """The shared frequency table (built once per process)."""
    return build_frequency_table()


def roll_successor(state: GameState, config: Configuration) -> GameState:
    """State after rolling ``state.n`` dice and keeping scoring ``config``."""
    dice_left = state.n - config.scoring_dice
    if dice_left == 0:
        dice_left = MAX_DICE  # hot dice: every die scored, roll five anew
    return GameState(state.tau + config.score, config, dice_left)


def apply_move(state: GameState, action: Action) -> GameState:
    """Deterministic state change of a resignation move."""
    small = resign(state.config, action)
    big = state.config
    return GameState(
        state.tau - big.score + small.score,
        small,
        state.n + big.scoring_dice - small.scoring_dice,
    )


def available_actions(state: GameState) -> tuple[Action, ...]:
    """Legal actions: roll only at the start; stop/roll plus moves when n < 5."""
    if state.is_terminal:
        raise IllegalActionError("the terminal state has no actions")
    if state.is_initial:
        return (Action.ROLL,)
    actions = [Action.STOP, Action.ROLL]
    if state.n < MAX_DICE and state.config.scoring_combinations > 1:
        moves = {
            move_between(state.config, small)
            for small in sub_configurations(state.config)
        }
        actions.extend(a for a in MOVE_ACTIONS if a in moves)
    return tuple(actions)


class TransitionEntry(NamedTuple):
    next: GameState
    probability: Fraction
    reward: int


def transitions(state: GameState, action: Action) -> tuple[TransitionEntry, ...]:
    """One-step transition distribution for ``action`` taken in ``state``."""
    if action not in available_actions(state):
        raise IllegalActionError(f"{action} is not available in {state}")
    if action == Action.STOP:
        return (TransitionEntry(TERMINAL, Fraction(1), state.tau),)
    if action == Action.ROLL:
        freq = frequencies()
        dice = state.n
        total = freq.total(dice)
        entries = [
            TransitionEntry(TERMINAL, Fraction(freq.count(dice, ZERO), total), 0)
        ]
        for config, count in freq.support(dice):
            entries.append(
                TransitionEntry(
                    roll_successor(state, config), Fraction(count, total), 0
                )
            )
        return tuple(entries)
    return (TransitionEntry(apply_move(state, action), Fraction(1), 0),)


def reachable_states(tau_cap: int = 55) -> frozenset[GameState]:
    """Active states with ``tau <= tau_cap`` reachable from the start under some play.

    Exploration continues past the cap because a player can bank chips above
    it and resign back down; a single move chain gives back at most
    ``max score - 1`` chips, after which chips only grow, so states beyond
    ``tau_cap + 21`` cannot lead back under the cap.
    """
    explore_cap = tau_cap + max(c.score for c in configs_up_to(4)) - 1
    seen: set[GameState] = set()
    frontier: list[GameState] = [INITIAL]
    while frontier:
        state = frontier.pop()
        successors = [
            roll_successor(state, config) for config in configs_up_to(state.n)
        ]
        if state.is_active and state.n < MAX_DICE:
            successors.extend(
                apply_move(state, action)
                for action in available_actions(state)
                if action.is_move
            )
        for nxt in successors:
            if nxt not in seen and nxt.tau <= explore_cap:
                seen.add(nxt)
                frontier.append(nxt)
    return frozenset(s for s in seen if s.tau <= tau_cap)
