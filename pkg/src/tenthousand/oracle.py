"""Independent verification: value iteration, simulation, structural checks.

Nothing here trusts the backward solver.  Value iteration applies the
one-step optimality operator to the zero function in plain floats until it
stops moving; the Monte Carlo engine plays seeded episodes with the dice
sampled as ordered outcomes and classified by dice-core.  Both converge to
the same numbers the solver produced exactly, or the comparison helpers
say where they do not.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .dice import (
    CONFIG_INDEX,
    CONFIGS,
    MAX_DICE,
    TRIPLE_FACES,
    Action,
    Configuration,
    GameState,
    INITIAL,
    apply_move,
    available_actions,
    classify_roll,
    configs_up_to,
    frequencies,
    move_between,
    roll_successor,
    sub_configurations,
)
from .solver import THRESHOLD, SolvedTable, admissible_pairs, state_moves

SCORES = np.array([c.score for c in CONFIGS], dtype=np.int64)
SCORING_DICE = np.array([c.scoring_dice for c in CONFIGS], dtype=np.int64)

# (f, o, triple-slot) -> configuration index, -1 for the non-scoring roll
_T_SLOT = {0: 0, 2: 1, 3: 2, 4: 3, 6: 4}
_CONFIG_LOOKUP = np.full((MAX_DICE + 1, MAX_DICE + 1, len(_T_SLOT)), -1, dtype=np.int64)
for _c, _i in CONFIG_INDEX.items():
    _CONFIG_LOOKUP[_c.f, _c.o, _T_SLOT[_c.t]] = _i
_T_SLOT_BY_FACE = np.zeros(7, dtype=np.int64)
for _face, _slot in _T_SLOT.items():
    _T_SLOT_BY_FACE[_face] = _slot


class PolicyGapError(RuntimeError):
    """The supplied policy had no legal action for a reached state."""


@dataclass
class IterationSnapshot:
    """State of the optimality-operator iteration when it stopped."""

    k: int
    delta: float
    deltas: list[float]
    w1_is_tau: bool
    monotone: bool
    tau_max: int
    _values: np.ndarray = field(repr=False)

    def value(self, tau: int, config: Configuration, dice: int) -> float:
        if tau >= THRESHOLD:
            return float(tau)
        return float(self._values[tau, CONFIG_INDEX[config], dice - 1])

    def max_difference(self, table: SolvedTable) -> float:
        """Largest absolute gap to the exact table over all stored states."""
        worst = 0.0
        for config, dice in admissible_pairs():
            for tau in range(THRESHOLD):
                gap = abs(self.value(tau, config, dice) - float(table.value(tau, config, dice)))
                worst = max(worst, gap)
        return worst


def value_iteration(
    tau_max: int = 80, tolerance: float = 1e-9, k_max: int = 2000
) -> IterationSnapshot:
    """Iterate the optimality operator from the zero function.

    States holding ``THRESHOLD`` or more chips are pinned to their chip
    count from the first sweep on; that is exactly what the operator does
    to them (stopping is their best action at every sweep), and it keeps
    the arrays finite.  States below the threshold never read past
    ``tau_max`` because a single roll gains at most 24 chips.
    """
    if tau_max < THRESHOLD:
        raise ValueError(f"tau_max must be at least {THRESHOLD}")
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")

    n_cfg = len(CONFIGS)
    pairs = list(admissible_pairs())
    # roll outcome gathers, per dice count
    succ: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]] = {}
    freq = frequencies()
    for dice in range(1, MAX_DICE + 1):
        cfgs, counts = zip(*freq.support(dice))
        idx = np.array([CONFIG_INDEX[c] for c in cfgs], dtype=np.int64)
        gain = np.array([c.score for c in cfgs], dtype=np.int64)
        left = np.array(
            [dice - c.scoring_dice or MAX_DICE for c in cfgs], dtype=np.int64
        )
        weight = np.array(counts, dtype=np.float64) / freq.total(dice)
        succ[dice] = (idx, gain, left, weight)

    move_terms: dict[tuple[Configuration, int], list[tuple[int, int, int]]] = {}
    for config, dice in pairs:
        move_terms[(config, dice)] = [
            (config.score - small.score, CONFIG_INDEX[small], dice + config.scoring_dice - small.scoring_dice)
            for small in sub_configurations(config)
        ] if dice < MAX_DICE else []

    tau_col = np.arange(THRESHOLD, dtype=np.float64)
    boundary = np.arange(tau_max + 1, dtype=np.float64)

    values = np.zeros((tau_max + 1, n_cfg, MAX_DICE))
    deltas: list[float] = []
    w1_is_tau = False
    monotone = True
    k = 0
    while k < k_max:
        k += 1
        prev = values

        def read(tau_idx: np.ndarray, cfg_idx: np.ndarray, dice_idx: np.ndarray) -> np.ndarray:
            return prev[tau_idx, cfg_idx, dice_idx - 1]

        rolls = np.empty((THRESHOLD, MAX_DICE))
        for dice in range(1, MAX_DICE + 1):
            idx, gain, left, weight = succ[dice]
            tau_grid = tau_col[:, None].astype(np.int64) + gain[None, :]
            rolls[:, dice - 1] = read(
                tau_grid, np.broadcast_to(idx, tau_grid.shape),
                np.broadcast_to(left, tau_grid.shape),
            ) @ weight

        values = prev.copy()
        values[THRESHOLD:, :, :] = boundary[THRESHOLD:, None, None]
        for config, dice in pairs:
            ci = CONFIG_INDEX[config]
            best = np.maximum(tau_col, rolls[:, dice - 1])
            for drop, dest_ci, dest_dice in move_terms[(config, dice)]:
                term = np.full(THRESHOLD, -np.inf)
                term[drop:] = prev[: THRESHOLD - drop, dest_ci, dest_dice - 1]
                best = np.maximum(best, term)
            values[:THRESHOLD, ci, dice - 1] = best

        live = [(slice(None, THRESHOLD), CONFIG_INDEX[c], d - 1) for c, d in pairs]
        delta = max(
            float(np.max(np.abs(values[s, ci, di] - prev[s, ci, di])))
            for s, ci, di in live
        )
        deltas.append(delta)
        if k == 1:
            w1_is_tau = all(
                bool(np.array_equal(values[: THRESHOLD, CONFIG_INDEX[c], d - 1], tau_col))
                for c, d in pairs
            ) and bool(
                np.array_equal(values[THRESHOLD:, 0, 0], boundary[THRESHOLD:])
            )
        else:
            if any(
                bool(np.any(values[s, ci, di] < prev[s, ci, di]))
                for s, ci, di in live
            ):
                monotone = False
        if delta < tolerance:
            break
    else:
        raise RuntimeError(
            f"no convergence in {k_max} sweeps; last delta {deltas[-1]:.3e}"
        )
    return IterationSnapshot(
        k=k,
        delta=deltas[-1],
        deltas=deltas,
        w1_is_tau=w1_is_tau,
        monotone=monotone,
        tau_max=tau_max,
        _values=values,
    )


class TablePolicy:
    """Play the stored optimal action; stop at and above the threshold."""

    def __init__(self, table: SolvedTable):
        self.table = table

    def __call__(self, state: GameState) -> Action:
        if state.is_initial:
            return Action.ROLL
        if state.tau >= self.table.threshold:
            return Action.STOP
        return self.table.action(state.tau, state.config, state.n)


@dataclass(frozen=True)
class EpisodeStep:
    state: GameState
    action: Action
    roll: tuple[int, ...] | None


@dataclass(frozen=True)
class EpisodeRecord:
    seed: int | None
    steps: tuple[EpisodeStep, ...]
    payoff: int


def simulate_episode(
    policy: Callable[[GameState], Action], rng=None, seed: int | None = None
) -> EpisodeRecord:
    """Play one turn from the start under ``policy``; dice come from ``rng``.

    ``rng`` is anything with ``randint(1, 6)``; by default a fresh
    ``random.Random(seed)``.
    """
    if rng is None:
        rng = random.Random(seed)
    steps: list[EpisodeStep] = []
    state = INITIAL
    while True:
        action = policy(state)
        if action is None or action not in available_actions(state):
            raise PolicyGapError(f"policy returned {action} at {state}")
        if action == Action.STOP:
            steps.append(EpisodeStep(state, action, None))
            return EpisodeRecord(seed, tuple(steps), state.tau)
        if action == Action.ROLL:
            faces = tuple(rng.randint(1, 6) for _ in range(state.n))
            steps.append(EpisodeStep(state, action, faces))
            config = classify_roll(faces)
            if config.score == 0:
                return EpisodeRecord(seed, tuple(steps), 0)
            state = roll_successor(state, config)
        else:
            steps.append(EpisodeStep(state, action, None))
            state = apply_move(state, action)


@dataclass(frozen=True)
class MonteCarloResult:
    episodes: int
    seed: int
    mean: float
    stderr: float

    def within(self, target: float, sigmas: float = 3.0) -> bool:
        return abs(self.mean - target) <= sigmas * self.stderr


def _decision_arrays(table: SolvedTable) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Resolve move chains so a decision is a single stop-or-roll lookup."""
    n_cfg = len(CONFIGS)
    kind = np.zeros((THRESHOLD, n_cfg, MAX_DICE), dtype=np.int8)  # 0 stop, 1 roll
    tau_eff = np.zeros((THRESHOLD, n_cfg, MAX_DICE), dtype=np.int64)
    dice_eff = np.zeros((THRESHOLD, n_cfg, MAX_DICE), dtype=np.int64)
    for config, dice in admissible_pairs():
        for tau in range(THRESHOLD):
            state = GameState(tau, config, dice)
            while True:
                action = table.state_action(state)
                if not action.is_move:
                    break
                state = apply_move(state, action)
            ci = CONFIG_INDEX[config]
            kind[tau, ci, dice - 1] = 1 if action == Action.ROLL else 0
            tau_eff[tau, ci, dice - 1] = state.tau
            dice_eff[tau, ci, dice - 1] = state.n
    return kind, tau_eff, dice_eff


def monte_carlo_value(
    table: SolvedTable,
    episodes: int,
    seed: int,
    batch_size: int = 1_000_000,
) -> MonteCarloResult:
    """Seeded mean payoff of ``episodes`` turns under the table's policy.

    Episodes run in fixed-size batches, each on its own spawned RNG
    stream, and the payoff sums are integers, so the result is a pure
    function of (episodes, seed, batch_size).
    """
    if episodes < 1:
        raise ValueError("need at least one episode")
    kind, tau_eff, dice_eff = _decision_arrays(table)
    n_batches = -(-episodes // batch_size)
    streams = np.random.SeedSequence(seed).spawn(n_batches)
    total = 0
    total_sq = 0
    done = 0
    for stream in streams:
        count = min(batch_size, episodes - done)
        payoffs = _run_batch(count, np.random.default_rng(stream), kind, tau_eff, dice_eff)
        total += int(payoffs.sum())
        total_sq += int((payoffs * payoffs).sum())
        done += count
    mean = total / episodes
    if episodes > 1:
        variance = (total_sq - episodes * mean * mean) / (episodes - 1)
        stderr = math.sqrt(max(variance, 0.0) / episodes)
    else:
        stderr = float("inf")
    return MonteCarloResult(episodes=episodes, seed=seed, mean=mean, stderr=stderr)


def _run_batch(
    count: int,
    rng: np.random.Generator,
    kind: np.ndarray,
    tau_eff: np.ndarray,
    dice_eff: np.ndarray,
) -> np.ndarray:
    payoffs = np.zeros(count, dtype=np.int64)
    tau = np.zeros(count, dtype=np.int64)
    dice = np.full(count, MAX_DICE, dtype=np.int64)
    cfg = np.zeros(count, dtype=np.int64)
    alive = np.arange(count)
    while alive.size:
        new_tau = tau[alive]
        new_dice = dice[alive]
        new_cfg = cfg[alive]
        busted = np.zeros(alive.size, dtype=bool)
        for d in range(1, MAX_DICE + 1):
            group = np.nonzero(new_dice == d)[0]
            if not group.size:
                continue
            faces = rng.integers(1, 7, size=(group.size, d))
            fives = (faces == 5).sum(axis=1)
            ones = (faces == 1).sum(axis=1)
            triple = np.zeros(group.size, dtype=np.int64)
            for face in TRIPLE_FACES:
                triple = np.where((faces == face).sum(axis=1) >= 3, face, triple)
            rolled = _CONFIG_LOOKUP[fives, ones, _T_SLOT_BY_FACE[triple]]
            bust = rolled < 0
            busted[group] = bust
            hit = group[~bust]
            got = rolled[~bust]
            scored = SCORING_DICE[got]
            new_tau[hit] += SCORES[got]
            new_dice[hit] = np.where(scored == d, MAX_DICE, d - scored)
            new_cfg[hit] = got
        # busted episodes keep payoff 0 and leave the pool
        keep = ~busted
        survivors = alive[keep]
        new_tau = new_tau[keep]
        new_dice = new_dice[keep]
        new_cfg = new_cfg[keep]
        banked = new_tau >= THRESHOLD
        decided_stop = banked.copy()
        eff_tau = new_tau.copy()
        eff_dice = new_dice.copy()
        below = ~banked
        if below.any():
            b_tau = new_tau[below]
            b_cfg = new_cfg[below]
            b_dice = new_dice[below]
            decided_stop[below] = kind[b_tau, b_cfg, b_dice - 1] == 0
            eff_tau[below] = tau_eff[b_tau, b_cfg, b_dice - 1]
            eff_dice[below] = dice_eff[b_tau, b_cfg, b_dice - 1]
        payoffs[survivors[decided_stop]] = eff_tau[decided_stop]
        rolling = ~decided_stop
        alive = survivors[rolling]
        tau[alive] = eff_tau[rolling]
        dice[alive] = eff_dice[rolling]
        cfg[alive] = new_cfg[rolling]
    return payoffs


@dataclass
class MoveEquivalenceReport:
    chains_checked: int = 0
    counterexamples: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def check_move_equivalence() -> MoveEquivalenceReport:
    """Composing two resignations must land exactly where the direct one does."""
    report = MoveEquivalenceReport()
    for big in CONFIGS:
        if big.scoring_dice > MAX_DICE - 1:
            continue  # no state offers moves from a five-scoring-dice roll
        for mid in sub_configurations(big):
            for small in sub_configurations(mid):
                for dice in range(1, MAX_DICE - big.scoring_dice + 1):
                    for tau in (big.score, big.score + 17):
                        start = GameState(tau, big, dice)
                        via = apply_move(start, move_between(big, mid))
                        composed = apply_move(via, move_between(mid, small))
                        direct = apply_move(start, move_between(big, small))
                        report.chains_checked += 1
                        if composed != direct:
                            report.counterexamples.append(
                                f"{start}: via [{mid}] gives {composed},"
                                f" direct gives {direct}"
                            )
    return report
