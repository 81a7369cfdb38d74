"""Exact solver and interactive advisor for solitaire Ten Thousand."""

__version__ = "1.0.0"

from .dice import (  # noqa: F401
    Action,
    Configuration,
    GameState,
    INITIAL,
    TERMINAL,
    available_actions,
    build_frequency_table,
    classify_roll,
    enumerate_configs,
    frequencies,
    transitions,
)
from .solver import (  # noqa: F401
    THRESHOLD,
    SolvedTable,
    critical_threshold,
    reconcile,
    roll_value,
    solve_backward,
    solve_efficient,
)
from .variants import solve_pig, solve_restricted  # noqa: F401
