"""Serialization of solved tables and the printable value/policy layout.

Exports carry exact numerator/denominator columns so a round trip loses
nothing; the decimal column is advisory.  ``render_paper_table`` lays the
solution out the way the published table does: merged configuration
columns, a blank cell where stopping is optimal, ``--`` below the first
chip count a column can be reached at, and a final row with each column's
action.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__
from .dice import (
    CONFIG_INDEX,
    CONFIGS,
    MAX_DICE,
    Action,
    Configuration,
    GameState,
    reachable_states,
)
from .solver import THRESHOLD, SolvedTable, admissible_pairs

ARITHMETIC_MODE = "exact-rational"


class TableIOError(ValueError):
    """Malformed or incompatible export file."""


def format_decimal(value: Fraction, places: int) -> str:
    """Fixed-point rendering, round half away from zero."""
    if value < 0:
        return "-" + format_decimal(-value, places)
    scaled = value.numerator * 10**places
    quotient, remainder = divmod(scaled, value.denominator)
    if 2 * remainder >= value.denominator:
        quotient += 1
    digits = str(quotient).rjust(places + 1, "0")
    if places == 0:
        return digits
    return f"{digits[:-places]}.{digits[-places:]}"


def _metadata(variant: str) -> dict:
    return {
        "solver_version": __version__,
        "arithmetic": ARITHMETIC_MODE,
        "variant": variant,
        "threshold": THRESHOLD,
    }


def _rows(table: SolvedTable, reachable: frozenset[GameState]) -> list[dict]:
    rows = []
    for config, dice in admissible_pairs():
        for tau in range(table.threshold):
            value, action = table.cells[(tau, config, dice)]
            rows.append(
                {
                    "tau": tau,
                    "f": config.f,
                    "o": config.o,
                    "t": config.t,
                    "n": dice,
                    "value_num": value.numerator,
                    "value_den": value.denominator,
                    "value_dec": format_decimal(value, 10),
                    "action": action.value,
                    "reachable": GameState(tau, config, dice) in reachable,
                }
            )
    return rows


CSV_FIELDS = (
    "tau", "f", "o", "t", "n",
    "value_num", "value_den", "value_dec", "action", "reachable",
)


def export_table(
    table: SolvedTable,
    fmt: str,
    path: str | Path,
    reachable: frozenset[GameState] | None = None,
    variant: str = "all",
) -> Path:
    """Write the table to ``path`` as csv or json; returns the path."""
    if fmt not in ("csv", "json"):
        raise TableIOError(f"format must be csv or json, not {fmt!r}")
    path = Path(path)
    if reachable is None:
        reachable = reachable_states()
    rows = _rows(table, reachable)
    game_value = table.game_value
    initial_row = {
        "tau": 0,
        "f": "",
        "o": "",
        "t": "",
        "n": MAX_DICE,
        "value_num": game_value.numerator,
        "value_den": game_value.denominator,
        "value_dec": format_decimal(game_value, 10),
        "action": Action.ROLL.value,
        "reachable": True,
    }
    if fmt == "csv":
        with path.open("w", newline="") as handle:
            writer = csv.DictWriter(handle, fieldnames=CSV_FIELDS)
            writer.writeheader()
            writer.writerow(initial_row)
            writer.writerows(rows)
    else:
        payload = {
            "metadata": _metadata(variant),
            "initial": initial_row,
            "rows": rows,
        }
        path.write_text(json.dumps(payload))
    return path


@dataclass(frozen=True)
class ImportedTable:
    table: SolvedTable
    metadata: dict
    reachable: frozenset[GameState]


def import_table(path: str | Path) -> ImportedTable:
    """Rebuild a table from an export; rational fields round-trip exactly."""
    path = Path(path)
    if path.suffix == ".json":
        try:
            payload = json.loads(path.read_text())
            metadata = payload["metadata"]
            rows = payload["rows"]
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise TableIOError(f"{path}: not a table export ({exc})") from exc
        if metadata.get("solver_version") != __version__:
            raise TableIOError(
                f"{path}: version {metadata.get('solver_version')} does not"
                f" match {__version__}"
            )
    else:
        metadata = _metadata("unknown")
        with path.open(newline="") as handle:
            reader = csv.DictReader(handle)
            if reader.fieldnames != list(CSV_FIELDS):
                raise TableIOError(f"{path}: unexpected columns {reader.fieldnames}")
            rows = [row for row in reader if row["f"] != ""]
    cells = {}
    reachable = set()
    try:
        for row in rows:
            config = Configuration(int(row["f"]), int(row["o"]), int(row["t"]))
            key = (int(row["tau"]), config, int(row["n"]))
            value = Fraction(int(row["value_num"]), int(row["value_den"]))
            cells[key] = (value, Action(row["action"]))
            if row["reachable"] in (True, "True"):
                reachable.add(GameState(*key))
    except (ValueError, KeyError) as exc:
        raise TableIOError(f"{path}: bad row ({exc})") from exc
    table = SolvedTable(cells=cells, actions_allowed=frozenset(Action))
    return ImportedTable(table=table, metadata=metadata, reachable=frozenset(reachable))


@dataclass(frozen=True)
class Column:
    """One printed column: a dice count and the configurations merged into it."""

    key: str
    dice: int
    configs: tuple[Configuration, ...]
    header: str


def _c(text: str) -> Configuration:
    return Configuration.parse(text)


LAYOUT: tuple[Column, ...] = (
    Column("n5", 5, CONFIGS, "all i"),
    Column("n4", 4, (_c("1,0,0"), _c("0,1,0")), "all i"),
    Column("n3_fives", 3, (_c("2,0,0"), _c("1,1,0")), "[2,0,0]/[1,1,0]"),
    Column("n3_ones", 3, (_c("0,2,0"),), "[0,2,0]"),
    Column("n3_other", 3, (_c("1,0,0"), _c("0,1,0")), "other i"),
    Column("n2_55", 2, (_c("2,1,0"),), "[2,1,0]"),
    Column("n2_51", 2, (_c("1,2,0"),), "[1,2,0]"),
    Column("n2_fives", 2, (_c("2,0,0"), _c("1,1,0")), "[2,0,0]/[1,1,0]"),
)

#: Row index where the layout switches to the n=5-only block.
SPLIT_TAU = 28


@dataclass
class RenderedTable:
    """Cell grid of the printed layout plus the per-column action row.

    ``cells[(tau, key)]`` is a decimal string, "" where stopping is optimal
    (value equals tau) or "--" below the column's first reachable tau.
    """

    cells: dict[tuple[int, str], str]
    actions: dict[str, str]
    text: str


def _column_first_reachable(
    column: Column, reachable: frozenset[GameState]
) -> int | None:
    taus = [
        state.tau
        for state in reachable
        if state.n == column.dice and state.config in column.configs
    ]
    if column.dice == MAX_DICE:
        taus.append(0)  # the start of the game sits in the n=5 column
    return min(taus) if taus else None


def render_cells(
    table: SolvedTable, reachable: frozenset[GameState] | None = None
) -> RenderedTable:
    """Lay the table out in printed form (see module docstring)."""
    if reachable is None:
        reachable = reachable_states()
    cells: dict[tuple[int, str], str] = {}
    actions: dict[str, str] = {}
    for column in LAYOUT:
        first = _column_first_reachable(column, reachable)
        moving_actions = set()
        for tau in range(table.threshold):
            merged = {table.cells[(tau, config, column.dice)] for config in column.configs}
            if len(merged) != 1:
                raise AssertionError(
                    f"column {column.key} not mergeable at tau={tau}: {merged}"
                )
            (value, action) = merged.pop()
            if first is None or tau < first:
                cells[(tau, column.key)] = "--"
            elif action == Action.STOP:
                cells[(tau, column.key)] = ""
            else:
                places = 4 if (tau, column.key) == (0, "n5") else 3
                cells[(tau, column.key)] = format_decimal(value, places)
                moving_actions.add(action)
        if len(moving_actions) != 1:
            raise AssertionError(
                f"column {column.key} mixes actions {moving_actions}"
            )
        actions[column.key] = moving_actions.pop().value
    for column in LAYOUT[1:]:
        stray = [
            tau
            for tau in range(SPLIT_TAU, table.threshold)
            if cells[(tau, column.key)] not in ("", "--")
        ]
        if stray:
            raise AssertionError(
                f"column {column.key} still has values past tau={SPLIT_TAU}: {stray}"
            )
    return RenderedTable(cells=cells, actions=actions, text=_layout_text(cells, actions))


def _layout_text(cells: dict[tuple[int, str], str], actions: dict[str, str]) -> str:
    keys = [col.key for col in LAYOUT]
    headers = ["tau"] + [f"n={col.dice} {col.header}" for col in LAYOUT]
    left_rows = [headers]
    for tau in range(SPLIT_TAU):
        left_rows.append([str(tau)] + [cells[(tau, key)] for key in keys])
    left_rows.append(["a"] + [actions[key] for key in keys])
    right_rows = [["tau", "n=5 all i"]]
    for tau in range(SPLIT_TAU, THRESHOLD):
        right_rows.append([str(tau), cells[(tau, "n5")]])
    right_rows.append(["a", actions["n5"]])

    def block(rows: list[list[str]]) -> list[str]:
        widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
        return [
            "  ".join(cell.rjust(width) for cell, width in zip(row, widths))
            for row in rows
        ]

    left = block(left_rows)
    right = block(right_rows)
    pad = " " * len(left[0])
    lines = []
    for i in range(max(len(left), len(right))):
        lhs = left[i] if i < len(left) else pad
        rhs = right[i] if i < len(right) else ""
        lines.append((lhs + "   " + rhs).rstrip())
    return "\n".join(lines) + "\n"


def render_paper_table(
    table: SolvedTable, reachable: frozenset[GameState] | None = None
) -> str:
    """Printable text of the value/policy table in the published layout."""
    return render_cells(table, reachable).text


@dataclass
class TableComparison:
    """Cell-level diff of a rendered table against reference cells."""

    tolerance: float
    mismatches: list[str] = field(default_factory=list)
    rounding_notes: list[str] = field(default_factory=list)
    cells_compared: int = 0

    @property
    def ok(self) -> bool:
        return not self.mismatches


def compare_rendered(
    rendered: RenderedTable,
    reference_cells: dict[int, dict[str, str]],
    reference_actions: dict[str, str],
    tolerance: float = 0.0005,
) -> TableComparison:
    """Compare cell-for-cell at printed precision.

    Value cells must agree within ``tolerance``; blank and ``--`` cells
    must agree in kind; value cells whose strings differ while the numbers
    agree are collected in ``rounding_notes`` instead of failing.
    """
    comparison = TableComparison(tolerance=tolerance)
    for tau, row in reference_cells.items():
        for key, expected in row.items():
            got = rendered.cells[(tau, key)]
            comparison.cells_compared += 1
            where = f"tau={tau} {key}"
            if expected in ("", "--"):
                if got != expected:
                    comparison.mismatches.append(
                        f"{where}: expected {expected or 'blank'!r}, got {got!r}"
                    )
                continue
            if got in ("", "--"):
                comparison.mismatches.append(
                    f"{where}: expected {expected}, got {got or 'blank'!r}"
                )
                continue
            if abs(float(got) - float(expected)) > tolerance:
                comparison.mismatches.append(
                    f"{where}: expected {expected}, got {got}"
                )
            elif got != expected:
                comparison.rounding_notes.append(
                    f"{where}: printed {expected}, computed {got} (within tolerance)"
                )
    for key, expected in reference_actions.items():
        comparison.cells_compared += 1
        if rendered.actions[key] != expected:
            comparison.mismatches.append(
                f"action row {key}: expected {expected}, got {rendered.actions[key]}"
            )
    return comparison
