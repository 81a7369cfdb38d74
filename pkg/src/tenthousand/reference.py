"""Published reference values the solver is checked against.

These tables transcribe the published solution of the solitaire Ten
Thousand game: the roll-frequency table, the value/policy table, the
restricted-game values and the Pig game figures.  They are *comparison
data* for the verification suite, never an input to any computation.

Known quirks of the published tables, reproduced faithfully here and
handled by the comparison code:

* The tau=0, n=5 cell is printed as 5.8721 although the 10-digit value
  5.8720189185 rounds to 5.8720; comparisons use a +-0.0005 band and
  report pure last-digit differences separately.
* The printed action row shows "r" for the n=2 [2,0,0]/[1,1,0] column,
  which contradicts the printed values in that column (3.447 and 4.123
  equal the one-five-resigned destination values, not the roll values)
  as well as the published note that move-column values reappear in
  their destination columns.  ``VALUE_TABLE_ACTION_ROW`` carries the
  self-consistent action ("m5"); ``PUBLISHED_ACTION_ROW`` the literal
  print.
"""
from __future__ import annotations

#: 10-digit decimal rendering of the game value (15-action game).
GAME_VALUE_10 = "5.8720189185"

#: Critical threshold: smallest chip count at which stopping is optimal
#: in every state.
THRESHOLD = 56

#: Rows of the published frequency table: "f,o,t" -> counts for n=1..5.
FREQUENCIES: dict[str, tuple[int, int, int, int, int]] = {
    "0,0,0": (4, 16, 60, 204, 600),
    "1,0,0": (1, 8, 48, 240, 1020),
    "0,1,0": (1, 8, 48, 240, 1020),
    "2,0,0": (0, 1, 12, 96, 600),
    "1,1,0": (0, 2, 24, 192, 1200),
    "0,2,0": (0, 1, 12, 96, 600),
    "3,0,0": (0, 0, 1, 16, 160),
    "2,1,0": (0, 0, 3, 48, 480),
    "1,2,0": (0, 0, 3, 48, 480),
    "0,3,0": (0, 0, 1, 16, 160),
    "0,0,2": (0, 0, 1, 13, 106),
    "0,0,3": (0, 0, 1, 13, 106),
    "0,0,4": (0, 0, 1, 13, 106),
    "0,0,6": (0, 0, 1, 13, 106),
    "4,0,0": (0, 0, 0, 1, 20),
    "3,1,0": (0, 0, 0, 4, 80),
    "2,2,0": (0, 0, 0, 6, 120),
    "1,3,0": (0, 0, 0, 4, 80),
    "0,4,0": (0, 0, 0, 1, 20),
    "1,0,2": (0, 0, 0, 4, 65),
    "1,0,3": (0, 0, 0, 4, 65),
    "1,0,4": (0, 0, 0, 4, 65),
    "1,0,6": (0, 0, 0, 4, 65),
    "0,1,2": (0, 0, 0, 4, 65),
    "0,1,3": (0, 0, 0, 4, 65),
    "0,1,4": (0, 0, 0, 4, 65),
    "0,1,6": (0, 0, 0, 4, 65),
    "5,0,0": (0, 0, 0, 0, 1),
    "4,1,0": (0, 0, 0, 0, 5),
    "3,2,0": (0, 0, 0, 0, 10),
    "2,3,0": (0, 0, 0, 0, 10),
    "1,4,0": (0, 0, 0, 0, 5),
    "0,5,0": (0, 0, 0, 0, 1),
    "2,0,2": (0, 0, 0, 0, 10),
    "2,0,3": (0, 0, 0, 0, 10),
    "2,0,4": (0, 0, 0, 0, 10),
    "2,0,6": (0, 0, 0, 0, 10),
    "1,1,2": (0, 0, 0, 0, 20),
    "1,1,3": (0, 0, 0, 0, 20),
    "1,1,4": (0, 0, 0, 0, 20),
    "1,1,6": (0, 0, 0, 0, 20),
    "0,2,2": (0, 0, 0, 0, 10),
    "0,2,3": (0, 0, 0, 0, 10),
    "0,2,4": (0, 0, 0, 0, 10),
    "0,2,6": (0, 0, 0, 0, 10),
}

#: Published scores per configuration (chips).
SCORES: dict[str, int] = {
    "0,0,0": 0, "1,0,0": 1, "0,1,0": 2, "2,0,0": 2, "1,1,0": 3, "0,2,0": 4,
    "3,0,0": 10, "2,1,0": 4, "1,2,0": 5, "0,3,0": 20, "0,0,2": 4, "0,0,3": 6,
    "0,0,4": 8, "0,0,6": 12, "4,0,0": 11, "3,1,0": 12, "2,2,0": 6, "1,3,0": 21,
    "0,4,0": 22, "1,0,2": 5, "1,0,3": 7, "1,0,4": 9, "1,0,6": 13, "0,1,2": 6,
    "0,1,3": 8, "0,1,4": 10, "0,1,6": 14, "5,0,0": 12, "4,1,0": 13,
    "3,2,0": 14, "2,3,0": 22, "1,4,0": 23, "0,5,0": 24, "2,0,2": 6,
    "2,0,3": 8, "2,0,4": 10, "2,0,6": 14, "1,1,2": 7, "1,1,3": 9, "1,1,4": 11,
    "1,1,6": 15, "0,2,2": 8, "0,2,3": 10, "0,2,4": 12, "0,2,6": 16,
}

#: Column keys of the value/policy table, in print order.
VALUE_TABLE_COLUMNS = (
    "n5",        # n=5, all configurations
    "n4",        # n=4, all configurations ([1,0,0] and [0,1,0])
    "n3_fives",  # n=3, [2,0,0] and [1,1,0]
    "n3_ones",   # n=3, [0,2,0]
    "n3_other",  # n=3, [1,0,0] and [0,1,0]
    "n2_55",     # n=2, [2,1,0]
    "n2_51",     # n=2, [1,2,0]
    "n2_fives",  # n=2, [2,0,0] and [1,1,0]
)

#: Published value/policy table.  Cell values: a decimal string (roll or
#: move is optimal, value > tau), "" (stop is optimal, value = tau) or
#: "--" (unreachable).  Rows tau=28..55 print the n=5 column only.
VALUE_TABLE: dict[int, dict[str, str]] = {}

_LEFT_ROWS = """\
0  | 5.8721 | --     | --     | --    | --    | --    | --    | --
1  | 6.607  | 4.338  | --     | --    | --    | --    | --    | --
2  | 7.355  | 5.021  | 4.338  | --    | 3.447 | --    | --    | --
3  | 8.107  | 5.743  | 5.021  | --    | 4.123 | --    | --    | 3.447
4  | 8.883  | 6.476  | 5.743  | 5.021 | 4.837 | 5.021 | --    | 4.123
5  | 9.713  | 7.212  | 6.476  | 5.743 | 5.552 | 5.743 | 5.021 |
6  | 10.553 | 8.001  | 7.212  | 6.476 | 6.266 | 6.476 |       |
7  | 11.394 | 8.840  | 8.001  | 7.212 |       | 7.212 |       |
8  | 12.235 | 9.679  | 8.840  | 8.001 |       | 8.001 |       |
9  | 13.077 | 10.517 | 9.679  |       |       |       |       |
10 | 13.918 | 11.357 | 10.517 |       |       |       |       |
11 | 14.779 | 12.196 | 11.357 |       |       |       |       |
12 | 15.655 | 13.035 | 12.196 |       |       |       |       |
13 | 16.534 | 13.875 | 13.035 |       |       |       |       |
14 | 17.413 | 14.715 |        |       |       |       |       |
15 | 18.291 | 15.554 |        |       |       |       |       |
16 | 19.170 | 16.394 |        |       |       |       |       |
17 | 20.060 | 17.234 |        |       |       |       |       |
18 | 20.972 | 18.073 |        |       |       |       |       |
19 | 21.893 |        |        |       |       |       |       |
20 | 22.814 |        |        |       |       |       |       |
21 | 23.734 |        |        |       |       |       |       |
22 | 24.655 |        |        |       |       |       |       |
23 | 25.576 |        |        |       |       |       |       |
24 | 26.497 |        |        |       |       |       |       |
25 | 27.418 |        |        |       |       |       |       |
26 | 28.339 |        |        |       |       |       |       |
27 | 29.260 |        |        |       |       |       |       |
"""

_RIGHT_N5 = (
    "30.181 31.102 32.022 32.943 33.864 34.785 35.706 36.627 37.548 38.469 "
    "39.390 40.312 41.233 42.154 43.075 43.997 44.919 45.840 46.762 47.684 "
    "48.607 49.529 50.452 51.375 52.298 53.221 54.144 55.066"
)

for _line in _LEFT_ROWS.splitlines():
    _parts = [p.strip() for p in _line.split("|")]
    _tau = int(_parts[0])
    _cells = _parts[1:] + [""] * (len(VALUE_TABLE_COLUMNS) - len(_parts[1:]))
    VALUE_TABLE[_tau] = dict(zip(VALUE_TABLE_COLUMNS, _cells))
for _tau, _val in enumerate(_RIGHT_N5.split(), start=28):
    VALUE_TABLE[_tau] = {"n5": _val}

#: Self-consistent action row (see module docstring for the n2_fives fix).
VALUE_TABLE_ACTION_ROW: dict[str, str] = {
    "n5": "r",
    "n4": "r",
    "n3_fives": "m5",
    "n3_ones": "m1",
    "n3_other": "r",
    "n2_55": "m55",
    "n2_51": "m51",
    "n2_fives": "m5",
}

#: The action row exactly as printed (n2_fives shows "r").
PUBLISHED_ACTION_ROW: dict[str, str] = dict(VALUE_TABLE_ACTION_ROW, n2_fives="r")

#: Published values of the restricted-action games, 10 decimals, keyed by
#: the action subset (comma-joined action ids).
RESTRICTED_VALUES: tuple[tuple[str, str], ...] = (
    ("s,r", "5.5763262782"),
    ("s,r,m5", "5.8012180037"),
    ("s,r,m5,m1", "5.8153340639"),
    ("s,r,m5,m1,m55", "5.8707484326"),
    ("s,r,m5,m1,m55,m51", "5.8720189185"),
    ("all", "5.8720189185"),
)

#: Pig game: threshold and the 2-decimal rendering of the game value.
PIG_THRESHOLD = 20
PIG_VALUE_2 = "8.14"
