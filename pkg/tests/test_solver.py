"""Tests for the exact backward solver and the gathered-class variant."""

from fractions import Fraction

import pytest

from tenthousand import reference
from tenthousand.dice import Action, Configuration, GameState
from tenthousand.policy_io import format_decimal
from tenthousand.solver import (
    THRESHOLD,
    admissible_pairs,
    bellman_residuals,
    boundary_holds,
    class_label,
    critical_threshold,
    reconcile,
    roll_value,
    solve_backward,
    solve_efficient,
    threshold_inequality_holds,
)


def cfg(text):
    return Configuration.parse(text)


def dec(value, places):
    return format_decimal(value, places)


class TestCriticalThreshold:
    def test_five_dice(self):
        assert critical_threshold(5) == 56

    def test_one_die(self):
        # gain 1*1 + 1*2 = 3 chips vs 4 busting outcomes: already 1
        assert critical_threshold(1) == 1

    def test_never_larger_than_five_dice_case(self):
        for n in range(1, 5):
            assert critical_threshold(n) <= 56

    def test_inequality_at_boundary(self):
        for n in range(1, 5):
            assert threshold_inequality_holds(56, n)

    def test_boundary_reverified(self):
        assert boundary_holds()


class TestSolveBackward:
    def test_game_value_ten_decimals(self, table):
        assert dec(table.game_value, 10) == reference.GAME_VALUE_10

    def test_game_value_equals_first_roll(self, table):
        assert table.game_value == roll_value(0, 5, table.value)

    def test_roll_cell_n4(self, table):
        assert dec(table.value(1, cfg("1,0,0"), 4), 3) == "4.338"
        assert table.action(1, cfg("1,0,0"), 4) == Action.ROLL

    def test_stop_cell_n4(self, table):
        assert table.value(19, cfg("0,1,0"), 4) == 19
        assert table.action(19, cfg("0,1,0"), 4) == Action.STOP

    def test_move_cell_equals_destination(self, table):
        value = table.value(2, cfg("2,0,0"), 3)
        assert dec(value, 3) == "4.338"
        assert table.action(2, cfg("2,0,0"), 3) == Action.M5
        assert value == table.value(1, cfg("1,0,0"), 4)

    def test_last_row_below_threshold(self, table):
        assert dec(table.value(55, cfg("1,0,0"), 5), 3) == "55.066"
        assert table.value(55, cfg("1,0,0"), 5) == Fraction(428196, 7776)

    def test_boundary_lookup(self, table):
        assert table.value(56, cfg("1,0,0"), 3) == 56
        assert table.action(70, cfg("1,0,0"), 3) == Action.STOP

    def test_rolling_at_threshold_loses(self, table):
        assert roll_value(56, 5, table.value) < 56

    def test_rolling_below_threshold_wins_with_five_dice(self, table):
        for tau in range(THRESHOLD):
            assert table.value(tau, cfg("1,0,0"), 5) > tau

    def test_monotone_in_chips(self, table):
        for config, dice in admissible_pairs():
            for tau in range(THRESHOLD - 1):
                assert table.value(tau, config, dice) <= table.value(tau + 1, config, dice)

    def test_value_dominates_stopping(self, table):
        assert all(value >= tau for (tau, _, _), (value, _) in table.cells.items())

    def test_never_optimal_actions_absent(self, table):
        used = {action for _, action in table.cells.values()}
        forbidden = {
            Action.M11, Action.M551, Action.M511,
            Action.MT1, Action.MT2, Action.MT3, Action.MT4, Action.MT5, Action.MT6,
        }
        assert not used & forbidden

    def test_stop_exactly_when_value_is_tau(self, table):
        for (tau, _, _), (value, action) in table.cells.items():
            assert (action == Action.STOP) == (value == tau)

    def test_fixed_point_exact(self, table):
        assert bellman_residuals(table) == []

    def test_state_accessors(self, table):
        from tenthousand.dice import INITIAL

        assert table.state_value(INITIAL) == table.game_value
        assert table.state_action(GameState(60, cfg("1,0,0"), 4)) == Action.STOP


class TestGatheredClasses:
    def test_published_spot_values(self, gathered):
        assert dec(gathered.value("5", 5, 3), 3) == "6.476"
        assert dec(gathered.value("1", 4, 3), 3) == "5.021"
        assert dec(gathered.value("55", 4, 2), 3) == "5.021"

    def test_two_fives_move_lands_on_five_curve(self, gathered):
        assert gathered.value("55", 4, 2) == gathered.value("5", 3, 3)

    def test_curve_dominance(self, gathered):
        """More relevant actions never hurt."""
        for tau in range(THRESHOLD):
            for dice in (1, 2, 3):
                assert gathered.value("5", tau, dice) >= gathered.value("0", tau, dice)
                assert gathered.value("1", tau, dice) >= gathered.value("0", tau, dice)
            for dice in (1, 2):
                assert gathered.value("55", tau, dice) >= gathered.value("5", tau, dice)
                assert gathered.value("51", tau, dice) >= gathered.value("1", tau, dice)

    def test_class_labels(self):
        assert class_label(cfg("1,1,0"), 3) == "5"
        assert class_label(cfg("1,1,0"), 5) == "0"
        assert class_label(cfg("0,0,4"), 2) == "0"


class TestReconcile:
    def test_exact_agreement(self, table, gathered):
        report = reconcile(table, gathered)
        assert report.ok, report.mismatches[:5]
        assert report.cells_checked == 56 * (44 + 2 + 5 + 13 + 26)

    def test_specific_shared_cell(self, table, gathered):
        assert table.value(5, cfg("2,0,0"), 3) == gathered.value("5", 5, 3)

    def test_ungathered_config_has_plain_value(self, table, gathered):
        for tau in (4, 11, 23):
            assert table.value(tau, cfg("0,0,4"), 2) == gathered.value("0", tau, 2)
            assert table.value(tau, cfg("2,2,0"), 1) == gathered.value("0", tau, 1)


class TestRestrictedTables:
    def test_moves_never_stored_when_disallowed(self):
        from tenthousand.dice import ALL_ACTIONS

        table = solve_backward(
            allowed=frozenset({Action.STOP, Action.ROLL, Action.M5})
        )
        used = {action for _, action in table.cells.values()}
        assert used <= {Action.STOP, Action.ROLL, Action.M5}

    def test_fixed_point_of_restricted_table(self):
        table = solve_backward(
            allowed=frozenset({Action.STOP, Action.ROLL, Action.M5})
        )
        assert bellman_residuals(table) == []

    def test_stop_and_roll_required(self):
        with pytest.raises(ValueError):
            solve_backward(allowed=frozenset({Action.STOP}))
