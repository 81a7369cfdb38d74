"""Tests for dice.py: configurations, scoring, actions, transitions."""

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tenthousand.dice import (
    CONFIGS,
    INITIAL,
    TERMINAL,
    ZERO,
    Action,
    Configuration,
    GameState,
    IllegalActionError,
    RollError,
    apply_move,
    available_actions,
    classify_roll,
    configs_up_to,
    enumerate_configs,
    frequencies,
    move_between,
    movers_into,
    resign,
    single_combo,
    smaller_than,
    sub_configurations,
    transitions,
)
from tenthousand import reference


def cfg(text):
    return Configuration.parse(text)


class TestClassifyRoll:
    def test_mixed_roll(self):
        assert classify_roll([5, 1, 2, 2, 2]) == cfg("1,1,2")

    def test_single_nonscoring_die(self):
        assert classify_roll([3]) == ZERO

    def test_fourth_two_is_nonscoring(self):
        """Four 2s still count as one triple: d = 3, score 4."""
        result = classify_roll([2, 2, 2, 2])
        assert result == cfg("0,0,2")
        assert result.scoring_dice == 3
        assert result.score == 4

    def test_triple_of_fives_counts_in_f(self):
        assert classify_roll([5, 5, 5]) == cfg("3,0,0")

    @pytest.mark.parametrize("bad", [[], [1] * 6, [0], [7], [1.5]])
    def test_rejects_bad_input(self, bad):
        with pytest.raises(RollError):
            classify_roll(bad)

    @given(st.lists(st.integers(1, 6), min_size=1, max_size=5), st.randoms())
    def test_permutation_invariant(self, faces, rnd):
        shuffled = list(faces)
        rnd.shuffle(shuffled)
        assert classify_roll(shuffled) == classify_roll(faces)


class TestScoring:
    def test_triple_of_fives(self):
        c = cfg("3,0,0")
        assert (c.score, c.scoring_dice, c.scoring_combinations) == (10, 3, 3)

    def test_zero(self):
        assert (ZERO.score, ZERO.scoring_dice, ZERO.scoring_combinations) == (0, 0, 0)

    def test_four_ones(self):
        c = cfg("0,4,0")
        assert c.score == 22
        assert c.scoring_dice == 4

    def test_all_scores_match_published(self):
        for text, score in reference.SCORES.items():
            assert cfg(text).score == score

    def test_triple_flag_is_single_combination(self):
        c = cfg("1,0,6")
        assert c.scoring_combinations == 2  # one 5 + the whole triple


class TestEnumeration:
    def test_all_scoring_configurations(self):
        configs = enumerate_configs()
        assert len(configs) == 44
        assert len(set(configs)) == 44
        assert ZERO not in configs

    def test_matches_published_rows(self):
        expected = {text for text in reference.FREQUENCIES if text != "0,0,0"}
        assert {str(c) for c in enumerate_configs()} == expected

    def test_one_die(self):
        assert set(configs_up_to(1)) == {cfg("1,0,0"), cfg("0,1,0")}

    def test_single_combo(self):
        assert set(single_combo(3)) == {
            cfg("1,0,0"), cfg("0,1,0"),
            cfg("0,0,2"), cfg("0,0,3"), cfg("0,0,4"), cfg("0,0,6"),
        }

    def test_movers_into_one_five_one_die(self):
        """d(j) < d([1,0,0]) + 1 = 2 forces d(j) = 1, but j must be bigger."""
        assert movers_into(cfg("1,0,0"), 1) == ()


class TestSubsetOrder:
    def test_sub_configurations_example(self):
        assert set(sub_configurations(cfg("2,1,0"))) == {
            cfg("1,1,0"), cfg("0,1,0"), cfg("2,0,0"), cfg("1,0,0")
        }

    def test_not_smaller_than_itself(self):
        assert not smaller_than(cfg("1,0,0"), cfg("1,0,0"))

    def test_breaking_a_triple_of_fives(self):
        assert smaller_than(cfg("2,0,0"), cfg("3,0,0"))
        assert cfg("3,0,0").score - cfg("2,0,0").score == 8

    def test_triple_flag_not_splittable(self):
        """The triple is one combination: no sub keeps part of it."""
        subs = sub_configurations(cfg("1,0,4"))
        assert set(subs) == {cfg("1,0,0"), cfg("0,0,4")}

    def test_matches_filter_over_all_configs(self):
        for big in CONFIGS:
            filtered = {c for c in CONFIGS if smaller_than(c, big)}
            assert set(sub_configurations(big)) == filtered

    def test_definition_consequences(self):
        for big in CONFIGS:
            for small in sub_configurations(big):
                assert small.score < big.score
                assert small.scoring_dice < big.scoring_dice
                assert 0 < small.scoring_combinations < big.scoring_combinations


class TestMoves:
    def test_named_resignations(self):
        assert move_between(cfg("2,1,0"), cfg("0,1,0")) == Action.M55
        assert move_between(cfg("2,1,0"), cfg("1,0,0")) == Action.M51
        assert move_between(cfg("4,0,0"), cfg("1,0,0")) == Action.MT5
        assert move_between(cfg("1,0,3"), cfg("1,0,0")) == Action.MT3

    def test_resign_round_trip(self):
        for big in CONFIGS:
            if big.scoring_dice > 4:
                continue  # never a move source in play
            for small in sub_configurations(big):
                assert resign(big, move_between(big, small)) == small

    def test_resign_rejects_wrong_triple(self):
        with pytest.raises(IllegalActionError):
            resign(cfg("1,0,3"), Action.MT2)

    def test_resign_rejects_voiding(self):
        with pytest.raises(IllegalActionError):
            resign(cfg("1,0,0"), Action.M5)


class TestGameState:
    def test_initial_and_terminal(self):
        assert INITIAL.is_initial and not INITIAL.is_active
        assert TERMINAL.is_terminal

    def test_reachability_invariant(self):
        with pytest.raises(ValueError):
            GameState(3, cfg("2,1,0"), 4)  # 3 scoring dice cannot leave 4

    def test_hot_dice_state_allows_any_configuration(self):
        GameState(12, cfg("5,0,0"), 5)

    def test_nonscoring_configuration_rejected(self):
        with pytest.raises(ValueError):
            GameState(3, ZERO, 2)


class TestAvailableActions:
    def test_initial_only_rolls(self):
        assert available_actions(INITIAL) == (Action.ROLL,)

    def test_single_combination_stop_or_roll(self):
        assert available_actions(GameState(5, cfg("1,0,0"), 4)) == (
            Action.STOP, Action.ROLL,
        )

    def test_five_dice_stop_or_roll(self):
        assert available_actions(GameState(9, cfg("2,1,0"), 5)) == (
            Action.STOP, Action.ROLL,
        )

    def test_moves_offered(self):
        actions = available_actions(GameState(4, cfg("2,1,0"), 2))
        assert actions == (
            Action.STOP, Action.ROLL, Action.M5, Action.M1, Action.M55, Action.M51,
        )

    def test_terminal_has_none(self):
        with pytest.raises(IllegalActionError):
            available_actions(TERMINAL)


class TestTransitions:
    def test_initial_bust_probability(self):
        entries = transitions(INITIAL, Action.ROLL)
        bust = [e for e in entries if e.next.is_terminal]
        assert len(bust) == 1
        assert bust[0].probability == Fraction(600, 7776)

    def test_one_die_hot_dice(self):
        entries = transitions(GameState(7, cfg("1,0,0"), 1), Action.ROLL)
        by_next = {e.next: e.probability for e in entries}
        assert by_next[TERMINAL] == Fraction(4, 6)
        assert by_next[GameState(8, cfg("1,0,0"), 5)] == Fraction(1, 6)
        assert by_next[GameState(9, cfg("0,1,0"), 5)] == Fraction(1, 6)

    def test_move_is_deterministic(self):
        entries = transitions(GameState(2, cfg("2,0,0"), 3), Action.M5)
        assert entries == (
            (GameState(1, cfg("1,0,0"), 4), Fraction(1), 0),
        )

    def test_stop_reward(self):
        entries = transitions(GameState(9, cfg("1,0,0"), 2), Action.STOP)
        assert entries[0].reward == 9
        assert entries[0].next.is_terminal

    def test_probabilities_sum_to_one(self):
        states = [
            INITIAL,
            GameState(4, cfg("2,1,0"), 2),
            GameState(1, cfg("1,0,0"), 4),
            GameState(21, cfg("1,3,0"), 1),
            GameState(6, cfg("2,0,2"), 5),
        ]
        for state in states:
            for action in available_actions(state):
                total = sum(e.probability for e in transitions(state, action))
                assert total == 1

    def test_illegal_action_rejected(self):
        with pytest.raises(IllegalActionError):
            transitions(GameState(5, cfg("1,0,0"), 4), Action.M5)

    def test_hot_dice_invariant(self):
        """Whenever all rolled dice score, the successor rolls five."""
        for n in range(1, 6):
            state = INITIAL if n == 5 else GameState(8, cfg("0,1,0"), n)
            for entry in transitions(state, Action.ROLL):
                if entry.next.is_terminal:
                    continue
                scored = entry.next.config.scoring_dice
                assert entry.next.n == (5 if scored == n else n - scored)


class TestFrequencyTable:
    def test_totals(self, freq):
        for n in range(1, 6):
            total = sum(count for (dice, _), count in freq.items() if dice == n)
            assert total == 6**n

    def test_spot_entries(self, freq):
        assert freq.count(2, cfg("1,1,0")) == 2
        assert freq.count(4, cfg("0,0,2")) == 13
        assert freq.count(5, ZERO) == 600

    def test_every_published_entry(self, freq):
        for text, counts in reference.FREQUENCIES.items():
            config = cfg(text)
            for n in range(1, 6):
                assert freq.count(n, config) == counts[n - 1], f"f({n},[{text}])"

    def test_zero_outside_support(self, freq):
        assert freq.count(2, cfg("3,0,0")) == 0


class TestMoveChaining:
    def test_compose_equals_direct(self):
        state = GameState(6, cfg("2,1,0"), 2)
        via = apply_move(state, Action.M5)
        composed = apply_move(via, Action.M1)
        direct = apply_move(state, Action.M51)
        assert composed == direct

    def test_breaking_triple_twice(self):
        state = GameState(10, cfg("3,0,0"), 2)
        via = apply_move(state, Action.M5)          # chips 10 -> 2
        composed = apply_move(via, Action.M5)       # chips 2 -> 1
        direct = apply_move(state, Action.M55)
        assert via.tau == 2
        assert composed == direct == GameState(1, cfg("1,0,0"), 4)
