"""
Unit tests for the leveling service.
"""

import pytest

from makerboard.models.exceptions import LevelingError, ResampleBudgetExceeded
from makerboard.models.graph import Leveling
from makerboard.services.graph_service import gen_cycle, named_graph
from makerboard.services.leveling_service import (
    check_leveling,
    level_greedy,
    level_lll,
    level_range,
    lll_condition,
    lower_neighbors,
    parse_leveling,
    upper_neighbors,
    validate_leveling,
)


class TestLevelRange:
    """
    Unit tests for the level range and the Local Lemma condition.
    """

    def test_level_range_values(self):
        """
        Test ceil(e * d^8) for small degrees.
        """
        assert level_range(1) == 3
        assert level_range(2) == 696
        assert level_range(3) == 17835

        with pytest.raises(LevelingError):
            level_range(0)

    def test_lll_condition(self):
        """
        Test the condition at the default range and at a tiny range.
        """
        condition = lll_condition(2, 696)

        assert condition.k == 30
        assert condition.p == pytest.approx(6 / 696)
        assert condition.satisfied is True
        assert lll_condition(2, 10).satisfied is False


class TestLevelings:
    """
    Unit tests for the two leveling algorithms and validation.
    """

    def setup_method(self):
        """
        Set up the six-cycle.
        """
        self.g = gen_cycle(6)

    def test_greedy_cycle(self):
        """
        Test the greedy leveling of the six-cycle.
        """
        l = level_greedy(self.g)

        assert l.levels == (1, 2, 3, 1, 2, 3)
        assert l.r == 3
        assert l.order() == [0, 3, 1, 4, 2, 5]
        assert validate_leveling(self.g, l) == []

    def test_greedy_petersen(self):
        """
        Test that the Petersen graph needs one level per vertex.
        """
        g = named_graph("petersen")
        l = level_greedy(g)

        assert sorted(l.levels) == list(range(1, 11))
        assert validate_leveling(g, l) == []

    def test_lll_is_valid_and_deterministic(self):
        """
        Test the resampling leveling.
        """
        l = level_lll(self.g, seed=3)

        assert l.r == 696
        assert validate_leveling(self.g, l) == []
        assert level_lll(self.g, seed=3) == l

    def test_lll_budget(self):
        """
        Test that an impossible range exhausts the resample budget.
        """
        with pytest.raises(ResampleBudgetExceeded):
            level_lll(named_graph("petersen"), seed=0, r=3, resample_cap=5)

    def test_validate_reports_close_pairs(self):
        """
        Test that same-level pairs within distance 2 are reported.
        """
        l = Leveling(levels=(1, 1, 2, 3, 2, 3), r=3)

        violations = validate_leveling(self.g, l)

        assert (0, 1) in violations
        assert (3, 5) in violations

    def test_check_leveling_errors(self):
        """
        Test size, range and distance errors.
        """
        with pytest.raises(LevelingError):
            check_leveling(self.g, Leveling(levels=(1, 2, 3), r=3))
        with pytest.raises(LevelingError):
            check_leveling(self.g, Leveling(levels=(1, 2, 3, 1, 2, 4), r=3))
        with pytest.raises(LevelingError):
            check_leveling(self.g, Leveling(levels=(1, 1, 2, 3, 2, 3), r=3))

    def test_neighbors_by_level(self):
        """
        Test the lower and upper neighbor lists sorted by (level, id).
        """
        l = level_greedy(self.g)

        assert lower_neighbors(self.g, l, 2) == [3, 1]
        assert upper_neighbors(self.g, l, 0) == [1, 5]
        assert upper_neighbors(self.g, l, 2) == []

    def test_parse_leveling(self):
        """
        Test reading the "vertex level" format back.
        """
        l = level_greedy(self.g)

        assert parse_leveling(l.to_text(), 6) == l
        assert parse_leveling("# levels\n" + l.to_text() + "# r=3 valid=True\n", 6) == l

        with pytest.raises(LevelingError):
            parse_leveling("0 1\n1 2\n", 6)
        with pytest.raises(LevelingError):
            parse_leveling("0 one\n", 1)
