# =============================================================================
# File: tests/test_intervals.py (PyTest Version)
# =============================================================================
import pytest

from src.errors import ContractError
from src.intervals import IntervalAnalyzer, compute_cuts, maximal_free_factorization
from src.moves import check_solution, pull_back, verify_arc
from src.words import Interval


@pytest.fixture
def cut_data(running_equation, running_solution):
    """Cuts of the worked example"""
    return compute_cuts(running_equation, running_solution)


@pytest.fixture
def analyzer(cut_data, running_alphabet):
    return IntervalAnalyzer(cut_data, running_alphabet)


class TestCuts:
    """Test cut positions of w0 = sigma(L) = sigma(R)"""

    def test_cut_positions(self, cut_data):
        """Test the cuts of a X X' a' = Y b' Y a' b Y'"""
        assert cut_data.cuts == frozenset({0, 1, 5, 6, 9, 11, 12, 13, 17, 18})

    def test_sizes(self, cut_data):
        """Test m0 = 18, d = 10 and g = 4"""
        assert cut_data.m0 == 18
        assert cut_data.d == 10
        assert cut_data.g == 4

    def test_occurrence_intervals(self, cut_data, running_alphabet):
        """Test X occupies [1, 9] and X' occupies [9, 17]"""
        x, xbar = running_alphabet.letter('X'), running_alphabet.letter("X'")
        spans = {(occ.symbol, occ.left, occ.right) for occ in cut_data.occurrences}
        assert (x, 1, 9) in spans and (xbar, 9, 17) in spans

    def test_needs_solution(self, running_equation, running_alphabet):
        """Test cuts are only defined for solutions"""
        wrong = {running_alphabet.letter('X'): (), running_alphabet.letter('Y'): ()}
        with pytest.raises(ContractError):
            compute_cuts(running_equation, wrong)


class TestIntervalAnalyzer:
    """Test the interval equivalence and freeness"""

    def test_closure_follows_occurrences(self, analyzer):
        """Test [1,3] is equivalent to its copies in Y and in Y'"""
        members = analyzer.interval_equiv_closure(Interval(1, 3))
        assert Interval(7, 9) in members
        assert Interval(17, 15) in members

    def test_closure_is_cached(self, analyzer):
        """Test members of a class share one frozen set"""
        members = analyzer.interval_equiv_closure(Interval(1, 3))
        assert analyzer.interval_equiv_closure(Interval(7, 9)) is members

    def test_free_interval(self, analyzer):
        """Test bc at [1,3] is free"""
        assert analyzer.is_free(Interval(1, 3))

    @pytest.mark.parametrize("lo,hi", [(0, 2), (1, 4)])
    def test_non_free_intervals(self, analyzer, lo, hi):
        """Test intervals with a cut inside an equivalent interval are not free"""
        assert not analyzer.is_free(Interval(lo, hi))

    def test_single_letters_are_free(self, analyzer, cut_data):
        """Test every interval of length one is free"""
        assert all(analyzer.is_free(Interval(i, i + 1)) for i in range(cut_data.m0))

    def test_implicit_cuts(self, analyzer):
        """Test the cut at 9 inside [7,10] shows up at 3 inside [1,4]"""
        assert 3 in analyzer.implicit_cuts(Interval(1, 4))

    def test_implicit_cuts_positive_only(self, analyzer):
        """Test implicit cuts take positive intervals"""
        with pytest.raises(ContractError):
            analyzer.implicit_cuts(Interval(4, 1))

    def test_maximal_free_intervals(self, analyzer, cut_data, running_alphabet):
        """Test the maximal free intervals spell a|bc|c'b'|b'|a|bc|c'b'|a'|b|bc|c'b'|a'"""
        intervals = analyzer.maximal_free_intervals()
        pieces = [running_alphabet.render_word(running_alphabet.factor(cut_data.w0, iv)) for iv in intervals]
        assert pieces == ['a', 'b c', "c' b'", "b'", 'a', 'b c', "c' b'", "a'", 'b', 'b c', "c' b'", "a'"]
        assert intervals[0].lo == 0 and intervals[-1].hi == cut_data.m0


class TestMaximalFreeFactorization:
    """Test the rebasing of E0 onto the free intervals"""

    @pytest.fixture
    def free(self, running_equation, running_solution, cut_data):
        return maximal_free_factorization(running_equation, running_solution, cut_data)

    def test_new_letters(self, free, running_alphabet):
        """Test one pair d, d' is introduced for bc and c'b'"""
        words = set(free.new_letters.values())
        assert words == {running_alphabet.parse_word('b c'), running_alphabet.parse_word("c' b'")}
        assert len(free.w0_prime) == 12

    def test_factorized_word(self, free, running_alphabet):
        """Test w0' = a d d' b' a d d' a' b d d' a'"""
        d = next(a for a, w in free.new_letters.items() if w == running_alphabet.parse_word('b c'))
        dbar = running_alphabet.bar[d]
        a, abar = running_alphabet.letter('a'), running_alphabet.letter("a'")
        b, bbar = running_alphabet.letter('b'), running_alphabet.letter("b'")
        assert free.w0_prime == (a, d, dbar, bbar, a, d, dbar, abar, b, d, dbar, abar)

    def test_new_solution(self, free):
        """Test sigma' solves the rebased equation with |sigma'(X)| = 5 and |sigma'(Y)| = 3"""
        assert check_solution(free.equation, free.solution)
        lengths = sorted(len(free.solution[x]) for x in free.equation.alphabet.representatives(
            free.equation.variables))
        assert lengths == [3, 5]

    def test_arc(self, free, running_equation, running_solution):
        """Test the arc verifies and pulls sigma' back to sigma"""
        assert verify_arc(free.arc)
        sigma = pull_back(free.arc, free.solution)
        assert check_solution(running_equation, sigma)
        assert all(sigma[x] == running_solution[x] for x in running_solution)

    def test_bound_on_new_letters(self, free, cut_data):
        """Test at most 2d - 2 new letters"""
        assert len(free.new_letters) <= 2 * cut_data.d - 2
