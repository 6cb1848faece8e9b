# =============================================================================
# File: tests/test_words.py (PyTest Version)
# =============================================================================
import pytest

from src.errors import ContractError, ParseError
from src.words import CONSTANT, VARIABLE, InvAlphabet, Interval


@pytest.fixture
def alphabet():
    """Constants a, b, c, d, a fixed point e and variables X, Y"""
    alphabet = InvAlphabet.from_names(constants=['a', 'b', 'c', 'd'], variables=['X', 'Y'], fixed=['e'])
    return alphabet


def random_word(rng, letters, length):
    return tuple(int(a) for a in rng.choice(letters, size=length))


class TestAlphabet:
    """Test the append-only letter table"""

    def test_pairs_are_adjacent(self, alphabet):
        """Test add_pair allocates a letter and its bar together"""
        a = alphabet.letter('a')
        assert alphabet.bar[a] == a + 1
        assert alphabet.name(a + 1) == "a'"

    def test_involution_law(self, alphabet):
        """Test bar(bar(a)) = a for every letter"""
        assert all(alphabet.bar[alphabet.bar[a]] == a for a in range(len(alphabet)))

    def test_fixed_point_constant(self, alphabet):
        """Test fixed points are allowed for constants"""
        e = alphabet.letter('e')
        assert alphabet.is_fixed(e)
        assert alphabet.is_constant(e)

    def test_variables_have_no_fixed_points(self, alphabet):
        """Test variables are never their own bar"""
        assert all(alphabet.bar[x] != x for x in alphabet.variables())

    def test_kinds(self, alphabet):
        """Test constants and variables are separated by kind"""
        assert alphabet.letter('X') in alphabet.variables()
        assert alphabet.letter("b'") in alphabet.constants()
        assert alphabet.kinds[alphabet.letter('Y')] == VARIABLE
        assert alphabet.kinds[alphabet.letter('c')] == CONSTANT

    def test_fresh_pair_unused_name(self, alphabet):
        """Test fresh letters get names that were not declared before"""
        before = len(alphabet)
        a, b = alphabet.fresh_pair(CONSTANT, 'a')
        assert len(alphabet) == before + 2
        assert alphabet.name(a) not in ('a', "a'")
        assert alphabet.bar[a] == b

    def test_duplicate_name_rejected(self, alphabet):
        """Test redeclaring a letter is a contract violation"""
        with pytest.raises(ContractError):
            alphabet.add_pair('a')

    def test_representatives(self, alphabet):
        """Test one letter is kept from each pair"""
        x, y = alphabet.letter('X'), alphabet.letter('Y')
        reps = alphabet.representatives(alphabet.variables())
        assert reps == [x, y]


class TestInvolute:
    """Test the involution extended to words"""

    def test_empty(self, alphabet):
        """Test the empty word is fixed"""
        assert alphabet.involute(()) == ()

    def test_two_letters(self, alphabet):
        """Test a b' maps to b a'"""
        assert alphabet.involute(alphabet.parse_word("a b'")) == alphabet.parse_word("b a'")

    def test_twice_is_identity(self, alphabet):
        """Test involute(involute(abcb)) = abcb"""
        w = alphabet.parse_word('a b c b')
        assert alphabet.involute(alphabet.involute(w)) == w

    def test_random_words(self, alphabet, rng):
        """Test the involution law on random words"""
        letters = sorted(alphabet.constants())
        for _ in range(50):
            w = random_word(rng, letters, int(rng.integers(0, 12)))
            assert alphabet.involute(alphabet.involute(w)) == w
            assert len(alphabet.involute(w)) == len(w)


class TestFreeReduce:
    """Test free reduction"""

    @pytest.mark.parametrize("text,expected", [
        ("a a'", ''),
        ("a b b' a'", ''),
        ("a b'", "a b'"),
        ("e e", ''),
        ("a b a' b'", "a b a' b'"),
    ])
    def test_examples(self, alphabet, text, expected):
        """Test free reduction on small words"""
        assert alphabet.free_reduce(alphabet.parse_word(text)) == alphabet.parse_word(expected)

    def test_idempotent(self, alphabet, rng):
        """Test reducing twice changes nothing"""
        letters = sorted(alphabet.constants())
        for _ in range(50):
            w = random_word(rng, letters, int(rng.integers(0, 16)))
            once = alphabet.free_reduce(w)
            assert alphabet.free_reduce(once) == once
            assert alphabet.is_reduced(once)

    def test_commutes_with_involution(self, alphabet, rng):
        """Test free_reduce(involute(w)) = involute(free_reduce(w))"""
        letters = sorted(alphabet.constants())
        for _ in range(50):
            w = random_word(rng, letters, int(rng.integers(0, 16)))
            assert alphabet.free_reduce(alphabet.involute(w)) == alphabet.involute(alphabet.free_reduce(w))

    def test_confluence(self, alphabet, rng):
        """Test random rewrite orders reach the leftmost normal form"""
        letters = sorted(alphabet.constants())
        for _ in range(30):
            original = random_word(rng, letters, int(rng.integers(0, 14)))
            w = list(original)
            while True:
                spots = [i for i in range(len(w) - 1) if w[i + 1] == alphabet.bar[w[i]]]
                if not spots:
                    break
                i = spots[int(rng.integers(0, len(spots)))]
                del w[i:i + 2]
            assert tuple(w) == alphabet.free_reduce(original)

    def test_variables_rejected(self, alphabet):
        """Test free reduction is defined on constants only"""
        with pytest.raises(ContractError):
            alphabet.free_reduce(alphabet.parse_word("X X'"))


class TestFactor:
    """Test factors selected by intervals"""

    def test_positive_interval(self, alphabet):
        """Test w[1,3] of abcd is bc"""
        w = alphabet.parse_word('a b c d')
        assert alphabet.factor(w, Interval(1, 3)) == alphabet.parse_word('b c')

    def test_negative_interval(self, alphabet):
        """Test w[3,1] is the involuted factor"""
        w = alphabet.parse_word('a b c d')
        assert alphabet.factor(w, Interval(3, 1)) == alphabet.involute(alphabet.parse_word('b c'))

    def test_empty_interval(self, alphabet):
        """Test w[2,2] is empty"""
        assert alphabet.factor(alphabet.parse_word('a b c d'), Interval(2, 2)) == ()

    def test_free_factorization_word(self, alphabet):
        """Test w0[1,3] = d d' on the factorized example word"""
        w0 = alphabet.parse_word("a d d' b' a d d' a' b d d' a'")
        assert alphabet.factor(w0, Interval(1, 3)) == alphabet.parse_word("d d'")

    def test_out_of_range(self, alphabet):
        """Test positions beyond the word are rejected"""
        with pytest.raises(ContractError):
            alphabet.factor(alphabet.parse_word('a b'), Interval(0, 3))

    def test_interval_helpers(self):
        """Test orientation, length and containment"""
        iv = Interval(5, 1)
        assert not iv.positive
        assert iv.length == 4
        assert iv.contains(3) and not iv.contains(5)
        assert iv.reversed() == Interval(1, 5)


class TestText:
    """Test parsing and rendering of words"""

    def test_compact_form(self, alphabet):
        """Test a run of single-character names splits into letters"""
        assert alphabet.parse_word("aXX'a'") == alphabet.parse_word("a X X' a'")

    def test_render_roundtrip(self, alphabet):
        """Test rendering then parsing returns the word"""
        w = alphabet.parse_word("a b' X e")
        assert alphabet.parse_word(alphabet.render_word(w)) == w

    def test_empty_word_token(self, alphabet):
        """Test the token 1 denotes the empty word"""
        assert alphabet.parse_word('1') == ()
        assert alphabet.render_word(()) == '1'

    def test_unknown_letter(self, alphabet):
        """Test unknown names raise ParseError"""
        with pytest.raises(ParseError):
            alphabet.parse_word('a q')
