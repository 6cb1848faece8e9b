# =============================================================================
# File: tests/test_text_formats.py (PyTest Version)
# =============================================================================
import pytest

from src.errors import ParseError
from src.frontend import And, Eq, In, Neq, Not
from src.text_formats import parse_equation_file, parse_formula, parse_sexp, read_equation_file, read_formula

FORMULA = """
; X commutes with a and lies in a+
(alphabet a b)
(automaton Aplus (states 2) (initial 0) (final 1) (0 a 1) (1 a 1))
(exists (X)
  (and (eq a X a' X')
       (in X Aplus)))
"""

EQUATION_FILE = """
alphabet: a b
fixed: e
variables: X Y
automaton P
states 2
initial 0
final 1
0 a 1
1 a 1
end
constraint X in P     # X in a+
constraint Y notin P
equation: X b = a Y
inequation: X != Y
"""


@pytest.fixture
def formula():
    return parse_formula(FORMULA)


@pytest.fixture
def system():
    return parse_equation_file(EQUATION_FILE)


class TestSExpressions:
    """Test the s-expression reader"""

    def test_nested_forms(self):
        forms = parse_sexp('(a (b c) "d e") x')
        assert forms[0] == (['a', ['b', 'c'], 'd e'], 1)
        assert forms[1] == ('x', 1)

    def test_comments_and_lines(self):
        """Test comments are skipped and forms remember their first line"""
        forms = parse_sexp('; note\n\n(a\n b)')
        assert forms == [(['a', 'b'], 3)]

    @pytest.mark.parametrize("text", ['(a b', 'a)'])
    def test_unbalanced(self, text):
        with pytest.raises(ParseError):
            parse_sexp(text)


class TestFormulaFiles:
    """Test the formula syntax"""

    def test_alphabet_and_variables(self, formula):
        alphabet = formula.alphabet
        assert len(formula.constants) == 4
        assert formula.variables == (alphabet.letter('X'),)
        assert alphabet.is_variable(alphabet.letter("X'"))

    def test_body(self, formula):
        alphabet = formula.alphabet
        x = alphabet.letter('X')
        assert formula.body == And((Eq(alphabet.parse_word("a X a' X'")), In(x, 'Aplus')))

    def test_inline_automaton(self, formula):
        """Test the inline automaton accepts a+"""
        aplus = formula.automata['Aplus']
        a = formula.alphabet.letter('a')
        assert aplus.accepts((a, a, a)) and not aplus.accepts(())

    def test_negation_and_one(self):
        """Test (not ...) and the empty word token 1"""
        f = parse_formula("(alphabet a) (exists (X) (not (neq X 1)))")
        assert f.body == Not(Neq((f.alphabet.letter('X'),)))

    def test_automaton_file(self, tmp_path):
        """Test automata can be read from a path relative to the formula file"""
        (tmp_path / 'only_b.aut').write_text("states 2\ninitial 0\nfinal 1\n0 b 1\n")
        (tmp_path / 'f.sexp').write_text("(alphabet a b)\n(automaton B only_b.aut)\n(exists (X) (in X B))\n")
        f = read_formula(str(tmp_path / 'f.sexp'))
        assert f.automata['B'].accepts(f.alphabet.parse_word('b'))

    @pytest.mark.parametrize("text", [
        "(alphabet a)",
        "(alphabet a) (bogus)",
        "(alphabet a) (exists (X) (in X Nowhere))",
        "(alphabet a) (exists (X) (in a Nowhere))",
        "(alphabet a) (exists (X) (xor X))",
        "(alphabet a) (exists (X) (eq X q))",
    ])
    def test_malformed(self, text):
        with pytest.raises(ParseError):
            parse_formula(text)


class TestEquationFiles:
    """Test the line based equation syntax"""

    def test_declarations(self, system):
        alphabet = system.alphabet
        assert alphabet.is_fixed(alphabet.letter('e'))
        assert len(system.constants) == 5
        assert system.variables == frozenset(alphabet.letter(n) for n in ('X', "X'", 'Y', "Y'"))

    def test_atoms(self, system):
        alphabet = system.alphabet
        assert system.equations == ((alphabet.parse_word('X b'), alphabet.parse_word('a Y')),)
        assert system.inequalities == ((alphabet.parse_word('X'), alphabet.parse_word('Y')),)
        assert [(m.name, m.positive) for m in system.memberships] == [('P', True), ('P', False)]

    def test_semantics(self, system):
        """Test X = a, Y = b satisfies every atom"""
        alphabet = system.alphabet
        assert system.satisfied_by({alphabet.letter('X'): alphabet.parse_word('a'),
                                    alphabet.letter('Y'): alphabet.parse_word('b')})

    def test_read_from_file(self, tmp_path):
        filename = tmp_path / 'system.txt'
        filename.write_text(EQUATION_FILE)
        assert len(read_equation_file(str(filename)).memberships) == 2

    @pytest.mark.parametrize("text,line", [
        ("alphabet: a\nvariables: X\nbogus: 1\nequation: X = a\n", 3),
        ("alphabet: a\nvariables: X\nconstraint a in P\nequation: X = a\n", 3),
        ("alphabet: a\nvariables: X\nautomaton P\nstates 1\n", 3),
        ("alphabet: a\nvariables: X\nequation: X = a = a\n", 3),
    ])
    def test_errors_carry_line_numbers(self, text, line):
        with pytest.raises(ParseError) as info:
            parse_equation_file(text)
        assert info.value.line == line

    def test_no_equation(self):
        with pytest.raises(ParseError):
            parse_equation_file("alphabet: a\nvariables: X\n")
