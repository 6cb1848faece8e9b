# =============================================================================
# File: tests/test_frontend.py (PyTest Version)
# =============================================================================
import pytest

from src.automata import singleton_automaton, universal_automaton
from src.equation import RHO_GUESSED, RHO_RESIDUAL
from src.errors import ContractError
from src.frontend import (ONE_AUTOMATON, And, Eq, FormulaReducer, GroupFormula, In, Membership, MonoidSystem, Neq,
                          Not, NotIn, Or, evaluate_group_formula)
from src.words import InvAlphabet


@pytest.fixture
def alphabet():
    """Generators a, b and variables X, Y"""
    return InvAlphabet.from_names(constants=['a', 'b'], variables=['X', 'Y'])


@pytest.fixture
def reducer(alphabet):
    return FormulaReducer(alphabet)


@pytest.fixture
def automata(alphabet):
    """A accepts the word a, B accepts the word b"""
    letters = alphabet.constants()
    return {'A': singleton_automaton([alphabet.parse_word('a')], letters),
            'B': singleton_automaton([alphabet.parse_word('b')], letters)}


def formula(alphabet, body, automata=None):
    variables = tuple(alphabet.representatives(alphabet.variables()))
    return GroupFormula(alphabet, alphabet.constants(), variables, body, automata or {})


def letters(alphabet, text):
    return alphabet.parse_word(text)


class TestGroupRewriting:
    """Test the rewriting steps on group formulas"""

    def test_normalize_pushes_negation(self, alphabet, reducer):
        """Test not (W = 1 and X in A) becomes W != 1 or X not in A"""
        x = alphabet.letter('X')
        w = letters(alphabet, 'X a')
        f = formula(alphabet, Not(And((Eq(w), In(x, 'A')))))
        assert reducer.normalize(f).body == Or((Neq(w), NotIn(x, 'A')))

    def test_double_negation(self, alphabet, reducer):
        w = letters(alphabet, 'X')
        assert reducer.normalize(formula(alphabet, Not(Not(Eq(w))))).body == Eq(w)

    def test_inequality_elimination(self, alphabet, reducer):
        """Test W != 1 becomes W Z = 1 with Z outside {1}"""
        w = letters(alphabet, 'X a')
        f = reducer.eliminate_group_inequalities(formula(alphabet, Neq(w)))
        (eq, not_in), = [f.body.parts]
        z = f.variables[-1]
        assert eq == Eq(w + (z,))
        assert not_in == NotIn(z, ONE_AUTOMATON)
        assert f.automata[ONE_AUTOMATON].accepts(())
        assert not f.automata[ONE_AUTOMATON].accepts(letters(alphabet, 'a'))

    def test_disjunct_choices(self, alphabet, reducer):
        """Test (A or B) and (C or D) has four choices"""
        x, y = alphabet.letter('X'), alphabet.letter('Y')
        body = And((Or((In(x, 'A'), In(x, 'B'))), Or((In(y, 'A'), In(y, 'B')))))
        choices = list(reducer.enumerate_disjunct_choices(formula(alphabet, body)))
        assert len(choices) == 4
        assert choices[0].body == And((In(x, 'A'), In(y, 'A')))

    def test_triangulate_long_atom(self, alphabet, reducer):
        """Test an atom of length five becomes three atoms of length three"""
        f = reducer.triangulate(formula(alphabet, Eq(letters(alphabet, "X a Y b X'"))))
        atoms = f.atoms()
        assert len(atoms) == 3
        assert all(len(atom.word) == 3 for atom in atoms)
        assert len(f.variables) == 4

    def test_triangulate_pads_short_atoms(self, alphabet, reducer):
        """Test X = 1 is padded with a a' and empty atoms vanish"""
        f = reducer.triangulate(formula(alphabet, And((Eq(letters(alphabet, 'X')), Eq(())))))
        assert f.atoms() == [Eq(letters(alphabet, "X a a'"))]

    def test_triangulation_preserves_truth(self, alphabet, reducer):
        """Test a solution of W = 1 extends to the triangulated atoms"""
        x, y = alphabet.letter('X'), alphabet.letter('Y')
        f = formula(alphabet, Eq(letters(alphabet, "X a Y b'")))
        t = reducer.triangulate(f)
        assignment = {x: letters(alphabet, 'b'), y: letters(alphabet, "a'")}
        assert evaluate_group_formula(f, assignment)
        fresh = t.variables[-1]
        # X a y1 = 1 fixes the fresh variable
        assignment[fresh] = alphabet.free_reduce(alphabet.involute(letters(alphabet, 'b a')))
        assert evaluate_group_formula(t, assignment)


class TestMonoidTransfer:
    """Test the move from the free group to the free monoid with involution"""

    def test_memberships(self, alphabet, reducer, automata):
        """Test X not in A gives a negative membership and a reducedness membership"""
        x = alphabet.letter('X')
        system = reducer.transfer_constraints_to_monoid(formula(alphabet, And((NotIn(x, 'A'),)), automata))
        assert [m.positive for m in system.memberships] == [False, True]
        assert system.memberships[1].name == 'N'

    def test_split_triple_atom(self, alphabet, reducer):
        """Test x y z = 1 gives x = P Q, y = Q' R, z = R' P'"""
        atom = letters(alphabet, 'X a Y')
        equations, fresh = reducer.split_triple_atom(atom)
        p, q, r = fresh
        bar = alphabet.bar
        assert equations == [((atom[0],), (p, q)), ((atom[1],), (bar[q], r)), ((atom[2],), (bar[r], bar[p]))]

    def test_split_needs_three_letters(self, alphabet, reducer):
        with pytest.raises(ContractError):
            reducer.split_triple_atom(letters(alphabet, 'X a'))

    def test_split_group_atoms(self, alphabet, reducer):
        """Test each group atom turns into three monoid equations"""
        system = MonoidSystem(alphabet, alphabet.constants(), alphabet.variables(),
                              group_atoms=(letters(alphabet, 'X a Y'),))
        split = reducer.split_group_atoms(system)
        assert len(split.equations) == 3
        assert split.group_atoms == ()
        assert len(split.variables) == len(system.variables) + 6


class TestMonoidReduction:
    """Test inequality elimination and the single equation"""

    def test_inequality_options(self, alphabet, reducer):
        """Test one inequality over four letters gives 2*4 + 4*3 systems"""
        u, v = letters(alphabet, 'X'), letters(alphabet, 'Y')
        system = MonoidSystem(alphabet, alphabet.constants(), alphabet.variables(), inequalities=((u, v),))
        produced = list(reducer.eliminate_monoid_inequalities(system))
        assert len(produced) == 20
        assert all(not s.inequalities for s, _ in produced)
        assert all(label for _, label in produced)

    def test_combine_two_equations(self, alphabet, reducer):
        """Test L1 c L2 = R1 c R2 with a fresh separator"""
        eq1 = (letters(alphabet, 'X'), letters(alphabet, 'a'))
        eq2 = (letters(alphabet, 'Y'), letters(alphabet, 'b'))
        system = MonoidSystem(alphabet, alphabet.constants(), alphabet.variables(), equations=(eq1, eq2))
        e = reducer.combine_to_single_equation(system)
        left, right = e.sides()
        assert len(left) == 3 and len(right) == 3
        separator = left[1]
        assert right[1] == separator and separator not in system.constants
        assert e.rho is None and e.rho_mode == RHO_RESIDUAL
        assert len(e.checks) == 2

    def test_single_equation_keeps_alphabet(self, alphabet, reducer):
        """Test no separator is added for one equation"""
        before = len(alphabet)
        system = MonoidSystem(alphabet, alphabet.constants(), alphabet.variables(),
                              equations=((letters(alphabet, 'X'), letters(alphabet, 'a')),))
        reducer.combine_to_single_equation(system)
        assert len(alphabet) == before

    def test_cancels_absent_variables(self, alphabet, reducer, automata):
        """Test an absent Y is cancelled with a witness from its automaton"""
        y = alphabet.letter('Y')
        system = MonoidSystem(alphabet, alphabet.constants(), alphabet.variables(),
                              equations=((letters(alphabet, 'X'), letters(alphabet, 'a')),),
                              memberships=(Membership(y, automata['B'], True, 'B'),))
        e, witnesses = reducer.cancel_absent_variables(reducer.combine_to_single_equation(system))
        assert witnesses == {y: letters(alphabet, 'b')}
        assert y not in e.variables and alphabet.letter('X') in e.variables

    def test_absent_variable_without_witness(self, alphabet, reducer, automata):
        """Test X in {a} and X in {b} has no witness"""
        x = alphabet.letter('X')
        system = MonoidSystem(alphabet, alphabet.constants(), alphabet.variables(),
                              memberships=(Membership(x, automata['A'], True, 'A'),
                                           Membership(x, automata['B'], True, 'B')))
        assert reducer.cancel_absent_variables(reducer.combine_to_single_equation(system)) is None
        branch, = reducer.reduce_system(system)
        assert branch.dead and branch.reason

    def test_rho_candidates(self, alphabet, reducer, automata):
        """Test every guessed rho passes the checks and respects the involution"""
        x = alphabet.letter('X')
        system = MonoidSystem(alphabet, alphabet.constants(), alphabet.variables(),
                              equations=((letters(alphabet, 'X Y'), letters(alphabet, 'a b')),),
                              memberships=(Membership(x, automata['A'], True, 'A'),))
        e = reducer.combine_to_single_equation(system)
        space = reducer.rho_space(e)
        assert all(space.values())
        candidates = list(reducer.rho_candidates(e))
        assert len(candidates) == len(space[x]) * len(space[alphabet.letter('Y')])
        for candidate in candidates:
            assert candidate.rho_mode == RHO_GUESSED and candidate.checks == ()
            candidate.validate()


class TestSemantics:
    """Test the referees used to re-check solutions"""

    def test_monoid_system(self, alphabet, automata):
        x, y = alphabet.letter('X'), alphabet.letter('Y')
        system = MonoidSystem(alphabet, alphabet.constants(), alphabet.variables(),
                              equations=((letters(alphabet, 'X b'), letters(alphabet, 'a Y')),),
                              inequalities=((letters(alphabet, 'X'), letters(alphabet, 'Y')),),
                              memberships=(Membership(x, automata['A'], True, 'A'),))
        assert system.satisfied_by({x: letters(alphabet, 'a'), y: letters(alphabet, 'b')})
        assert not system.satisfied_by({x: letters(alphabet, 'a b'), y: letters(alphabet, 'b b')})

    def test_group_formula(self, alphabet, automata):
        """Test free reduction is applied before comparing with 1"""
        x = alphabet.letter('X')
        f = formula(alphabet, And((Eq(letters(alphabet, "X a' a a'")), In(x, 'A'))), automata)
        assert evaluate_group_formula(f, {x: letters(alphabet, 'a'), alphabet.letter('Y'): ()})
        assert not evaluate_group_formula(f, {x: letters(alphabet, 'b'), alphabet.letter('Y'): ()})

    def test_group_membership_is_saturated(self, alphabet):
        """Test X in {b b' a} holds for X = a"""
        x = alphabet.letter('X')
        automata = {'P': singleton_automaton([letters(alphabet, "b b' a")], alphabet.constants())}
        f = formula(alphabet, In(x, 'P'), automata)
        assert evaluate_group_formula(f, {x: letters(alphabet, 'a'), alphabet.letter('Y'): ()})

    def test_missing_variable(self, alphabet):
        f = formula(alphabet, Eq(letters(alphabet, 'X')))
        with pytest.raises(ContractError):
            evaluate_group_formula(f, {alphabet.letter('X'): ()})

    def test_constant_contradiction_branch(self, alphabet, reducer):
        """Test a false constant atom ends its disjunct without a system"""
        f = formula(alphabet, Or((Eq(letters(alphabet, 'a')), Eq(letters(alphabet, "a a'")))),
                    {'U': universal_automaton(alphabet.constants())})
        branches = list(reducer.branches(f))
        assert branches[0].dead and 'false' in branches[0].reason
        assert not branches[1].dead
