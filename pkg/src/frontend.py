# =============================================================================
# File: src/frontend.py
# =============================================================================
import dataclasses
import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from config.config import Config
from src.automata import (Nfa, benois_saturate, reduced_words_dfa, remove_epsilon, singleton_automaton,
                          universal_automaton)
from src.constraints import AcceptancePair, MonElem, hom_from_automata
from src.equation import RHO_GUESSED, RHO_RESIDUAL, EquationE
from src.errors import ContractError
from src.expressions import Literal
from src.words import CONSTANT, VARIABLE, InvAlphabet, Word

ONE_AUTOMATON = '{1}'


# -- formula syntax -------------------------------------------------------------

@dataclass(frozen=True)
class Eq:
    """W = 1"""
    word: Word


@dataclass(frozen=True)
class Neq:
    """W != 1"""
    word: Word


@dataclass(frozen=True)
class In:
    variable: int
    automaton: str


@dataclass(frozen=True)
class NotIn:
    variable: int
    automaton: str


@dataclass(frozen=True)
class Not:
    body: 'Formula'


@dataclass(frozen=True)
class And:
    parts: Tuple['Formula', ...]


@dataclass(frozen=True)
class Or:
    parts: Tuple['Formula', ...]


Formula = Union[Eq, Neq, In, NotIn, Not, And, Or]
Atom = Union[Eq, Neq, In, NotIn]


@dataclass(frozen=True, eq=False)
class GroupFormula:
    """Exists variables: body, interpreted in the free group over the constants"""
    alphabet: InvAlphabet
    constants: FrozenSet[int]
    variables: Tuple[int, ...]
    body: Formula
    automata: Mapping[str, Nfa]

    def replace(self, **changes) -> 'GroupFormula':
        return dataclasses.replace(self, **changes)

    def atoms(self) -> List[Atom]:
        return list(_atoms(self.body))


def _atoms(node: Formula) -> Iterator[Atom]:
    if isinstance(node, (And, Or)):
        for part in node.parts:
            yield from _atoms(part)
    elif isinstance(node, Not):
        yield from _atoms(node.body)
    else:
        yield node


@dataclass(frozen=True, eq=False)
class Membership:
    variable: int
    automaton: Nfa
    positive: bool = True
    name: str = ''


@dataclass(frozen=True, eq=False)
class MonoidSystem:
    """Conjunction of U = V, U != V and X in P over the free monoid with involution"""
    alphabet: InvAlphabet
    constants: FrozenSet[int]
    variables: FrozenSet[int]
    equations: Tuple[Tuple[Word, Word], ...] = ()
    inequalities: Tuple[Tuple[Word, Word], ...] = ()
    memberships: Tuple[Membership, ...] = ()
    group_atoms: Tuple[Word, ...] = ()

    def replace(self, **changes) -> 'MonoidSystem':
        return dataclasses.replace(self, **changes)

    def satisfied_by(self, assignment: Mapping[int, Sequence[int]]) -> bool:
        """Monoid semantics of every atom under an assignment of the variables"""
        full = _complete(self.alphabet, assignment)

        def value(w):
            out = []
            for a in w:
                out.extend(full[a] if a in self.variables else (a,))
            return tuple(out)

        if any(value(u) != value(v) for u, v in self.equations):
            return False
        if any(value(u) == value(v) for u, v in self.inequalities):
            return False
        return all(m.automaton.accepts(full[m.variable]) == m.positive for m in self.memberships)


@dataclass(frozen=True, eq=False)
class Branch:
    """One way through the reduction, ending in an equation or in an exact dead end"""
    trace: Tuple[str, ...]
    system: Optional[MonoidSystem]
    equation: Optional[EquationE]
    cancelled: Mapping[int, Word] = field(default_factory=dict)
    reason: Optional[str] = None

    @property
    def dead(self) -> bool:
        return self.equation is None


def _complete(alphabet: InvAlphabet, assignment: Mapping[int, Sequence[int]]) -> Dict[int, Word]:
    full = {}
    for x, w in assignment.items():
        full[x] = tuple(w)
        full.setdefault(alphabet.bar[x], alphabet.involute(w))
    return full


def _conjuncts(node: Formula) -> List[Atom]:
    if isinstance(node, And):
        return [atom for part in node.parts for atom in _conjuncts(part)]
    return [node]


# -- the reduction pipeline -----------------------------------------------------

class FormulaReducer:
    """Group formula -> monoid systems -> single equations with matrix constraints"""

    def __init__(self, alphabet: InvAlphabet, subset_cap: int = Config.SUBSET_STATE_CAP,
                 prefixes: Mapping[str, str] = None):
        self.alphabet = alphabet
        self.subset_cap = subset_cap
        self.prefixes = dict(Config.FRESH_PREFIXES if prefixes is None else prefixes)
        self.logger = logging.getLogger(__name__)

    def _fresh_variable(self) -> Tuple[int, int]:
        return self.alphabet.fresh_pair(VARIABLE, self.prefixes['variable'])

    # group side

    def normalize(self, f: GroupFormula) -> GroupFormula:
        """Push negations to the atoms"""
        return f.replace(body=self._push(f.body, False))

    def _push(self, node: Formula, negated: bool) -> Formula:
        if isinstance(node, Not):
            return self._push(node.body, not negated)
        if isinstance(node, (And, Or)):
            parts = tuple(self._push(part, negated) for part in node.parts)
            if negated:
                return Or(parts) if isinstance(node, And) else And(parts)
            return type(node)(parts)
        if not negated:
            return node
        if isinstance(node, Eq):
            return Neq(node.word)
        if isinstance(node, Neq):
            return Eq(node.word)
        if isinstance(node, In):
            return NotIn(node.variable, node.automaton)
        return In(node.variable, node.automaton)

    def eliminate_group_inequalities(self, f: GroupFormula) -> GroupFormula:
        """W != 1 becomes W X = 1 and X not in {1} for a fresh X"""
        fresh: List[int] = []

        def rewrite(node: Formula) -> Formula:
            if isinstance(node, (And, Or)):
                return type(node)(tuple(rewrite(part) for part in node.parts))
            if isinstance(node, Neq):
                x, _ = self._fresh_variable()
                fresh.append(x)
                return And((Eq(node.word + (x,)), NotIn(x, ONE_AUTOMATON)))
            return node

        body = rewrite(f.body)
        if not fresh:
            return f
        automata = dict(f.automata)
        automata[ONE_AUTOMATON] = singleton_automaton([()], f.constants)
        self.logger.debug(f"Eliminated {len(fresh)} group inequalities")
        return f.replace(body=body, variables=f.variables + tuple(fresh), automata=automata)

    def enumerate_disjunct_choices(self, f: GroupFormula) -> Iterator[GroupFormula]:
        """Every way of keeping one side of each disjunction, lazily"""
        for atoms in self._choices(f.body):
            yield f.replace(body=And(tuple(atoms)))

    def _choices(self, node: Formula) -> Iterator[List[Atom]]:
        if isinstance(node, Or):
            for part in node.parts:
                yield from self._choices(part)
        elif isinstance(node, And):
            yield from self._product(list(node.parts))
        else:
            yield [node]

    def _product(self, parts: List[Formula]) -> Iterator[List[Atom]]:
        if not parts:
            yield []
            return
        for head in self._choices(parts[0]):
            for tail in self._product(parts[1:]):
                yield head + tail

    def triangulate(self, f: GroupFormula) -> GroupFormula:
        """Rewrite every W = 1 into atoms of length exactly three"""
        if not f.constants:
            raise ContractError("triangulate needs at least one constant to pad short atoms")
        pad = min(f.constants)
        padding = (pad, self.alphabet.bar[pad])
        atoms: List[Atom] = []
        fresh: List[int] = []
        for atom in _conjuncts(f.body):
            if not isinstance(atom, Eq):
                atoms.append(atom)
                continue
            w = atom.word
            if not w:
                continue
            while len(w) < 3:
                w = w + padding
            while len(w) > 3:
                y, y_bar = self._fresh_variable()
                fresh.append(y)
                atoms.append(Eq((w[0], w[1], y)))
                w = (y_bar,) + w[2:]
            atoms.append(Eq(w))
        return f.replace(body=And(tuple(atoms)), variables=f.variables + tuple(fresh))

    def transfer_constraints_to_monoid(self, f: GroupFormula) -> MonoidSystem:
        """X in P'' for positive constraints, X not in P'' and X in N for negative ones"""
        saturated: Dict[str, Nfa] = {}
        reduced = reduced_words_dfa(self.alphabet, f.constants)
        memberships: List[Membership] = []
        triangles: List[Word] = []
        for atom in _conjuncts(f.body):
            if isinstance(atom, Eq):
                triangles.append(atom.word)
                continue
            if atom.automaton not in f.automata:
                raise ContractError(f"Unknown automaton '{atom.automaton}'")
            if atom.automaton not in saturated:
                saturated[atom.automaton] = benois_saturate(f.automata[atom.automaton], self.alphabet)
            nfa = saturated[atom.automaton]
            if isinstance(atom, In):
                memberships.append(Membership(atom.variable, nfa, True, atom.automaton))
            else:
                memberships.append(Membership(atom.variable, nfa, False, atom.automaton))
                memberships.append(Membership(atom.variable, reduced, True, 'N'))
        variables = self._closed(f.variables)
        return MonoidSystem(self.alphabet, f.constants, variables, memberships=tuple(memberships),
                            group_atoms=tuple(triangles))

    def _closed(self, letters) -> FrozenSet[int]:
        return frozenset(letters) | frozenset(self.alphabet.bar[x] for x in letters)

    def split_triple_atom(self, atom: Word) -> Tuple[List[Tuple[Word, Word]], List[int]]:
        """x y z = 1 in reduced words iff x = P Q, y = bar(Q) R, z = bar(R) bar(P)"""
        if len(atom) != 3:
            raise ContractError("split_triple_atom takes atoms of length three")
        x, y, z = atom
        (p, p_bar), (q, q_bar), (r, r_bar) = (self._fresh_variable() for _ in range(3))
        equations = [((x,), (p, q)), ((y,), (q_bar, r)), ((z,), (r_bar, p_bar))]
        return equations, [p, q, r]

    def split_group_atoms(self, system: MonoidSystem) -> MonoidSystem:
        equations = list(system.equations)
        fresh: List[int] = []
        for atom in system.group_atoms:
            produced, names = self.split_triple_atom(atom)
            equations.extend(produced)
            fresh.extend(names)
        return system.replace(equations=tuple(equations), group_atoms=(),
                              variables=system.variables | self._closed(fresh))

    # monoid side

    def eliminate_monoid_inequalities(self, system: MonoidSystem) -> Iterator[Tuple[MonoidSystem, str]]:
        """U != V becomes U = V a X, V = U a X or (U = X a Y and V = X b Z) with a != b"""
        if not system.inequalities:
            yield system, ''
            return
        constants = sorted(system.constants)
        if len(constants) < 2:
            raise ContractError("Eliminating inequalities needs at least two constants")
        name = self.alphabet.name
        options = []
        fresh: List[int] = []
        for u, v in system.inequalities:
            x, y, z = (self._fresh_variable()[0] for _ in range(3))
            fresh.extend([x, y, z])
            render_u, render_v = self.alphabet.render_word(u), self.alphabet.render_word(v)
            choices = []
            for a in constants:
                choices.append(([(u, v + (a, x))], f"{render_u} = {render_v} {name(a)} X"))
                choices.append(([(v, u + (a, x))], f"{render_v} = {render_u} {name(a)} X"))
            for a, b in itertools.permutations(constants, 2):
                choices.append(([(u, (x, a, y)), (v, (x, b, z))], f"split at {name(a)}/{name(b)}"))
            options.append(choices)
        for picked in itertools.product(*options):
            equations = list(system.equations)
            for produced, _ in picked:
                equations.extend(produced)
            used = {a for pair in equations for side in pair for a in side}
            used |= {m.variable for m in system.memberships}
            variables = system.variables | self._closed(x for x in fresh if x in used)
            yield (system.replace(equations=tuple(equations), inequalities=(), variables=variables),
                   '; '.join(label for _, label in picked))

    def combine_to_single_equation(self, system: MonoidSystem) -> EquationE:
        """L1 c L2 ... c Lk = R1 c ... c Rk with a fresh separator c and X in Gamma* for every X"""
        alphabet = self.alphabet
        constants = set(system.constants)
        lhs: List[int] = []
        rhs: List[int] = []
        separator = None
        if len(system.equations) >= 2:
            separator = alphabet.fresh_pair(CONSTANT, self.prefixes['separator'])
            constants.update(separator)
        for i, (u, v) in enumerate(system.equations):
            if i:
                lhs.append(separator[0])
                rhs.append(separator[0])
            lhs.extend(u)
            rhs.extend(v)
        automata = [remove_epsilon(m.automaton) for m in system.memberships]
        targets = [(m.variable, m.positive) for m in system.memberships]
        automata.append(universal_automaton(system.constants))
        targets.append((None, True))
        h, pairs, n = hom_from_automata(alphabet, automata, constants, targets)
        checks = list(pairs[:-1])
        everything = pairs[-1]
        checks.extend(everything.retarget(x) for x in alphabet.representatives(system.variables))
        self.logger.debug(f"Combined {len(system.equations)} equations into one, n={n}, "
                          f"{len(checks)} acceptance checks")
        return EquationE(alphabet, frozenset(constants), system.variables, h, None, Literal(lhs), Literal(rhs),
                         tuple(checks), RHO_RESIDUAL)

    def cancel_absent_variables(self, e: EquationE) -> Optional[Tuple[EquationE, Dict[int, Word]]]:
        """Cancel variables absent from the sides when some word passes their checks, else None"""
        present = e.occurring_variables()
        present = present | frozenset(self.alphabet.bar[x] for x in present)
        absent = e.variables - present
        if not absent:
            return e, {}
        reachable = e.h.reachable()
        witnesses: Dict[int, Word] = {}
        for x in self.alphabet.representatives(absent):
            pairs = _checks_for(e, x)
            for elem, w in reachable.items():
                if all(pair.holds(elem if not mirrored else elem.involute()) for pair, mirrored in pairs):
                    witnesses[x] = w
                    break
            else:
                self.logger.debug(f"No word satisfies the constraints of '{self.alphabet.name(x)}'")
                return None
        checks = tuple(pair for pair in e.checks if pair.variable not in absent)
        return e.replace(variables=e.variables - absent, checks=checks), witnesses

    def rho_space(self, e: EquationE) -> Dict[int, List[MonElem]]:
        """For each variable representative the reachable elements passing its checks"""
        reachable = e.h.reachable()
        space = {}
        for x in self.alphabet.representatives(e.variables):
            pairs = _checks_for(e, x)
            space[x] = [elem for elem in reachable
                        if all(pair.holds(elem if not mirrored else elem.involute()) for pair, mirrored in pairs)]
        return space

    def rho_candidates(self, e: EquationE) -> Iterator[EquationE]:
        """Guessed-mode equations, one per compatible choice of rho"""
        space = self.rho_space(e)
        keys = list(space)
        for choice in itertools.product(*(space[x] for x in keys)):
            rho = {}
            for x, elem in zip(keys, choice):
                rho[x] = elem
                rho[self.alphabet.bar[x]] = elem.involute()
            yield e.replace(rho=rho, checks=(), rho_mode=RHO_GUESSED)

    def reduce_system(self, system: MonoidSystem, trace: Tuple[str, ...] = ()) -> Iterator[Branch]:
        """Monoid system -> branches, one per resolution of its inequalities"""
        for monoid, choice in self.eliminate_monoid_inequalities(system):
            steps = trace + ((choice,) if choice else ())
            e = self.combine_to_single_equation(monoid)
            pretest = self.cancel_absent_variables(e)
            if pretest is None:
                yield Branch(steps, monoid, None, reason='no word satisfies the constraints of a cancelled variable')
                continue
            e, witnesses = pretest
            yield Branch(steps, monoid, e, witnesses)

    def branches(self, f: GroupFormula) -> Iterator[Branch]:
        """The whole pipeline as a lazy stream of branches"""
        f = self.eliminate_group_inequalities(self.normalize(f))
        for index, conj in enumerate(self.enumerate_disjunct_choices(f)):
            trace = (f"disjunct choice {index}",)
            reason = self._constant_contradiction(conj)
            if reason is not None:
                yield Branch(trace, None, None, reason=reason)
                continue
            system = self.split_group_atoms(self.transfer_constraints_to_monoid(self.triangulate(conj)))
            yield from self.reduce_system(system, trace)

    def _constant_contradiction(self, f: GroupFormula) -> Optional[str]:
        for atom in _conjuncts(f.body):
            if isinstance(atom, Eq) and all(self.alphabet.is_constant(a) for a in atom.word):
                if self.alphabet.free_reduce(atom.word):
                    return f"constant atom {self.alphabet.render_word(atom.word)} = 1 is false"
        return None


def _checks_for(e: EquationE, x: int) -> List[Tuple[AcceptancePair, bool]]:
    """Checks on x, and checks on bar(x) flagged to be read through the involution"""
    bar = e.alphabet.bar[x]
    return [(pair, pair.variable == bar and bar != x) for pair in e.checks if pair.variable in (x, bar)]


# -- referee --------------------------------------------------------------------

def evaluate_group_formula(f: GroupFormula, assignment: Mapping[int, Sequence[int]]) -> bool:
    """Truth of the body in the free group under an assignment of the bound variables"""
    alphabet = f.alphabet
    full = _complete(alphabet, assignment)
    for x in f.variables:
        if x not in full:
            raise ContractError(f"No value for variable '{alphabet.name(x)}'")
    saturated: Dict[str, Nfa] = {}

    def element(w: Sequence[int]) -> Word:
        out = []
        for a in w:
            out.extend(full[a] if alphabet.is_variable(a) else (a,))
        return alphabet.free_reduce(out)

    def member(x: int, name: str) -> bool:
        if name not in saturated:
            saturated[name] = benois_saturate(f.automata[name], alphabet)
        return saturated[name].accepts(element((x,)))

    def value(node: Formula) -> bool:
        if isinstance(node, Eq):
            return element(node.word) == ()
        if isinstance(node, Neq):
            return element(node.word) != ()
        if isinstance(node, In):
            return member(node.variable, node.automaton)
        if isinstance(node, NotIn):
            return not member(node.variable, node.automaton)
        if isinstance(node, Not):
            return not value(node.body)
        if isinstance(node, And):
            return all(value(part) for part in node.parts)
        return any(value(part) for part in node.parts)

    return value(f.body)
