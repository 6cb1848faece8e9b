# =============================================================================
# File: src/solver.py
# =============================================================================
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterator, List, Mapping, Optional, Sequence, Tuple

from config.config import Config
from src.certificate import CertPath, build_certificate_path
from src.constraints import ConstraintHom, MonElem, hom_image
from src.equation import RHO_GUESSED, RHO_RESIDUAL, EquationE, Solution, complete_solution
from src.errors import CertificateError, ContractError, ResourceLimitError
from src.expressions import EMPTY, Literal
from src.frontend import Branch, FormulaReducer, GroupFormula, MonoidSystem, evaluate_group_formula
from src.moves import (Arc, BaseChange, PartialImage, PartialSolution, Projection, apply_partial_solution,
                       apply_projection, check_solution, pull_back_path)
from src.periodicity import exponent_of_periodicity
from src.words import CONSTANT, Word

TRUE = 'true'
FALSE = 'false'
UNKNOWN = 'unknown'

ORACLE = 'oracle'
SEARCH = 'search'


@dataclass
class SearchConfig:
    """Budgets and policies of the solvers; defaults come from Config"""
    max_var_length: int = Config.MAX_VAR_LENGTH
    expansion_cap: int = Config.EXPANSION_CAP
    reachable_budget: int = Config.REACHABLE_BUDGET
    admissibility_c: float = Config.ADMISSIBILITY_C
    branch_budget: int = Config.BRANCH_BUDGET
    max_depth: int = Config.MAX_SEARCH_DEPTH
    dedup: bool = Config.DEDUP_VISITED
    move_order: Tuple[str, ...] = Config.MOVE_ORDER
    exp_ceiling_c: int = Config.EXP_CEILING_C
    exp_ceiling_cap: int = Config.EXP_CEILING_CAP
    projection_min_witness: int = Config.PROJECTION_MIN_WITNESS
    rho_mode: str = RHO_RESIDUAL
    strategy: str = ORACLE
    build_certificate: bool = True

    def __post_init__(self):
        for name in ('expansion_cap', 'reachable_budget', 'admissibility_c', 'branch_budget', 'max_depth',
                     'exp_ceiling_cap'):
            if getattr(self, name) <= 0:
                raise ContractError(f"SearchConfig.{name} must be positive")
        if self.max_var_length < 0:
            raise ContractError("SearchConfig.max_var_length must be non-negative")
        unknown = set(self.move_order) - {'partial', 'base_change', 'projection'}
        if unknown:
            raise ContractError(f"Unknown moves in move_order: {sorted(unknown)}")
        if self.rho_mode not in (RHO_RESIDUAL, RHO_GUESSED):
            raise ContractError(f"Unknown rho mode '{self.rho_mode}'")
        if self.strategy not in (ORACLE, SEARCH):
            raise ContractError(f"Unknown strategy '{self.strategy}'")

    def exp_ceiling(self, e: EquationE) -> int:
        """2^(c (d + n ceil(log2(n + 1)))) clamped to the configured cap"""
        exponent = self.exp_ceiling_c * (e.d + e.n * math.ceil(math.log2(e.n + 1)))
        if exponent >= self.exp_ceiling_cap.bit_length():
            return self.exp_ceiling_cap
        return min(self.exp_ceiling_cap, 2 ** exponent)


@dataclass(frozen=True, eq=False)
class SearchNode:
    equation: EquationE
    key: tuple
    depth: int
    pinned: Mapping[int, Tuple[Word, Word]] = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class SearchResult:
    status: str
    solution: Optional[Solution] = None
    path: Tuple[Arc, ...] = ()
    stats: Mapping[str, int] = field(default_factory=dict)
    mode: str = RHO_RESIDUAL
    certificate: Optional[CertPath] = None
    trace: Tuple[str, ...] = ()


@dataclass(frozen=True, eq=False)
class GroupVerdict:
    status: str
    assignment: Optional[Mapping[int, Word]] = None
    branch_trace: Tuple[str, ...] = ()
    certificate: Optional[CertPath] = None
    mode: str = RHO_RESIDUAL
    reasons: Tuple[str, ...] = ()


class BudgetExhausted(Exception):
    """Raised inside a search when its node budget runs out"""


def _constraints_hold(e: EquationE, x: int, elem: MonElem) -> bool:
    """rho and residual checks on x and bar(x) for a candidate image of x"""
    bar = e.alphabet.bar[x]
    if e.rho is not None and e.rho.get(x, elem) != elem:
        return False
    for pair in e.checks:
        if pair.variable == x and not pair.holds(elem):
            return False
        if pair.variable == bar and not pair.holds(elem.involute()):
            return False
    return True


def _witness(e: EquationE, x: int, prefix: Sequence[int] = (), suffix: Sequence[int] = ()) -> Optional[Word]:
    """Shortest w over Gamma with the constraints of x holding for prefix w suffix"""
    left, right = hom_image(e.h, prefix), hom_image(e.h, suffix)
    for elem, w in e.h.reachable().items():
        if _constraints_hold(e, x, left * elem * right):
            return w
    return None


# -- brute force oracle ---------------------------------------------------------

class Oracle:
    """Exhaustive letter-by-letter guessing with |sigma(X)| <= maxlen for the peeled part"""

    def __init__(self, e: EquationE, maxlen: int, budget: int = Config.BRANCH_BUDGET,
                 cap: int = Config.EXPANSION_CAP):
        if maxlen < 0:
            raise ContractError("oracle_solve needs maxlen >= 0")
        self.e = e
        self.maxlen = maxlen
        self.budget = budget
        self.cap = cap
        self.alphabet = e.alphabet
        self.reps = self.alphabet.representatives(e.variables)
        self.rep_of = {}
        for x in self.reps:
            self.rep_of[x] = x
            self.rep_of[self.alphabet.bar[x]] = x
        self.constants = sorted(e.constants)
        self.nodes = 0
        self.logger = logging.getLogger(__name__)

    def solve(self) -> Optional[Solution]:
        left, right = self.e.sides(self.cap)
        found = self._search(left, right, {x: () for x in self.reps}, {x: () for x in self.reps}, frozenset())
        self.logger.debug(f"Oracle visited {self.nodes} nodes, {'found' if found else 'no'} solution")
        return found

    def _peel(self, left: Word, right: Word, front, back, symbol: int, c: int):
        """symbol := c symbol, so bar(symbol) := bar(symbol) bar(c)"""
        bar = self.alphabet.bar
        partner = bar[symbol]

        def rewrite(w):
            out = []
            for a in w:
                if a == symbol:
                    out.extend((c, a))
                elif a == partner:
                    out.extend((a, bar[c]))
                else:
                    out.append(a)
            return tuple(out)

        rep = self.rep_of[symbol]
        front, back = dict(front), dict(back)
        if symbol == rep:
            front[rep] = front[rep] + (c,)
        else:
            back[rep] = (bar[c],) + back[rep]
        return rewrite(left), rewrite(right), front, back

    def _erase(self, left: Word, right: Word, symbol: int):
        gone = {symbol, self.alphabet.bar[symbol]}
        return tuple(a for a in left if a not in gone), tuple(a for a in right if a not in gone)

    def _fits(self, rep: int, front, back) -> bool:
        return len(front[rep]) + len(back[rep]) <= self.maxlen

    def _search(self, left: Word, right: Word, front, back, finished: FrozenSet[int]) -> Optional[Solution]:
        self.nodes += 1
        if self.nodes > self.budget:
            raise ResourceLimitError(f"Oracle exceeded {self.budget} nodes", stage='oracle')
        i = 0
        while i < min(len(left), len(right)) and left[i] == right[i]:
            i += 1
        left, right = left[i:], right[i:]
        j = 0
        while j < min(len(left), len(right)) and left[-1 - j] == right[-1 - j]:
            j += 1
        left, right = left[:len(left) - j], right[:len(right) - j]
        if not left and not right:
            return self._finish(front, back, finished)
        variables = self.e.variables
        if not left or not right:
            rest = left or right
            if any(a not in variables for a in rest):
                return None
            return self._try_erase(left, right, front, back, finished, rest[0])
        p, q = left[0], right[0]
        if p not in variables and q not in variables:
            return None
        if left[-1] not in variables and right[-1] not in variables:
            return None
        symbol, other = (p, q) if p in variables else (q, p)
        found = self._try_erase(left, right, front, back, finished, symbol)
        if found is not None:
            return found
        if other in variables:
            found = self._try_erase(left, right, front, back, finished, other)
            if found is not None:
                return found
        letters = [other] if other not in variables else self.constants
        rep = self.rep_of[symbol]
        for c in letters:
            new_left, new_right, new_front, new_back = self._peel(left, right, front, back, symbol, c)
            if not self._fits(rep, new_front, new_back):
                continue
            found = self._search(new_left, new_right, new_front, new_back, finished)
            if found is not None:
                return found
        return None

    def _try_erase(self, left, right, front, back, finished, symbol) -> Optional[Solution]:
        rep = self.rep_of[symbol]
        value = front[rep] + back[rep]
        if not _constraints_hold(self.e, rep, hom_image(self.e.h, value)):
            return None
        new_left, new_right = self._erase(left, right, symbol)
        return self._search(new_left, new_right, front, back, finished | {rep})

    def _finish(self, front, back, finished) -> Optional[Solution]:
        sigma: Solution = {}
        for x in self.reps:
            if x in finished:
                sigma[x] = front[x] + back[x]
                continue
            middle = _witness(self.e, x, front[x], back[x])
            if middle is None:
                return None
            sigma[x] = front[x] + middle + back[x]
        sigma = complete_solution(self.alphabet, sigma)
        return sigma if check_solution(self.e, sigma, self.cap) else None


def oracle_solve(e: EquationE, maxlen: int, budget: int = Config.BRANCH_BUDGET,
                 cap: int = Config.EXPANSION_CAP) -> Optional[Solution]:
    """A solution whose guessed parts have length <= maxlen, or None"""
    return Oracle(e, maxlen, budget, cap).solve()


# -- search over the move graph -------------------------------------------------

class MoveSearch:
    """Iterative deepening over arcs; success at a variable free node with equal sides"""

    def __init__(self, e: EquationE, cfg: SearchConfig):
        self.root = e
        self.cfg = cfg
        self.alphabet = e.alphabet
        self.nodes = 0
        self.cut_off = False
        self.visited: Dict[tuple, int] = {}
        self.ceiling = cfg.exp_ceiling(e)
        self.projection_letters: Dict[MonElem, int] = {}
        self.logger = logging.getLogger(__name__)

    def node_key(self, e: EquationE, pinned) -> tuple:
        left, right = e.sides(self.cfg.expansion_cap)
        rho = () if e.rho is None else tuple(sorted((x, m.key()) for x, m in e.rho.items()))
        checks = tuple((p.variable, p.positive, p.initial.tobytes(), p.final.tobytes()) for p in e.checks)
        lengths = tuple(sorted((x, len(f) + len(b)) for x, (f, b) in pinned.items()))
        return left, right, e.constants, e.variables, rho, checks, lengths

    def run(self) -> SearchResult:
        e = self.root
        mode = RHO_RESIDUAL if e.rho is None else RHO_GUESSED
        if not e.variables:
            status = TRUE if e.is_trivial(self.cfg.expansion_cap) else FALSE
            return SearchResult(status, {} if status == TRUE else None, (), {'nodes': 0, 'depth': 0}, mode)
        root = SearchNode(e, self.node_key(e, {}), 0, {})
        try:
            for limit in range(self.cfg.max_depth + 1):
                self.visited = {}
                self.cut_off = False
                path = self._dfs(root, [], limit)
                if path is not None:
                    sigma = pull_back_path(path, {}, self.cfg.expansion_cap)
                    self.logger.info(f"Search found a path of {len(path)} arcs after {self.nodes} nodes")
                    return SearchResult(TRUE, sigma, tuple(path), {'nodes': self.nodes, 'depth': len(path)}, mode)
                if not self.cut_off:
                    break
        except BudgetExhausted:
            self.logger.info(f"Search budget of {self.cfg.branch_budget} nodes exhausted")
        return SearchResult(UNKNOWN, None, (), {'nodes': self.nodes, 'depth': self.cfg.max_depth}, mode)

    def _dfs(self, node: SearchNode, path: List[Arc], remaining: int) -> Optional[List[Arc]]:
        self.nodes += 1
        if self.nodes > self.cfg.branch_budget:
            raise BudgetExhausted()
        e = node.equation
        if not e.variables:
            if not e.is_trivial(self.cfg.expansion_cap):
                return None
            sigma = pull_back_path(path, {}, self.cfg.expansion_cap)
            if check_solution(self.root, sigma, self.cfg.expansion_cap):
                return list(path)
            self.logger.warning("A goal node pulled back to a non-solution; continuing the search")
            return None
        if remaining == 0:
            self.cut_off = True
            return None
        if self.cfg.dedup:
            if self.visited.get(node.key, -1) >= remaining:
                return None
            self.visited[node.key] = remaining
        for arc, pinned in self._moves(node):
            child = SearchNode(arc.target, self.node_key(arc.target, pinned), node.depth + 1, pinned)
            path.append(arc)
            found = self._dfs(child, path, remaining - 1)
            path.pop()
            if found is not None:
                return found
        return None

    # moves

    def _moves(self, node: SearchNode) -> Iterator[Tuple[Arc, Mapping[int, Tuple[Word, Word]]]]:
        focus = self._focus(node.equation)
        if focus is None:
            return
        for kind in self.cfg.move_order:
            if kind == 'partial':
                yield from self._partial_moves(node, focus)
            elif kind == 'base_change':
                yield from self._base_change_moves(node)
            elif kind == 'projection':
                yield from self._projection_moves(node, focus)

    def _focus(self, e: EquationE) -> Optional[Tuple[str, int, Optional[int]]]:
        """('finish'|'erase'|'head', variable, opposite symbol) or None for a dead node"""
        left, right = e.sides(self.cfg.expansion_cap)
        variables = e.variables
        if left == right:
            return 'finish', min(variables), None
        i = 0
        while i < min(len(left), len(right)) and left[i] == right[i]:
            i += 1
        if i == min(len(left), len(right)):
            rest = (left if len(left) > len(right) else right)[i:]
            if any(a not in variables for a in rest):
                return None
            return 'erase', rest[0], None
        j = 0
        while j < min(len(left), len(right)) - i - 1 and left[-1 - j] == right[-1 - j]:
            j += 1
        if left[-1 - j] not in variables and right[-1 - j] not in variables:
            return None
        p, q = left[i], right[i]
        if p not in variables and q not in variables:
            return None
        return ('head', p, q) if p in variables else ('head', q, p)

    def _arc(self, e: EquationE, delta: PartialSolution, label: str, pi: Projection = Projection()) -> Optional[Arc]:
        try:
            projected = apply_projection(pi, e)
            target = apply_partial_solution(delta, projected, self.cfg.expansion_cap)
        except ContractError as exc:
            self.logger.debug(f"Move '{label}' rejected: {exc}")
            return None
        return Arc(e, target, BaseChange(), pi, delta, label)

    def _without(self, e: EquationE, symbols) -> Optional[Dict[int, MonElem]]:
        if e.rho is None:
            return None
        return {x: m for x, m in e.rho.items() if x not in symbols}

    def _pin(self, pinned, symbol: int, c: int):
        bar = self.alphabet.bar
        rep = min(symbol, bar[symbol])
        front, back = pinned.get(rep, ((), ()))
        if symbol == rep:
            front = front + (c,)
        else:
            back = (bar[c],) + back
        if len(front) + len(back) > self.cfg.max_var_length:
            return None
        if max(exponent_of_periodicity(front), exponent_of_periodicity(back)) > self.ceiling:
            return None
        updated = dict(pinned)
        updated[rep] = (front, back)
        return updated

    def _erase_move(self, node: SearchNode, symbol: int):
        e = node.equation
        partner = self.alphabet.bar[symbol]
        images = {symbol: PartialImage(keep=False), partner: PartialImage(keep=False)}
        arc = self._arc(e, PartialSolution(images, self._without(e, (symbol, partner))),
                        f"erase {self.alphabet.name(symbol)}")
        if arc is not None:
            yield arc, node.pinned

    def _partial_moves(self, node: SearchNode, focus):
        e = node.equation
        kind, symbol, other = focus
        bar = self.alphabet.bar
        if kind == 'finish':
            yield from self._finish_move(node)
            return
        yield from self._erase_move(node, symbol)
        if kind == 'erase':
            return
        if other in e.variables:
            yield from self._erase_move(node, other)
        letters = [other] if other not in e.variables else sorted(e.constants)
        partner = bar[symbol]
        for c in letters:
            pinned = self._pin(node.pinned, symbol, c)
            if pinned is None:
                continue
            images = {symbol: PartialImage(Literal((c,)), True),
                      partner: PartialImage(EMPTY, True, Literal((bar[c],)))}
            label = f"{self.alphabet.name(symbol)} := {self.alphabet.name(c)} {self.alphabet.name(symbol)}"
            for rho in self._peeled_rho(e, symbol, c):
                arc = self._arc(e, PartialSolution(images, rho), label)
                if arc is not None:
                    yield arc, pinned

    def _peeled_rho(self, e: EquationE, symbol: int, c: int) -> Iterator[Optional[Dict[int, MonElem]]]:
        """rho' with h(c) rho'(X) = rho(X), one per reachable candidate"""
        if e.rho is None:
            yield None
            return
        head = e.h[c]
        for elem in e.h.reachable():
            if head * elem == e.rho[symbol]:
                rho = dict(e.rho)
                rho[symbol] = elem
                rho[self.alphabet.bar[symbol]] = elem.involute()
                yield rho

    def _finish_move(self, node: SearchNode):
        """Sides already equal: assign every remaining variable a word passing its constraints"""
        e = node.equation
        images = {}
        for x in self.alphabet.representatives(e.variables):
            w = _witness(e, x)
            if w is None:
                return
            images[x] = PartialImage(Literal(w), keep=False)
            images[self.alphabet.bar[x]] = PartialImage(Literal(self.alphabet.involute(w)), keep=False)
        arc = self._arc(e, PartialSolution(images, None if e.rho is None else {}), 'finish')
        if arc is not None:
            yield arc, node.pinned

    def _base_change_moves(self, node: SearchNode):
        """Restrict Gamma to the letters occurring in the sides"""
        e = node.equation
        used = (e.lhs.letters() | e.rhs.letters()) & e.constants
        restricted = frozenset(used | {self.alphabet.bar[a] for a in used})
        if restricted == e.constants:
            return
        h = e.h.restricted(restricted)
        if e.rho is not None:
            reachable = h.reachable()
            if any(m not in reachable for m in e.rho.values()):
                return
        target = e.replace(constants=restricted, h=h)
        arc = Arc(e, target, BaseChange(), Projection(), PartialSolution(rho=e.rho), 'restrict alphabet')
        yield arc, node.pinned

    def _projection_moves(self, node: SearchNode, focus):
        """X := z for a fresh letter z with h(z) = rho(X) and pi(z) a shortest witness"""
        e = node.equation
        kind, symbol, _ = focus
        if e.rho is None or kind == 'finish':
            return
        target_elem = e.rho[symbol]
        w = e.h.reachable().get(target_elem)
        if w is None or len(w) < self.cfg.projection_min_witness:
            return
        if target_elem not in self.projection_letters:
            z, _ = self.alphabet.fresh_pair(CONSTANT, Config.FRESH_PREFIXES['projection'])
            self.projection_letters[target_elem] = z
        z = self.projection_letters[target_elem]
        pi = Projection() if z in e.constants else Projection({z: w})
        bar = self.alphabet.bar
        images = {symbol: PartialImage(Literal((z,)), keep=False),
                  bar[symbol]: PartialImage(Literal((bar[z],)), keep=False)}
        arc = self._arc(e, PartialSolution(images, self._without(e, (symbol, bar[symbol]))),
                        f"{self.alphabet.name(symbol)} := {self.alphabet.name(z)}", pi)
        if arc is not None:
            yield arc, node.pinned


def search_solve(e: EquationE, cfg: Optional[SearchConfig] = None) -> SearchResult:
    """Iterative deepening search over base changes, projections and partial solutions"""
    return MoveSearch(e, cfg or SearchConfig()).run()


# -- orchestration --------------------------------------------------------------

def with_reachable_budget(e: EquationE, budget: int) -> EquationE:
    if e.h.budget == budget:
        return e
    return e.replace(h=ConstraintHom(e.h.n, e.h.images, e.alphabet, budget))


def solve_equation(e: EquationE, cfg: Optional[SearchConfig] = None) -> SearchResult:
    """Solve one equation with the configured strategy; certificates for positive results"""
    cfg = cfg or SearchConfig()
    logger = logging.getLogger(__name__)
    e = with_reachable_budget(e, cfg.reachable_budget)
    mode = RHO_RESIDUAL if e.rho is None else RHO_GUESSED
    if not e.variables:
        status = TRUE if e.is_trivial(cfg.expansion_cap) else FALSE
        result = SearchResult(status, {} if status == TRUE else None, mode=mode)
    elif cfg.strategy == SEARCH:
        result = search_solve(e, cfg)
    else:
        try:
            sigma = oracle_solve(e, cfg.max_var_length, cfg.branch_budget, cfg.expansion_cap)
        except ResourceLimitError as exc:
            logger.info(f"Oracle gave up: {exc}")
            sigma = None
        result = SearchResult(TRUE if sigma is not None else UNKNOWN, sigma, mode=mode)
    if result.status != TRUE or not cfg.build_certificate:
        return result
    try:
        certificate = build_certificate_path(e, result.solution, None, cfg.expansion_cap, cfg.admissibility_c)
    except (CertificateError, ResourceLimitError) as exc:
        logger.warning(f"No certificate for a verified solution: {exc}")
        return SearchResult(result.status, result.solution, result.path, {**result.stats, 'certificate_failures': 1},
                            result.mode, None, result.trace + (f"certificate failed: {exc}",))
    return SearchResult(result.status, result.solution, result.path, result.stats, result.mode, certificate)


def _equations_for(e: EquationE, reducer: FormulaReducer, cfg: SearchConfig) -> Iterator[EquationE]:
    if cfg.rho_mode == RHO_RESIDUAL:
        yield e
    else:
        yield from reducer.rho_candidates(e)


def _system_solution(branch: Branch, sigma: Solution) -> Solution:
    alphabet = branch.equation.alphabet
    full = complete_solution(alphabet, {**branch.cancelled, **sigma})
    return {x: full.get(x, ()) for x in branch.system.variables}


def solve_system(system: MonoidSystem, cfg: Optional[SearchConfig] = None,
                 reducer: Optional[FormulaReducer] = None) -> SearchResult:
    """Solve a monoid system branch by branch; the solution is re-checked on the system itself"""
    cfg = cfg or SearchConfig()
    reducer = reducer or FormulaReducer(system.alphabet)
    return _solve_branches(reducer.reduce_system(system), reducer, cfg,
                           lambda branch, sigma: system.satisfied_by(_system_solution(branch, sigma)))


def _solve_branches(branches: Iterator[Branch], reducer: FormulaReducer, cfg: SearchConfig, accept
                    ) -> SearchResult:
    logger = logging.getLogger(__name__)
    reasons: List[str] = []
    exact = True
    explored = 0
    for branch in branches:
        explored += 1
        if branch.dead:
            reasons.append(branch.reason)
            continue
        equation = with_reachable_budget(branch.equation, cfg.reachable_budget)
        if any(not candidates for candidates in reducer.rho_space(equation).values()):
            reasons.append('empty rho candidates')
            continue
        for e in _equations_for(equation, reducer, cfg):
            result = solve_equation(e, cfg)
            if result.status == TRUE:
                if accept(branch, result.solution):
                    logger.info(f"Branch {explored} solved: {' / '.join(branch.trace) or 'single branch'}")
                    return SearchResult(TRUE, _system_solution(branch, result.solution), result.path,
                                        {'branches': explored, **result.stats}, e.rho_mode, result.certificate,
                                        branch.trace + result.trace)
                logger.warning(f"Branch {explored} produced a solution rejected by re-verification")
            if result.status != FALSE:
                exact = False
    status = FALSE if exact else UNKNOWN
    logger.info(f"{explored} branches explored without a solution, verdict {status}")
    return SearchResult(status, None, (), {'branches': explored}, cfg.rho_mode, None, tuple(reasons))


def solve_group_formula(f: GroupFormula, cfg: Optional[SearchConfig] = None) -> GroupVerdict:
    """Run the reduction pipeline and solve its branches until one re-verifies in the free group"""
    cfg = cfg or SearchConfig()
    reducer = FormulaReducer(f.alphabet)
    found: Dict[str, Mapping[int, Word]] = {}

    def accept(branch: Branch, sigma: Solution) -> bool:
        system_sigma = _system_solution(branch, sigma)
        if not branch.system.satisfied_by(system_sigma):
            return False
        full = complete_solution(f.alphabet, system_sigma)
        assignment = {x: f.alphabet.free_reduce(full.get(x, ())) for x in f.variables}
        if not evaluate_group_formula(f, assignment):
            return False
        found['assignment'] = assignment
        return True

    try:
        result = _solve_branches(reducer.branches(f), reducer, cfg, accept)
    except ResourceLimitError as exc:
        logging.getLogger(__name__).warning(f"Group formula aborted: {exc}")
        raise
    return GroupVerdict(result.status, found.get('assignment'), result.trace, result.certificate, result.mode,
                        () if result.status == TRUE else result.trace)
