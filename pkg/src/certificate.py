# =============================================================================
# File: src/certificate.py
# =============================================================================
import json
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from config.config import Config
from src.constraints import AcceptancePair, ConstraintHom, MonElem, hom_image
from src.equation import RHO_GUESSED, EquationE, Solution, complete_solution
from src.errors import CertificateError, ContractError, ParseError
from src.expressions import EMPTY, ExpExpr, parse_expression, render_expression
from src.factorization import (BlockAlphabet, LTransformation, body_blocks, body_offsets, compress_l_factor,
                               head_body_tail, l_factorize, l_transformation, solution_at_level)
from src.intervals import compute_cuts, maximal_free_factorization
from src.moves import (Arc, BaseChange, PartialImage, PartialSolution, Projection, apply_partial_solution,
                       check_arc, check_solution, pull_back_path, remove_empty_variables)
from src.periodicity import exponent_of_periodicity
from src.words import InvAlphabet

FORMAT_VERSION = 1


@dataclass(frozen=True, eq=False)
class CertPath:
    """Verified arcs E0 -> E1 -> ... ending in a variable free equation"""
    equations: Tuple[EquationE, ...]
    arcs: Tuple[Arc, ...]
    solutions: Tuple[Solution, ...] = ()
    levels: Tuple[int, ...] = ()
    bounds: Mapping[str, Tuple[float, float]] = field(default_factory=dict)

    @property
    def source(self) -> EquationE:
        return self.equations[0]

    @property
    def final(self) -> EquationE:
        return self.equations[-1]

    def __len__(self) -> int:
        return len(self.arcs)


def level_schedule(m0: int, policy: str = Config.LEVEL_SCHEDULE) -> List[int]:
    """Levels 1 = l1 < l2 <= 2 l1 < ... up to m0"""
    if policy != 'doubling':
        raise ContractError(f"Unknown level schedule '{policy}'")
    levels = [1]
    while levels[-1] < m0:
        levels.append(min(2 * levels[-1], m0))
    return levels


def _check_schedule(levels: Sequence[int]):
    if not levels or levels[0] < 1:
        raise ContractError("A level schedule starts at l >= 1")
    for coarse, fine in zip(levels, levels[1:]):
        if not coarse < fine <= 2 * coarse:
            raise ContractError(f"Level {fine} does not refine level {coarse} (need l < l' <= 2l)")


class PathBuilder:
    """Accumulates arcs, verifying each one and the solution carried along"""

    def __init__(self, source: EquationE, sigma: Solution, cap: int = Config.EXPANSION_CAP):
        self.equations: List[EquationE] = [source]
        self.solutions: List[Solution] = [sigma]
        self.arcs: List[Arc] = []
        self.cap = cap
        self.logger = logging.getLogger(__name__)

    @property
    def current(self) -> EquationE:
        return self.equations[-1]

    @property
    def solution(self) -> Solution:
        return self.solutions[-1]

    def push(self, arc: Arc, sigma: Mapping[int, Sequence[int]]):
        reason = check_arc(arc, self.cap)
        if reason is not None:
            raise CertificateError(reason, step=arc.label)
        sigma = {x: tuple(w) for x, w in sigma.items()}
        if not check_solution(arc.target, sigma, self.cap):
            raise CertificateError("the carried solution does not solve the target", step=arc.label)
        self.arcs.append(arc)
        self.equations.append(arc.target)
        self.solutions.append(sigma)
        self.logger.debug(f"Arc '{arc.label}' verified: {arc.target!r}")


def _solving_arc(e: EquationE, sigma: Solution) -> Arc:
    """Substitute the whole solution; the target has no variables"""
    images = {x: PartialImage(compress_l_factor(sigma[x]), keep=False) for x in e.variables}
    delta = PartialSolution(images, None if e.rho is None else {})
    target = apply_partial_solution(delta, e)
    return Arc(e, target, BaseChange(), Projection(), delta, label='substitute')


def _initial_arc(e0: EquationE, sigma: Solution, lt: LTransformation, registry: BlockAlphabet) -> Arc:
    """E0 -> E_l with beta(u, w, v) = w and delta(X) = head X tail"""
    beta = {a: compress_l_factor(registry.word(a)) for a in lt.equation.constants if registry.is_block(a)}
    images = {}
    for x in e0.variables:
        word = sigma[x]
        if x in lt.equation.variables:
            head, _, tail = head_body_tail(l_factorize(word, lt.level, lt.critical))
            images[x] = PartialImage(compress_l_factor(head.w), True, compress_l_factor(tail.w))
        else:
            images[x] = PartialImage(compress_l_factor(word), keep=False)
    return Arc(e0, lt.equation, BaseChange(beta), Projection(), PartialSolution(images, lt.equation.rho),
               label=f'level-{lt.level}')


def _refining_arc(coarse: LTransformation, fine: LTransformation, sigma: Solution,
                  registry: BlockAlphabet) -> Arc:
    """E_l -> E_l' with beta mapping an l'-block to its minimal cover by l-blocks"""
    alphabet = coarse.equation.alphabet
    cover: Dict[int, Tuple[int, ...]] = {}
    for j, letter in enumerate(fine.block_letters):
        if letter in cover:
            continue
        start, end = fine.factorization.span(j)
        cover[letter] = tuple(coarse.block_letters[i] for i in range(coarse.factorization.k)
                              if start <= coarse.factorization.starts[i] < end)
    beta: Dict[int, Tuple[int, ...]] = {}
    for a in fine.equation.constants:
        if not registry.is_block(a):
            continue
        if a in cover:
            beta[a] = cover[a]
        elif alphabet.bar[a] in cover:
            beta[a] = alphabet.involute(cover[alphabet.bar[a]])
        else:
            raise CertificateError(f"no cover for block letter '{alphabet.name(a)}'",
                                   step=f'level-{coarse.level}-to-{fine.level}')

    images = {}
    referenced = set()
    for seq in beta.values():
        referenced.update(seq)
    for x in coarse.equation.variables:
        blocks = body_blocks(sigma[x], coarse.level, coarse.critical)
        letters = [(start, registry.letter(block)) for start, block in blocks]
        referenced.update(letter for _, letter in letters)
        if x in fine.equation.variables:
            lo, hi = body_offsets(l_factorize(sigma[x], fine.level, fine.critical))
            prefix = [letter for start, letter in letters if start < lo]
            suffix = [letter for start, letter in letters if start >= hi]
            images[x] = PartialImage(compress_l_factor(prefix), True, compress_l_factor(suffix))
        else:
            images[x] = PartialImage(compress_l_factor([letter for _, letter in letters]), keep=False)
    pi = {a: registry.word(a) for a in referenced if a not in coarse.equation.constants}
    return Arc(coarse.equation, fine.equation, BaseChange({a: compress_l_factor(s) for a, s in beta.items()}),
               Projection(pi), PartialSolution(images, fine.equation.rho),
               label=f'level-{coarse.level}-to-{fine.level}')


def build_certificate_path(e0: EquationE, sigma: Mapping[int, Sequence[int]],
                           schedule: Optional[Sequence[int]] = None, cap: int = Config.EXPANSION_CAP,
                           admissibility_c: float = Config.ADMISSIBILITY_C) -> CertPath:
    """Arcs from E0 to a variable free equation, built from a known solution"""
    logger = logging.getLogger(__name__)
    if not check_solution(e0, sigma, cap):
        raise ContractError("build_certificate_path needs a solution of E0")
    alphabet = e0.alphabet
    full = complete_solution(alphabet, sigma)
    start = {x: full[x] for x in e0.variables}
    if not e0.variables and e0.is_trivial(cap):
        return CertPath((e0,), (), (start,))
    budget = admissibility_c * e0.input_size() ** 4
    builder = PathBuilder(e0, start, cap)
    bounds: Dict[str, Tuple[float, float]] = {}

    if e0.rho is None or e0.checks:
        rho = {x: hom_image(e0.h, full[x]) for x in e0.variables}
        # rho = h(sigma) of a checked sigma, so every dropped check holds on rho (check_arc re-tests them)
        target = e0.replace(rho=rho, checks=(), rho_mode=RHO_GUESSED)
        builder.push(Arc(e0, target, BaseChange(), Projection(), PartialSolution(rho=rho), label='fix-rho'), start)

    if any(len(builder.solution[x]) == 0 for x in builder.current.variables):
        arc, _, kept = remove_empty_variables(builder.current, builder.solution)
        builder.push(arc, kept)

    levels: List[int] = []
    if builder.current.variables:
        cut_data = compute_cuts(builder.current, builder.solution, cap)
        if cut_data.m0 < 3 or cut_data.d <= 2:
            builder.push(_solving_arc(builder.current, builder.solution), {})
        else:
            free = maximal_free_factorization(builder.current, builder.solution, cut_data)
            builder.push(free.arc, {x: free.solution[x] for x in free.equation.variables})
            bounds['new_letters'] = (len(free.new_letters), 2 * cut_data.d - 2)
            bounds['exponent'] = (exponent_of_periodicity(free.w0_prime), exponent_of_periodicity(cut_data.w0))
            levels = _run_levels(builder, schedule, bounds, budget, cap)

    if builder.current.variables:
        builder.push(_solving_arc(builder.current, builder.solution), {})
    if not builder.current.is_trivial(cap):
        raise CertificateError("final equation is not trivial", step='final')
    logger.info(f"Certificate path with {len(builder.arcs)} arcs, levels {levels}")
    return CertPath(tuple(builder.equations), tuple(builder.arcs), tuple(builder.solutions), tuple(levels), bounds)


def _run_levels(builder: PathBuilder, schedule: Optional[Sequence[int]], bounds: Dict[str, Tuple[float, float]],
                budget: float, cap: int) -> List[int]:
    e0, sigma = builder.current, builder.solution
    full = complete_solution(e0.alphabet, sigma)
    registry = BlockAlphabet(e0.alphabet, e0.h)
    cut_data = compute_cuts(e0, sigma, cap)
    levels = list(schedule) if schedule is not None else level_schedule(cut_data.m0)
    _check_schedule(levels)
    done = []
    previous: Optional[LTransformation] = None
    for level in levels:
        lt = l_transformation(e0, sigma, level, registry, cut_data, budget)
        if previous is None:
            arc = _initial_arc(e0, full, lt, registry)
        else:
            arc = _refining_arc(previous, lt, full, registry)
        builder.push(arc, solution_at_level(lt))
        done.append(level)
        if level == 1:
            bounds['level_one_length'] = (lt.equation.d, 3 * cut_data.d)
        previous = lt
        if not lt.equation.variables:
            break
    return done


# -- serialization --------------------------------------------------------------

def _rows(matrix: np.ndarray) -> List[str]:
    return [''.join('1' if bit else '0' for bit in row) for row in matrix]


def _matrix(rows: Sequence[str], n: int) -> np.ndarray:
    if n == 0:
        return np.zeros((0, 0), dtype=bool)
    return np.array([[c == '1' for c in row] for row in rows], dtype=bool)


def _elem_to_json(elem: MonElem) -> dict:
    return {'a': _rows(elem.a), 'b': _rows(elem.b)}


def _elem_from_json(data: dict, n: int) -> MonElem:
    return MonElem(_matrix(data['a'], n), _matrix(data['b'], n))


def _vector(bits: str) -> np.ndarray:
    return np.array([c == '1' for c in bits], dtype=bool)


def _equation_to_json(e: EquationE) -> dict:
    name = e.alphabet.name
    return {
        'constants': sorted(name(a) for a in e.constants),
        'variables': sorted(name(x) for x in e.variables),
        'lhs': render_expression(e.lhs, e.alphabet),
        'rhs': render_expression(e.rhs, e.alphabet),
        'rho': None if e.rho is None else {name(x): _elem_to_json(e.rho[x]) for x in e.variables},
        'rho_mode': e.rho_mode,
        'checks': [{'initial': ''.join('1' if bit else '0' for bit in pair.initial),
                    'final': ''.join('1' if bit else '0' for bit in pair.final),
                    'positive': pair.positive,
                    'variable': None if pair.variable is None else name(pair.variable)} for pair in e.checks]
    }


def _arc_to_json(arc: Arc) -> dict:
    alphabet = arc.source.alphabet
    delta = {alphabet.name(x): {'prefix': render_expression(image.prefix, alphabet), 'keep': image.keep,
                                'suffix': render_expression(image.suffix, alphabet)}
             for x, image in arc.delta.images.items()}
    return {
        'label': arc.label,
        'beta': {alphabet.name(a): render_expression(expr, alphabet) for a, expr in arc.beta.images.items()},
        'pi': {alphabet.name(a): alphabet.render_word(w) for a, w in arc.pi.images.items()},
        'delta': delta,
        'delta_rho': None if arc.delta.rho is None else {alphabet.name(x): _elem_to_json(m)
                                                          for x, m in arc.delta.rho.items()}
    }


def certificate_to_json(path: CertPath) -> dict:
    """JSON document: universe alphabet, global letter images, equations and arcs"""
    alphabet = path.source.alphabet
    letters = {}
    for e in path.equations:
        for a in e.constants:
            letters.setdefault(alphabet.name(a), _elem_to_json(e.h[a]))
    for arc in path.arcs:
        for a, w in arc.pi.completed(alphabet).items():
            letters.setdefault(alphabet.name(a), _elem_to_json(hom_image(arc.source.h, w)))
    return {
        'version': FORMAT_VERSION,
        'n': path.source.n,
        'alphabet': [{'name': alphabet.names[a], 'bar': alphabet.bar[a], 'kind': alphabet.kinds[a]}
                     for a in range(len(alphabet))],
        'letters': letters,
        'equations': [_equation_to_json(e) for e in path.equations],
        'arcs': [_arc_to_json(arc) for arc in path.arcs],
        'levels': list(path.levels),
        'bounds': {key: list(value) for key, value in path.bounds.items()}
    }


def write_certificate(path: CertPath, filename: str):
    with open(filename, 'w') as handle:
        json.dump(certificate_to_json(path), handle, indent=1)


def _alphabet_from_json(entries: Sequence[dict]) -> InvAlphabet:
    alphabet = InvAlphabet()
    for letter, entry in enumerate(entries):
        if letter < len(alphabet):
            continue
        if entry['bar'] == letter:
            alphabet.add_fixed(entry['name'])
        elif entry['bar'] == letter + 1:
            alphabet.add_pair(entry['name'], entry['kind'], entries[letter + 1]['name'])
        else:
            raise ParseError(f"Letter '{entry['name']}' is not followed by its bar partner")
    return alphabet


def _equation_from_json(data: dict, alphabet: InvAlphabet, table: Mapping[int, MonElem], n: int) -> EquationE:
    constants = frozenset(alphabet.letter(name) for name in data['constants'])
    variables = frozenset(alphabet.letter(name) for name in data['variables'])
    h = ConstraintHom(n, {a: table[a] for a in constants}, alphabet)
    rho = None
    if data['rho'] is not None:
        rho = {alphabet.letter(name): _elem_from_json(m, n) for name, m in data['rho'].items()}
    checks = tuple(AcceptancePair(_vector(c['initial']), _vector(c['final']), c['positive'],
                                  None if c['variable'] is None else alphabet.letter(c['variable']))
                   for c in data['checks'])
    return EquationE(alphabet, constants, variables, h, rho, parse_expression(data['lhs'], alphabet),
                     parse_expression(data['rhs'], alphabet), checks, data['rho_mode'])


def _parse_or_empty(text: str, alphabet: InvAlphabet) -> ExpExpr:
    return parse_expression(text, alphabet) if text.strip() else EMPTY


def certificate_from_json(data: dict) -> CertPath:
    """Rebuild equations and arcs from a certificate document"""
    if data.get('version') != FORMAT_VERSION:
        raise ParseError(f"Unsupported certificate version {data.get('version')}")
    n = data['n']
    alphabet = _alphabet_from_json(data['alphabet'])
    table = {alphabet.letter(name): _elem_from_json(m, n) for name, m in data['letters'].items()}
    equations = tuple(_equation_from_json(e, alphabet, table, n) for e in data['equations'])
    if len(data['arcs']) != len(equations) - 1:
        raise ParseError("A certificate with k arcs needs k + 1 equations")
    arcs = []
    for i, entry in enumerate(data['arcs']):
        beta = BaseChange({alphabet.letter(a): _parse_or_empty(text, alphabet) for a, text in entry['beta'].items()})
        pi = Projection({alphabet.letter(a): alphabet.parse_word(text) for a, text in entry['pi'].items()})
        images = {alphabet.letter(x): PartialImage(_parse_or_empty(d['prefix'], alphabet), d['keep'],
                                                   _parse_or_empty(d['suffix'], alphabet))
                  for x, d in entry['delta'].items()}
        rho = None
        if entry['delta_rho'] is not None:
            rho = {alphabet.letter(x): _elem_from_json(m, n) for x, m in entry['delta_rho'].items()}
        arcs.append(Arc(equations[i], equations[i + 1], beta, pi, PartialSolution(images, rho), entry['label']))
    bounds = {key: tuple(value) for key, value in data.get('bounds', {}).items()}
    return CertPath(equations, tuple(arcs), (), tuple(data.get('levels', ())), bounds)


def read_certificate(filename: str) -> CertPath:
    with open(filename) as handle:
        try:
            data = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ParseError(f"Certificate is not valid JSON: {exc.msg}", line=exc.lineno) from exc
    return certificate_from_json(data)


def verify_certificate(path: CertPath, cap: int = Config.EXPANSION_CAP) -> Solution:
    """Replay every arc, check the final equation and return the pulled back solution of the source"""
    logger = logging.getLogger(__name__)
    for index, arc in enumerate(path.arcs):
        reason = check_arc(arc, cap)
        if reason is not None:
            raise CertificateError(reason, step=f"arc {index} ({arc.label})")
    if path.final.variables or not path.final.is_trivial(cap):
        raise CertificateError("final equation is not trivial", step='final')
    sigma = pull_back_path(path.arcs, {}, cap)
    if not check_solution(path.source, sigma, cap):
        raise CertificateError("pulled back solution does not solve the source", step='pull-back')
    logger.info(f"Certificate with {len(path.arcs)} arcs verified")
    return sigma


def verify_certificate_file(filename: str, cap: int = Config.EXPANSION_CAP) -> Tuple[CertPath, Solution]:
    path = read_certificate(filename)
    return path, verify_certificate(path, cap)
