# =============================================================================
# File: src/moves.py
# =============================================================================
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Mapping, Optional, Sequence, Tuple

import numpy as np

from config.config import Config
from src.constraints import (AcceptancePair, ConstraintHom, MonElem, exists_selfinvolutive_word_with_image,
                             exists_word_with_image, hom_image)
from src.equation import EquationE, Solution, complete_solution
from src.errors import ContractError
from src.expressions import (EMPTY, ExpExpr, Literal, concat, eq_eval, eval_expr, hom_of_expr, involute_expr,
                             substitute)
from src.words import InvAlphabet, Word

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BaseChange:
    """beta: letters of the new alphabet -> expressions over the old one; unlisted letters map to themselves"""
    images: Mapping[int, ExpExpr] = field(default_factory=dict)

    def image(self, a: int) -> ExpExpr:
        return self.images.get(a, Literal((a,)))


@dataclass(frozen=True)
class Projection:
    """pi: added letters -> words over the old alphabet; identity elsewhere"""
    images: Mapping[int, Word] = field(default_factory=dict)

    def completed(self, alphabet: InvAlphabet) -> Dict[int, Word]:
        full = {a: tuple(w) for a, w in self.images.items()}
        for a, w in self.images.items():
            partner = alphabet.bar[a]
            expected = alphabet.involute(w)
            if full.setdefault(partner, expected) != expected:
                raise ContractError(f"pi is not compatible with the involution at '{alphabet.name(a)}'")
        return full

    def apply(self, alphabet: InvAlphabet, w: Sequence[int]) -> Word:
        full = self.completed(alphabet)
        out = []
        for a in w:
            out.extend(full.get(a, (a,)))
        return tuple(out)


@dataclass(frozen=True)
class PartialImage:
    """delta(X) = prefix X suffix when kept, otherwise the word prefix suffix"""
    prefix: ExpExpr = EMPTY
    keep: bool = True
    suffix: ExpExpr = EMPTY

    def as_expr(self, x: int) -> ExpExpr:
        if self.keep:
            return concat(self.prefix, Literal((x,)), self.suffix)
        return concat(self.prefix, self.suffix)


IDENTITY_IMAGE = PartialImage()


@dataclass(frozen=True)
class PartialSolution:
    """delta on variables plus rho' on the kept ones; unlisted variables are kept unchanged"""
    images: Mapping[int, PartialImage] = field(default_factory=dict)
    rho: Optional[Mapping[int, MonElem]] = None

    def image(self, x: int) -> PartialImage:
        return self.images.get(x, IDENTITY_IMAGE)


@dataclass(frozen=True, eq=False)
class Arc:
    """Arc E -> E' witnessed by delta_*(pi^*(E)) == beta_*(E')"""
    source: EquationE
    target: EquationE
    beta: BaseChange
    pi: Projection
    delta: PartialSolution
    label: str = ''

    def intermediate(self) -> EquationE:
        projected = apply_projection(self.pi, self.source)
        return apply_base_change(self.beta, self.target, projected.constants, projected.h)


# -- solutions ------------------------------------------------------------------

def check_solution(e: EquationE, sigma: Mapping[int, Sequence[int]], cap: int = Config.EXPANSION_CAP) -> bool:
    """sigma(L) = sigma(R), involution compatibility, h sigma = rho and all residual checks"""
    alphabet = e.alphabet
    full = dict(sigma)
    for x, w in sigma.items():
        partner = alphabet.bar[x]
        if partner in full and tuple(full[partner]) != alphabet.involute(w):
            return False
        full[partner] = alphabet.involute(w)
    for x in e.variables:
        if x not in full:
            return False
        if not set(full[x]) <= e.constants:
            return False
    images = {x: hom_image(e.h, full[x]) for x in e.variables}
    if e.rho is not None and any(images[x] != e.rho[x] for x in e.variables):
        return False
    for pair in e.checks:
        if pair.variable is not None and not pair.holds(images[pair.variable]):
            return False
    mapping = {x: Literal(full[x]) for x in e.variables}
    return eq_eval(substitute(e.lhs, mapping), substitute(e.rhs, mapping), cap)


# -- the three moves ------------------------------------------------------------

def apply_base_change(beta: BaseChange, e_prime: EquationE, constants: Iterable[int], h: ConstraintHom,
                      cap: int = Config.EXPANSION_CAP) -> EquationE:
    """beta_*(E') = (Gamma, h, Omega', rho'; beta(L') = beta(R'))"""
    constants = frozenset(constants)
    alphabet = e_prime.alphabet
    for a in e_prime.constants:
        image = beta.image(a)
        if not image.letters() <= constants:
            raise ContractError(f"beta('{alphabet.name(a)}') leaves the target alphabet")
        partner_image = eval_expr(beta.image(alphabet.bar[a]), cap)
        if partner_image != alphabet.involute(eval_expr(image, cap)):
            raise ContractError(f"beta is not compatible with the involution at '{alphabet.name(a)}'")
        if hom_of_expr(h, image) != e_prime.h[a]:
            raise ContractError(f"h' differs from h beta at '{alphabet.name(a)}'")
    mapping = {a: beta.image(a) for a in e_prime.constants if a in beta.images}
    return e_prime.replace(constants=constants, h=h, lhs=substitute(e_prime.lhs, mapping),
                           rhs=substitute(e_prime.rhs, mapping))


def apply_projection(pi: Projection, e: EquationE) -> EquationE:
    """pi^*(E): sides unchanged, alphabet enlarged, h replaced by h pi"""
    alphabet = e.alphabet
    full = pi.completed(alphabet)
    added = {}
    for a, w in full.items():
        if a in e.constants:
            if w != (a,):
                raise ContractError(f"pi must be the identity on '{alphabet.name(a)}'")
            continue
        if not set(w) <= e.constants:
            raise ContractError(f"pi('{alphabet.name(a)}') leaves the source alphabet")
        added[a] = hom_image(e.h, w)
    if not added:
        return e
    return e.replace(constants=e.constants | frozenset(added), h=e.h.extended(added))


def _transfer_check(pair: AcceptancePair, prefix: MonElem, suffix: MonElem) -> AcceptancePair:
    initial = (prefix.full().T.astype(np.int64) @ pair.initial.astype(np.int64)) > 0
    final = (suffix.full().astype(np.int64) @ pair.final.astype(np.int64)) > 0
    return AcceptancePair(initial, final, pair.positive, pair.variable)


def apply_partial_solution(delta: PartialSolution, e: EquationE, cap: int = Config.EXPANSION_CAP) -> EquationE:
    """delta_*(E): sides rewritten, kept variables get rho'"""
    alphabet = e.alphabet
    kept = set()
    images: Dict[int, Tuple[MonElem, Optional[MonElem]]] = {}
    for x in e.variables:
        image = delta.image(x)
        partner = delta.image(alphabet.bar[x])
        if image.keep != partner.keep:
            raise ContractError(f"delta keeps '{alphabet.name(x)}' but not its partner")
        if not (image.prefix.letters() | image.suffix.letters()) <= e.constants:
            raise ContractError(f"delta('{alphabet.name(x)}') uses letters outside Gamma")
        left = eval_expr(image.as_expr(x), cap)
        right = eval_expr(partner.as_expr(alphabet.bar[x]), cap)
        if right != alphabet.involute(left):
            raise ContractError(f"delta is not compatible with the involution at '{alphabet.name(x)}'")
        images[x] = (hom_of_expr(e.h, image.prefix), hom_of_expr(e.h, image.suffix))
        if image.keep:
            kept.add(x)
    rho = None
    if e.rho is not None:
        new_rho = delta.rho if delta.rho is not None else {}
        rho = {}
        for x in e.variables:
            prefix, suffix = images[x]
            image = delta.image(x)
            if x in kept:
                inner = new_rho.get(x)
                if inner is None and not image.prefix.length and not image.suffix.length:
                    inner = e.rho[x]
                if inner is None or prefix * inner * suffix != e.rho[x]:
                    raise ContractError(f"rho('{alphabet.name(x)}') is not h(u) rho'(X) h(v)")
                rho[x] = inner
            elif prefix * suffix != e.rho[x]:
                raise ContractError(f"rho('{alphabet.name(x)}') differs from h(delta(X))")
        for x in kept:
            if rho[alphabet.bar[x]] != rho[x].involute():
                raise ContractError(f"rho' is not compatible with the involution at '{alphabet.name(x)}'")
    checks = []
    for pair in e.checks:
        x = pair.variable
        if x is None or x not in images:
            checks.append(pair)
            continue
        prefix, suffix = images[x]
        if x in kept:
            checks.append(_transfer_check(pair, prefix, suffix))
        elif not pair.holds(prefix * suffix):
            raise ContractError(f"delta('{alphabet.name(x)}') violates a residual acceptance check")
    mapping = {x: delta.image(x).as_expr(x) for x in e.variables if x in delta.images}
    return e.replace(variables=frozenset(kept), rho=rho, checks=tuple(checks),
                     lhs=substitute(e.lhs, mapping), rhs=substitute(e.rhs, mapping))


def projection_witness(e: EquationE, e_prime: EquationE) -> Optional[Projection]:
    """pi with shortest witnesses for every letter of Gamma' outside Gamma, or None"""
    alphabet = e.alphabet
    if not e.constants <= e_prime.constants:
        return None
    h = e.h.restricted(e.constants)
    images = {}
    for a in sorted(e_prime.constants - e.constants):
        if alphabet.bar[a] in images:
            continue
        target = e_prime.h[a]
        if alphabet.is_fixed(a):
            w = exists_selfinvolutive_word_with_image(h, target)
        else:
            w = exists_word_with_image(h, target)
        if w is None:
            return None
        images[a] = w
    return Projection(images)


def projection_exists(e: EquationE, e_prime: EquationE, cap: int = Config.EXPANSION_CAP) -> bool:
    """Same Omega, rho and sides, and h'(Gamma') inside h(Gamma*)"""
    if e.variables != e_prime.variables:
        return False
    if not (eq_eval(e.lhs, e_prime.lhs, cap) and eq_eval(e.rhs, e_prime.rhs, cap)):
        return False
    if (e.rho is None) != (e_prime.rho is None):
        return False
    if e.rho is not None and any(e.rho[x] != e_prime.rho[x] for x in e.variables):
        return False
    if any(e.h[a] != e_prime.h[a] for a in e.constants if a in e_prime.h):
        return False
    return projection_witness(e, e_prime) is not None


# -- arcs -----------------------------------------------------------------------

def check_arc(arc: Arc, cap: int = Config.EXPANSION_CAP) -> Optional[str]:
    """None when the arc verifies, otherwise the reason it does not"""
    try:
        projected = apply_projection(arc.pi, arc.source)
    except ContractError as exc:
        return f"projection: {exc}"
    try:
        shifted = apply_partial_solution(arc.delta, projected, cap)
    except ContractError as exc:
        return f"partial solution: {exc}"
    try:
        based = apply_base_change(arc.beta, arc.target, projected.constants, projected.h, cap)
    except ContractError as exc:
        return f"base change: {exc}"
    if shifted.variables != arc.target.variables:
        return "partial solution: kept variables differ from the target variables"
    if not eq_eval(shifted.lhs, based.lhs, cap):
        return "sides: left sides of delta(pi(E)) and beta(E') differ"
    if not eq_eval(shifted.rhs, based.rhs, cap):
        return "sides: right sides of delta(pi(E)) and beta(E') differ"
    if shifted.rho is not None and arc.target.rho is not None:
        for x in arc.target.variables:
            if shifted.rho[x] != arc.target.rho[x]:
                return f"rho: rho' differs at '{arc.source.alphabet.name(x)}'"
    for pair in shifted.checks:
        x = pair.variable
        if x is None or any(_same_check(pair, other) for other in arc.target.checks):
            continue
        if arc.target.rho is None or x not in arc.target.rho or not pair.holds(arc.target.rho[x]):
            return f"rho: a residual check on '{arc.source.alphabet.name(x)}' is neither kept nor met by rho'"
    return None


def _same_check(pair: AcceptancePair, other: AcceptancePair) -> bool:
    return (pair.variable == other.variable and pair.positive == other.positive
            and np.array_equal(pair.initial, other.initial) and np.array_equal(pair.final, other.final))


def verify_arc(arc: Arc, cap: int = Config.EXPANSION_CAP) -> bool:
    reason = check_arc(arc, cap)
    if reason is not None:
        logger.debug(f"Arc '{arc.label}' rejected: {reason}")
    return reason is None


def pull_back(arc: Arc, sigma_prime: Mapping[int, Sequence[int]], cap: int = Config.EXPANSION_CAP) -> Solution:
    """sigma = pi(beta sigma') delta, a solution of the source"""
    alphabet = arc.source.alphabet
    target_sigma = complete_solution(alphabet, sigma_prime)
    mapping = {a: arc.beta.images[a] for a in arc.beta.images}
    middle = {x: eval_expr(substitute(Literal(w), mapping), cap) for x, w in target_sigma.items()}
    sigma: Solution = {}
    for x in arc.source.variables:
        image = arc.delta.image(x)
        word = eval_expr(image.prefix, cap)
        if image.keep:
            word += middle[x]
        word += eval_expr(image.suffix, cap)
        sigma[x] = arc.pi.apply(alphabet, word)
    return sigma


def pull_back_path(path: Sequence[Arc], sigma_final: Mapping[int, Sequence[int]],
                   cap: int = Config.EXPANSION_CAP) -> Solution:
    sigma = dict(sigma_final)
    for arc in reversed(path):
        sigma = pull_back(arc, sigma, cap)
    return sigma


def remove_empty_variables(e: EquationE, sigma: Mapping[int, Sequence[int]]
                           ) -> Tuple[Arc, EquationE, Solution]:
    """Arc deleting the variables that sigma maps to the empty word"""
    full = complete_solution(e.alphabet, sigma)
    images = {x: PartialImage(keep=False) for x in e.variables if len(full[x]) == 0}
    kept = e.variables - frozenset(images)
    rho = None if e.rho is None else {x: e.rho[x] for x in kept}
    delta = PartialSolution(images, rho)
    target = apply_partial_solution(delta, e)
    arc = Arc(e, target, BaseChange(), Projection(), delta, label='remove-empty')
    return arc, target, {x: full[x] for x in kept}
