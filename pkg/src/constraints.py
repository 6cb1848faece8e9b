# =============================================================================
# File: src/constraints.py
# =============================================================================
import logging
from collections import deque
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.special import factorial

from config.config import Config
from src.automata import Nfa, bool_product
from src.errors import ContractError, ResourceLimitError
from src.words import InvAlphabet, Word


class MonElem:
    """Block diagonal Boolean matrix diag(A, B) of the monoid with involution"""

    def __init__(self, a, b):
        self.a = np.array(a, dtype=bool)
        self.b = np.array(b, dtype=bool)
        if self.a.shape != self.b.shape or self.a.ndim != 2 or self.a.shape[0] != self.a.shape[1]:
            raise ContractError(f"Blocks must be square of equal size, got {self.a.shape} and {self.b.shape}")
        self.a.setflags(write=False)
        self.b.setflags(write=False)
        self._key = (self.a.shape[0], np.packbits(self.a).tobytes(), np.packbits(self.b).tobytes())

    @classmethod
    def identity(cls, n: int) -> 'MonElem':
        eye = np.eye(n, dtype=bool)
        return cls(eye, eye)

    @property
    def n(self) -> int:
        return self.a.shape[0]

    def key(self) -> tuple:
        return self._key

    def __mul__(self, other: 'MonElem') -> 'MonElem':
        return MonElem(bool_product(self.a, other.a), bool_product(self.b, other.b))

    def __pow__(self, k: int) -> 'MonElem':
        """Fast exponentiation"""
        if k < 0:
            raise ContractError("Negative exponent in a monoid")
        result = MonElem.identity(self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def involute(self) -> 'MonElem':
        """diag(A, B) maps to diag(B transposed, A transposed)"""
        return MonElem(self.b.T, self.a.T)

    def full(self) -> np.ndarray:
        n = self.n
        m = np.zeros((2 * n, 2 * n), dtype=bool)
        m[:n, :n] = self.a
        m[n:, n:] = self.b
        return m

    def __eq__(self, other) -> bool:
        return isinstance(other, MonElem) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def to_text(self) -> str:
        """0/1 grid of the full 2n x 2n matrix"""
        return '\n'.join(''.join('1' if bit else '0' for bit in row) for row in self.full())

    def __repr__(self) -> str:
        return f"MonElem(n={self.n})"


@dataclass(frozen=True, eq=False)
class AcceptancePair:
    """Vectors I, F of length 2n with w in P iff I^T h(w) F = 1"""
    initial: np.ndarray
    final: np.ndarray
    positive: bool = True
    variable: Optional[int] = None

    def value(self, elem: MonElem) -> bool:
        n = elem.n
        top = bool(((self.initial[:n].astype(np.int64) @ elem.a.astype(np.int64)) @ self.final[:n]) > 0)
        bottom = bool(((self.initial[n:].astype(np.int64) @ elem.b.astype(np.int64)) @ self.final[n:]) > 0)
        return top or bottom

    def holds(self, elem: MonElem) -> bool:
        """Membership value with the polarity applied"""
        return self.value(elem) == self.positive

    def involuted(self, alphabet: InvAlphabet) -> 'AcceptancePair':
        """The same check expressed on the bar partner of the target variable"""
        n = len(self.initial) // 2
        swap_final = np.concatenate([self.final[n:], self.final[:n]])
        swap_initial = np.concatenate([self.initial[n:], self.initial[:n]])
        target = None if self.variable is None else alphabet.bar[self.variable]
        return AcceptancePair(swap_final, swap_initial, self.positive, target)

    def retarget(self, variable: int, positive: bool = True) -> 'AcceptancePair':
        return AcceptancePair(self.initial, self.final, positive, variable)


class ConstraintHom:
    """Homomorphism h from constants into the matrix monoid, with h(bar a) = involute(h(a))"""

    def __init__(self, n: int, images: Mapping[int, MonElem], alphabet: InvAlphabet,
                 budget: int = Config.REACHABLE_BUDGET):
        self.n = n
        self.images: Dict[int, MonElem] = dict(images)
        self.alphabet = alphabet
        self.budget = budget
        self.logger = logging.getLogger(__name__)
        self._reachable: Optional[Dict[MonElem, Word]] = None
        for a, elem in self.images.items():
            if elem.n != n:
                raise ContractError(f"Image of '{alphabet.name(a)}' has dimension {elem.n}, expected {n}")
            partner = alphabet.bar[a]
            if partner not in self.images:
                raise ContractError(f"Image of '{alphabet.name(partner)}' missing")
            if self.images[partner] != elem.involute():
                raise ContractError(f"h is not compatible with the involution at '{alphabet.name(a)}'")

    @property
    def letters(self) -> List[int]:
        return sorted(self.images)

    def unit(self) -> MonElem:
        return MonElem.identity(self.n)

    def __getitem__(self, letter: int) -> MonElem:
        return self.images[letter]

    def __contains__(self, letter: int) -> bool:
        return letter in self.images

    def image(self, w: Sequence[int]) -> MonElem:
        return hom_image(self, w)

    def restricted(self, letters: Iterable[int]) -> 'ConstraintHom':
        return ConstraintHom(self.n, {a: self.images[a] for a in letters}, self.alphabet, self.budget)

    def extended(self, images: Mapping[int, MonElem]) -> 'ConstraintHom':
        merged = dict(self.images)
        merged.update(images)
        return ConstraintHom(self.n, merged, self.alphabet, self.budget)

    def reachable(self) -> Dict[MonElem, Word]:
        """Breadth first map from each element of h(letters*) to a shortest word"""
        if self._reachable is not None:
            return self._reachable
        unit = self.unit()
        found: Dict[MonElem, Word] = {unit: ()}
        queue = deque([unit])
        letters = self.letters
        while queue:
            elem = queue.popleft()
            word = found[elem]
            for a in letters:
                nxt = elem * self.images[a]
                if nxt not in found:
                    if len(found) >= self.budget:
                        raise ResourceLimitError(f"Reachable submonoid exceeds {self.budget} elements",
                                                 stage='constraints')
                    found[nxt] = word + (a,)
                    queue.append(nxt)
        self.logger.debug(f"Reachable submonoid has {len(found)} elements (n={self.n})")
        self._reachable = found
        return found


def hom_image(h: ConstraintHom, w: Sequence[int]) -> MonElem:
    """Product of letter images; the empty word maps to the unit"""
    result = h.unit()
    for a in w:
        result = result * h.images[a]
    return result


def hom_from_automata(alphabet: InvAlphabet, automata: Sequence[Nfa], letters: Optional[Iterable[int]] = None,
                      targets: Optional[Sequence[Tuple[Optional[int], bool]]] = None
                      ) -> Tuple[ConstraintHom, List[AcceptancePair], int]:
    """Union of the state spaces; h(a) = diag(g(a), g(bar a) transposed)"""
    letters = sorted(alphabet.constants() if letters is None else letters)
    n = sum(nfa.n_states for nfa in automata)
    g = {a: np.zeros((n, n), dtype=bool) for a in letters}
    pairs = []
    offset = 0
    for j, nfa in enumerate(automata):
        if nfa.has_epsilon():
            raise ContractError("hom_from_automata needs epsilon-free automata")
        for p, a, q in nfa.transitions:
            if a in g:
                g[a][offset + p, offset + q] = True
        initial = np.zeros(2 * n, dtype=bool)
        final = np.zeros(2 * n, dtype=bool)
        initial[[offset + p for p in nfa.initial]] = True
        final[[offset + p for p in nfa.final]] = True
        variable, positive = targets[j] if targets is not None else (None, True)
        pairs.append(AcceptancePair(initial, final, positive, variable))
        offset += nfa.n_states
    images = {a: MonElem(g[a], g[alphabet.bar[a]].T) for a in letters}
    return ConstraintHom(n, images, alphabet), pairs, n


def exists_word_with_image(h: ConstraintHom, target: MonElem) -> Optional[Word]:
    """Shortest w with h(w) = target, or None"""
    return h.reachable().get(target)


def exists_selfinvolutive_word_with_image(h: ConstraintHom, target: MonElem) -> Optional[Word]:
    """Search w = u a bar(u) with a empty or a fixed constant and h(w) = target"""
    middles: List[Optional[int]] = [None] + [a for a in h.letters if h.alphabet.is_fixed(a)]
    for elem, u in h.reachable().items():
        mirrored = elem.involute()
        for a in middles:
            centre = elem if a is None else elem * h.images[a]
            if centre * mirrored == target:
                middle = () if a is None else (a,)
                return u + middle + h.alphabet.involute(u)
    return None


def idempotent_exponent(n: int, cap: int = Config.FACTORIAL_N_CAP) -> int:
    """c(M) = max(3, n!), the exponent with s^c = s^2c for every s"""
    if n < 1:
        raise ContractError("idempotent_exponent needs n >= 1")
    if n > cap:
        raise ResourceLimitError(f"n = {n} exceeds the factorial cap {cap}", stage='constraints')
    return max(3, int(factorial(n, exact=True)))


def exponent_signature(alpha: int, c: int) -> int:
    """Smallest exponent with the same image as alpha in a monoid where s^c = s^2c"""
    if alpha < c:
        return alpha
    return c + (alpha % c)
