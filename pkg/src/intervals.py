# =============================================================================
# File: src/intervals.py
# =============================================================================
import logging
from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Mapping, Sequence, Set, Tuple

from config.config import Config
from src.constraints import hom_image
from src.equation import EquationE, Solution, apply_solution, complete_solution
from src.errors import ContractError
from src.moves import Arc, BaseChange, PartialSolution, Projection, check_solution
from src.words import CONSTANT, InvAlphabet, Interval, Word


@dataclass(frozen=True)
class Occurrence:
    """Symbol x_i of L R together with its interval [l(i), r(i)] in w0"""
    symbol: int
    left: int
    right: int


@dataclass(frozen=True)
class CutData:
    w0: Word
    occurrences: Tuple[Occurrence, ...]
    g: int
    cuts: FrozenSet[int]

    @property
    def m0(self) -> int:
        return len(self.w0)

    @property
    def d(self) -> int:
        return len(self.occurrences)


def compute_cuts(e: EquationE, sigma: Mapping[int, Sequence[int]], cap: int = Config.EXPANSION_CAP) -> CutData:
    """Positions of w0 = sigma(L) = sigma(R) where an occurrence starts or ends"""
    if not check_solution(e, sigma, cap):
        raise ContractError("compute_cuts needs a solution of the equation")
    alphabet = e.alphabet
    full = complete_solution(alphabet, sigma)
    left, right = e.sides(cap)
    occurrences: List[Occurrence] = []
    cuts: Set[int] = set()
    for side in (left, right):
        position = 0
        cuts.add(0)
        for a in side:
            size = len(full[a]) if a in full else 1
            occurrences.append(Occurrence(a, position, position + size))
            position += size
            cuts.add(position)
    w0 = apply_solution(alphabet, left, full)
    return CutData(w0, tuple(occurrences), len(left), frozenset(cuts))


class IntervalAnalyzer:
    """The equivalence on intervals generated by equal or involuted occurrences, with freeness tests"""

    def __init__(self, cut_data: CutData, alphabet: InvAlphabet):
        self.cut_data = cut_data
        self.alphabet = alphabet
        self.logger = logging.getLogger(__name__)
        self._classes: Dict[Interval, FrozenSet[Interval]] = {}
        self._by_symbol: Dict[int, List[Occurrence]] = {}
        for occ in cut_data.occurrences:
            self._by_symbol.setdefault(occ.symbol, []).append(occ)
        self._sorted_cuts = sorted(cut_data.cuts)

    def _neighbours(self, iv: Interval) -> List[Interval]:
        low, high = min(iv.lo, iv.hi), max(iv.lo, iv.hi)
        found = []
        for occ in self.cut_data.occurrences:
            if not (occ.left <= low and high <= occ.right):
                continue
            mu, nu = iv.lo - occ.left, iv.hi - occ.left
            for other in self._by_symbol.get(occ.symbol, ()):
                found.append(Interval(other.left + mu, other.left + nu))
            for other in self._by_symbol.get(self.alphabet.bar[occ.symbol], ()):
                found.append(Interval(other.right - mu, other.right - nu))
        return found

    def interval_equiv_closure(self, seed: Interval) -> FrozenSet[Interval]:
        """All intervals equivalent to the seed, by breadth first search"""
        if seed in self._classes:
            return self._classes[seed]
        seen = {seed}
        queue = deque([seed])
        while queue:
            iv = queue.popleft()
            for nxt in self._neighbours(iv):
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        members = frozenset(seen)
        for iv in members:
            self._classes[iv] = members
        return members

    def cuts_inside(self, iv: Interval) -> List[int]:
        return [c for c in self._sorted_cuts if iv.contains(c)]

    def is_free(self, iv: Interval) -> bool:
        """No equivalent interval has a cut strictly inside"""
        if iv.length <= 1:
            return True
        return not any(self.cuts_inside(other) for other in self.interval_equiv_closure(iv))

    def implicit_cuts(self, iv: Interval) -> FrozenSet[int]:
        """Positions alpha + |gamma' - alpha'| for cuts gamma' inside equivalent intervals"""
        if not iv.positive:
            raise ContractError("implicit_cuts takes positive intervals")
        found = set()
        for other in self.interval_equiv_closure(iv):
            for cut in self.cuts_inside(other):
                found.add(iv.lo + abs(cut - other.lo))
        return frozenset(found)

    def maximal_free_intervals(self) -> List[Interval]:
        """The unique sequence 0 = a0 < a1 < ... < ak = m0 of maximal free intervals"""
        m0 = self.cut_data.m0
        intervals = []
        start = 0
        while start < m0:
            end = start + 1
            while end < m0 and self.is_free(Interval(start, end + 1)):
                end += 1
            intervals.append(Interval(start, end))
            start = end
        return intervals


@dataclass(frozen=True, eq=False)
class FreeFactorization:
    intervals: Tuple[Interval, ...]
    new_letters: Mapping[int, Word]
    w0_prime: Word
    equation: EquationE
    solution: Solution
    arc: Arc


def maximal_free_factorization(e: EquationE, sigma: Mapping[int, Sequence[int]], cut_data: CutData,
                               prefix: str = Config.FRESH_PREFIXES['free']) -> FreeFactorization:
    """Turn each maximal free interval into one letter and rebase E0 onto the new alphabet"""
    logger = logging.getLogger(__name__)
    alphabet = e.alphabet
    analyzer = IntervalAnalyzer(cut_data, alphabet)
    intervals = analyzer.maximal_free_intervals()
    letter_of: Dict[Word, int] = {}
    new_letters: Dict[int, Word] = {}
    w0_prime = []
    start_index = {}
    for index, iv in enumerate(intervals):
        start_index[iv.lo] = index
        word = alphabet.factor(cut_data.w0, iv)
        if len(word) == 1:
            w0_prime.append(word[0])
            continue
        if word not in letter_of:
            mirrored = alphabet.involute(word)
            if mirrored == word:
                letter = alphabet.fresh_fixed(prefix)
                letter_of[word] = letter
                new_letters[letter] = word
            else:
                letter, partner = alphabet.fresh_pair(CONSTANT, prefix)
                letter_of[word], letter_of[mirrored] = letter, partner
                new_letters[letter], new_letters[partner] = word, mirrored
        w0_prime.append(letter_of[word])
    start_index[cut_data.m0] = len(intervals)

    full = complete_solution(alphabet, sigma)
    sigma_prime: Solution = {}
    for occ in cut_data.occurrences:
        if occ.symbol in e.variables and occ.symbol not in sigma_prime:
            if occ.left not in start_index or occ.right not in start_index:
                raise ContractError("A variable boundary is not a boundary of the free factorization")
            sigma_prime[occ.symbol] = tuple(w0_prime[start_index[occ.left]:start_index[occ.right]])
            sigma_prime[alphabet.bar[occ.symbol]] = alphabet.involute(sigma_prime[occ.symbol])
    for x in e.variables:
        sigma_prime.setdefault(x, full[x])

    used = set(w0_prime)
    constants = frozenset(used | {alphabet.bar[a] for a in used})
    images = {a: hom_image(e.h, w) for a, w in new_letters.items()}
    h_union = e.h.extended(images)
    rebased = e.replace(constants=constants, h=h_union.restricted(constants))
    pi = Projection({a: w for a, w in new_letters.items()})
    arc = Arc(e, rebased, BaseChange(), pi, PartialSolution(rho=e.rho), label='free-intervals')
    logger.info(f"Maximal free factorization: {len(intervals)} intervals, {len(new_letters)} new letters")
    return FreeFactorization(tuple(intervals), new_letters, tuple(w0_prime), rebased, sigma_prime, arc)
