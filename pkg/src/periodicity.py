# =============================================================================
# File: src/periodicity.py
# =============================================================================
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from src.errors import ContractError
from src.words import InvAlphabet, Word

FIRST_KIND = 'first'
SECOND_KIND = 'second'


def exponent_of_periodicity(w: Sequence[int]) -> int:
    """Largest alpha with w = u p^alpha v for a non-empty p"""
    n = len(w)
    if n == 0:
        return 0
    best = 1
    for period in range(1, n // 2 + 1):
        run = 0
        for i in range(n - period - 1, -1, -1):
            # run = length of the longest match of w[i:] against w[i+period:]
            run = run + 1 if w[i] == w[i + period] else 0
            best = max(best, 1 + run // period)
    return best


def is_primitive(p: Sequence[int]) -> bool:
    n = len(p)
    if n == 0:
        return False
    p = tuple(p)
    return all(p != p[:d] * (n // d) for d in range(1, n) if n % d == 0)


def _occurs(needle: Word, haystack: Word) -> bool:
    k = len(needle)
    return any(haystack[i:i + k] == needle for i in range(len(haystack) - k + 1))


@dataclass(frozen=True)
class PStableNF:
    """u0, e1 alpha1, u1, ..., ek alphak, uk for a primitive p"""
    kind: str
    p: Word
    words: Tuple[Word, ...]
    exponents: Tuple[int, ...]
    signs: Tuple[int, ...]
    r: Word = ()
    s: Word = ()

    @property
    def k(self) -> int:
        return len(self.exponents)

    def signed_exponents(self) -> Tuple[int, ...]:
        return tuple(sign * alpha for sign, alpha in zip(self.signs, self.exponents))

    def reconstruct(self, alphabet: InvAlphabet) -> Word:
        """Expand the normal form back into a word"""
        out: List[int] = list(self.words[0])
        p_bar = alphabet.involute(self.p)
        for i, alpha in enumerate(self.exponents):
            if self.kind == FIRST_KIND:
                out.extend((self.p if self.signs[i] > 0 else p_bar) * alpha)
            else:
                out.extend(self.p * alpha)
                out.extend(self.r)
            out.extend(self.words[i + 1])
        return tuple(out)


def selfinvolutive_split(p: Sequence[int], alphabet: InvAlphabet) -> Optional[Tuple[Word, Word]]:
    """First split p = r s with r and s both equal to their involution"""
    p = tuple(p)
    for j in range(len(p)):
        r, s = p[:j], p[j:]
        if alphabet.involute(r) == r and alphabet.involute(s) == s:
            return r, s
    return None


def _runs(w: Word, pattern_unit: Word, tail: Word) -> List[Tuple[int, int, int]]:
    """Maximal factors unit^alpha tail with alpha >= 2, as (start, end, alpha)"""
    size = len(pattern_unit)
    runs = []
    n = len(w)
    for start in range(n - 2 * size - len(tail) + 1):
        if w[start:start + 2 * size] != pattern_unit * 2:
            continue
        if start >= size and w[start - size:start] == pattern_unit:
            continue
        alpha = 2
        while w[start + alpha * size:start + (alpha + 1) * size] == pattern_unit:
            alpha += 1
        while alpha >= 2 and w[start + alpha * size:start + alpha * size + len(tail)] != tail:
            alpha -= 1
        if alpha < 2:
            continue
        runs.append((start, start + alpha * size + len(tail), alpha))
    return runs


def p_stable_normal_form(w: Sequence[int], p: Sequence[int], alphabet: InvAlphabet) -> PStableNF:
    """Decompose w around its maximal p-runs; the kind depends on whether bar(p) occurs in p p"""
    w, p = tuple(w), tuple(p)
    if not is_primitive(p):
        raise ContractError("p_stable_normal_form needs a primitive non-empty p")
    size = len(p)
    p_bar = alphabet.involute(p)
    if not _occurs(p_bar, p + p):
        kind, r, s = FIRST_KIND, (), ()
        runs = [(start, end, alpha, 1) for start, end, alpha in _runs(w, p, ())]
        runs += [(start, end, alpha, -1) for start, end, alpha in _runs(w, p_bar, ())]
    else:
        split = selfinvolutive_split(p, alphabet)
        if split is None:
            raise ContractError("No decomposition p = r s with self-involutive r and s")
        kind, (r, s) = SECOND_KIND, split
        runs = [(start, end, alpha, 1) for start, end, alpha in _runs(w, p, r)]
    runs.sort()
    if not runs:
        return PStableNF(kind, p, (w,), (), (), r, s)
    words = [w[:runs[0][0] + size]]
    for (_, end, _, _), (next_start, _, _, _) in zip(runs, runs[1:]):
        if end - size > next_start + size:
            raise ContractError("Overlapping p-runs in the normal form")
        words.append(w[end - size:next_start + size])
    words.append(w[runs[-1][1] - size:])
    return PStableNF(kind, p, tuple(words), tuple(alpha - 2 for _, _, alpha, _ in runs),
                     tuple(sign for _, _, _, sign in runs), r, s)


def involute_normal_form(nf: PStableNF, alphabet: InvAlphabet) -> PStableNF:
    """Normal form of the involuted word predicted from the normal form of the word"""
    words = tuple(alphabet.involute(u) for u in reversed(nf.words))
    exponents = tuple(reversed(nf.exponents))
    if nf.kind == FIRST_KIND:
        signs = tuple(-sign for sign in reversed(nf.signs))
    else:
        signs = tuple(reversed(nf.signs))
    return PStableNF(nf.kind, nf.p, words, exponents, signs, nf.r, nf.s)
