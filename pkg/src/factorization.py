# =============================================================================
# File: src/factorization.py
# =============================================================================
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from config.config import Config
from src.constraints import ConstraintHom, MonElem, hom_image
from src.equation import EquationE, Solution, complete_solution
from src.errors import CertificateError, ContractError, ResourceLimitError
from src.expressions import ExpExpr, Literal, Power, concat, log_size
from src.intervals import CutData, compute_cuts
from src.words import CONSTANT, InvAlphabet, Word


@dataclass(frozen=True)
class Block:
    """Triple (u, w, v): w with its left and right context of length l (or empty at the ends)"""
    u: Word
    w: Word
    v: Word

    def involute(self, alphabet: InvAlphabet) -> 'Block':
        return Block(alphabet.involute(self.v), alphabet.involute(self.w), alphabet.involute(self.u))

    def render(self, alphabet: InvAlphabet) -> str:
        return '({})'.format(', '.join(alphabet.render_word(part) for part in (self.u, self.w, self.v)))


@dataclass(frozen=True)
class LFactorization:
    """Blocks of a word at level l together with the offset of every w_i"""
    level: int
    word: Word
    blocks: Tuple[Block, ...]
    starts: Tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.blocks)

    def span(self, i: int) -> Tuple[int, int]:
        return self.starts[i], self.starts[i] + len(self.blocks[i].w)

    def minimal_cover(self, lo: int, hi: int) -> Tuple[int, int]:
        """Indices p <= q of the smallest run of blocks covering positions [lo, hi]"""
        p = max(i for i in range(self.k) if self.starts[i] <= lo)
        q = min(i for i in range(self.k) if self.span(i)[1] >= hi)
        return p, q


def critical_words(w0: Sequence[int], level: int, cuts: Iterable[int], alphabet: InvAlphabet) -> FrozenSet[Word]:
    """Factors of length 2l centred at cuts, closed under involution"""
    m0 = len(w0)
    if not 1 <= level:
        raise ContractError("critical_words needs l >= 1")
    found: Set[Word] = set()
    for cut in cuts:
        if level <= cut <= m0 - level:
            word = tuple(w0[cut - level:cut + level])
            found.add(word)
            found.add(alphabet.involute(word))
    return frozenset(found)


def l_factorize(w: Sequence[int], level: int, critical: FrozenSet[Word]) -> LFactorization:
    """Split w at the centres of its critical factors"""
    w = tuple(w)
    if not w:
        raise ContractError("l_factorize needs a non-empty word")
    splits = [t for t in range(level, len(w) - level + 1) if w[t - level:t + level] in critical]
    bounds = [0] + splits + [len(w)]
    blocks = []
    for i in range(len(bounds) - 1):
        start, end = bounds[i], bounds[i + 1]
        u = w[start - level:start] if i > 0 else ()
        v = w[end:end + level] if i < len(bounds) - 2 else ()
        blocks.append(Block(u, w[start:end], v))
    return LFactorization(level, w, tuple(blocks), tuple(bounds[:-1]))


def head_body_tail(lf: LFactorization) -> Tuple[Block, LFactorization, Block]:
    """First block, the middle blocks as a factorization of their own word, last block"""
    head, tail = lf.blocks[0], lf.blocks[-1]
    middle = lf.blocks[1:-1]
    if not middle:
        return head, LFactorization(lf.level, (), (), ()), tail
    offset = lf.starts[1]
    word = lf.word[offset:lf.starts[-1]]
    return head, LFactorization(lf.level, word, middle, tuple(s - offset for s in lf.starts[1:-1])), tail


def body_offsets(lf: LFactorization) -> Tuple[int, int]:
    """Offsets [start, end) of the body inside the factorized word"""
    if lf.k <= 2:
        return (len(lf.blocks[0].w),) * 2 if lf.k == 2 else (0, 0)
    return lf.starts[1], lf.starts[-1]


class BlockAlphabet:
    """Registry of block letters inside the universe alphabet, with h(block) = h(w)"""

    def __init__(self, alphabet: InvAlphabet, h: ConstraintHom, prefix: str = Config.FRESH_PREFIXES['block']):
        self.alphabet = alphabet
        self.base_h = h
        self.prefix = prefix
        self.letter_of: Dict[Block, int] = {}
        self.block_of: Dict[int, Block] = {}
        self.images: Dict[int, MonElem] = dict(h.images)

    def letter(self, block: Block) -> int:
        if block in self.letter_of:
            return self.letter_of[block]
        mirrored = block.involute(self.alphabet)
        image = hom_image(self.base_h, block.w)
        if mirrored == block:
            letter = self.alphabet.fresh_fixed(self.prefix)
            self._register(block, letter, image)
        else:
            letter, partner = self.alphabet.fresh_pair(CONSTANT, self.prefix)
            self._register(block, letter, image)
            self._register(mirrored, partner, image.involute())
        return letter

    def _register(self, block: Block, letter: int, image: MonElem):
        self.letter_of[block] = letter
        self.block_of[letter] = block
        self.images[letter] = image

    def is_block(self, letter: int) -> bool:
        return letter in self.block_of

    def word(self, letter: int) -> Word:
        """pi image: the middle word of a block, or the letter itself"""
        return self.block_of[letter].w if letter in self.block_of else (letter,)

    def hom(self, constants: Iterable[int]) -> ConstraintHom:
        return ConstraintHom(self.base_h.n, {a: self.images[a] for a in constants}, self.alphabet,
                             self.base_h.budget)


def compress_l_factor(seq: Sequence[int], budget: Optional[float] = None,
                      max_period: int = Config.MAX_PERIOD) -> ExpExpr:
    """Exponential expression for a letter sequence, factoring maximal repetitions earliest first"""
    expr = _compress(tuple(seq), max_period)
    if budget is not None and expr.size > budget:
        raise ResourceLimitError(f"Compressed size {expr.size} exceeds the admissibility budget {budget:.0f}",
                                 stage='admissibility')
    return expr


def _compress(seq: Word, max_period: int) -> ExpExpr:
    n = len(seq)
    pieces: List[ExpExpr] = []
    run: List[int] = []
    i = 0
    while i < n:
        best = None
        for period in range(1, min(max_period, (n - i) // 2) + 1):
            if seq[i] != seq[i + period]:
                continue
            unit = seq[i:i + period]
            count = 1
            while seq[i + count * period:i + (count + 1) * period] == unit:
                count += 1
            covered = period * count
            if count >= 2 and covered > period + log_size(count):
                if best is None or covered > best[0] * best[1]:
                    best = (period, count)
        if best is None:
            run.append(seq[i])
            i += 1
            continue
        period, count = best
        if run:
            pieces.append(Literal(run))
            run = []
        unit = seq[i:i + period]
        base = _compress(unit, max_period) if period > 1 else Literal(unit)
        pieces.append(Power(base, count))
        i += period * count
    if run:
        pieces.append(Literal(run))
    return concat(*pieces)


@dataclass(frozen=True, eq=False)
class LTransformation:
    """E_l together with the data needed to build arcs out of it"""
    level: int
    equation: EquationE
    factorization: LFactorization
    block_letters: Tuple[int, ...]
    covers: Mapping[int, Tuple[int, int]]
    solution: Solution
    cut_data: CutData
    critical: FrozenSet[Word]


def _variable_bodies(e0: EquationE, cut_data: CutData, critical: FrozenSet[Word], level: int
                     ) -> Dict[int, Tuple[int, int, LFactorization]]:
    """Occurrence index -> body interval in w0 and the factorization of sigma(x_i)"""
    bodies = {}
    for index, occ in enumerate(cut_data.occurrences):
        if occ.symbol not in e0.variables or occ.right == occ.left:
            continue
        lf = l_factorize(cut_data.w0[occ.left:occ.right], level, critical)
        start, end = body_offsets(lf)
        if start < end:
            bodies[index] = (occ.left + start, occ.left + end, lf)
    return bodies


def l_transformation(e0: EquationE, sigma: Mapping[int, Sequence[int]], level: int,
                     registry: BlockAlphabet, cut_data: Optional[CutData] = None,
                     budget: Optional[float] = None) -> LTransformation:
    """Replace the minimal covers of variable bodies in F_l(w0) by the variables"""
    logger = logging.getLogger(__name__)
    alphabet = e0.alphabet
    cut_data = cut_data or compute_cuts(e0, sigma)
    critical = critical_words(cut_data.w0, level, cut_data.cuts, alphabet)
    factorization = l_factorize(cut_data.w0, level, critical)
    block_letters = tuple(registry.letter(block) for block in factorization.blocks)
    bodies = _variable_bodies(e0, cut_data, critical, level)
    covers = {index: factorization.minimal_cover(lo, hi) for index, (lo, hi, _) in bodies.items()}

    sides = []
    for indices in (range(cut_data.g), range(cut_data.g, cut_data.d)):
        starts = {covers[i][0]: (cut_data.occurrences[i].symbol, covers[i][1]) for i in indices if i in covers}
        items: List[ExpExpr] = []
        segment: List[int] = []
        position = 0
        while position < factorization.k:
            if position in starts:
                symbol, last = starts[position]
                if segment:
                    items.append(compress_l_factor(segment))
                    segment = []
                items.append(Literal((symbol,)))
                position = last + 1
            else:
                segment.append(block_letters[position])
                position += 1
        if segment:
            items.append(compress_l_factor(segment))
        sides.append(concat(*items))

    occurring = {cut_data.occurrences[i].symbol for i in covers}
    variables = frozenset(occurring | {alphabet.bar[x] for x in occurring})
    used = set()
    for side in sides:
        used |= side.letters() - variables
    used |= {alphabet.bar[a] for a in used}
    constants = frozenset(used | set(e0.constants))
    h_level = registry.hom(constants)

    body_letters: Solution = {}
    for index, (_, _, lf) in bodies.items():
        x = cut_data.occurrences[index].symbol
        if x in body_letters:
            continue
        _, body, _ = head_body_tail(lf)
        letters = []
        for block in body.blocks:
            letter = registry.letter(block)
            letters.extend([letter] if letter in constants else block.w)
        body_letters[x] = tuple(letters)
    solution = complete_solution(alphabet, body_letters)
    rho = {x: hom_image(h_level, solution[x]) for x in variables}
    equation = e0.replace(constants=constants, variables=variables, h=h_level, rho=rho,
                          lhs=sides[0], rhs=sides[1], checks=())
    total = equation.lhs.size + equation.rhs.size
    if budget is not None and total > budget:
        raise ResourceLimitError(f"E_{level} has size {total} beyond the admissibility budget {budget:.0f}",
                                 stage='admissibility')
    for i, (p, q) in covers.items():
        for j, (p2, q2) in covers.items():
            if i < j and (i < cut_data.g) == (j < cut_data.g) and not (q < p2 or q2 < p):
                raise CertificateError(f"covers of occurrences {i} and {j} overlap", step=f"l-transformation {level}")
    logger.debug(f"E_{level}: {factorization.k} blocks, {len(variables)} variables, size {total}")
    return LTransformation(level, equation, factorization, block_letters, covers, solution, cut_data, critical)


def solution_at_level(transformation: LTransformation) -> Solution:
    """sigma_l restricted to the variables of E_l"""
    return {x: transformation.solution[x] for x in transformation.equation.variables}


def body_blocks(w: Sequence[int], level: int, critical: FrozenSet[Word]) -> List[Tuple[int, Block]]:
    """Body blocks of w with their offsets inside w"""
    lf = l_factorize(w, level, critical)
    return [(lf.starts[i], lf.blocks[i]) for i in range(1, lf.k - 1)]
