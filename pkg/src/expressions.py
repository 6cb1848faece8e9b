# =============================================================================
# File: src/expressions.py
# =============================================================================
import re
from typing import Dict, FrozenSet, List, Mapping, Sequence, Tuple

from config.config import Config
from src.constraints import ConstraintHom, MonElem, hom_image
from src.errors import ContractError, ParseError, ResourceLimitError
from src.words import EMPTY_WORD_TOKEN, InvAlphabet, Interval, Word


def log_size(k: int) -> int:
    """max(1, ceil(log2 k)), the size charged for an exponent"""
    if k <= 1:
        return 1
    return max(1, (k - 1).bit_length())


class ExpExpr:
    """Immutable exponential expression with cached size and evaluation length"""
    size: int
    length: int

    def letters(self) -> FrozenSet[int]:
        raise NotImplementedError


class Literal(ExpExpr):
    def __init__(self, word: Sequence[int] = ()):
        self.word: Word = tuple(word)
        self.size = len(self.word)
        self.length = len(self.word)

    def letters(self) -> FrozenSet[int]:
        return frozenset(self.word)

    def __repr__(self) -> str:
        return f"Literal({self.word})"


class Concat(ExpExpr):
    def __init__(self, parts: Sequence[ExpExpr]):
        self.parts: Tuple[ExpExpr, ...] = tuple(parts)
        self.size = sum(p.size for p in self.parts)
        self.length = sum(p.length for p in self.parts)

    def letters(self) -> FrozenSet[int]:
        return frozenset().union(*(p.letters() for p in self.parts))

    def __repr__(self) -> str:
        return f"Concat({list(self.parts)})"


class Power(ExpExpr):
    def __init__(self, base: ExpExpr, k: int):
        if k < 0:
            raise ContractError("Power exponents are non-negative")
        self.base = base
        self.k = k
        self.size = log_size(k) + base.size
        self.length = k * base.length

    def letters(self) -> FrozenSet[int]:
        return self.base.letters() if self.k else frozenset()

    def __repr__(self) -> str:
        return f"Power({self.base!r}, {self.k})"


EMPTY = Literal(())


def concat(*parts: ExpExpr) -> ExpExpr:
    """Concatenation dropping empty literals"""
    kept = [p for p in parts if not (isinstance(p, Literal) and p.length == 0)]
    if not kept:
        return EMPTY
    if len(kept) == 1:
        return kept[0]
    return Concat(kept)


def eval_expr(e: ExpExpr, cap: int = Config.EXPANSION_CAP) -> Word:
    """Fully expanded word"""
    if e.length > cap:
        raise ResourceLimitError(f"Expansion of {e.length} letters exceeds cap {cap}", stage='expressions')
    out: List[int] = []
    _expand(e, out)
    return tuple(out)


def _expand(e: ExpExpr, out: List[int]):
    if isinstance(e, Literal):
        out.extend(e.word)
    elif isinstance(e, Concat):
        for part in e.parts:
            _expand(part, out)
    elif e.k:
        start = len(out)
        _expand(e.base, out)
        period = out[start:]
        for _ in range(e.k - 1):
            out.extend(period)


def eq_eval(e: ExpExpr, f: ExpExpr, cap: int = Config.EXPANSION_CAP) -> bool:
    if e.length != f.length:
        return False
    return eval_expr(e, cap) == eval_expr(f, cap)


def letter_at(e: ExpExpr, i: int) -> int:
    """i-th letter of eval(e) by arithmetic descent"""
    if not 0 <= i < e.length:
        raise ContractError(f"Position {i} outside expression of length {e.length}")
    node = e
    while True:
        if isinstance(node, Literal):
            return node.word[i]
        if isinstance(node, Power):
            i %= node.base.length
            node = node.base
            continue
        for part in node.parts:
            if i < part.length:
                node = part
                break
            i -= part.length


def factor_expr(e: ExpExpr, iv: Interval) -> ExpExpr:
    """Expression for eval(e)[lo, hi] of size at most size(e)^2"""
    if not iv.lo <= iv.hi:
        raise ContractError("factor_expr takes positive intervals; use involute_expr for the reverse")
    if iv.lo < 0 or iv.hi > e.length:
        raise ContractError(f"Interval [{iv.lo},{iv.hi}] outside expression of length {e.length}")
    return _factor(e, iv.lo, iv.hi)


def _factor(e: ExpExpr, lo: int, hi: int) -> ExpExpr:
    if lo == hi:
        return EMPTY
    if lo == 0 and hi == e.length:
        return e
    if isinstance(e, Literal):
        return Literal(e.word[lo:hi])
    if isinstance(e, Concat):
        pieces = []
        offset = 0
        for part in e.parts:
            start, end = max(lo, offset), min(hi, offset + part.length)
            if start < end:
                pieces.append(_factor(part, start - offset, end - offset))
            offset += part.length
        return concat(*pieces)
    period = e.base.length
    first, last = lo // period, (hi - 1) // period
    if first == last:
        return _factor(e.base, lo - first * period, hi - first * period)
    pieces = []
    full_start = first if lo % period == 0 else first + 1
    full_end = hi // period
    if lo % period:
        pieces.append(_factor(e.base, lo % period, period))
    count = full_end - full_start
    if count == 1:
        pieces.append(e.base)
    elif count > 1:
        pieces.append(Power(e.base, count))
    if hi % period:
        pieces.append(_factor(e.base, 0, hi % period))
    return concat(*pieces)


def involute_expr(e: ExpExpr, alphabet: InvAlphabet) -> ExpExpr:
    if isinstance(e, Literal):
        return Literal(alphabet.involute(e.word))
    if isinstance(e, Concat):
        return Concat([involute_expr(p, alphabet) for p in reversed(e.parts)])
    return Power(involute_expr(e.base, alphabet), e.k)


def hom_of_expr(h: ConstraintHom, e: ExpExpr) -> MonElem:
    """h(eval(e)) computed structurally, powers by fast exponentiation"""
    if isinstance(e, Literal):
        return hom_image(h, e.word)
    if isinstance(e, Concat):
        result = h.unit()
        for part in e.parts:
            result = result * hom_of_expr(h, part)
        return result
    return hom_of_expr(h, e.base) ** e.k


def substitute(e: ExpExpr, mapping: Mapping[int, ExpExpr]) -> ExpExpr:
    """Replace letters by expressions; unmapped letters stay"""
    if isinstance(e, Literal):
        pieces: List[ExpExpr] = []
        run: List[int] = []
        for a in e.word:
            if a in mapping:
                if run:
                    pieces.append(Literal(run))
                    run = []
                pieces.append(mapping[a])
            else:
                run.append(a)
        if run:
            pieces.append(Literal(run))
        return concat(*pieces)
    if isinstance(e, Concat):
        return concat(*(substitute(p, mapping) for p in e.parts))
    return Power(substitute(e.base, mapping), e.k)


# -- text syntax ----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(\(|\)|\^|[^\s()^]+)")


def render_expression(e: ExpExpr, alphabet: InvAlphabet) -> str:
    if isinstance(e, Literal):
        return alphabet.render_word(e.word)
    if isinstance(e, Concat):
        return ' '.join(render_expression(p, alphabet) for p in e.parts)
    return f"({render_expression(e.base, alphabet)})^{e.k}"


def parse_expression(text: str, alphabet: InvAlphabet) -> ExpExpr:
    tokens = []
    position = 0
    text = text.rstrip()
    while position < len(text):
        match = _TOKEN.match(text, position)
        if not match:
            raise ParseError(f"Bad expression text near '{text[position:]}'")
        tokens.append(match.group(1))
        position = match.end()
    expr, used = _parse_sequence(tokens, 0, alphabet)
    if used != len(tokens):
        raise ParseError(f"Unbalanced parentheses in expression '{text}'")
    return expr


def _parse_sequence(tokens: List[str], i: int, alphabet: InvAlphabet) -> Tuple[ExpExpr, int]:
    pieces: List[ExpExpr] = []
    run: List[int] = []
    while i < len(tokens) and tokens[i] != ')':
        token = tokens[i]
        if token == '(':
            inner, i = _parse_sequence(tokens, i + 1, alphabet)
            if i >= len(tokens) or tokens[i] != ')':
                raise ParseError("Missing ')' in expression")
            i += 1
            if i < len(tokens) and tokens[i] == '^':
                if i + 1 >= len(tokens) or not tokens[i + 1].isdigit():
                    raise ParseError("Power needs a non-negative integer exponent")
                inner = Power(inner, int(tokens[i + 1]))
                i += 2
            if run:
                pieces.append(Literal(run))
                run = []
            pieces.append(inner)
        elif token == '^':
            raise ParseError("Exponent without a parenthesized base")
        else:
            if token != EMPTY_WORD_TOKEN:
                run.append(alphabet.letter(token))
            i += 1
    if run:
        pieces.append(Literal(run))
    return concat(*pieces), i
