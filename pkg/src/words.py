# =============================================================================
# File: src/words.py
# =============================================================================
import logging
import re
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from src.errors import ContractError, ParseError

Word = Tuple[int, ...]

CONSTANT = 'constant'
VARIABLE = 'variable'

EMPTY_WORD_TOKEN = '1'
_NAME_PATTERN = re.compile(r"^[A-Za-z_#$][A-Za-z0-9_#$]*'?$")


@dataclass(frozen=True)
class Interval:
    """Interval [lo, hi] between two positions of a host word"""
    lo: int
    hi: int

    @property
    def positive(self) -> bool:
        return self.lo < self.hi

    @property
    def length(self) -> int:
        return abs(self.hi - self.lo)

    def reversed(self) -> 'Interval':
        return Interval(self.hi, self.lo)

    def contains(self, position: int) -> bool:
        """Test whether a position lies strictly inside the interval"""
        return min(self.lo, self.hi) < position < max(self.lo, self.hi)


class InvAlphabet:
    """Append-only letter table with an involution given as a permutation array"""

    def __init__(self):
        self.names: List[str] = []
        self.bar: List[int] = []
        self.kinds: List[str] = []
        self._index: Dict[str, int] = {}
        self._fresh_counter = 0
        self.logger = logging.getLogger(__name__)

    # -- construction -------------------------------------------------------

    def _append(self, name: str, kind: str) -> int:
        if not _NAME_PATTERN.match(name) or name == EMPTY_WORD_TOKEN:
            raise ContractError(f"Invalid letter name '{name}'")
        if name in self._index:
            raise ContractError(f"Letter '{name}' already declared")
        self.names.append(name)
        self.bar.append(-1)
        self.kinds.append(kind)
        self._index[name] = len(self.names) - 1
        return len(self.names) - 1

    def add_pair(self, name: str, kind: str = CONSTANT, bar_name: Optional[str] = None) -> Tuple[int, int]:
        """Declare a letter together with its bar partner"""
        if name.endswith("'"):
            raise ContractError(f"Letter name '{name}' must not carry a bar mark")
        bar_name = bar_name or f"{name}'"
        a = self._append(name, kind)
        b = self._append(bar_name, kind)
        self.bar[a] = b
        self.bar[b] = a
        return a, b

    def add_fixed(self, name: str) -> int:
        """Declare a constant which is its own involution"""
        a = self._append(name, CONSTANT)
        self.bar[a] = a
        return a

    def fresh_pair(self, kind: str, prefix: str) -> Tuple[int, int]:
        """Allocate a new letter pair under an unused printable name"""
        while True:
            self._fresh_counter += 1
            name = f"{prefix}{self._fresh_counter}"
            if name not in self._index and f"{name}'" not in self._index:
                return self.add_pair(name, kind)

    def fresh_fixed(self, prefix: str) -> int:
        """Allocate a new fixed-point constant"""
        while True:
            self._fresh_counter += 1
            name = f"{prefix}{self._fresh_counter}"
            if name not in self._index:
                return self.add_fixed(name)

    @classmethod
    def from_names(cls, constants: Iterable[str] = (), variables: Iterable[str] = (),
                   fixed: Iterable[str] = ()) -> 'InvAlphabet':
        """Build an alphabet from plain letter names (bars are implicit)"""
        alphabet = cls()
        for name in constants:
            alphabet.add_pair(name, CONSTANT)
        for name in fixed:
            alphabet.add_fixed(name)
        for name in variables:
            alphabet.add_pair(name, VARIABLE)
        return alphabet

    # -- lookup -------------------------------------------------------------

    def __len__(self) -> int:
        return len(self.names)

    def __contains__(self, letter: int) -> bool:
        return 0 <= letter < len(self.names)

    def letter(self, name: str) -> int:
        if name not in self._index:
            raise ParseError(f"Unknown letter '{name}'")
        return self._index[name]

    def has_name(self, name: str) -> bool:
        return name in self._index

    def name(self, letter: int) -> str:
        return self.names[letter]

    def is_variable(self, letter: int) -> bool:
        return self.kinds[letter] == VARIABLE

    def is_constant(self, letter: int) -> bool:
        return self.kinds[letter] == CONSTANT

    def is_fixed(self, letter: int) -> bool:
        return self.bar[letter] == letter

    def constants(self) -> FrozenSet[int]:
        return frozenset(a for a, kind in enumerate(self.kinds) if kind == CONSTANT)

    def variables(self) -> FrozenSet[int]:
        return frozenset(a for a, kind in enumerate(self.kinds) if kind == VARIABLE)

    def representatives(self, letters: Iterable[int]) -> List[int]:
        """One letter out of every {a, bar(a)} pair, smallest id first"""
        return sorted({min(a, self.bar[a]) for a in letters})

    # -- words --------------------------------------------------------------

    def involute(self, w: Sequence[int]) -> Word:
        """Reverse a word and bar every letter"""
        bar = self.bar
        return tuple(bar[a] for a in reversed(w))

    def free_reduce(self, w: Sequence[int]) -> Word:
        """Cancel factors a bar(a) until the word is freely reduced"""
        stack: List[int] = []
        bar = self.bar
        for a in w:
            if self.kinds[a] != CONSTANT:
                raise ContractError(f"free_reduce needs constants, got variable '{self.names[a]}'")
            if stack and stack[-1] == bar[a]:
                stack.pop()
            else:
                stack.append(a)
        return tuple(stack)

    def is_reduced(self, w: Sequence[int]) -> bool:
        return all(w[i + 1] != self.bar[w[i]] for i in range(len(w) - 1))

    def factor(self, w: Sequence[int], iv: Interval) -> Word:
        """Return w[lo, hi]; reversed intervals give the involuted factor"""
        m = len(w)
        if not (0 <= iv.lo <= m and 0 <= iv.hi <= m):
            raise ContractError(f"Interval [{iv.lo},{iv.hi}] outside word of length {m}")
        if iv.lo <= iv.hi:
            return tuple(w[iv.lo:iv.hi])
        return self.involute(w[iv.hi:iv.lo])

    # -- text ---------------------------------------------------------------

    def render_word(self, w: Sequence[int]) -> str:
        if len(w) == 0:
            return EMPTY_WORD_TOKEN
        return ' '.join(self.names[a] for a in w)

    def parse_word(self, text: str) -> Word:
        """Parse whitespace separated tokens, or a compact run of known names"""
        text = text.strip()
        if text in ('', EMPTY_WORD_TOKEN):
            return ()
        tokens = text.split()
        if len(tokens) > 1 or self.has_name(tokens[0]):
            return tuple(self.letter(token) for token in tokens if token != EMPTY_WORD_TOKEN)
        return self._parse_compact(text)

    def _parse_compact(self, text: str) -> Word:
        letters = []
        position = 0
        longest = max((len(name) for name in self.names), default=0)
        while position < len(text):
            for size in range(min(longest, len(text) - position), 0, -1):
                candidate = text[position:position + size]
                if candidate in self._index:
                    letters.append(self._index[candidate])
                    position += size
                    break
            else:
                raise ParseError(f"Cannot split '{text}' into letters at offset {position}")
        return tuple(letters)
