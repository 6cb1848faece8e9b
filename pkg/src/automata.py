# =============================================================================
# File: src/automata.py
# =============================================================================
import itertools
import logging
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from config.config import Config
from src.errors import ContractError, ParseError, ResourceLimitError
from src.words import InvAlphabet, Word

logger = logging.getLogger(__name__)

EPSILON_TOKENS = ('eps', '-')

Transition = Tuple[int, Optional[int], int]


def bool_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Boolean matrix product (or of ands)"""
    return (a.astype(np.int64) @ b.astype(np.int64)) > 0


def reflexive_transitive_closure(edges: np.ndarray) -> np.ndarray:
    """Closure of an adjacency matrix under paths of any length, including zero"""
    closure = edges | np.eye(edges.shape[0], dtype=bool)
    while True:
        squared = bool_product(closure, closure)
        if np.array_equal(squared, closure):
            return closure
        closure = squared


@dataclass(frozen=True)
class Nfa:
    """Nondeterministic automaton; a transition letter of None is an epsilon move"""
    n_states: int
    transitions: FrozenSet[Transition]
    initial: FrozenSet[int]
    final: FrozenSet[int]
    letters: FrozenSet[int]

    def __post_init__(self):
        states = range(self.n_states)
        for p, a, q in self.transitions:
            if p not in states or q not in states:
                raise ContractError(f"Transition ({p},{a},{q}) leaves the state set")
            if a is not None and a not in self.letters:
                raise ContractError(f"Transition letter {a} is not in the automaton alphabet")
        if not (self.initial <= set(states) and self.final <= set(states)):
            raise ContractError("Initial and final states must be states")

    def matrix(self, letter: Optional[int]) -> np.ndarray:
        """Transition matrix of one letter (None gives the epsilon moves)"""
        m = np.zeros((self.n_states, self.n_states), dtype=bool)
        for p, a, q in self.transitions:
            if a == letter:
                m[p, q] = True
        return m

    def has_epsilon(self) -> bool:
        return any(a is None for _, a, _ in self.transitions)

    def vector(self, states: Iterable[int]) -> np.ndarray:
        v = np.zeros(self.n_states, dtype=bool)
        v[list(states)] = True
        return v

    @cached_property
    def _epsilon_closure(self) -> Tuple[FrozenSet[int], ...]:
        closure = reflexive_transitive_closure(self.matrix(None))
        return tuple(frozenset(int(q) for q in np.nonzero(closure[p])[0]) for p in range(self.n_states))

    @cached_property
    def _successors(self) -> Dict[Tuple[int, int], FrozenSet[int]]:
        successors: Dict[Tuple[int, int], set] = {}
        for p, a, q in self.transitions:
            if a is not None:
                successors.setdefault((p, a), set()).update(self._epsilon_closure[q])
        return {key: frozenset(value) for key, value in successors.items()}

    def accepts(self, w: Sequence[int]) -> bool:
        """Run the automaton on an explicit word"""
        current = set()
        for p in self.initial:
            current |= self._epsilon_closure[p]
        for a in w:
            following = set()
            for p in current:
                following |= self._successors.get((p, a), frozenset())
            if not following:
                return False
            current = following
        return not current.isdisjoint(self.final)

    def is_empty(self) -> bool:
        """Test whether no final state is reachable from an initial state"""
        seen = set(self.initial)
        queue = deque(self.initial)
        while queue:
            p = queue.popleft()
            if p in self.final:
                return False
            for src, _, q in self.transitions:
                if src == p and q not in seen:
                    seen.add(q)
                    queue.append(q)
        return True

    def enumerate(self, maxlen: int) -> Iterator[Word]:
        """Accepted words up to a length bound, shortest first"""
        letters = sorted(self.letters)
        for length in range(maxlen + 1):
            for w in itertools.product(letters, repeat=length):
                if self.accepts(w):
                    yield tuple(w)

    def to_text(self, alphabet: InvAlphabet) -> str:
        lines = [f"states {self.n_states}",
                 "initial " + ' '.join(str(p) for p in sorted(self.initial)),
                 "final " + ' '.join(str(p) for p in sorted(self.final))]
        for p, a, q in sorted(self.transitions, key=lambda t: (t[0], -1 if t[1] is None else t[1], t[2])):
            label = EPSILON_TOKENS[0] if a is None else alphabet.name(a)
            lines.append(f"{p} {label} {q}")
        return '\n'.join(lines)


def _from_matrices(n_states: int, matrices: Dict[int, np.ndarray], initial: Iterable[int],
                   final: Iterable[int], letters: Iterable[int]) -> Nfa:
    transitions = set()
    for a, m in matrices.items():
        for p, q in zip(*np.nonzero(m)):
            transitions.add((int(p), a, int(q)))
    return Nfa(n_states, frozenset(transitions), frozenset(initial), frozenset(final), frozenset(letters))


def benois_saturate(nfa: Nfa, alphabet: InvAlphabet) -> Nfa:
    """Epsilon-free automaton over the same states accepting all descendants under a bar(a) -> 1"""
    letters = sorted(nfa.letters)
    matrices = {a: nfa.matrix(a) for a in letters}
    epsilon = nfa.matrix(None)
    rounds = 0
    while True:
        rounds += 1
        closure = reflexive_transitive_closure(epsilon)
        changed = False
        for a in letters:
            partner = alphabet.bar[a]
            if partner not in matrices:
                continue
            shortcut = bool_product(bool_product(matrices[a], closure), matrices[partner])
            if (shortcut & ~closure).any():
                epsilon = epsilon | shortcut
                changed = True
        if not changed:
            break
    logger.debug(f"Saturation of {nfa.n_states}-state automaton converged after {rounds} rounds")
    return _eliminate(nfa, matrices, epsilon)


def _eliminate(nfa: Nfa, matrices: Dict[int, np.ndarray], epsilon: np.ndarray) -> Nfa:
    """T'(a) = C T(a) C for the epsilon closure C; finals are the states reaching a final state"""
    closure = reflexive_transitive_closure(epsilon)
    moves = {a: bool_product(bool_product(closure, m), closure) for a, m in matrices.items()}
    final = [p for p in range(nfa.n_states) if any(closure[p, f] for f in nfa.final)]
    return _from_matrices(nfa.n_states, moves, nfa.initial, final, nfa.letters)


def remove_epsilon(nfa: Nfa) -> Nfa:
    """Equivalent epsilon-free automaton over the same states"""
    if not nfa.has_epsilon():
        return nfa
    return _eliminate(nfa, {a: nfa.matrix(a) for a in sorted(nfa.letters)}, nfa.matrix(None))


def reduced_words_dfa(alphabet: InvAlphabet, letters: Optional[Iterable[int]] = None) -> Nfa:
    """Deterministic automaton with |letters|+1 states accepting the freely reduced words"""
    letters = sorted(alphabet.constants() if letters is None else letters)
    slot = {a: i + 1 for i, a in enumerate(letters)}
    transitions = set()
    for state in range(len(letters) + 1):
        last = letters[state - 1] if state > 0 else None
        for a in letters:
            if last is not None and alphabet.bar[last] == a:
                continue
            transitions.add((state, a, slot[a]))
    states = range(len(letters) + 1)
    return Nfa(len(letters) + 1, frozenset(transitions), frozenset([0]), frozenset(states), frozenset(letters))


def determinize(nfa: Nfa, cap: int = Config.SUBSET_STATE_CAP) -> Nfa:
    """Complete subset construction; the empty subset acts as the sink"""
    letters = sorted(nfa.letters)
    closure = reflexive_transitive_closure(nfa.matrix(None))
    matrices = {a: bool_product(nfa.matrix(a), closure) for a in letters}
    start = frozenset(int(q) for q in np.nonzero(nfa.vector(nfa.initial) @ closure)[0])
    index = {start: 0}
    queue = deque([start])
    transitions = set()
    while queue:
        subset = queue.popleft()
        for a in letters:
            row = np.zeros(nfa.n_states, dtype=bool)
            for p in subset:
                row |= matrices[a][p]
            target = frozenset(int(q) for q in np.nonzero(row)[0])
            if target not in index:
                if len(index) >= cap:
                    raise ResourceLimitError(f"Subset construction exceeded {cap} states", stage='automata')
                index[target] = len(index)
                queue.append(target)
            transitions.add((index[subset], a, index[target]))
    final = [i for subset, i in index.items() if subset & nfa.final]
    return Nfa(len(index), frozenset(transitions), frozenset([0]), frozenset(final), frozenset(letters))


def complement(dfa: Nfa) -> Nfa:
    """Swap final and non-final states of a complete deterministic automaton"""
    final = frozenset(range(dfa.n_states)) - dfa.final
    return Nfa(dfa.n_states, dfa.transitions, dfa.initial, final, dfa.letters)


def product(a: Nfa, b: Nfa) -> Nfa:
    """Intersection automaton on state pairs"""
    def pair(p, q):
        return p * b.n_states + q

    transitions = set()
    for p, x, p2 in a.transitions:
        if x is None:
            for q in range(b.n_states):
                transitions.add((pair(p, q), None, pair(p2, q)))
            continue
        for q, y, q2 in b.transitions:
            if y == x:
                transitions.add((pair(p, q), x, pair(p2, q2)))
    for q, y, q2 in b.transitions:
        if y is None:
            for p in range(a.n_states):
                transitions.add((pair(p, q), None, pair(p, q2)))
    initial = [pair(p, q) for p in a.initial for q in b.initial]
    final = [pair(p, q) for p in a.final for q in b.final]
    return Nfa(a.n_states * b.n_states, frozenset(transitions), frozenset(initial), frozenset(final),
               a.letters | b.letters)


def union(a: Nfa, b: Nfa) -> Nfa:
    """Disjoint union of two automata"""
    offset = a.n_states
    transitions = set(a.transitions)
    transitions.update((p + offset, x, q + offset) for p, x, q in b.transitions)
    initial = set(a.initial) | {p + offset for p in b.initial}
    final = set(a.final) | {p + offset for p in b.final}
    return Nfa(a.n_states + b.n_states, frozenset(transitions), frozenset(initial), frozenset(final),
               a.letters | b.letters)


def group_complement(nfa: Nfa, alphabet: InvAlphabet, cap: int = Config.SUBSET_STATE_CAP) -> Nfa:
    """Reduced words whose group element lies outside the group language of nfa"""
    saturated = benois_saturate(nfa, alphabet)
    outside = complement(determinize(saturated, cap))
    result = product(outside, reduced_words_dfa(alphabet, nfa.letters))
    logger.debug(f"Group complement built with {result.n_states} states")
    return result


def universal_automaton(letters: Iterable[int]) -> Nfa:
    """One state accepting every word over the letters"""
    letters = frozenset(letters)
    return Nfa(1, frozenset((0, a, 0) for a in letters), frozenset([0]), frozenset([0]), letters)


def empty_automaton(letters: Iterable[int]) -> Nfa:
    return Nfa(1, frozenset(), frozenset([0]), frozenset(), frozenset(letters))


def singleton_automaton(words: Sequence[Word], letters: Iterable[int]) -> Nfa:
    """Automaton accepting exactly the listed words (a trie)"""
    transitions = set()
    final = set()
    children: Dict[Tuple[int, int], int] = {}
    n_states = 1
    for w in words:
        state = 0
        for a in w:
            if (state, a) not in children:
                children[(state, a)] = n_states
                transitions.add((state, a, n_states))
                n_states += 1
            state = children[(state, a)]
        final.add(state)
    return Nfa(n_states, frozenset(transitions), frozenset([0]), frozenset(final), frozenset(letters))


def parse_automaton(text: str, alphabet: InvAlphabet, first_line: int = 1) -> Nfa:
    """Read the `states / initial / final` header followed by `p letter q` lines"""
    n_states = None
    initial: List[int] = []
    final: List[int] = []
    transitions = set()
    for offset, raw in enumerate(text.splitlines()):
        line_no = first_line + offset
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == 'states':
                n_states = int(parts[1])
            elif parts[0] == 'initial':
                initial = [int(p) for p in parts[1:]]
            elif parts[0] == 'final':
                final = [int(p) for p in parts[1:]]
            elif len(parts) == 3:
                letter = None if parts[1] in EPSILON_TOKENS else alphabet.letter(parts[1])
                transitions.add((int(parts[0]), letter, int(parts[2])))
            else:
                raise ParseError(f"Unrecognized automaton line '{line}'", line_no)
        except (IndexError, ValueError) as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"Malformed automaton line '{line}'", line_no) from exc
    if n_states is None:
        raise ParseError("Automaton is missing its 'states' header", first_line)
    return Nfa(n_states, frozenset(transitions), frozenset(initial), frozenset(final), alphabet.constants())
