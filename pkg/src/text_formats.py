# =============================================================================
# File: src/text_formats.py
# =============================================================================
import logging
import os
import re
from typing import Dict, List, Optional, Tuple, Union

from src.automata import Nfa, parse_automaton, remove_epsilon
from src.errors import ParseError
from src.frontend import And, Eq, GroupFormula, In, Membership, MonoidSystem, Neq, Not, NotIn, Or
from src.words import CONSTANT, VARIABLE, InvAlphabet

logger = logging.getLogger(__name__)

_SEXP_TOKEN = re.compile(r'\s*(?:(;[^\n]*)|(\()|(\))|"([^"]*)"|([^\s()";]+))')

SExp = Union[str, 'Quoted', List['SExp']]

OPEN = object()
CLOSE = object()


class Quoted(str):
    """String literal of the formula syntax"""


# -- formula files --------------------------------------------------------------

def _tokenize(text: str) -> List[Tuple[object, int]]:
    tokens = []
    position = 0
    line = 1
    while position < len(text):
        char = text[position]
        if char.isspace():
            line += char == '\n'
            position += 1
            continue
        match = _SEXP_TOKEN.match(text, position)
        if not match:
            raise ParseError(f"Unexpected character '{char}'", line)
        comment, opening, closing, quoted, atom = match.groups()
        if opening:
            tokens.append((OPEN, line))
        elif closing:
            tokens.append((CLOSE, line))
        elif quoted is not None:
            tokens.append((Quoted(quoted), line))
        elif atom:
            tokens.append((atom, line))
        line += match.group(0).count('\n')
        position = match.end()
    return tokens


def parse_sexp(text: str) -> List[Tuple[SExp, int]]:
    """Top level forms with the line each one starts on"""
    tokens = _tokenize(text)
    forms = []
    stack: List[List] = []
    start_line = 1
    for token, line in tokens:
        if token is OPEN:
            if not stack:
                start_line = line
            stack.append([])
        elif token is CLOSE:
            if not stack:
                raise ParseError("Unbalanced ')'", line)
            done = stack.pop()
            if stack:
                stack[-1].append(done)
            else:
                forms.append((done, start_line))
        elif stack:
            stack[-1].append(token)
        else:
            forms.append((token, line))
    if stack:
        raise ParseError("Missing ')' at end of input", tokens[-1][1] if tokens else None)
    return forms


def _automaton_text(form: List[SExp], line: int) -> str:
    lines = []
    for clause in form:
        if not isinstance(clause, list) or not all(isinstance(part, str) for part in clause):
            raise ParseError("Inline automaton clauses are flat lists like (states 2) or (0 a 1)", line)
        lines.append(' '.join(clause))
    return '\n'.join(lines)


def parse_formula(text: str, base_dir: Optional[str] = None) -> GroupFormula:
    """(alphabet ...) (automaton NAME ...) (exists (X ...) body)"""
    alphabet = InvAlphabet()
    automata: Dict[str, Nfa] = {}
    variables: List[int] = []
    body = None
    for form, line in parse_sexp(text):
        if not isinstance(form, list) or not form:
            raise ParseError("Expected a parenthesized top level form", line)
        head = form[0]
        if head == 'alphabet':
            for name in form[1:]:
                alphabet.add_pair(name, CONSTANT)
        elif head == 'automaton':
            if len(form) < 3:
                raise ParseError("(automaton NAME path-or-clauses) expected", line)
            name = form[1]
            if isinstance(form[2], str):
                path = form[2] if base_dir is None else os.path.join(base_dir, form[2])
                with open(path) as handle:
                    automata[name] = parse_automaton(handle.read(), alphabet)
            else:
                automata[name] = parse_automaton(_automaton_text(form[2:], line), alphabet, line)
        elif head == 'exists':
            if len(form) != 3 or not isinstance(form[1], list):
                raise ParseError("(exists (X ...) body) expected", line)
            for name in form[1]:
                x, _ = alphabet.add_pair(name, VARIABLE)
                variables.append(x)
            body = _formula(form[2], alphabet, automata, line)
        else:
            raise ParseError(f"Unknown top level form '{head}'", line)
    if body is None:
        raise ParseError("Formula has no (exists ...) form")
    logger.debug(f"Parsed formula over {len(alphabet.constants()) // 2} generators, {len(variables)} variables")
    return GroupFormula(alphabet, alphabet.constants(), tuple(variables), body, automata)


def _formula(form: SExp, alphabet: InvAlphabet, automata: Dict[str, Nfa], line: int):
    if not isinstance(form, list) or not form:
        raise ParseError(f"Expected a formula, got '{form}'", line)
    head, args = form[0], form[1:]
    if head in ('eq', 'neq'):
        word = tuple(alphabet.letter(token) for token in args if token != '1')
        return Eq(word) if head == 'eq' else Neq(word)
    if head in ('in', 'notin'):
        if len(args) != 2:
            raise ParseError(f"({head} X P) expected", line)
        x = alphabet.letter(args[0])
        if not alphabet.is_variable(x):
            raise ParseError(f"'{args[0]}' is not a variable", line)
        if args[1] not in automata:
            raise ParseError(f"Unknown automaton '{args[1]}'", line)
        return In(x, args[1]) if head == 'in' else NotIn(x, args[1])
    if head == 'not':
        if len(args) != 1:
            raise ParseError("(not body) takes one formula", line)
        return Not(_formula(args[0], alphabet, automata, line))
    if head in ('and', 'or'):
        parts = tuple(_formula(arg, alphabet, automata, line) for arg in args)
        return And(parts) if head == 'and' else Or(parts)
    raise ParseError(f"Unknown connective '{head}'", line)


def read_formula(filename: str) -> GroupFormula:
    with open(filename) as handle:
        return parse_formula(handle.read(), os.path.dirname(os.path.abspath(filename)))


# -- equation files -------------------------------------------------------------

def parse_equation_file(text: str) -> MonoidSystem:
    """Line based system over the free monoid with involution"""
    alphabet = InvAlphabet()
    automata: Dict[str, Nfa] = {}
    equations, inequalities, memberships = [], [], []
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        line_no = i + 1
        line = lines[i].split('#', 1)[0].strip()
        i += 1
        if not line:
            continue
        first = line.split()[0]
        if ':' in first:
            key, rest = line.split(':', 1)
        else:
            key, rest = first, line[len(first):]
        key = key.strip()
        rest = rest.strip()
        if key == 'alphabet':
            for name in rest.split():
                alphabet.add_pair(name, CONSTANT)
        elif key == 'fixed':
            for name in rest.split():
                alphabet.add_fixed(name)
        elif key == 'variables':
            for name in rest.split():
                alphabet.add_pair(name, VARIABLE)
        elif key == 'automaton':
            parts = rest.split()
            if len(parts) != 1:
                raise ParseError("'automaton NAME' expected", line_no)
            body = []
            start = i + 1
            while i < len(lines) and lines[i].strip() != 'end':
                body.append(lines[i])
                i += 1
            if i == len(lines):
                raise ParseError(f"Automaton '{parts[0]}' has no 'end'", line_no)
            i += 1
            automata[parts[0]] = parse_automaton('\n'.join(body), alphabet, start)
        elif key == 'constraint':
            parts = rest.split()
            if len(parts) != 3 or parts[1] not in ('in', 'notin'):
                raise ParseError("'constraint X in P' or 'constraint X notin P' expected", line_no)
            x = alphabet.letter(parts[0])
            if not alphabet.is_variable(x):
                raise ParseError(f"'{parts[0]}' is not a variable", line_no)
            if parts[2] not in automata:
                raise ParseError(f"Unknown automaton '{parts[2]}'", line_no)
            memberships.append(Membership(x, remove_epsilon(automata[parts[2]]), parts[1] == 'in', parts[2]))
        elif key == 'equation':
            if rest.count('=') != 1:
                raise ParseError("'equation: U = V' expected", line_no)
            u, v = rest.split('=')
            equations.append((alphabet.parse_word(u), alphabet.parse_word(v)))
        elif key == 'inequation':
            if '!=' not in rest:
                raise ParseError("'inequation: U != V' expected", line_no)
            u, v = rest.split('!=', 1)
            inequalities.append((alphabet.parse_word(u), alphabet.parse_word(v)))
        else:
            raise ParseError(f"Unknown directive '{key}'", line_no)
    if not equations and not inequalities:
        raise ParseError("Equation file declares no equation")
    return MonoidSystem(alphabet, alphabet.constants(), alphabet.variables(), tuple(equations),
                        tuple(inequalities), tuple(memberships))


def read_equation_file(filename: str) -> MonoidSystem:
    with open(filename) as handle:
        return parse_equation_file(handle.read())
