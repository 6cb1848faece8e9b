# =============================================================================
# File: conftest.py (PyTest Configuration)
# =============================================================================
import os
import sys

import numpy as np
import pytest

# Add the repository root to the Python path so that "src" and "config" resolve
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.constraints import ConstraintHom, MonElem, hom_image  # noqa: E402
from src.equation import EquationE, apply_solution, complete_solution  # noqa: E402
from src.expressions import Literal  # noqa: E402
from src.words import InvAlphabet  # noqa: E402


def trivial_hom(alphabet, constants):
    """1-state homomorphism sending every constant to the unit"""
    unit = MonElem.identity(1)
    return ConstraintHom(1, {a: unit for a in constants}, alphabet)


def plain_equation(alphabet, lhs, rhs, constants=None):
    """Guessed-mode equation with the trivial homomorphism and rho = unit everywhere"""
    constants = frozenset(alphabet.constants() if constants is None else constants)
    variables = alphabet.variables()
    rho = {x: MonElem.identity(1) for x in variables}
    return EquationE(alphabet, constants, variables, trivial_hom(alphabet, constants), rho,
                     Literal(alphabet.parse_word(lhs)), Literal(alphabet.parse_word(rhs)))


def random_hom(rng, alphabet, constants, n):
    """h with random n x n blocks on one letter of every pair, bars by involution"""
    images = {}
    for a in alphabet.representatives(constants):
        elem = MonElem(rng.random((n, n)) < 0.4, rng.random((n, n)) < 0.4)
        images[a] = elem
        images[alphabet.bar[a]] = elem.involute()
    return ConstraintHom(n, images, alphabet)


def _equation(alphabet, h, rho, lhs, rhs):
    occurring = {s for s in lhs + rhs if alphabet.is_variable(s)}
    variables = frozenset(occurring | {alphabet.bar[x] for x in occurring})
    return EquationE(alphabet, frozenset(h.images), variables, h, {x: rho[x] for x in variables},
                     Literal(tuple(lhs)), Literal(tuple(rhs)))


def random_solvable_equation(rng, alphabet, n=1, max_d=8):
    """Guessed-mode equation folded around a planted solution; returns both"""
    constants = sorted(alphabet.constants())
    variables = sorted(alphabet.variables())
    while True:
        sigma = {x: tuple(int(a) for a in rng.choice(constants, size=int(rng.integers(1, 3))))
                 for x in alphabet.representatives(variables)}
        full = complete_solution(alphabet, sigma)
        lhs = [int(s) for s in rng.choice(constants + variables, size=int(rng.integers(0, 3)))]
        lhs.insert(int(rng.integers(0, len(lhs) + 1)), variables[int(rng.integers(0, len(variables)))])
        value = apply_solution(alphabet, lhs, full)
        rhs = []
        i = 0
        while i < len(value):
            x = variables[int(rng.integers(0, len(variables)))]
            if rng.random() < 0.4 and value[i:i + len(full[x])] == full[x]:
                rhs.append(x)
                i += len(full[x])
            else:
                rhs.append(value[i])
                i += 1
        if len(lhs) + len(rhs) <= max_d:
            break
    h = trivial_hom(alphabet, constants) if n == 1 else random_hom(rng, alphabet, constants, n)
    rho = {x: hom_image(h, full[x]) for x in variables}
    e = _equation(alphabet, h, rho, lhs, rhs)
    return e, {x: w for x, w in sigma.items() if x in e.variables}


def random_unsolvable_equation(rng, alphabet):
    """Both sides hold the same variable occurrences; one side has an extra constant"""
    constants = sorted(alphabet.constants())
    variables = sorted(alphabet.variables())
    occurrences = [int(x) for x in rng.choice(variables, size=int(rng.integers(1, 3)))]
    letters = [int(a) for a in rng.choice(constants, size=int(rng.integers(0, 3)))]
    extra = int(rng.choice(constants))
    lhs = list(rng.permutation(occurrences + letters))
    rhs = list(rng.permutation(occurrences + letters + [extra]))
    h = trivial_hom(alphabet, constants)
    rho = {x: MonElem.identity(1) for x in variables}
    return _equation(alphabet, h, rho, [int(s) for s in lhs], [int(s) for s in rhs])


@pytest.fixture(scope="session")
def random_seed():
    """Set random seed for reproducible tests"""
    np.random.seed(42)
    return 42


@pytest.fixture
def rng(random_seed):
    """Generator for randomized property checks"""
    return np.random.default_rng(random_seed)


@pytest.fixture
def ab_alphabet():
    """Constants a, b with their bars"""
    return InvAlphabet.from_names(constants=['a', 'b'])


@pytest.fixture
def running_alphabet():
    """Constants a, b, c and variables X, Y, Z of the worked example"""
    return InvAlphabet.from_names(constants=['a', 'b', 'c'], variables=['X', 'Y', 'Z'])


@pytest.fixture
def running_equation(running_alphabet):
    """a X X' a' = Y b' Y a' b Y' over a 1-state homomorphism"""
    alphabet = running_alphabet
    e = plain_equation(alphabet, "a X X' a'", "Y b' Y a' b Y'")
    used = frozenset(alphabet.letter(name) for name in ('X', "X'", 'Y', "Y'"))
    rho = {x: e.rho[x] for x in used}
    return e.replace(variables=used, rho=rho)


@pytest.fixture
def running_solution(running_alphabet):
    """sigma(X) = b c c' b' b' a b c, sigma(Y) = a b c c' b'"""
    alphabet = running_alphabet
    return {alphabet.letter('X'): alphabet.parse_word("b c c' b' b' a b c"),
            alphabet.letter('Y'): alphabet.parse_word("a b c c' b'")}
