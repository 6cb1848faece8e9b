# =============================================================================
# File: src/equation.py
# =============================================================================
import dataclasses
import math
from dataclasses import dataclass
from typing import Dict, FrozenSet, Mapping, Optional, Sequence, Tuple

from config.config import Config
from src.constraints import AcceptancePair, ConstraintHom, MonElem
from src.errors import ContractError
from src.expressions import ExpExpr, eval_expr, render_expression
from src.words import InvAlphabet, Word

Solution = Dict[int, Word]

RHO_GUESSED = 'guessed'
RHO_RESIDUAL = 'residual'


@dataclass(frozen=True, eq=False)
class EquationE:
    """Equation with constraints (Gamma, h, Omega, rho; L = R)"""
    alphabet: InvAlphabet
    constants: FrozenSet[int]
    variables: FrozenSet[int]
    h: ConstraintHom
    rho: Optional[Mapping[int, MonElem]]
    lhs: ExpExpr
    rhs: ExpExpr
    checks: Tuple[AcceptancePair, ...] = ()
    rho_mode: str = RHO_GUESSED

    @property
    def n(self) -> int:
        return self.h.n

    @property
    def d(self) -> int:
        """Number of symbol occurrences |LR|"""
        return self.lhs.length + self.rhs.length

    def input_size(self) -> float:
        """n + d + log2(|Gamma| + |Omega|)"""
        return self.n + self.d + math.log2(max(1, len(self.constants) + len(self.variables)))

    def replace(self, **changes) -> 'EquationE':
        return dataclasses.replace(self, **changes)

    def sides(self, cap: int = Config.EXPANSION_CAP) -> Tuple[Word, Word]:
        return eval_expr(self.lhs, cap), eval_expr(self.rhs, cap)

    def occurring_variables(self) -> FrozenSet[int]:
        letters = self.lhs.letters() | self.rhs.letters()
        return frozenset(a for a in letters if a in self.variables)

    def is_trivial(self, cap: int = Config.EXPANSION_CAP) -> bool:
        """No variables and both sides evaluate to the same word"""
        if self.occurring_variables():
            return False
        left, right = self.sides(cap)
        return left == right

    def validate(self):
        """Check the type invariants; raise ContractError on the first violation"""
        bar = self.alphabet.bar
        for x in self.variables:
            if bar[x] not in self.variables or bar[x] == x:
                raise ContractError(f"Variable set not closed under a fixed-point free involution at "
                                    f"'{self.alphabet.name(x)}'")
        for a in self.constants:
            if bar[a] not in self.constants:
                raise ContractError(f"Constant set not closed under involution at '{self.alphabet.name(a)}'")
            if a not in self.h:
                raise ContractError(f"h undefined on '{self.alphabet.name(a)}'")
        stray = (self.lhs.letters() | self.rhs.letters()) - self.constants - self.variables
        if stray:
            names = ', '.join(sorted(self.alphabet.name(a) for a in stray))
            raise ContractError(f"Sides use letters outside Gamma and Omega: {names}")
        if self.rho is not None:
            for x in self.variables:
                if x not in self.rho:
                    raise ContractError(f"rho undefined on '{self.alphabet.name(x)}'")
                if self.rho[bar[x]] != self.rho[x].involute():
                    raise ContractError(f"rho not compatible with the involution at '{self.alphabet.name(x)}'")

    def render(self) -> str:
        return f"{render_expression(self.lhs, self.alphabet)} = {render_expression(self.rhs, self.alphabet)}"

    def __repr__(self) -> str:
        return f"EquationE({self.render()}, |Gamma|={len(self.constants)}, |Omega|={len(self.variables)})"


def complete_solution(alphabet: InvAlphabet, sigma: Mapping[int, Sequence[int]]) -> Solution:
    """Add bar partners so that sigma(bar X) = involute(sigma(X))"""
    full: Solution = {}
    for x, w in sigma.items():
        full[x] = tuple(w)
        full.setdefault(alphabet.bar[x], alphabet.involute(w))
    return full


def apply_solution(alphabet: InvAlphabet, word: Sequence[int], sigma: Mapping[int, Sequence[int]]) -> Word:
    """Substitute sigma for variables, leaving constants invariant"""
    out = []
    for a in word:
        if a in sigma:
            out.extend(sigma[a])
        elif alphabet.is_variable(a):
            raise ContractError(f"Solution undefined on '{alphabet.name(a)}'")
        else:
            out.append(a)
    return tuple(out)


def render_solution(alphabet: InvAlphabet, sigma: Mapping[int, Sequence[int]]) -> Dict[str, str]:
    """Printable form keeping one representative of each variable pair"""
    return {alphabet.name(x): alphabet.render_word(sigma[x])
            for x in alphabet.representatives(sigma) if x in sigma}
