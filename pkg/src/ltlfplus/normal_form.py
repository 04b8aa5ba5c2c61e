"""Boolean skeletons and positive normal form of plus-level formulas."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .formula import (
    Dialect,
    Formula,
    PlusAnd,
    PlusFormula,
    PlusNot,
    PlusOr,
    Quantified,
    Quantifier,
    negate_finite,
    plus_dialect,
    to_text,
)


@dataclass(frozen=True)
class BoolExpr:
    """Boolean formula over integer variables, evaluated on sets of variables."""

    def evaluate(self, true_vars) -> bool:
        raise NotImplementedError

    def __call__(self, true_vars) -> bool:
        return self.evaluate(true_vars)

    def variables(self) -> frozenset[int]:
        raise NotImplementedError

    def __str__(self):
        return self.render()

    def render(self, parent: int = 0) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class BConst(BoolExpr):
    value: bool

    def evaluate(self, true_vars):
        return self.value

    def variables(self):
        return frozenset()

    def render(self, parent=0):
        return "true" if self.value else "false"


@dataclass(frozen=True)
class BVar(BoolExpr):
    index: int

    def evaluate(self, true_vars):
        return self.index in true_vars

    def variables(self):
        return frozenset({self.index})

    def render(self, parent=0):
        return str(self.index)


@dataclass(frozen=True)
class BNot(BoolExpr):
    arg: BoolExpr

    def evaluate(self, true_vars):
        return not self.arg.evaluate(true_vars)

    def variables(self):
        return self.arg.variables()

    def render(self, parent=0):
        return "!" + self.arg.render(3)


@dataclass(frozen=True)
class BAnd(BoolExpr):
    left: BoolExpr
    right: BoolExpr

    def evaluate(self, true_vars):
        return self.left.evaluate(true_vars) and self.right.evaluate(true_vars)

    def variables(self):
        return self.left.variables() | self.right.variables()

    def render(self, parent=0):
        text = f"{self.left.render(2)} & {self.right.render(2)}"
        return f"({text})" if parent > 2 else text


@dataclass(frozen=True)
class BOr(BoolExpr):
    left: BoolExpr
    right: BoolExpr

    def evaluate(self, true_vars):
        return self.left.evaluate(true_vars) or self.right.evaluate(true_vars)

    def variables(self):
        return self.left.variables() | self.right.variables()

    def render(self, parent=0):
        text = f"{self.left.render(1)} | {self.right.render(1)}"
        return f"({text})" if parent > 1 else text


def negate_variables(expr: BoolExpr, indices: Iterable[int]) -> BoolExpr:
    """Replace every occurrence of variable ``i`` by ``!i`` for ``i`` in ``indices``."""
    indices = frozenset(indices)

    def go(e):
        if isinstance(e, BVar):
            return BNot(e) if e.index in indices else e
        if isinstance(e, BNot):
            return BNot(go(e.arg))
        if isinstance(e, BAnd):
            return BAnd(go(e.left), go(e.right))
        if isinstance(e, BOr):
            return BOr(go(e.left), go(e.right))
        return e

    return go(expr)


def is_negation_free(expr: BoolExpr) -> bool:
    if isinstance(expr, BNot):
        return False
    if isinstance(expr, (BAnd, BOr)):
        return is_negation_free(expr.left) and is_negation_free(expr.right)
    return True


@dataclass(frozen=True)
class PnfAtom:
    index: int
    quantifier: Quantifier
    body: Formula
    dialect: Dialect

    def as_formula(self) -> Quantified:
        return Quantified(self.quantifier, self.body, self.dialect)

    def __str__(self):
        return f"{self.index}: {self.quantifier.value}({to_text(self.body)})"


@dataclass(frozen=True)
class PnfSkeleton:
    """A negation-free Boolean skeleton over quantified atoms ``1..k``."""

    atoms: tuple[PnfAtom, ...]
    skeleton: BoolExpr

    @property
    def k(self) -> int:
        return len(self.atoms)

    @property
    def dialect(self) -> Dialect:
        return self.atoms[0].dialect

    def to_plus(self) -> PlusFormula:
        """Rebuild the plus-level formula this skeleton stands for."""
        by_index = {a.index: a.as_formula() for a in self.atoms}

        def go(e):
            if isinstance(e, BVar):
                return by_index[e.index]
            if isinstance(e, BNot):
                return PlusNot(go(e.arg))
            if isinstance(e, BAnd):
                return PlusAnd(go(e.left), go(e.right))
            if isinstance(e, BOr):
                return PlusOr(go(e.left), go(e.right))
            raise ValueError("constant skeletons have no plus-level form")

        return go(self.skeleton)

    def __str__(self):
        listing = ", ".join(str(a) for a in self.atoms)
        return f"{self.skeleton} where {listing}"


def to_pnf(psi: PlusFormula) -> PnfSkeleton:
    """Push negations into the finite-trace formulas.

    Uses the quantifier dualities (``!safe(f) = guar(!f)``, ``!recu(f) =
    pers(!f)``) and De Morgan. Identical ``(quantifier, body)`` pairs share an
    index; indices are assigned left to right starting at 1.
    """
    plus_dialect(psi)
    index: dict[tuple, int] = {}
    atoms: list[PnfAtom] = []

    def go(node, negated):
        if isinstance(node, Quantified):
            q, body = node.quantifier, node.body
            if negated:
                q, body = q.dual, negate_finite(body)
            key = (q, body)
            if key not in index:
                index[key] = len(atoms) + 1
                atoms.append(PnfAtom(index[key], q, body, node.dialect))
            return BVar(index[key])
        if isinstance(node, PlusNot):
            return go(node.arg, not negated)
        if isinstance(node, (PlusAnd, PlusOr)):
            conj = isinstance(node, PlusAnd) != negated
            cls = BAnd if conj else BOr
            return cls(go(node.left, negated), go(node.right, negated))
        raise TypeError(f"not a plus formula: {node!r}")

    skeleton = go(psi, False)
    return PnfSkeleton(tuple(atoms), skeleton)
