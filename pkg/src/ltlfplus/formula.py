"""Finite-trace formulas (LTLf, PPLTL), prefix-quantified formulas, and parsing.

Finite-trace formulas are immutable trees of small frozen dataclasses. The
same node classes are shared by both dialects; which operators are legal is
checked against a :class:`Dialect` when parsing or compiling.

Plus-level formulas wrap finite formulas in one of four prefix quantifiers
(``safe``, ``guar``, ``recu``, ``pers``) and combine them with Boolean
connectives.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterable, Sequence


class Dialect(enum.Enum):
    LTLF = "ltlf"
    PPLTL = "ppltl"

    @classmethod
    def coerce(cls, value) -> "Dialect":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown logic {value!r}; expected 'ltlf' or 'ppltl'") from None


class Quantifier(enum.Enum):
    SAFE = "safe"
    GUAR = "guar"
    RECU = "recu"
    PERS = "pers"

    @property
    def dual(self) -> "Quantifier":
        return _DUALS[self]


_DUALS = {
    Quantifier.SAFE: Quantifier.GUAR,
    Quantifier.GUAR: Quantifier.SAFE,
    Quantifier.RECU: Quantifier.PERS,
    Quantifier.PERS: Quantifier.RECU,
}


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class DialectError(FormulaSyntaxError):
    """An operator was used that does not belong to the requested dialect."""


# ---------------------------------------------------------------------------
# finite-trace formulas


@dataclass(frozen=True)
class Formula:
    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __invert__(self):
        return Not(self)

    def __str__(self):
        return to_text(self)

    @property
    def children(self) -> tuple:
        return ()


@dataclass(frozen=True)
class Atom(Formula):
    name: str

    def __post_init__(self):
        if not ATOM_RE.fullmatch(self.name) or self.name in KEYWORDS:
            raise ValueError(f"invalid atom name {self.name!r}")


@dataclass(frozen=True)
class Const(Formula):
    value: bool


@dataclass(frozen=True)
class Last(Formula):
    pass


@dataclass(frozen=True)
class First(Formula):
    pass


@dataclass(frozen=True)
class Unary(Formula):
    arg: Formula
    symbol = "?"

    @property
    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class Binary(Formula):
    left: Formula
    right: Formula
    symbol = "?"

    @property
    def children(self):
        return (self.left, self.right)


class Not(Unary):
    symbol = "!"


class Next(Unary):
    symbol = "X"


class WeakNext(Unary):
    symbol = "WX"


class Eventually(Unary):
    symbol = "F"


class Always(Unary):
    symbol = "G"


class Yesterday(Unary):
    symbol = "Y"


class Once(Unary):
    symbol = "O"


class Historically(Unary):
    symbol = "H"


class And(Binary):
    symbol = "&"


class Or(Binary):
    symbol = "|"


class Implies(Binary):
    symbol = "->"


class Iff(Binary):
    symbol = "<->"


class Until(Binary):
    symbol = "U"


class Since(Binary):
    symbol = "S"


TRUE = Const(True)
FALSE = Const(False)
LAST = Last()
FIRST = First()

PROPOSITIONAL = (Atom, Const, Not, And, Or, Implies, Iff)
FUTURE_ONLY = (Next, WeakNext, Eventually, Always, Until, Last)
PAST_ONLY = (Yesterday, Once, Historically, Since, First)

UNARY_OPS = {c.symbol: c for c in (Next, WeakNext, Eventually, Always, Yesterday, Once, Historically)}
BINARY_TEMPORAL = {"U": Until, "S": Since}

ATOM_RE = re.compile(r"[a-z][A-Za-z0-9_]*")
QUANTIFIER_WORDS = {q.value: q for q in Quantifier}
KEYWORDS = frozenset(
    {"true", "false", "last", "first", *QUANTIFIER_WORDS, *UNARY_OPS, *BINARY_TEMPORAL}
)


def subformulas(phi: Formula) -> list[Formula]:
    """Distinct subformulas of ``phi`` in post-order (children before parents)."""
    seen: dict[Formula, None] = {}

    def visit(node):
        if node in seen:
            return
        for child in node.children:
            visit(child)
        seen[node] = None

    visit(phi)
    return list(seen)


def atoms(phi) -> list[str]:
    """Sorted atom names occurring in a finite or plus-level formula."""
    if isinstance(phi, PlusFormula):
        names = set()
        for body in quantified_bodies(phi):
            names.update(atoms(body))
        return sorted(names)
    return sorted({f.name for f in subformulas(phi) if isinstance(f, Atom)})


def size(phi: Formula) -> int:
    return 1 + sum(size(c) for c in phi.children)


def is_propositional(phi: Formula) -> bool:
    return all(isinstance(f, PROPOSITIONAL) for f in subformulas(phi))


def check_dialect(phi: Formula, dialect) -> None:
    dialect = Dialect.coerce(dialect)
    banned = PAST_ONLY if dialect is Dialect.LTLF else FUTURE_ONLY
    for f in subformulas(phi):
        if isinstance(f, banned):
            raise DialectError(f"operator {_op_name(f)} is not allowed in {dialect.value}")


def _op_name(f: Formula) -> str:
    if isinstance(f, Last):
        return "last"
    if isinstance(f, First):
        return "first"
    return f.symbol


def negate_finite(phi: Formula) -> Formula:
    """Negate ``phi``, cancelling a double negation if one arises."""
    if isinstance(phi, Not):
        return phi.arg
    return Not(phi)


# ---------------------------------------------------------------------------
# plus-level formulas


@dataclass(frozen=True)
class PlusFormula:
    def __and__(self, other):
        return PlusAnd(self, other)

    def __or__(self, other):
        return PlusOr(self, other)

    def __invert__(self):
        return PlusNot(self)

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Quantified(PlusFormula):
    quantifier: Quantifier
    body: Formula
    dialect: Dialect


@dataclass(frozen=True)
class PlusNot(PlusFormula):
    arg: PlusFormula


@dataclass(frozen=True)
class PlusAnd(PlusFormula):
    left: PlusFormula
    right: PlusFormula


@dataclass(frozen=True)
class PlusOr(PlusFormula):
    left: PlusFormula
    right: PlusFormula


def safe(body, dialect=Dialect.LTLF):
    return Quantified(Quantifier.SAFE, body, Dialect.coerce(dialect))


def guar(body, dialect=Dialect.LTLF):
    return Quantified(Quantifier.GUAR, body, Dialect.coerce(dialect))


def recu(body, dialect=Dialect.LTLF):
    return Quantified(Quantifier.RECU, body, Dialect.coerce(dialect))


def pers(body, dialect=Dialect.LTLF):
    return Quantified(Quantifier.PERS, body, Dialect.coerce(dialect))


def quantified_bodies(psi: PlusFormula) -> list[Formula]:
    return [q.body for q in quantified_atoms(psi)]


def quantified_atoms(psi: PlusFormula) -> list[Quantified]:
    out = []

    def visit(node):
        if isinstance(node, Quantified):
            out.append(node)
        elif isinstance(node, PlusNot):
            visit(node.arg)
        else:
            visit(node.left)
            visit(node.right)

    visit(psi)
    return out


def plus_dialect(psi: PlusFormula) -> Dialect:
    """The single dialect shared by every quantified atom of ``psi``."""
    dialects = {q.dialect for q in quantified_atoms(psi)}
    if len(dialects) != 1:
        raise DialectError("plus formula mixes LTLf and PPLTL subformulas")
    return dialects.pop()


def shorthand(phi: Formula, dialect) -> Quantified:
    """Expand a propositional formula used at plus level.

    It constrains the first letter of the trace: ``safe(phi)`` in LTLf and
    ``safe(H(first -> phi))`` in PPLTL.
    """
    dialect = Dialect.coerce(dialect)
    if dialect is Dialect.LTLF:
        return Quantified(Quantifier.SAFE, phi, dialect)
    return Quantified(Quantifier.SAFE, Historically(Implies(FIRST, phi)), dialect)


# ---------------------------------------------------------------------------
# printing


def to_text(f) -> str:
    """Render a formula in the concrete syntax accepted by the parsers.

    Binary operators are always parenthesized, so ``parse(to_text(f)) == f``.
    """
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Last):
        return "last"
    if isinstance(f, First):
        return "first"
    if isinstance(f, Not):
        return "!" + to_text(f.arg)
    if isinstance(f, Unary):
        return f"{f.symbol} {to_text(f.arg)}"
    if isinstance(f, Binary):
        return f"({to_text(f.left)} {f.symbol} {to_text(f.right)})"
    if isinstance(f, Quantified):
        return f"{f.quantifier.value}({to_text(f.body)})"
    if isinstance(f, PlusNot):
        return "!" + to_text(f.arg)
    if isinstance(f, PlusAnd):
        return f"({to_text(f.left)} & {to_text(f.right)})"
    if isinstance(f, PlusOr):
        return f"({to_text(f.left)} | {to_text(f.right)})"
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(r"\s*(?:(<->|->|[!&|()])|([A-Za-z_][A-Za-z0-9_]*))")
_UNARY_PREFIX_RE = re.compile(r"(WX|X|F|G|Y|O|H)")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("op", m.group(1), start))
        else:
            tokens.extend(_split_word(m.group(2), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


def _split_word(word: str, start: int) -> list[tuple[str, str, int]]:
    if word in KEYWORDS:
        return [("kw", word, start)]
    if ATOM_RE.fullmatch(word):
        return [("atom", word, start)]
    # glued unary operators such as "GFp"
    out = []
    pos = 0
    while pos < len(word):
        m = _UNARY_PREFIX_RE.match(word, pos)
        if not m:
            break
        out.append(("kw", m.group(1), start + pos))
        pos = m.end()
    rest = word[pos:]
    if out and (rest == "" or ATOM_RE.fullmatch(rest) and rest not in KEYWORDS):
        if rest:
            out.append(("atom", rest, start + pos))
        return out
    raise FormulaSyntaxError(f"invalid identifier {word!r}", start)


class _Parser:
    def __init__(self, text: str, dialect: Dialect, plus: bool):
        if not text or not text.strip():
            raise FormulaSyntaxError("empty formula", 0)
        self.tokens = _tokenize(text)
        self.i = 0
        self.dialect = dialect
        self.plus = plus
        self.in_quantifier = False

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        tok = self.take()
        if tok[1] != value:
            raise FormulaSyntaxError(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok[2])
        return tok

    def parse(self):
        node = self.implication()
        tok = self.peek()
        if tok[0] != "end":
            raise FormulaSyntaxError(f"unexpected {tok[1]!r}", tok[2])
        return node

    def implication(self):
        left = self.disjunction()
        tok = self.peek()
        if tok[1] in ("->", "<->"):
            self.take()
            right = self.implication()
            return Implies(left, right) if tok[1] == "->" else Iff(left, right)
        return left

    def disjunction(self):
        node = self.conjunction()
        while self.peek()[1] == "|":
            self.take()
            node = Or(node, self.conjunction())
        return node

    def conjunction(self):
        node = self.temporal()
        while self.peek()[1] == "&":
            self.take()
            node = And(node, self.temporal())
        return node

    def temporal(self):
        left = self.unary()
        tok = self.peek()
        if tok[0] == "kw" and tok[1] in BINARY_TEMPORAL:
            self.take()
            cls = BINARY_TEMPORAL[tok[1]]
            self._check_op(cls, tok)
            return cls(left, self.temporal())
        return left

    def unary(self):
        tok = self.peek()
        if tok[1] == "!":
            self.take()
            return Not(self.unary())
        if tok[0] == "kw" and tok[1] in UNARY_OPS:
            self.take()
            cls = UNARY_OPS[tok[1]]
            self._check_op(cls, tok)
            return cls(self.unary())
        return self.primary()

    def primary(self):
        tok = self.take()
        kind, value, pos = tok
        if kind == "atom":
            return Atom(value)
        if value == "(":
            node = self.implication()
            self.expect(")")
            return node
        if kind == "kw":
            if value == "true":
                return TRUE
            if value == "false":
                return FALSE
            if value == "last":
                self._check_op(Last, tok)
                return LAST
            if value == "first":
                self._check_op(First, tok)
                return FIRST
            if value in QUANTIFIER_WORDS:
                return self.quantified(tok)
        raise FormulaSyntaxError(f"unexpected {value or 'end of input'!r}", pos)

    def quantified(self, tok):
        if not self.plus:
            raise FormulaSyntaxError(f"quantifier {tok[1]!r} inside a finite-trace formula", tok[2])
        if self.in_quantifier:
            raise FormulaSyntaxError(f"nested quantifier {tok[1]!r}", tok[2])
        self.expect("(")
        self.in_quantifier = True
        body = self.implication()
        self.in_quantifier = False
        self.expect(")")
        return Quantified(QUANTIFIER_WORDS[tok[1]], body, self.dialect)

    def _check_op(self, cls, tok):
        banned = PAST_ONLY if self.dialect is Dialect.LTLF else FUTURE_ONLY
        if issubclass(cls, banned):
            raise DialectError(f"operator {tok[1]!r} is not allowed in {self.dialect.value}", tok[2])


def parse_finite(text: str, dialect) -> Formula:
    """Parse an LTLf or PPLTL formula.

    Precedence from tightest: unary operators, ``U``/``S`` (right
    associative), ``&``, ``|``, then ``->``/``<->`` (right associative).
    """
    return _Parser(text, Dialect.coerce(dialect), plus=False).parse()


def parse_plus(text: str, dialect) -> PlusFormula:
    """Parse an LTLf+ / PPLTL+ formula.

    A quantifier-free propositional subformula at plus level is read as the
    initial-state shorthand (see :func:`shorthand`).
    """
    dialect = Dialect.coerce(dialect)
    tree = _Parser(text, dialect, plus=True).parse()
    return _lift(tree, dialect)


def _has_quantifier(node) -> bool:
    if isinstance(node, Quantified):
        return True
    if isinstance(node, Formula):
        return any(_has_quantifier(c) for c in node.children)
    return False


def _lift(node, dialect) -> PlusFormula:
    if isinstance(node, Quantified):
        return node
    if not _has_quantifier(node):
        if not is_propositional(node):
            raise FormulaSyntaxError(f"temporal formula {to_text(node)!r} must appear inside a quantifier")
        return shorthand(node, dialect)
    if isinstance(node, Not):
        return PlusNot(_lift(node.arg, dialect))
    if isinstance(node, And):
        return PlusAnd(_lift(node.left, dialect), _lift(node.right, dialect))
    if isinstance(node, Or):
        return PlusOr(_lift(node.left, dialect), _lift(node.right, dialect))
    if isinstance(node, Implies):
        return PlusOr(PlusNot(_lift(node.left, dialect)), _lift(node.right, dialect))
    if isinstance(node, Iff):
        a, b = _lift(node.left, dialect), _lift(node.right, dialect)
        return PlusOr(PlusAnd(a, b), PlusAnd(PlusNot(a), PlusNot(b)))
    raise FormulaSyntaxError(f"temporal operator {node.symbol!r} applied to a quantified formula")


# ---------------------------------------------------------------------------
# reference semantics


def _as_trace(trace: Iterable) -> list[frozenset]:
    letters = [frozenset(letter) for letter in trace]
    if not letters:
        raise ValueError("traces are non-empty")
    return letters


def truth_table(phi: Formula, trace: Sequence[frozenset]) -> list[bool]:
    """Truth value of ``phi`` at every position of a finite trace."""
    n = len(trace)
    memo: dict[Formula, list[bool]] = {}

    def go(f) -> list[bool]:
        if f in memo:
            return memo[f]
        if isinstance(f, Atom):
            out = [f.name in letter for letter in trace]
        elif isinstance(f, Const):
            out = [f.value] * n
        elif isinstance(f, Last):
            out = [i == n - 1 for i in range(n)]
        elif isinstance(f, First):
            out = [i == 0 for i in range(n)]
        elif isinstance(f, Not):
            out = [not x for x in go(f.arg)]
        elif isinstance(f, And):
            out = [a and b for a, b in zip(go(f.left), go(f.right))]
        elif isinstance(f, Or):
            out = [a or b for a, b in zip(go(f.left), go(f.right))]
        elif isinstance(f, Implies):
            out = [(not a) or b for a, b in zip(go(f.left), go(f.right))]
        elif isinstance(f, Iff):
            out = [a == b for a, b in zip(go(f.left), go(f.right))]
        elif isinstance(f, Next):
            a = go(f.arg)
            out = [i + 1 < n and a[i + 1] for i in range(n)]
        elif isinstance(f, WeakNext):
            a = go(f.arg)
            out = [i + 1 >= n or a[i + 1] for i in range(n)]
        elif isinstance(f, (Until, Eventually)):
            if isinstance(f, Until):
                a, b = go(f.left), go(f.right)
            else:
                a, b = [True] * n, go(f.arg)
            out = [False] * n
            acc = False
            for i in reversed(range(n)):
                acc = b[i] or (a[i] and acc)
                out[i] = acc
        elif isinstance(f, Always):
            a = go(f.arg)
            out = [True] * n
            acc = True
            for i in reversed(range(n)):
                acc = a[i] and acc
                out[i] = acc
        elif isinstance(f, Yesterday):
            a = go(f.arg)
            out = [i > 0 and a[i - 1] for i in range(n)]
        elif isinstance(f, (Since, Once, Historically)):
            if isinstance(f, Historically):
                a = go(f.arg)
                out = []
                acc = True
                for i in range(n):
                    acc = acc and a[i]
                    out.append(acc)
            else:
                if isinstance(f, Since):
                    a, b = go(f.left), go(f.right)
                else:
                    a, b = [True] * n, go(f.arg)
                out = []
                acc = False
                for i in range(n):
                    acc = b[i] or (a[i] and acc)
                    out.append(acc)
        else:
            raise TypeError(f"not a finite formula: {f!r}")
        memo[f] = out
        return out

    return go(phi)


def eval_finite(phi: Formula, trace: Iterable, dialect) -> bool:
    """Does the non-empty finite ``trace`` satisfy ``phi``?

    LTLf formulas are evaluated at the first position, PPLTL formulas at the
    last one. Letters are iterables of the atom names that are true.
    """
    dialect = Dialect.coerce(dialect)
    letters = _as_trace(trace)
    table = truth_table(phi, letters)
    return table[0] if dialect is Dialect.LTLF else table[-1]
