"""Explicit-state finite automata over the alphabet 2^AP.

Letters are integers: bit ``j`` of a letter is set when ``alphabet.atoms[j]``
is true. Every deterministic structure here is a :class:`TransitionSystem`
with a transition table ``delta[state][letter]``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .formula import (
    Always,
    And,
    Atom,
    Const,
    Dialect,
    Eventually,
    First,
    Formula,
    Historically,
    Iff,
    Implies,
    Last,
    Next,
    Not,
    Once,
    Or,
    Since,
    Until,
    WeakNext,
    Yesterday,
    atoms as formula_atoms,
    check_dialect,
    subformulas,
    to_text,
)


@dataclass(frozen=True)
class Alphabet:
    """Ordered atom list; letters are the subsets of it, indexed as bitsets."""

    atoms: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        if len(set(self.atoms)) != len(self.atoms):
            raise ValueError(f"duplicate atoms in {self.atoms}")

    @classmethod
    def of(cls, *names: Iterable[str]) -> "Alphabet":
        """Sorted alphabet over the union of the given atom collections."""
        return cls(tuple(sorted(set().union(*map(set, names)))))

    @property
    def size(self) -> int:
        return 1 << len(self.atoms)

    def index(self, letter) -> int:
        if isinstance(letter, int):
            if not 0 <= letter < self.size:
                raise ValueError(f"letter index {letter} out of range for {self.atoms}")
            return letter
        if isinstance(letter, str):
            letter = (letter,)
        out = 0
        for name in letter:
            try:
                out |= 1 << self.atoms.index(name)
            except ValueError:
                raise ValueError(f"unknown atom {name!r} in letter; alphabet is {self.atoms}") from None
        return out

    def project(self, letter) -> int:
        """Like :meth:`index` but silently drops atoms outside the alphabet."""
        if isinstance(letter, str):
            letter = (letter,)
        return sum(1 << j for j, a in enumerate(self.atoms) if a in set(letter))

    def encode(self, word) -> list[int]:
        return [self.index(letter) for letter in word]

    def letter(self, index: int) -> frozenset[str]:
        return frozenset(a for j, a in enumerate(self.atoms) if index >> j & 1)

    def letters(self) -> list[frozenset[str]]:
        return [self.letter(i) for i in range(self.size)]

    def format(self, index: int) -> str:
        return "{" + ",".join(sorted(self.letter(index))) + "}"


@dataclass(frozen=True, eq=False)
class TransitionSystem:
    """Deterministic, total transition system with states ``0..n-1``."""

    alphabet: Alphabet
    delta: tuple[tuple[int, ...], ...]
    initial: int = 0
    names: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "delta", tuple(tuple(row) for row in self.delta))
        n = len(self.delta)
        if not 0 <= self.initial < n:
            raise ValueError("initial state out of range")
        for row in self.delta:
            if len(row) != self.alphabet.size or any(not 0 <= t < n for t in row):
                raise ValueError("transition table is not total over the alphabet")
        if not self.names:
            object.__setattr__(self, "names", tuple(range(n)))
        object.__setattr__(self, "_lasso", _LassoRunner(self.delta))

    @property
    def num_states(self) -> int:
        return len(self.delta)

    def successor(self, state: int, letter) -> int:
        return self.delta[state][self.alphabet.index(letter)]

    def run(self, word, start: int | None = None) -> list[int]:
        """States ``rho_0 .. rho_n`` visited while reading ``word``."""
        state = self.initial if start is None else start
        states = [state]
        for a in self.alphabet.encode(word):
            state = self.delta[state][a]
            states.append(state)
        return states

    def lasso(self, u, v):
        """Analyse the run on ``u v^omega``.

        Returns ``(stem, inf, later)``: the states at positions ``0..|u|``,
        the states visited infinitely often, and every state at a position
        greater than ``|u|``.
        """
        v = tuple(self.alphabet.encode(v))
        if not v:
            raise ValueError("the cycle of a lasso must be non-empty")
        stem = self.run(u)
        inf, later = self._lasso.profile(stem[-1], v)
        return stem, inf, later

    def in_degree(self, state: int) -> int:
        return sum(row.count(state) for row in self.delta)


@dataclass(frozen=True, eq=False)
class Dfa(TransitionSystem):
    finals: frozenset = frozenset()

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, "finals", frozenset(self.finals))

    def accepts(self, word) -> bool:
        return self.run(word)[-1] in self.finals


class _LassoRunner:
    """Memoized analysis of ``v^omega`` from each state.

    For a fixed cycle word ``v`` the map "state before v" -> "state after v"
    is a function on a finite set, so iterating it from any state ends in a
    cycle. Results are shared by every state on the same path.
    """

    def __init__(self, delta):
        self.delta = delta
        self.tables: dict[tuple, dict[int, tuple]] = {}

    def segment(self, state, v):
        states = [state]
        for a in v:
            state = self.delta[state][a]
            states.append(state)
        return states

    def profile(self, start, v):
        table = self.tables.setdefault(v, {})
        if start in table:
            return table[start]
        path, segments, seen = [], [], {}
        x = start
        while x not in table and x not in seen:
            seen[x] = len(path)
            path.append(x)
            seg = self.segment(x, v)
            segments.append(seg)
            x = seg[-1]
        if x in table:
            inf, later = table[x]
            tail = len(path)
        else:
            cycle = range(seen[x], len(path))
            inf = frozenset(s for i in cycle for s in segments[i][:-1])
            later = inf
            for i in cycle:
                table[path[i]] = (inf, inf)
            tail = seen[x]
        for i in reversed(range(tail)):
            later = later | frozenset(segments[i][1:])
            table[path[i]] = (inf, later)
        return table[start]


def lasso_inf(system: TransitionSystem, u, v) -> frozenset:
    """States visited infinitely often by the run on ``u v^omega``."""
    return system.lasso(u, v)[1]


# ---------------------------------------------------------------------------
# nondeterministic automata


@dataclass(frozen=True, eq=False)
class Nfa:
    alphabet: Alphabet
    transitions: tuple  # transitions[state][letter] -> frozenset of states
    initial: frozenset
    finals: frozenset
    names: tuple = ()

    @property
    def num_states(self) -> int:
        return len(self.transitions)

    def accepts(self, word) -> bool:
        current = set(self.initial)
        for a in self.alphabet.encode(word):
            current = {t for s in current for t in self.transitions[s][a]}
        return bool(current & self.finals)


def _default_alphabet(phi: Formula, alphabet) -> Alphabet:
    if alphabet is None:
        return Alphabet(tuple(formula_atoms(phi)))
    if not isinstance(alphabet, Alphabet):
        alphabet = Alphabet(tuple(alphabet))
    missing = set(formula_atoms(phi)) - set(alphabet.atoms)
    if missing:
        raise ValueError(f"atoms {sorted(missing)} missing from alphabet {alphabet.atoms}")
    return alphabet


class _Obligations:
    """Alternating-automaton view of an LTLf formula in negation normal form.

    Nodes are interned tuples ``(kind, *children)``. An NFA state is a set of
    obligations ``2*node + strong`` for the next position: a strong obligation
    requires that a next position exists, a weak one does not.
    """

    def __init__(self, phi: Formula, alphabet: Alphabet):
        self.alphabet = alphabet
        self.nodes: list[tuple] = []
        self.ids: dict[tuple, int] = {}
        self.root = self.nnf(phi, False)
        self._delta: dict[tuple[int, int], frozenset] = {}

    def intern(self, node: tuple) -> int:
        if node not in self.ids:
            self.ids[node] = len(self.nodes)
            self.nodes.append(node)
        return self.ids[node]

    def nnf(self, f: Formula, neg: bool) -> int:
        go = self.nnf
        if isinstance(f, Atom):
            return self.intern(("lit", 1 << self.alphabet.atoms.index(f.name), not neg))
        if isinstance(f, Const):
            return self.intern(("const", f.value != neg))
        if isinstance(f, Last):
            # last = !X true
            return go(Next(Const(True)), not neg)
        if isinstance(f, Not):
            return go(f.arg, not neg)
        if isinstance(f, (And, Or)):
            kind = "and" if isinstance(f, And) != neg else "or"
            return self.intern((kind, go(f.left, neg), go(f.right, neg)))
        if isinstance(f, Implies):
            return go(Or(Not(f.left), f.right), neg)
        if isinstance(f, Iff):
            return go(Or(And(f.left, f.right), And(Not(f.left), Not(f.right))), neg)
        if isinstance(f, (Next, WeakNext)):
            strong = isinstance(f, Next) != neg
            return self.intern(("X" if strong else "WX", go(f.arg, neg)))
        if isinstance(f, Until):
            kind = "R" if neg else "U"
            return self.intern((kind, go(f.left, neg), go(f.right, neg)))
        if isinstance(f, Eventually):
            return go(Until(Const(True), f.arg), neg)
        if isinstance(f, Always):
            return go(Not(Eventually(Not(f.arg))), neg)
        raise TypeError(f"{type(f).__name__} is not an LTLf operator")

    def delta(self, node: int, letter: int) -> frozenset:
        """Successor obligations as a DNF: a set of alternative clauses."""
        key = (node, letter)
        if key in self._delta:
            return self._delta[key]
        kind, *args = self.nodes[node]
        if kind == "const":
            out = _TRUE_DNF if args[0] else _FALSE_DNF
        elif kind == "lit":
            out = _TRUE_DNF if bool(letter & args[0]) == args[1] else _FALSE_DNF
        elif kind == "and":
            out = _dnf_and(self.delta(args[0], letter), self.delta(args[1], letter))
        elif kind == "or":
            out = _dnf_or(self.delta(args[0], letter), self.delta(args[1], letter))
        elif kind == "X":
            out = frozenset({frozenset({2 * args[0] + 1})})
        elif kind == "WX":
            out = frozenset({frozenset({2 * args[0]})})
        elif kind == "U":
            again = frozenset({frozenset({2 * node + 1})})
            out = _dnf_or(self.delta(args[1], letter), _dnf_and(self.delta(args[0], letter), again))
        elif kind == "R":
            again = frozenset({frozenset({2 * node})})
            out = _dnf_and(self.delta(args[1], letter), _dnf_or(self.delta(args[0], letter), again))
        else:
            raise AssertionError(kind)
        self._delta[key] = out
        return out

    def successors(self, state: frozenset, letter: int) -> frozenset:
        out = _TRUE_DNF
        for ob in sorted(state):
            out = _dnf_and(out, self.delta(ob >> 1, letter))
            if not out:
                break
        return out

    def describe(self, node: int) -> str:
        kind, *args = self.nodes[node]
        if kind == "const":
            return "true" if args[0] else "false"
        if kind == "lit":
            name = self.alphabet.atoms[args[0].bit_length() - 1]
            return name if args[1] else "!" + name
        if kind in ("X", "WX"):
            return f"{kind} {self.describe(args[0])}"
        sym = {"and": "&", "or": "|", "U": "U", "R": "R"}[kind]
        return f"({self.describe(args[0])} {sym} {self.describe(args[1])})"

    def describe_state(self, state: frozenset) -> str:
        parts = sorted(("X " if ob & 1 else "WX ") + self.describe(ob >> 1) for ob in state)
        return "{" + ", ".join(parts) + "}"


_TRUE_DNF = frozenset({frozenset()})
_FALSE_DNF = frozenset()


def _minimal(clauses) -> frozenset:
    clauses = sorted(set(clauses), key=len)
    kept: list[frozenset] = []
    for c in clauses:
        if not any(k <= c for k in kept):
            kept.append(c)
    return frozenset(kept)


def _dnf_and(a: frozenset, b: frozenset) -> frozenset:
    if not a or not b:
        return _FALSE_DNF
    return _minimal(x | y for x in a for y in b)


def _dnf_or(a: frozenset, b: frozenset) -> frozenset:
    return _minimal(a | b)


def ltlf_to_nfa(phi: Formula, alphabet=None) -> Nfa:
    """Compile an LTLf formula into an NFA (on non-empty words).

    The formula is read as an alternating automaton whose states are
    subformulas; its subset construction gives an NFA whose states are sets
    of pending next-step obligations. A state is final when none of its
    obligations is strong.
    """
    check_dialect(phi, Dialect.LTLF)
    alphabet = _default_alphabet(phi, alphabet)
    obl = _Obligations(phi, alphabet)
    start = frozenset({2 * obl.root + 1})
    index = {start: 0}
    order = [start]
    transitions = []
    queue = deque([start])
    while queue:
        state = queue.popleft()
        row = []
        for a in range(alphabet.size):
            targets = set()
            for succ in sorted(obl.successors(state, a), key=sorted):
                if succ not in index:
                    index[succ] = len(order)
                    order.append(succ)
                    queue.append(succ)
                targets.add(index[succ])
            row.append(frozenset(targets))
        transitions.append(tuple(row))
    finals = frozenset(i for i, s in enumerate(order) if not any(ob & 1 for ob in s))
    names = tuple(obl.describe_state(s) for s in order)
    return Nfa(alphabet, tuple(transitions), frozenset({0}), finals, names)


# ---------------------------------------------------------------------------
# determinization and PPLTL


class _SubsetStepper:
    """Subset-construction successor function over an explicit NFA."""

    def __init__(self, nfa: Nfa):
        self.nfa = nfa
        self.initial = frozenset(nfa.initial)

    def step(self, state: frozenset, letter: int) -> frozenset:
        rows = self.nfa.transitions
        return frozenset().union(*(rows[s][letter] for s in state)) if state else state

    def is_final(self, state: frozenset) -> bool:
        return not state.isdisjoint(self.nfa.finals)

    def name(self, state: frozenset) -> str:
        if not self.nfa.names:
            return "{" + ",".join(map(str, sorted(state))) + "}"
        return "[" + " ; ".join(self.nfa.names[s] for s in sorted(state)) + "]"


class _PastStepper:
    """Subformula-set update for PPLTL.

    A state is the bitmask of subformulas true on the word read so far;
    ``None`` is the initial state before any letter.
    """

    def __init__(self, phi: Formula, alphabet: Alphabet):
        self.subs = subformulas(phi)
        pos = {f: i for i, f in enumerate(self.subs)}
        self.root_bit = 1 << pos[phi]
        self.initial = None
        self.ops = []
        for f in self.subs:
            if isinstance(f, Atom):
                self.ops.append(("atom", 1 << alphabet.atoms.index(f.name), 0))
            elif isinstance(f, Const):
                self.ops.append(("const", f.value, 0))
            elif isinstance(f, First):
                self.ops.append(("first", 0, 0))
            elif isinstance(f, (Not, Yesterday, Once, Historically)):
                self.ops.append((type(f).__name__, pos[f.arg], 0))
            elif isinstance(f, (And, Or, Implies, Iff, Since)):
                self.ops.append((type(f).__name__, pos[f.left], pos[f.right]))
            else:
                raise TypeError(f"{type(f).__name__} is not a PPLTL operator")

    def step(self, prev, letter: int) -> int:
        new = 0
        for i, (kind, a, b) in enumerate(self.ops):
            if kind == "atom":
                val = bool(letter & a)
            elif kind == "const":
                val = a
            elif kind == "first":
                val = prev is None
            elif kind == "Not":
                val = not new >> a & 1
            elif kind == "And":
                val = new >> a & 1 and new >> b & 1
            elif kind == "Or":
                val = new >> a & 1 or new >> b & 1
            elif kind == "Implies":
                val = not new >> a & 1 or new >> b & 1
            elif kind == "Iff":
                val = (new >> a & 1) == (new >> b & 1)
            elif kind == "Yesterday":
                val = prev is not None and prev >> a & 1
            elif kind == "Since":
                val = new >> b & 1 or (new >> a & 1 and prev is not None and prev >> i & 1)
            elif kind == "Once":
                val = new >> a & 1 or (prev is not None and prev >> i & 1)
            else:  # Historically
                val = new >> a & 1 and (prev is None or prev >> i & 1)
            if val:
                new |= 1 << i
        return new

    def is_final(self, state) -> bool:
        return state is not None and bool(state & self.root_bit)

    def name(self, state) -> str:
        if state is None:
            return "init"
        true = [to_text(f) for i, f in enumerate(self.subs) if state >> i & 1]
        return "{" + ", ".join(true) + "}"


def _determinize(stepper, alphabet: Alphabet) -> Dfa:
    index = {stepper.initial: 0}
    order = [stepper.initial]
    delta = []
    queue = deque([stepper.initial])
    while queue:
        state = queue.popleft()
        row = []
        for a in range(alphabet.size):
            succ = stepper.step(state, a)
            if succ not in index:
                index[succ] = len(order)
                order.append(succ)
                queue.append(succ)
            row.append(index[succ])
        delta.append(row)
    finals = frozenset(i for i, s in enumerate(order) if stepper.is_final(s))
    return Dfa(alphabet, delta, 0, tuple(stepper.name(s) for s in order), finals)


def nfa_to_dfa(nfa: Nfa) -> Dfa:
    """Subset construction restricted to reachable subsets.

    A subset is final iff it meets the NFA's final states.
    """
    return _determinize(_SubsetStepper(nfa), nfa.alphabet)


def ppltl_to_dfa(phi: Formula, alphabet=None) -> Dfa:
    """Compile a PPLTL formula into a DFA whose states are subformula sets.

    State 0 is the fresh initial state (no incoming transitions); a state is
    final iff it contains ``phi`` itself.
    """
    check_dialect(phi, Dialect.PPLTL)
    alphabet = _default_alphabet(phi, alphabet)
    return _determinize(_PastStepper(phi, alphabet), alphabet)


def make_stepper(phi: Formula, dialect, alphabet=None):
    """On-the-fly DFA for ``phi``: ``initial``, ``step``, ``is_final``."""
    dialect = Dialect.coerce(dialect)
    if dialect is Dialect.PPLTL:
        check_dialect(phi, dialect)
        return _PastStepper(phi, _default_alphabet(phi, alphabet))
    return _SubsetStepper(ltlf_to_nfa(phi, alphabet))


def compile_dfa(phi: Formula, dialect, alphabet=None, minimize: bool = False) -> Dfa:
    """LTLf via NFA and subset construction; PPLTL directly."""
    dialect = Dialect.coerce(dialect)
    if dialect is Dialect.LTLF:
        dfa = nfa_to_dfa(ltlf_to_nfa(phi, alphabet))
    else:
        dfa = ppltl_to_dfa(phi, alphabet)
    return minimize_dfa(dfa) if minimize else dfa


# ---------------------------------------------------------------------------
# DFA operations


def normalize_initial(dfa: Dfa) -> Dfa:
    """Ensure the initial state has no incoming transitions.

    If it has some, a fresh copy of the initial state (same outgoing
    transitions, same finality) becomes the new initial state.
    """
    if dfa.in_degree(dfa.initial) == 0:
        return dfa
    fresh = dfa.num_states
    delta = list(dfa.delta) + [dfa.delta[dfa.initial]]
    finals = set(dfa.finals)
    if dfa.initial in dfa.finals:
        finals.add(fresh)
    names = tuple(dfa.names) + (f"init({dfa.names[dfa.initial]})",)
    return Dfa(dfa.alphabet, delta, fresh, names, frozenset(finals))


def minimize_dfa(dfa: Dfa) -> Dfa:
    """Moore partition refinement (the input is assumed reachable)."""
    n = dfa.num_states
    block = [int(s in dfa.finals) for s in range(n)]
    while True:
        signatures = {}
        new_block = []
        for s in range(n):
            sig = (block[s], tuple(block[t] for t in dfa.delta[s]))
            new_block.append(signatures.setdefault(sig, len(signatures)))
        if len(signatures) == len(set(block)):
            break
        block = new_block
    # renumber blocks in BFS order from the initial state
    order = {}
    queue = deque([dfa.initial])
    order[block[dfa.initial]] = 0
    reps = [dfa.initial]
    while queue:
        s = queue.popleft()
        for t in dfa.delta[s]:
            if block[t] not in order:
                order[block[t]] = len(reps)
                reps.append(t)
                queue.append(t)
    delta = [[order[block[t]] for t in dfa.delta[r]] for r in reps]
    finals = frozenset(i for i, r in enumerate(reps) if r in dfa.finals)
    names = tuple(dfa.names[r] for r in reps)
    return Dfa(dfa.alphabet, delta, 0, names, finals)


def dfa_run(dfa: TransitionSystem, word) -> list[int]:
    return dfa.run(word)


def dfa_accepts(dfa: Dfa, word) -> bool:
    return dfa.accepts(word)


def product(systems: Sequence[TransitionSystem]) -> TransitionSystem:
    """Reachable synchronous product; state names are tuples of component states."""
    if not systems:
        raise ValueError("product of no systems")
    alphabet = systems[0].alphabet
    for s in systems[1:]:
        if s.alphabet != alphabet:
            raise ValueError(f"alphabet mismatch: {s.alphabet.atoms} vs {alphabet.atoms}")
    start = tuple(s.initial for s in systems)
    index = {start: 0}
    order = [start]
    delta = []
    queue = deque([start])
    while queue:
        state = queue.popleft()
        row = []
        for a in range(alphabet.size):
            succ = tuple(sys.delta[q][a] for sys, q in zip(systems, state))
            if succ not in index:
                index[succ] = len(order)
                order.append(succ)
                queue.append(succ)
            row.append(index[succ])
        delta.append(row)
    return TransitionSystem(alphabet, delta, 0, tuple(order))


# ---------------------------------------------------------------------------
# DOT export


def _quote(text) -> str:
    return '"' + str(text).replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(
    system,
    title: str | None = None,
    node_label: Callable[[int], str] | None = None,
    finals: Iterable[int] | None = None,
    node_attrs: Callable[[int], dict] | None = None,
) -> str:
    """Graphviz rendering of a deterministic system or an NFA.

    Parallel edges are merged and labelled with the list of letters.
    """
    if finals is None:
        finals = getattr(system, "finals", ())
    finals = set(finals)
    alphabet = system.alphabet
    lines = ["digraph {", "  rankdir=LR;"]
    if title:
        lines.append(f"  label={_quote(title)}; labelloc=t;")
    lines.append('  __start [shape=point, label=""];')
    initial = system.initial
    initials = sorted(initial) if isinstance(initial, frozenset) else [initial]
    for s in range(system.num_states):
        label = node_label(s) if node_label else str(system.names[s])
        attrs = {"label": label, "shape": "doublecircle" if s in finals else "circle"}
        if node_attrs:
            attrs.update(node_attrs(s))
        rendered = ", ".join(f"{k}={_quote(v)}" for k, v in attrs.items())
        lines.append(f"  s{s} [{rendered}];")
    for s in initials:
        lines.append(f"  __start -> s{s};")
    for s in range(system.num_states):
        edges: dict[int, list[str]] = {}
        for a in range(alphabet.size):
            if isinstance(system, Nfa):
                targets = sorted(system.transitions[s][a])
            else:
                targets = [system.delta[s][a]]
            for t in targets:
                edges.setdefault(t, []).append(alphabet.format(a))
        for t, letters in edges.items():
            lines.append(f"  s{s} -> s{t} [label={_quote(' '.join(letters))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
