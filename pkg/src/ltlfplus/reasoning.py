"""Satisfiability, validity and model checking for LTLf+ / PPLTL+.

All three reduce to one search: find a lasso in a (possibly nondeterministic)
graph whose cycle is labelled by a set ``Z`` of EL labels with ``B(Z)`` true.
The search enumerates the candidate sets ``Z`` and, for each, looks for a
strongly connected component whose label union is exactly ``Z`` inside the
part of the graph labelled by subsets of ``Z``.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Callable, Hashable, Iterable, NamedTuple

import networkx as nx

from .arena import el_condition, plus_alphabet
from .automata import Alphabet, Dfa, compile_dfa, make_stepper
from .formula import (
    Dialect,
    Formula,
    PlusAnd,
    PlusFormula,
    PlusNot,
    PlusOr,
    Quantified,
    Quantifier,
    atoms as formula_atoms,
)
from .normal_form import PnfSkeleton, to_pnf


def _as_letter(letter) -> frozenset:
    if isinstance(letter, str):
        return frozenset({letter})
    return frozenset(letter)


@dataclass(frozen=True)
class LassoWitness:
    """The ultimately periodic trace ``stem . cycle^omega``."""

    stem: tuple
    cycle: tuple

    def __post_init__(self):
        object.__setattr__(self, "stem", tuple(_as_letter(a) for a in self.stem))
        object.__setattr__(self, "cycle", tuple(_as_letter(a) for a in self.cycle))
        if not self.cycle:
            raise ValueError("the cycle of a lasso must be non-empty")

    def to_json(self) -> dict:
        return {"stem": [sorted(a) for a in self.stem], "cycle": [sorted(a) for a in self.cycle]}

    def __str__(self):
        def word(letters):
            return " ".join("{" + ",".join(sorted(a)) + "}" for a in letters) or "(empty)"

        return f"stem: {word(self.stem)} / cycle: {word(self.cycle)}"


# ---------------------------------------------------------------------------
# lasso semantics


@lru_cache(maxsize=4096)
def _base_dfa(body: Formula, dialect: Dialect, alphabet: Alphabet) -> Dfa:
    return compile_dfa(body, dialect, alphabet)


def _prefix_verdict(atom: Quantified, u, v) -> bool:
    alphabet = Alphabet.of(formula_atoms(atom.body))
    dfa = _base_dfa(atom.body, atom.dialect, alphabet)
    stem, inf, later = dfa.lasso([alphabet.project(a) for a in u], [alphabet.project(a) for a in v])
    # prefixes of length n >= 1 end in the state at position n
    finals = dfa.finals
    q = atom.quantifier
    if q is Quantifier.RECU:
        return not inf.isdisjoint(finals)
    if q is Quantifier.PERS:
        return inf <= finals
    seen = set(stem[1:]) | later
    if q is Quantifier.SAFE:
        return seen <= finals
    return not finals.isdisjoint(seen)


def eval_plus(psi, u, v) -> bool:
    """Truth of ``psi`` on the infinite trace ``u v^omega``.

    Letters are collections of true atom names; atoms missing from a letter
    are false and atoms the formula does not mention are ignored.
    """
    u, v = [_as_letter(a) for a in u], [_as_letter(a) for a in v]
    if not v:
        raise ValueError("the cycle of a lasso must be non-empty")
    if isinstance(psi, PnfSkeleton):
        psi = psi.to_plus()

    def go(node):
        if isinstance(node, Quantified):
            return _prefix_verdict(node, u, v)
        if isinstance(node, PlusNot):
            return not go(node.arg)
        if isinstance(node, PlusAnd):
            return go(node.left) and go(node.right)
        if isinstance(node, PlusOr):
            return go(node.left) or go(node.right)
        raise TypeError(f"not a plus formula: {node!r}")

    return go(psi)


# ---------------------------------------------------------------------------
# on-the-fly arena


class _Fresh:
    """Fresh initial state of a component, distinct from every stepper state."""

    def __repr__(self):
        return "INIT"


INIT = _Fresh()


class _LazyComponent:
    def __init__(self, stepper, quantifier: Quantifier):
        self.stepper = stepper
        self.quantifier = quantifier
        self.cache: dict = {}

    def is_final(self, state) -> bool:
        if state is INIT:
            if self.quantifier is Quantifier.SAFE:
                return True
            if self.quantifier is Quantifier.GUAR:
                return False
            return self.stepper.is_final(self.stepper.initial)
        return self.stepper.is_final(state)

    def is_sink(self, state) -> bool:
        if state is INIT:
            return False
        if self.quantifier is Quantifier.SAFE:
            return not self.is_final(state)
        if self.quantifier is Quantifier.GUAR:
            return self.is_final(state)
        return False

    def marked(self, state) -> bool:
        return self.is_final(state) != (self.quantifier is Quantifier.PERS)

    def step(self, state, letter: int):
        key = (state, letter)
        if key not in self.cache:
            if self.is_sink(state):
                succ = state
            else:
                succ = self.stepper.step(self.stepper.initial if state is INIT else state, letter)
            self.cache[key] = succ
        return self.cache[key]


class LazyArena:
    """EL automaton of a PNF skeleton whose product states are built on demand.

    A product state is a tuple of component states; components are the
    finite-trace steppers with the quantifier surgery applied on the fly.
    """

    def __init__(self, skeleton: PnfSkeleton, alphabet: Alphabet | None = None):
        self.skeleton = skeleton
        self.alphabet = plus_alphabet(skeleton) if alphabet is None else alphabet
        self.condition = el_condition(skeleton)
        self.k = skeleton.k
        steppers: dict = {}
        self.components = []
        for atom in skeleton.atoms:
            if atom.body not in steppers:
                steppers[atom.body] = make_stepper(atom.body, atom.dialect, self.alphabet)
            self.components.append(_LazyComponent(steppers[atom.body], atom.quantifier))
        self.initial = tuple(INIT for _ in self.components)
        self._succ: dict = {}
        self._labels: dict = {}

    def successor(self, state: tuple, letter) -> tuple:
        a = self.alphabet.index(letter)
        key = (state, a)
        if key not in self._succ:
            self._succ[key] = tuple(c.step(q, a) for c, q in zip(self.components, state))
        return self._succ[key]

    def labels_of(self, state: tuple) -> frozenset:
        if state not in self._labels:
            self._labels[state] = frozenset(
                i + 1 for i, (c, q) in enumerate(zip(self.components, state)) if c.marked(q)
            )
        return self._labels[state]


# ---------------------------------------------------------------------------
# lasso search


class _Found(NamedTuple):
    stem_letters: list
    stem_nodes: list
    cycle_letters: list
    cycle_nodes: list


def _explore(initials, successors):
    """BFS over the reachable graph; edge letters keep the lowest letter per edge."""
    parent: dict = {}
    order = []
    edges: dict = {}
    queue = deque()
    for s in initials:
        if s not in parent:
            parent[s] = None
            order.append(s)
            queue.append(s)
    while queue:
        s = queue.popleft()
        out = edges.setdefault(s, {})
        for a, t in successors(s):
            out.setdefault(t, a)
            if t not in parent:
                parent[t] = (s, a)
                order.append(t)
                queue.append(t)
    return order, parent, edges


def _shortest(edges, start, goal: Callable, nodes, at_least_one: bool):
    """Shortest path inside ``nodes`` from ``start`` to a node satisfying ``goal``."""
    if not at_least_one and goal(start):
        return [], [start]
    back = {}
    queue = deque()
    for t, a in edges[start].items():
        if t in nodes and t not in back:
            back[t] = (start, a)
            queue.append(t)
    while queue:
        s = queue.popleft()
        if goal(s):
            letters, path = [], [s]
            while True:
                s, a = back[s]
                letters.append(a)
                path.append(s)
                if s == start:
                    return letters[::-1], path[::-1]
        for t, a in edges[s].items():
            if t in nodes and t not in back:
                back[t] = (s, a)
                queue.append(t)
    raise AssertionError("target unreachable inside a strongly connected component")


def _search(initials, successors, labels_of: Callable, condition, k: int) -> _Found | None:
    order, parent, edges = _explore(initials, successors)
    rank = {s: i for i, s in enumerate(order)}
    labels = {s: labels_of(s) for s in order}
    for mask in range(1 << k):
        z = frozenset(i + 1 for i in range(k) if mask >> i & 1)
        if not condition.evaluate(z):
            continue
        allowed = {s for s in order if labels[s] <= z}
        graph = nx.DiGraph()
        graph.add_nodes_from(allowed)
        graph.add_edges_from((s, t) for s in allowed for t in edges[s] if t in allowed)
        components = sorted(nx.strongly_connected_components(graph), key=lambda c: min(rank[s] for s in c))
        for scc in components:
            entry = min(scc, key=rank.__getitem__)
            if len(scc) == 1 and entry not in edges[entry]:
                continue
            if frozenset().union(*(labels[s] for s in scc)) != z:
                continue
            return _lasso_through(entry, scc, z, parent, edges, labels)
    return None


def _lasso_through(entry, scc, z, parent, edges, labels) -> _Found:
    stem_letters, stem_nodes = [], [entry]
    s = entry
    while parent[s] is not None:
        s, a = parent[s]
        stem_letters.append(a)
        stem_nodes.append(s)
    stem_letters.reverse()
    stem_nodes.reverse()

    cycle_letters, cycle_nodes = [], [entry]
    covered = set(labels[entry])
    here = entry
    for label in sorted(z):
        if label in covered:
            continue
        letters, path = _shortest(edges, here, lambda t, x=label: x in labels[t], scc, at_least_one=False)
        cycle_letters += letters
        cycle_nodes += path[1:]
        for t in path:
            covered |= labels[t]
        here = path[-1]
    letters, path = _shortest(edges, here, lambda t: t == entry, scc, at_least_one=not cycle_letters)
    cycle_letters += letters
    cycle_nodes += path[1:]
    return _Found(stem_letters, stem_nodes, cycle_letters, cycle_nodes[:-1])


class SatResult(NamedTuple):
    satisfiable: bool
    witness: LassoWitness | None

    def __bool__(self):
        return self.satisfiable


def is_satisfiable(psi) -> SatResult:
    """Decide satisfiability; a witness lasso comes with every positive answer."""
    skeleton = psi if isinstance(psi, PnfSkeleton) else to_pnf(psi)
    arena = LazyArena(skeleton)
    size = arena.alphabet.size

    def successors(s):
        return [(a, arena.successor(s, a)) for a in range(size)]

    found = _search([arena.initial], successors, arena.labels_of, arena.condition, arena.k)
    if found is None:
        return SatResult(False, None)
    letter = arena.alphabet.letter
    witness = LassoWitness([letter(a) for a in found.stem_letters], [letter(a) for a in found.cycle_letters])
    return SatResult(True, witness)


def countertrace(psi: PlusFormula) -> LassoWitness | None:
    """A trace violating ``psi``, or ``None`` when ``psi`` is valid."""
    return is_satisfiable(PlusNot(psi)).witness


def is_valid(psi: PlusFormula) -> bool:
    return not is_satisfiable(PlusNot(psi)).satisfiable


# ---------------------------------------------------------------------------
# model checking


class TransitionSystemError(ValueError):
    pass


@dataclass(frozen=True)
class TransitionSystemInput:
    """Nondeterministic, possibly non-total transition system labelled on edges."""

    atoms: tuple
    states: tuple
    initial: tuple
    edges: tuple  # (source, frozenset of true atoms, target)

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "initial", tuple(self.initial))
        object.__setattr__(self, "edges", tuple((s, frozenset(a), t) for s, a, t in self.edges))
        known = set(self.states)
        if len(known) != len(self.states):
            raise TransitionSystemError("duplicate state names")
        for s in self.initial:
            if s not in known:
                raise TransitionSystemError(f"unknown initial state {s!r}")
        for s, label, t in self.edges:
            for x in (s, t):
                if x not in known:
                    raise TransitionSystemError(f"edge mentions unknown state {x!r}")
            extra = label - set(self.atoms)
            if extra:
                raise TransitionSystemError(f"edge label uses undeclared atoms {sorted(extra)}")

    @classmethod
    def from_json(cls, data) -> "TransitionSystemInput":
        if isinstance(data, (str, bytes)):
            data = json.loads(data)
        try:
            edges = [(e["from"], e["label"], e["to"]) for e in data["edges"]]
            return cls(data["atoms"], data["states"], data["initial"], edges)
        except (KeyError, TypeError) as exc:
            raise TransitionSystemError(f"malformed transition system: {exc}") from None

    @classmethod
    def load(cls, path) -> "TransitionSystemInput":
        return cls.from_json(Path(path).read_text())

    def to_json(self) -> dict:
        return {
            "atoms": list(self.atoms),
            "states": list(self.states),
            "initial": list(self.initial),
            "edges": [{"from": s, "label": sorted(a), "to": t} for s, a, t in self.edges],
        }

    @classmethod
    def complete(cls, atoms: Iterable[str]) -> "TransitionSystemInput":
        """One state looping on every letter: it generates every trace."""
        alphabet = Alphabet.of(atoms)
        return cls(alphabet.atoms, ("s",), ("s",), [("s", a, "s") for a in alphabet.letters()])


class McResult(NamedTuple):
    holds: bool
    counterexample: LassoWitness | None
    state_lasso: tuple | None  # (stem states, cycle states) of the transition system

    def __bool__(self):
        return self.holds


def model_check(ts: TransitionSystemInput, psi: PlusFormula) -> McResult:
    """Does every infinite trace generated by ``ts`` satisfy ``psi``?"""
    skeleton = to_pnf(PlusNot(psi))
    arena = LazyArena(skeleton, plus_alphabet(skeleton, ts.atoms))
    index = arena.alphabet.index
    out: dict[Hashable, list] = {s: [] for s in ts.states}
    for s, label, t in ts.edges:
        out[s].append((index(label), t))
    for s in out:
        out[s].sort(key=lambda e: (e[0], ts.states.index(e[1])))

    def successors(node):
        t, d = node
        return [(a, (t2, arena.successor(d, a))) for a, t2 in out[t]]

    initials = [(s, arena.initial) for s in ts.initial]
    found = _search(initials, successors, lambda n: arena.labels_of(n[1]), arena.condition, arena.k)
    if found is None:
        return McResult(True, None, None)
    letter = arena.alphabet.letter
    witness = LassoWitness([letter(a) for a in found.stem_letters], [letter(a) for a in found.cycle_letters])
    states = (tuple(n[0] for n in found.stem_nodes), tuple(n[0] for n in found.cycle_nodes))
    return McResult(False, witness, states)
