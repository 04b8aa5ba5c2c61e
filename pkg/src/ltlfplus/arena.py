"""Quantified DFA components and the product Emerson-Lei automaton."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .automata import Alphabet, Dfa, TransitionSystem, compile_dfa, normalize_initial, product, to_dot
from .formula import Quantifier, atoms as formula_atoms
from .normal_form import BoolExpr, PnfSkeleton, negate_variables, to_pnf


@dataclass(frozen=True, eq=False)
class QuantifiedComponent:
    """A DFA after the quantifier-specific surgery.

    ``dfa.finals`` holds the modified final states; ``marked`` are the states
    whose infinite recurrence the EL labelling tracks.
    """

    dfa: Dfa
    quantifier: Quantifier
    marked: frozenset

    def objective(self, inf_states) -> bool:
        hit = not self.marked.isdisjoint(inf_states)
        return not hit if self.quantifier is Quantifier.PERS else hit


def apply_quantifier(dfa: Dfa, quantifier: Quantifier) -> QuantifiedComponent:
    if dfa.in_degree(dfa.initial):
        raise ValueError("initial state has incoming transitions; apply normalize_initial first")
    finals = set(dfa.finals)
    delta = [list(row) for row in dfa.delta]
    if quantifier is Quantifier.SAFE:
        finals.add(dfa.initial)
        for q in range(dfa.num_states):
            if q not in finals:
                delta[q] = [q] * dfa.alphabet.size
    elif quantifier is Quantifier.GUAR:
        finals.discard(dfa.initial)
        for q in finals:
            delta[q] = [q] * dfa.alphabet.size
    finals = frozenset(finals)
    if quantifier is Quantifier.PERS:
        marked = frozenset(range(dfa.num_states)) - finals
    else:
        marked = finals
    changed = Dfa(dfa.alphabet, delta, dfa.initial, dfa.names, finals)
    return QuantifiedComponent(changed, quantifier, marked)


def lasso_satisfies_component(component: QuantifiedComponent, u, v) -> bool:
    return component.objective(component.dfa.lasso(u, v)[1])


@dataclass(frozen=True, eq=False)
class ElAutomaton:
    """Deterministic Emerson-Lei automaton with labels ``1..k``."""

    system: TransitionSystem
    labels: tuple  # labels[state] -> frozenset of ints in 1..k
    condition: BoolExpr
    k: int
    components: tuple = ()

    @property
    def alphabet(self) -> Alphabet:
        return self.system.alphabet

    @property
    def num_states(self) -> int:
        return self.system.num_states

    def inf_labels(self, u, v) -> frozenset:
        inf = self.system.lasso(u, v)[1]
        return frozenset().union(*(self.labels[q] for q in inf))

    def accepts_lasso(self, u, v) -> bool:
        return self.condition.evaluate(self.inf_labels(u, v))


def el_condition(skeleton: PnfSkeleton) -> BoolExpr:
    """The skeleton with every persistence index negated."""
    pers = [a.index for a in skeleton.atoms if a.quantifier is Quantifier.PERS]
    return negate_variables(skeleton.skeleton, pers)


def build_el_automaton(components: Sequence[QuantifiedComponent], skeleton: PnfSkeleton) -> ElAutomaton:
    """Product of the components, labelled by which components sit in marked states.

    ``components[i]`` must belong to skeleton index ``i + 1``.
    """
    if len(components) != skeleton.k:
        raise ValueError(f"{len(components)} components for {skeleton.k} quantified atoms")
    for i, (comp, atom) in enumerate(zip(components, skeleton.atoms)):
        if atom.index != i + 1 or comp.quantifier is not atom.quantifier:
            raise ValueError(f"component {i} does not match skeleton atom {atom}")
    system = product([c.dfa for c in components])
    labels = tuple(
        frozenset(i + 1 for i, (c, q) in enumerate(zip(components, state)) if q in c.marked)
        for state in system.names
    )
    return ElAutomaton(system, labels, el_condition(skeleton), skeleton.k, tuple(components))


def el_accepts_lasso(automaton: ElAutomaton, u, v) -> bool:
    return automaton.accepts_lasso(u, v)


def plus_alphabet(psi, extra=()) -> Alphabet:
    if isinstance(psi, PnfSkeleton):
        psi = psi.to_plus()
    return Alphabet.of(formula_atoms(psi), extra)


def el_automaton(psi, alphabet=None, minimize: bool = False) -> ElAutomaton:
    """Build the EL automaton of a plus formula (or of an already computed skeleton).

    Each distinct finite-trace formula is compiled once; every quantified atom
    then works on its own copy.
    """
    skeleton = psi if isinstance(psi, PnfSkeleton) else to_pnf(psi)
    if alphabet is None:
        alphabet = plus_alphabet(skeleton)
    elif not isinstance(alphabet, Alphabet):
        alphabet = Alphabet(tuple(alphabet))
    compiled: dict = {}
    components = []
    for atom in skeleton.atoms:
        if atom.body not in compiled:
            dfa = compile_dfa(atom.body, atom.dialect, alphabet, minimize=minimize)
            compiled[atom.body] = normalize_initial(dfa)
        components.append(apply_quantifier(compiled[atom.body], atom.quantifier))
    return build_el_automaton(components, skeleton)


def el_to_dot(automaton: ElAutomaton) -> str:
    def label(q):
        marks = ",".join(map(str, sorted(automaton.labels[q])))
        return f"{automaton.system.names[q]}\n{{{marks}}}"

    return to_dot(automaton.system, title=f"B = {automaton.condition}", node_label=label, finals=())

