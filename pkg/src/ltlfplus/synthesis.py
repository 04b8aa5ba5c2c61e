"""Reactive synthesis for LTLf+ / PPLTL+ and Mealy strategy extraction."""
from __future__ import annotations

import json
from dataclasses import dataclass

import networkx as nx

from .arena import ElAutomaton, el_automaton, plus_alphabet
from .automata import Alphabet, _quote
from .formula import Dialect, PlusFormula, atoms as formula_atoms, parse_plus
from .normal_form import to_pnf
from .parity import (
    GameSolution,
    ParityAutomaton,
    TurnGame,
    build_turn_game,
    el_to_parity,
    solve_parity_game,
)


class SynthesisError(ValueError):
    pass


@dataclass(frozen=True)
class Partition:
    agent: tuple
    env: tuple

    def __post_init__(self):
        overlap = set(self.agent) & set(self.env)
        if overlap:
            raise SynthesisError(f"atoms {sorted(overlap)} declared for both agent and environment")

    @classmethod
    def for_formula(cls, psi: PlusFormula, agent, env=()) -> "Partition":
        """Atoms of ``psi`` not claimed by the agent go to the environment."""
        agent = set(agent)
        env = set(env) | (set(formula_atoms(psi)) - agent)
        return cls(tuple(sorted(agent)), tuple(sorted(env)))


@dataclass(frozen=True, eq=False)
class MealyStrategy:
    """Finite-state agent controller.

    ``states[i]`` is a parity-automaton state; in machine state ``i`` the
    agent plays ``output[i]`` and, on environment move ``j`` (an index into
    ``env.letters()``), goes to machine state ``delta[i][j]``.
    """

    agent: Alphabet
    env: Alphabet
    states: tuple
    output: tuple  # output[i]: agent move index
    delta: tuple
    initial: int = 0

    def move(self, i: int) -> frozenset:
        return self.agent.letter(self.output[i])

    def step(self, i: int, env_move) -> int:
        return self.delta[i][self.env.index(env_move)]

    def outcome(self, env_moves) -> list[frozenset]:
        """Trace produced when the environment plays ``env_moves``."""
        i = self.initial
        trace = []
        for y in env_moves:
            trace.append(self.move(i) | self.env.letter(self.env.index(y)))
            i = self.step(i, y)
        return trace

    def to_json(self) -> dict:
        def name(i):
            return f"m{i}"

        def key(j):
            return ",".join(sorted(self.env.letter(j)))

        return {
            "agent": list(self.agent.atoms),
            "env": list(self.env.atoms),
            "states": [name(i) for i in range(len(self.states))],
            "initial": name(self.initial),
            "output": {name(i): sorted(self.move(i)) for i in range(len(self.states))},
            "delta": {
                name(i): {key(j): name(t) for j, t in enumerate(row)} for i, row in enumerate(self.delta)
            },
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"

    def to_dot(self) -> str:
        lines = ["digraph {", "  rankdir=LR;", '  __start [shape=point, label=""];']
        for i in range(len(self.states)):
            out = "{" + ",".join(sorted(self.move(i))) + "}"
            lines.append(f"  m{i} [shape=box, label={_quote(f'm{i} / {out}')}];")
        lines.append(f"  __start -> m{self.initial};")
        for i, row in enumerate(self.delta):
            edges: dict[int, list[str]] = {}
            for j, t in enumerate(row):
                edges.setdefault(t, []).append(self.env.format(j))
            for t, moves in edges.items():
                lines.append(f"  m{i} -> m{t} [label={_quote(' '.join(moves))}];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _unfold(turn_game: TurnGame, choose) -> MealyStrategy:
    """Machine over the automaton states reached when the agent plays ``choose(state)``."""
    automaton = turn_game.automaton
    start = turn_game.initial
    index = {start: 0}
    order = [start]
    output, delta = [], []
    for s in order:
        move = choose(s)
        output.append(move)
        row = []
        for letter in turn_game.letters[move]:
            t = automaton.system.delta[s][letter]
            if t not in index:
                index[t] = len(order)
                order.append(t)
            row.append(index[t])
        delta.append(tuple(row))
    return MealyStrategy(turn_game.agent, turn_game.env, tuple(order), tuple(output), tuple(delta), 0)


def extract_strategy(turn_game: TurnGame, solution: GameSolution) -> MealyStrategy:
    """Project the agent's positional strategy onto automaton states reachable under it."""
    if solution.winner(turn_game.initial) != 0:
        raise SynthesisError("the agent does not win from the initial state")
    agent_strategy = solution.strategy[0]
    return _unfold(turn_game, lambda s: turn_game.move_of(s, agent_strategy[s]))


def constant_strategies(turn_game: TurnGame):
    """One machine per agent move, each playing that move forever."""
    for x in range(turn_game.agent.size):
        yield _unfold(turn_game, lambda s, x=x: x)


def simplify_strategy(strategy: MealyStrategy, turn_game: TurnGame) -> MealyStrategy:
    """Prefer a winning constant machine over ``strategy`` when one exists."""
    for candidate in constant_strategies(turn_game):
        if verify_strategy(candidate, turn_game.automaton):
            return candidate
    return strategy


def verify_strategy(strategy: MealyStrategy, automaton: ParityAutomaton) -> bool:
    """Check that every play consistent with ``strategy`` is accepted by ``automaton``.

    The environment-only graph over machine states must contain no reachable
    cycle whose largest color is odd.
    """
    system = automaton.system
    index = system.alphabet.index
    if strategy.states[strategy.initial] != system.initial:
        return False
    graph = nx.DiGraph()
    for i, s in enumerate(strategy.states):
        graph.add_node(i)
        x = strategy.agent.letter(strategy.output[i])
        for j, t in enumerate(strategy.delta[i]):
            if strategy.states[t] != system.delta[s][index(x | strategy.env.letter(j))]:
                return False
            graph.add_edge(i, t)
    reachable = nx.descendants(graph, strategy.initial) | {strategy.initial}
    color = {i: automaton.colors[strategy.states[i]] for i in reachable}
    for c in sorted({c for c in color.values() if c % 2}):
        sub = graph.subgraph([i for i in reachable if color[i] <= c])
        for scc in nx.strongly_connected_components(sub):
            nontrivial = len(scc) > 1 or any(sub.has_edge(i, i) for i in scc)
            if nontrivial and any(color[i] == c for i in scc):
                return False
    return True


@dataclass(frozen=True, eq=False)
class SynthesisResult:
    realizable: bool
    strategy: MealyStrategy | None
    partition: Partition
    el: ElAutomaton
    parity: ParityAutomaton
    game: TurnGame
    solution: GameSolution

    def __bool__(self):
        return self.realizable


def synthesize(
    psi, agent, env=(), dialect=None, minimize: bool = False, simplify: bool = True
) -> SynthesisResult:
    """Decide realizability of ``psi`` and, if realizable, return a verified strategy.

    ``psi`` may be a parsed plus formula or text (then ``dialect`` is required).
    The agent moves first in every round. With ``simplify`` a constant
    strategy is returned whenever one wins.
    """
    if isinstance(psi, str):
        if dialect is None:
            raise SynthesisError("a dialect is needed to parse a formula string")
        psi = parse_plus(psi, Dialect.coerce(dialect))
    partition = Partition.for_formula(psi, agent, env)
    skeleton = to_pnf(psi)
    alphabet = plus_alphabet(skeleton, set(partition.agent) | set(partition.env))
    el = el_automaton(skeleton, alphabet, minimize=minimize)
    parity = el_to_parity(el)
    game = build_turn_game(parity, partition.agent, partition.env)
    solution = solve_parity_game(game.game)
    strategy = None
    if solution.winner(game.initial) == 0:
        strategy = extract_strategy(game, solution)
        if not verify_strategy(strategy, parity):
            raise AssertionError("extracted strategy failed verification")
        if simplify:
            strategy = simplify_strategy(strategy, game)
    return SynthesisResult(strategy is not None, strategy, partition, el, parity, game, solution)
