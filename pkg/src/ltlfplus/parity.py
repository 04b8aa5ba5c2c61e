"""From Emerson-Lei to parity: permutation/pointer automata and parity games.

Parity here is max-parity: a run is accepting iff the largest color seen
infinitely often is even. Player 0 (the agent) wants even, player 1 (the
environment) odd.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .arena import ElAutomaton
from .automata import Alphabet, TransitionSystem, to_dot, _quote


def lsh(perm: Sequence[int], labels: Iterable[int]) -> tuple[int, ...]:
    """Move the elements of ``labels`` to the front, keeping relative orders."""
    labels = set(labels)
    return tuple(x for x in perm if x in labels) + tuple(x for x in perm if x not in labels)


def max_pos(labels: Iterable[int], perm: Sequence[int]) -> int:
    """Largest position of an element of ``labels`` in ``perm``; -1 if none."""
    labels = set(labels)
    for h in range(len(perm) - 1, -1, -1):
        if perm[h] in labels:
            return h
    return -1


def displays(perm: Sequence[int], labels) -> bool:
    labels = set(labels)
    return set(perm[: len(labels)]) == labels


def separates(perm: Sequence[int], ptr: int, labels) -> bool:
    labels = set(labels)
    return ptr == len(labels) - 1 and displays(perm, labels)


class PointerState(NamedTuple):
    base: int
    perm: tuple
    ptr: int

    @property
    def separated(self) -> frozenset:
        return frozenset(self.perm[: self.ptr + 1])

    def __str__(self):
        return f"({self.base}, {''.join(map(str, self.perm))}, {self.ptr})"


@dataclass(frozen=True, eq=False)
class ParityAutomaton:
    system: TransitionSystem  # names are PointerStates
    colors: tuple
    source: ElAutomaton | None = None

    @property
    def alphabet(self) -> Alphabet:
        return self.system.alphabet

    @property
    def num_states(self) -> int:
        return self.system.num_states

    @property
    def states(self) -> tuple:
        return self.system.names

    def inf_max_color(self, u, v) -> int:
        inf = self.system.lasso(u, v)[1]
        return max(self.colors[s] for s in inf)

    def accepts_lasso(self, u, v) -> bool:
        return self.inf_max_color(u, v) % 2 == 0


def pointer_color(state: PointerState, condition) -> int:
    """``2|X|+2`` when the separated set ``X`` satisfies the condition, else ``2|X|+1``."""
    separated = state.separated
    return 2 * len(separated) + (2 if condition.evaluate(separated) else 1)


def el_to_parity(automaton: ElAutomaton) -> ParityAutomaton:
    """Permutation/pointer construction over the reachable states.

    Starts from the identity permutation and pointer -1. On letter ``a`` the
    state ``(q, pi, h)`` moves to ``(delta(q, a), lsh(pi, L), max_pos(L, pi))``
    where ``L`` are the labels of the source state ``q``.
    """
    base = automaton.system
    size = base.alphabet.size
    start = PointerState(base.initial, tuple(range(1, automaton.k + 1)), -1)
    index = {start: 0}
    order = [start]
    delta = []
    queue = deque([start])
    while queue:
        state = queue.popleft()
        labels = automaton.labels[state.base]
        perm = lsh(state.perm, labels)
        ptr = max_pos(labels, state.perm)
        row = []
        for a in range(size):
            succ = PointerState(base.delta[state.base][a], perm, ptr)
            if succ not in index:
                index[succ] = len(order)
                order.append(succ)
                queue.append(succ)
            row.append(index[succ])
        delta.append(row)
    colors = tuple(pointer_color(s, automaton.condition) for s in order)
    system = TransitionSystem(base.alphabet, delta, 0, tuple(order))
    return ParityAutomaton(system, colors, automaton)


def parity_accepts_lasso(automaton: ParityAutomaton, u, v) -> bool:
    return automaton.accepts_lasso(u, v)


def parity_to_dot(automaton: ParityAutomaton) -> str:
    return to_dot(
        automaton.system,
        title="parity automaton (max color seen infinitely often must be even)",
        node_label=lambda s: f"{automaton.states[s]}\nc={automaton.colors[s]}",
        finals=(),
    )


# ---------------------------------------------------------------------------
# parity games


@dataclass(frozen=True, eq=False)
class ParityGame:
    owner: tuple  # 0 = agent (even), 1 = environment (odd)
    colors: tuple
    successors: tuple

    def __post_init__(self):
        n = len(self.owner)
        if len(self.colors) != n or len(self.successors) != n:
            raise ValueError("malformed game: owner, colors and successors differ in length")
        succ = []
        for v, targets in enumerate(self.successors):
            targets = tuple(dict.fromkeys(targets))
            if not targets:
                raise ValueError(f"malformed game: vertex {v} has no successor")
            if any(not 0 <= w < n for w in targets):
                raise ValueError(f"malformed game: edge from {v} leaves the vertex set")
            if self.owner[v] not in (0, 1):
                raise ValueError(f"malformed game: vertex {v} has owner {self.owner[v]}")
            succ.append(targets)
        object.__setattr__(self, "successors", tuple(succ))
        preds = [[] for _ in range(n)]
        for v, targets in enumerate(succ):
            for w in targets:
                preds[w].append(v)
        object.__setattr__(self, "predecessors", tuple(tuple(p) for p in preds))

    @property
    def num_vertices(self) -> int:
        return len(self.owner)


@dataclass(frozen=True)
class GameSolution:
    winning: tuple  # (agent region, environment region)
    strategy: tuple  # (agent strategy, environment strategy): vertex -> successor

    def winner(self, vertex: int) -> int:
        return 0 if vertex in self.winning[0] else 1


def attractor(game: ParityGame, within, target, player: int):
    """Vertices of ``within`` from which ``player`` can force a visit to ``target``.

    Also returns an attractor strategy for ``player`` on the added vertices:
    the lowest-numbered successor that was attracted earlier.
    """
    order = {v: i for i, v in enumerate(sorted(target))}
    remaining = {}
    queue = deque(sorted(target))
    while queue:
        w = queue.popleft()
        for v in game.predecessors[w]:
            if v not in within or v in order:
                continue
            if game.owner[v] == player:
                order[v] = len(order)
                queue.append(v)
            else:
                if v not in remaining:
                    remaining[v] = sum(1 for x in game.successors[v] if x in within)
                remaining[v] -= 1
                if remaining[v] == 0:
                    order[v] = len(order)
                    queue.append(v)
    strategy = {}
    for v in order:
        if v not in target and game.owner[v] == player:
            strategy[v] = min(w for w in game.successors[v] if w in order and order[w] < order[v])
    return set(order), strategy


def _zielonka(game: ParityGame, vertices: frozenset):
    pending = []
    while True:
        if not vertices:
            regions, strategies = [set(), set()], [{}, {}]
            break
        top = max(game.colors[v] for v in vertices)
        p = top % 2
        tops = {v for v in vertices if game.colors[v] == top}
        attr, attr_strategy = attractor(game, vertices, tops, p)
        sub_regions, sub_strategies = _zielonka(game, vertices - attr)
        if not sub_regions[1 - p]:
            regions = [set(), set()]
            regions[p] = set(vertices)
            strategies = [{}, {}]
            strategies[p] = {**sub_strategies[p], **attr_strategy}
            for v in sorted(tops):
                if game.owner[v] == p:
                    strategies[p][v] = min(w for w in game.successors[v] if w in vertices)
            break
        opp = 1 - p
        dominion = sub_regions[opp]
        back, back_strategy = attractor(game, vertices, dominion, opp)
        strategy = {v: w for v, w in sub_strategies[opp].items() if v in dominion}
        strategy.update(back_strategy)
        pending.append((opp, back, strategy))
        vertices = vertices - back
    for player, region, strategy in pending:
        regions[player] |= region
        strategies[player].update(strategy)
    return regions, strategies


def solve_parity_game(game: ParityGame) -> GameSolution:
    """Zielonka's recursive algorithm with positional strategies for both players."""
    regions, strategies = _zielonka(game, frozenset(range(game.num_vertices)))
    return GameSolution(
        (frozenset(regions[0]), frozenset(regions[1])),
        (dict(sorted(strategies[0].items())), dict(sorted(strategies[1].items()))),
    )


@dataclass(frozen=True, eq=False)
class TurnGame:
    """Parity game where the agent picks ``x`` in ``2^X``, then the environment ``y`` in ``2^Y``.

    Vertices ``0..n-1`` are agent vertices (one per automaton state);
    vertex ``n + s * |2^X| + i`` is the environment vertex after the agent
    chose move ``i`` in state ``s``.
    """

    game: ParityGame
    automaton: ParityAutomaton
    agent: Alphabet
    env: Alphabet
    letters: tuple  # letters[i][j]: automaton letter for agent move i and env move j

    @property
    def initial(self) -> int:
        return self.automaton.system.initial

    def env_vertex(self, state: int, move: int) -> int:
        return self.automaton.num_states + state * self.agent.size + move

    def describe(self, vertex: int):
        n = self.automaton.num_states
        if vertex < n:
            return ("agent", vertex)
        state, move = divmod(vertex - n, self.agent.size)
        return ("env", state, move)

    def move_of(self, vertex: int, successor: int) -> int:
        """Agent move leading from agent ``vertex`` to env vertex ``successor``."""
        return successor - self.env_vertex(vertex, 0)


def build_turn_game(automaton: ParityAutomaton, agent_atoms, env_atoms) -> TurnGame:
    atoms = set(automaton.alphabet.atoms)
    agent_atoms, env_atoms = set(agent_atoms), set(env_atoms)
    if agent_atoms & env_atoms:
        raise ValueError(f"atoms {sorted(agent_atoms & env_atoms)} are both agent and environment atoms")
    if agent_atoms | env_atoms != atoms:
        raise ValueError(
            f"agent {sorted(agent_atoms)} and environment {sorted(env_atoms)} do not partition {sorted(atoms)}"
        )
    agent, env = Alphabet(tuple(sorted(agent_atoms))), Alphabet(tuple(sorted(env_atoms)))
    index = automaton.alphabet.index
    letters = tuple(
        tuple(index(agent.letter(i) | env.letter(j)) for j in range(env.size)) for i in range(agent.size)
    )
    n = automaton.num_states
    delta = automaton.system.delta
    owner, colors, successors = [], [], []
    for s in range(n):
        owner.append(0)
        colors.append(automaton.colors[s])
        successors.append(tuple(n + s * agent.size + i for i in range(agent.size)))
    for s in range(n):
        for i in range(agent.size):
            owner.append(1)
            colors.append(automaton.colors[s])
            successors.append(tuple(delta[s][a] for a in letters[i]))
    game = ParityGame(tuple(owner), tuple(colors), tuple(successors))
    return TurnGame(game, automaton, agent, env, letters)


_REGION_FILL = ("#cde8c9", "#f4c7c3")


def game_to_dot(game: ParityGame, solution: GameSolution | None = None) -> str:
    """Agent vertices are boxes, environment vertices diamonds."""
    lines = ["digraph {"]
    for v in range(game.num_vertices):
        attrs = {"label": f"{v}\nc={game.colors[v]}", "shape": "box" if game.owner[v] == 0 else "diamond"}
        if solution is not None:
            attrs.update(style="filled", fillcolor=_REGION_FILL[solution.winner(v)])
        lines.append(f"  v{v} [" + ", ".join(f"{k}={_quote(x)}" for k, x in attrs.items()) + "];")
    for v in range(game.num_vertices):
        chosen = None
        if solution is not None:
            chosen = solution.strategy[game.owner[v]].get(v)
        for w in game.successors[v]:
            style = " [penwidth=2.5]" if w == chosen else ""
            lines.append(f"  v{v} -> v{w}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"
