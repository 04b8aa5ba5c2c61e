"""The eight acceptance criteria, each at its stated scale and time budget.

Run ``pytest tests/test_acceptance.py -v``; the terminal summary ends with
one PASS/FAIL line per criterion.
"""
import math
import random
import time

import pytest

from ltlfplus import (
    Alphabet,
    Dialect,
    TransitionSystemInput,
    compile_dfa,
    el_automaton,
    el_to_parity,
    eval_finite,
    eval_plus,
    is_satisfiable,
    is_valid,
    lsh,
    max_pos,
    model_check,
    parity_accepts_lasso,
    parse_plus,
    solve_parity_game,
    synthesize,
    verify_strategy,
)
from ltlfplus.formula import PlusNot, quantified_atoms
from ltlfplus.parity import displays, separates

from oracles import (
    ATOMS,
    brute_force_agent_region,
    lassos,
    random_el_automaton,
    random_game,
    random_lasso,
    random_plus,
    words,
)

AB = Alphabet(ATOMS)


def _population(seed: int, count: int):
    rng = random.Random(seed)
    dialects = [Dialect.LTLF, Dialect.PPLTL]
    return [random_plus(rng, dialects[i % 2], max_quantified=2, depth=3) for i in range(count)]


def _report(n, ok, detail=""):
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}")


@pytest.mark.criterion(1)
def test_permutation_worked_example():
    perm = (0, 4, 2, 1, 3)
    lsh(perm, {1, 4})
    start = time.perf_counter()
    shifted = lsh(perm, {1, 4})
    pos = max_pos({1, 4}, perm)
    elapsed = time.perf_counter() - start
    ok = shifted == (4, 1, 0, 2, 3) and pos == 3 and elapsed < 1e-3
    _report(1, ok, f"lsh={''.join(map(str, shifted))} max_pos={pos} in {elapsed * 1e6:.0f}us")
    assert shifted == (4, 1, 0, 2, 3)
    assert pos == 3
    assert elapsed < 1e-3


@pytest.mark.criterion(2)
def test_parity_size_bound_and_colors():
    rng = random.Random(2)
    worst = 0.0
    for _ in range(100):
        el = random_el_automaton(rng, max_states=10, max_k=3)
        start = time.perf_counter()
        parity = el_to_parity(el)
        worst = max(worst, time.perf_counter() - start)
        k = el.k
        assert parity.num_states <= el.num_states * math.factorial(k) * (k + 1)
        assert set(parity.colors) <= set(range(1, 2 * k + 3))
    _report(2, worst < 1.0, f"slowest conversion {worst * 1e3:.1f}ms")
    assert worst < 1.0


@pytest.mark.criterion(3)
def test_acceptance_equivalence_tower():
    start = time.perf_counter()
    all_lassos = lassos(ATOMS, 2, 3)
    checked = 0
    for psi in _population(3, 300):
        el = el_automaton(psi, AB)
        parity = el_to_parity(el)
        for u, v in all_lassos:
            semantic = eval_plus(psi, u, v)
            assert el.accepts_lasso(u, v) == semantic, (str(psi), u, v)
            assert parity_accepts_lasso(parity, u, v) == semantic, (str(psi), u, v)
            checked += 1
    elapsed = time.perf_counter() - start
    _report(3, elapsed < 60, f"{checked} (formula, lasso) pairs in {elapsed:.1f}s")
    assert elapsed < 60


@pytest.mark.criterion(4)
def test_translation_correctness():
    start = time.perf_counter()
    all_words = list(words(ATOMS, 4))
    checked = 0
    for psi in _population(3, 300):
        for atom in quantified_atoms(psi):
            dfa = compile_dfa(atom.body, atom.dialect, AB)
            for w in all_words:
                assert dfa.accepts(w) == eval_finite(atom.body, w, atom.dialect), (str(atom.body), w)
                checked += 1
    elapsed = time.perf_counter() - start
    _report(4, elapsed < 60, f"{checked} words in {elapsed:.1f}s")
    assert elapsed < 60


def _random_ts(rng):
    n = rng.randint(1, 4)
    states = [f"s{i}" for i in range(n)]
    alphabet = [frozenset(), frozenset({"p"}), frozenset({"q"}), frozenset({"p", "q"})]
    edges = [
        (s, rng.choice(alphabet), rng.choice(states))
        for s in states
        for _ in range(rng.randint(0, 2))
    ]
    initial = rng.sample(states, rng.randint(1, min(2, n)))
    return TransitionSystemInput(ATOMS, states, initial, edges)


def _generated_by(ts, result) -> bool:
    stem_states, cycle_states = result.state_lasso
    path = list(stem_states) + list(cycle_states[1:]) + [cycle_states[0]]
    trace = list(result.counterexample.stem) + list(result.counterexample.cycle)
    edges = set(ts.edges)
    return path[0] in ts.initial and all((path[i], trace[i], path[i + 1]) in edges for i in range(len(trace)))


@pytest.mark.criterion(5)
def test_reasoning_dualities():
    start = time.perf_counter()
    for psi in _population(5, 200):
        positive = is_satisfiable(psi)
        negative = is_satisfiable(PlusNot(psi))
        assert is_valid(psi) == (not negative.satisfiable)
        assert positive.satisfiable or negative.satisfiable
        for formula, found in ((psi, positive), (PlusNot(psi), negative)):
            if found.satisfiable:
                assert eval_plus(formula, found.witness.stem, found.witness.cycle)

    rng = random.Random(55)
    failures = 0
    for psi in _population(56, 100):
        ts = _random_ts(rng)
        result = model_check(ts, psi)
        if not result.holds:
            failures += 1
            assert not eval_plus(psi, result.counterexample.stem, result.counterexample.cycle)
            assert _generated_by(ts, result)
    assert failures > 0

    complete = TransitionSystemInput.complete(ATOMS)
    for psi in _population(57, 50):
        assert model_check(complete, psi).holds == is_valid(psi)
    elapsed = time.perf_counter() - start
    _report(5, elapsed < 60, f"in {elapsed:.1f}s")
    assert elapsed < 60


VERDICTS = [
    ("sat", "safe(p) & guar(!p)", "ppltl", False),
    ("sat", "pers(p) & recu(!p)", "ltlf", False),
    ("sat", "recu(F(last & p))", "ltlf", True),
    ("valid", "safe(true)", "ltlf", True),
    ("synth", "recu(F(last & x))", "ltlf", True),
    ("synth", "recu(F(last & y))", "ltlf", False),
    ("synth", "safe(G !x) & guar(F x)", "ltlf", False),
]


@pytest.mark.criterion(6)
@pytest.mark.parametrize("task,text,logic,expected", VERDICTS, ids=[v[1] for v in VERDICTS])
def test_fixed_verdict_table(task, text, logic, expected):
    start = time.perf_counter()
    psi = parse_plus(text, logic)
    if task == "sat":
        found = is_satisfiable(psi)
        verdict = found.satisfiable
        if verdict:
            assert eval_plus(psi, found.witness.stem, found.witness.cycle)
    elif task == "valid":
        verdict = is_valid(psi)
    else:
        result = synthesize(psi, agent=["x"], env=["y"])
        verdict = result.realizable
        if verdict:
            assert verify_strategy(result.strategy, result.parity)
    elapsed = time.perf_counter() - start
    _report(6, verdict == expected and elapsed < 1, f"{task} {text}: {verdict} in {elapsed * 1e3:.0f}ms")
    assert verdict == expected
    assert elapsed < 1


@pytest.mark.criterion(7)
def test_parity_solver_against_brute_force():
    rng = random.Random(7)
    start = time.perf_counter()
    for _ in range(500):
        game = random_game(rng, max_vertices=6, max_colors=4)
        solution = solve_parity_game(game)
        agent, env = solution.winning
        assert agent | env == frozenset(range(game.num_vertices))
        assert not agent & env
        assert set(agent) == brute_force_agent_region(game)
    elapsed = time.perf_counter() - start
    _report(7, elapsed < 120, f"500 games in {elapsed:.1f}s")
    assert elapsed < 120


@pytest.mark.criterion(8)
def test_display_and_separate():
    rng = random.Random(8)
    start = time.perf_counter()
    for _ in range(100):
        el = random_el_automaton(rng, max_states=8, max_k=3)
        parity = el_to_parity(el)
        u, v = random_lasso(rng)
        _, inf, _ = parity.system.lasso(u, v)
        states = [parity.states[s] for s in inf]
        recurring = frozenset().union(*(el.labels[s.base] for s in states))
        for s in states:
            assert displays(s.perm, recurring)
            assert s.ptr < len(recurring)
        assert any(separates(s.perm, s.ptr, recurring) for s in states)
    elapsed = time.perf_counter() - start
    _report(8, elapsed < 30, f"in {elapsed:.2f}s")
    assert elapsed < 30
