import json
import random
from collections import deque

import pytest

from ltlfplus.arena import el_automaton
from ltlfplus.automata import Alphabet
from ltlfplus.formula import Dialect, PlusNot, parse_plus
from ltlfplus.normal_form import to_pnf
from ltlfplus.reasoning import (
    LassoWitness,
    LazyArena,
    TransitionSystemError,
    TransitionSystemInput,
    countertrace,
    eval_plus,
    is_satisfiable,
    is_valid,
    model_check,
)

from oracles import ATOMS, lassos, random_plus

L, P = Dialect.LTLF, Dialect.PPLTL


class TestEvalPlus:
    def test_recurrence(self):
        assert eval_plus(parse_plus("recu(p)", P), [], [{"p"}, set()])

    def test_persistence(self):
        assert not eval_plus(parse_plus("pers(p)", P), [], [{"p"}, set()])

    def test_safe_true(self):
        psi = parse_plus("safe(true)", L)
        assert all(eval_plus(psi, u, v) for u, v in lassos(["p"], 2, 2))

    def test_empty_cycle(self):
        with pytest.raises(ValueError):
            eval_plus(parse_plus("recu(p)", P), [{"p"}], [])

    def test_foreign_atoms_ignored(self):
        assert eval_plus(parse_plus("guar(p)", P), [{"p", "zz"}], [set()])

    def test_safety_checks_the_stem(self):
        psi = parse_plus("safe(p)", P)
        assert not eval_plus(psi, [{"p"}, set()], [{"p"}])
        assert eval_plus(psi, [{"p"}], [{"p"}])


class TestSatisfiability:
    @pytest.mark.parametrize("text,dialect", [("safe(p) & guar(!p)", P), ("pers(p) & recu(!p)", L)])
    def test_unsat(self, text, dialect):
        result = is_satisfiable(parse_plus(text, dialect))
        assert not result.satisfiable and result.witness is None

    def test_sat_with_witness(self):
        psi = parse_plus("recu(F(last & p))", L)
        result = is_satisfiable(psi)
        assert result.satisfiable
        assert eval_plus(psi, result.witness.stem, result.witness.cycle)

    def test_empty_label_cycle(self):
        psi = parse_plus("pers(p)", P)
        witness = is_satisfiable(psi).witness
        assert eval_plus(psi, witness.stem, witness.cycle)

    def test_witness_cycle_through_several_labels(self):
        psi = parse_plus("recu(p) & recu(!p) & recu(q)", P)
        witness = is_satisfiable(psi).witness
        assert len(witness.cycle) >= 2
        assert eval_plus(psi, witness.stem, witness.cycle)

    def test_deterministic(self):
        psi = parse_plus("recu(p) & pers(q | p)", L)
        assert is_satisfiable(psi) == is_satisfiable(psi)

    def test_agrees_with_exhaustive_lassos(self):
        """Single-atom formulas; any lasso found by enumeration must be matched and vice versa."""
        rng = random.Random(1)
        small = lassos(["p"], 3, 4)
        for _ in range(150):
            psi = random_plus(rng, rng.choice([L, P]), atoms=("p",))
            result = is_satisfiable(psi)
            found = any(eval_plus(psi, u, v) for u, v in small)
            assert result.satisfiable == found, str(psi)
            if result.satisfiable:
                assert eval_plus(psi, result.witness.stem, result.witness.cycle)

    def test_sat_or_negation_sat(self):
        rng = random.Random(2)
        for _ in range(100):
            psi = random_plus(rng, rng.choice([L, P]))
            assert is_satisfiable(psi).satisfiable or is_satisfiable(PlusNot(psi)).satisfiable


class TestValidity:
    def test_safe_true(self):
        assert is_valid(parse_plus("safe(true)", L))

    def test_excluded_middle(self):
        psi = parse_plus("guar(p) | safe(!p)", P)
        assert is_valid(psi)
        assert all(eval_plus(psi, u, v) for u, v in lassos(["p"], 3, 3))

    def test_guarantee_is_not_valid(self):
        psi = parse_plus("guar(p)", P)
        assert not is_valid(psi)
        witness = countertrace(psi)
        assert not eval_plus(psi, witness.stem, witness.cycle)

    def test_valid_formulas_hold_on_all_small_lassos(self):
        rng = random.Random(3)
        all_lassos = lassos(ATOMS, 2, 2)
        for _ in range(100):
            psi = random_plus(rng, rng.choice([L, P]), depth=2)
            if is_valid(psi):
                assert all(eval_plus(psi, u, v) for u, v in all_lassos), str(psi)


class TestLazyArena:
    def test_matches_explicit_product(self):
        rng = random.Random(4)
        alphabet = Alphabet(ATOMS)
        for _ in range(60):
            skeleton = to_pnf(random_plus(rng, rng.choice([L, P])))
            explicit = el_automaton(skeleton, alphabet)
            lazy = LazyArena(skeleton, alphabet)
            assert str(lazy.condition) == str(explicit.condition)
            pairing = {lazy.initial: explicit.system.initial}
            queue = deque([lazy.initial])
            while queue:
                s = queue.popleft()
                q = pairing[s]
                assert lazy.labels_of(s) == explicit.labels[q]
                for a in range(alphabet.size):
                    t, r = lazy.successor(s, a), explicit.system.delta[q][a]
                    if t in pairing:
                        assert pairing[t] == r
                    else:
                        pairing[t] = r
                        queue.append(t)

    def test_memoized(self):
        lazy = LazyArena(to_pnf(parse_plus("recu(p) & safe(q)", P)))
        first = lazy.successor(lazy.initial, {"p"})
        assert lazy.successor(lazy.initial, {"p"}) is first
        assert lazy.labels_of(first) is lazy.labels_of(first)


P_LOOP = TransitionSystemInput(["p"], ["a"], ["a"], [("a", {"p"}, "a")])


class TestModelChecking:
    def test_single_loop_holds(self):
        assert model_check(P_LOOP, parse_plus("safe(p)", P)).holds

    def test_detour_fails(self):
        ts = TransitionSystemInput(
            ["p"], ["a", "b"], ["a"], [("a", {"p"}, "a"), ("a", set(), "b"), ("b", {"p"}, "b")]
        )
        psi = parse_plus("safe(p)", P)
        result = model_check(ts, psi)
        assert not result.holds
        assert frozenset() in result.counterexample.stem
        assert not eval_plus(psi, result.counterexample.stem, result.counterexample.cycle)
        assert result.state_lasso == (("a", "b"), ("b",))

    def test_no_infinite_path_holds_vacuously(self):
        ts = TransitionSystemInput(["p"], ["a", "b"], ["a"], [("a", {"p"}, "b")])
        assert model_check(ts, parse_plus("guar(false)", P)).holds

    def test_formula_atoms_missing_from_system_are_false(self):
        assert model_check(P_LOOP, parse_plus("safe(!q)", L)).holds

    def test_complete_system_matches_validity(self):
        complete = TransitionSystemInput.complete(ATOMS)
        rng = random.Random(5)
        for _ in range(40):
            psi = random_plus(rng, rng.choice([L, P]))
            assert model_check(complete, psi).holds == is_valid(psi)


class TestTransitionSystemInput:
    def test_json_round_trip(self):
        data = P_LOOP.to_json()
        assert TransitionSystemInput.from_json(json.dumps(data)) == P_LOOP

    def test_load(self, tmp_path):
        path = tmp_path / "ts.json"
        path.write_text(json.dumps(P_LOOP.to_json()))
        assert TransitionSystemInput.load(path) == P_LOOP

    @pytest.mark.parametrize(
        "data",
        [
            {"atoms": ["p"], "states": ["a"], "initial": ["b"], "edges": []},
            {"atoms": ["p"], "states": ["a"], "initial": ["a"], "edges": [{"from": "a", "label": [], "to": "z"}]},
            {"atoms": ["p"], "states": ["a"], "initial": ["a"], "edges": [{"from": "a", "label": ["q"], "to": "a"}]},
            {"atoms": ["p"], "states": ["a", "a"], "initial": ["a"], "edges": []},
            {"atoms": ["p"], "states": ["a"], "edges": []},
        ],
    )
    def test_malformed(self, data):
        with pytest.raises(TransitionSystemError):
            TransitionSystemInput.from_json(data)


def test_witness_json():
    witness = LassoWitness([{"q", "p"}], [set()])
    assert witness.to_json() == {"stem": [["p", "q"]], "cycle": [[]]}
    with pytest.raises(ValueError):
        LassoWitness([], [])


def test_witness_text():
    assert str(LassoWitness([], [{"p"}, set()])) == "stem: (empty) / cycle: {p} {}"
