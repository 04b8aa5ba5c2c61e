import random

import pytest
from hypothesis import given, settings, strategies as st

from ltlfplus.formula import (
    FIRST,
    LAST,
    TRUE,
    And,
    Atom,
    Dialect,
    DialectError,
    Eventually,
    FormulaSyntaxError,
    Historically,
    Iff,
    Implies,
    Next,
    Not,
    Once,
    Or,
    PlusAnd,
    PlusNot,
    PlusOr,
    Quantifier,
    Since,
    Until,
    WeakNext,
    Yesterday,
    Always,
    atoms,
    eval_finite,
    guar,
    negate_finite,
    parse_finite,
    parse_plus,
    pers,
    recu,
    safe,
    to_text,
)
from ltlfplus.normal_form import BOr, BVar, is_negation_free, to_pnf
from ltlfplus.reasoning import eval_plus

from oracles import ATOMS, lassos, random_finite, random_plus, words

L, P = Dialect.LTLF, Dialect.PPLTL
p, q = Atom("p"), Atom("q")


class TestParsing:
    def test_atom(self):
        assert parse_finite("p", L) == p

    def test_eventually_last(self):
        assert parse_finite("F(last & p)", L) == Eventually(And(LAST, p))

    def test_until_is_right_associative(self):
        a, b, c = Atom("a"), Atom("b"), Atom("c")
        assert parse_finite("a U b U c", L) == Until(a, Until(b, c))
        assert parse_finite("a S b S c", P) == Since(a, Since(b, c))

    @pytest.mark.parametrize(
        "text,expected",
        [
            ("!p & q", And(Not(p), q)),
            ("p | q & p", Or(p, And(q, p))),
            ("p U q & p", And(Until(p, q), p)),
            ("X p U q", Until(Next(p), q)),
            ("p -> q -> p", Implies(p, Implies(q, p))),
            ("p | q <-> q", Iff(Or(p, q), q)),
            ("GF p", Always(Eventually(p))),
            ("WX !p", WeakNext(Not(p))),
            ("true", TRUE),
        ],
    )
    def test_precedence(self, text, expected):
        assert parse_finite(text, L) == expected

    def test_past_operators(self):
        assert parse_finite("O(first & p) & H q", P) == And(Once(And(FIRST, p)), Historically(q))
        assert parse_finite("Y Y p", P) == Yesterday(Yesterday(p))

    def test_plus_disjunction(self):
        assert parse_plus("recu(p) | pers(q)", L) == PlusOr(recu(p), pers(q))

    def test_plus_negation(self):
        assert parse_plus("!guar(F p)", L) == PlusNot(guar(Eventually(p)))

    def test_propositional_shorthand_ppltl(self):
        expected = PlusAnd(safe(Historically(Implies(FIRST, p)), P), guar(q, P))
        assert parse_plus("p & guar(q)", P) == expected

    def test_propositional_shorthand_ltlf(self):
        assert parse_plus("p", L) == safe(p)

    def test_plus_implication_unfolds(self):
        assert parse_plus("recu(p) -> recu(q)", L) == PlusOr(PlusNot(recu(p)), recu(q))

    @pytest.mark.parametrize(
        "text,dialect",
        [("Y p", L), ("first", L), ("p S q", L), ("X p", P), ("last", P), ("p U q", P), ("G p", P)],
    )
    def test_wrong_dialect(self, text, dialect):
        with pytest.raises(DialectError):
            parse_finite(text, dialect)

    @pytest.mark.parametrize("text", ["", "p &", "(p", "p q", "safe(p)", "&p", "p)"])
    def test_syntax_errors(self, text):
        with pytest.raises(FormulaSyntaxError):
            parse_finite(text, L)

    def test_error_position(self):
        with pytest.raises(FormulaSyntaxError) as info:
            parse_finite("p & & q", L)
        assert info.value.position == 4

    @pytest.mark.parametrize("text", ["F p", "safe(safe(p))", "X safe(p)", "recu(p) U recu(q)"])
    def test_plus_rejects_bare_temporal(self, text):
        with pytest.raises(FormulaSyntaxError):
            parse_plus(text, L)

    def test_keyword_atoms_rejected(self):
        for word in ("safe", "last", "true"):
            with pytest.raises(ValueError):
                Atom(word)

    def test_atoms(self):
        assert atoms(parse_plus("recu(b U a) & safe(c)", L)) == ["a", "b", "c"]


def _formula_strategy(dialect):
    names = st.sampled_from(["p", "q", "r1", "go_on"])
    leaves = st.one_of(names.map(Atom), st.sampled_from([TRUE, LAST if dialect is L else FIRST]))
    unary = (Not, Next, WeakNext, Eventually, Always) if dialect is L else (Not, Yesterday, Once, Historically)
    binary = (And, Or, Implies, Iff, Until if dialect is L else Since)

    def extend(children):
        return st.one_of(
            st.tuples(st.sampled_from(unary), children).map(lambda t: t[0](t[1])),
            st.tuples(st.sampled_from(binary), children, children).map(lambda t: t[0](t[1], t[2])),
        )

    return st.recursive(leaves, extend, max_leaves=12)


@pytest.mark.parametrize("dialect", [L, P])
def test_print_parse_round_trip(dialect):
    @settings(max_examples=200, deadline=None)
    @given(_formula_strategy(dialect))
    def check(phi):
        assert parse_finite(to_text(phi), dialect) == phi

    check()


def test_plus_round_trip():
    rng = random.Random(11)
    for _ in range(200):
        dialect = rng.choice([L, P])
        psi = random_plus(rng, dialect)
        assert parse_plus(to_text(psi), dialect) == psi


class TestNegation:
    def test_double_negation_cancels(self):
        assert negate_finite(Not(p)) == p

    def test_atom(self):
        assert negate_finite(p) == Not(p)

    def test_temporal(self):
        assert negate_finite(Eventually(p)) == Not(Eventually(p))

    @pytest.mark.parametrize("dialect", [L, P])
    def test_semantic_negation(self, dialect):
        rng = random.Random(13)
        for _ in range(60):
            phi = random_finite(rng, dialect)
            for w in words(ATOMS, 4):
                assert eval_finite(negate_finite(phi), w, dialect) != eval_finite(phi, w, dialect)


class TestEvalFinite:
    def test_next_fails_at_end(self):
        assert not eval_finite(Next(p), [{"p"}, set()], L)

    def test_eventually_last(self):
        assert eval_finite(Eventually(And(LAST, p)), [set(), {"p"}], L)

    def test_yesterday(self):
        assert eval_finite(Yesterday(p), [{"p"}, set()], P)

    def test_yesterday_false_at_start(self):
        assert not eval_finite(Yesterday(TRUE), [{"p"}], P)

    def test_weak_next_true_at_end(self):
        assert eval_finite(WeakNext(p), [set()], L)

    def test_until(self):
        assert eval_finite(Until(p, q), [{"p"}, {"p"}, {"q"}], L)
        assert not eval_finite(Until(p, q), [{"p"}, set(), {"q"}], L)

    def test_since(self):
        assert eval_finite(Since(p, q), [{"q"}, {"p"}, {"p"}], P)
        assert not eval_finite(Since(p, q), [{"q"}, set(), {"p"}], P)

    def test_empty_trace_rejected(self):
        with pytest.raises(ValueError):
            eval_finite(p, [], L)


class TestPnf:
    def test_negated_safe(self):
        pnf = to_pnf(PlusNot(safe(p)))
        assert pnf.skeleton == BVar(1)
        (atom,) = pnf.atoms
        assert (atom.index, atom.quantifier, atom.body) == (1, Quantifier.GUAR, Not(p))

    def test_de_morgan_and_duals(self):
        pnf = to_pnf(PlusNot(PlusAnd(recu(p), PlusNot(pers(q)))))
        assert pnf.skeleton == BOr(BVar(1), BVar(2))
        assert [(a.quantifier, a.body) for a in pnf.atoms] == [(Quantifier.PERS, Not(p)), (Quantifier.PERS, q)]

    def test_already_positive(self):
        pnf = to_pnf(recu(p))
        assert pnf.skeleton == BVar(1) and pnf.atoms[0].quantifier is Quantifier.RECU

    def test_shared_atoms_share_an_index(self):
        pnf = to_pnf(PlusOr(recu(p), PlusAnd(recu(p), safe(q))))
        assert pnf.k == 2
        assert str(pnf.skeleton) == "1 | 1 & 2"

    def test_mixed_dialects_rejected(self):
        with pytest.raises(DialectError):
            to_pnf(PlusAnd(recu(p, L), recu(p, P)))

    def test_preserves_semantics(self):
        rng = random.Random(17)
        all_lassos = lassos(ATOMS, 3, 3)
        for _ in range(20):
            psi = random_plus(rng, rng.choice([L, P]))
            pnf = to_pnf(psi)
            assert is_negation_free(pnf.skeleton)
            assert {b.index for b in pnf.atoms} == pnf.skeleton.variables()
            back = pnf.to_plus()
            for u, v in all_lassos[::7]:
                assert eval_plus(back, u, v) == eval_plus(psi, u, v)


@pytest.mark.parametrize("dialect", [L, P])
def test_quantifier_duality(dialect):
    rng = random.Random(19)
    all_lassos = lassos(ATOMS, 3, 3)
    for _ in range(6):
        phi = random_finite(rng, dialect, depth=2)
        for u, v in all_lassos:
            assert eval_plus(safe(phi, dialect), u, v) != eval_plus(guar(Not(phi), dialect), u, v)
            assert eval_plus(recu(phi, dialect), u, v) != eval_plus(pers(Not(phi), dialect), u, v)
