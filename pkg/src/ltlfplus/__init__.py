"""Synthesis and reasoning for LTLf+ and PPLTL+.

Formulas quantify over the finite prefixes of an infinite trace: ``safe``
(every prefix), ``guar`` (some prefix), ``recu`` (infinitely many) and
``pers`` (all but finitely many). Each quantified finite-trace formula is
compiled to a DFA; their product is an Emerson-Lei automaton, which is
turned into a parity automaton and solved as a game.
"""
from .arena import (
    ElAutomaton,
    QuantifiedComponent,
    apply_quantifier,
    build_el_automaton,
    el_accepts_lasso,
    el_automaton,
    el_condition,
)
from .automata import (
    Alphabet,
    Dfa,
    Nfa,
    TransitionSystem,
    compile_dfa,
    ltlf_to_nfa,
    minimize_dfa,
    nfa_to_dfa,
    normalize_initial,
    ppltl_to_dfa,
    product,
)
from .formula import (
    Dialect,
    DialectError,
    Formula,
    FormulaSyntaxError,
    PlusFormula,
    Quantified,
    Quantifier,
    atoms,
    eval_finite,
    guar,
    parse_finite,
    parse_plus,
    pers,
    recu,
    safe,
    to_text,
)
from .normal_form import PnfSkeleton, to_pnf
from .parity import (
    GameSolution,
    ParityAutomaton,
    ParityGame,
    PointerState,
    TurnGame,
    build_turn_game,
    el_to_parity,
    lsh,
    max_pos,
    parity_accepts_lasso,
    solve_parity_game,
)
from .reasoning import (
    LassoWitness,
    LazyArena,
    TransitionSystemInput,
    countertrace,
    eval_plus,
    is_satisfiable,
    is_valid,
    model_check,
)
from .synthesis import (
    MealyStrategy,
    Partition,
    SynthesisResult,
    extract_strategy,
    simplify_strategy,
    synthesize,
    verify_strategy,
)

__all__ = [
    "Alphabet",
    "apply_quantifier",
    "atoms",
    "build_el_automaton",
    "build_turn_game",
    "compile_dfa",
    "countertrace",
    "Dfa",
    "Dialect",
    "DialectError",
    "el_accepts_lasso",
    "el_automaton",
    "el_condition",
    "el_to_parity",
    "ElAutomaton",
    "eval_finite",
    "eval_plus",
    "extract_strategy",
    "Formula",
    "FormulaSyntaxError",
    "GameSolution",
    "guar",
    "is_satisfiable",
    "is_valid",
    "LassoWitness",
    "LazyArena",
    "lsh",
    "ltlf_to_nfa",
    "max_pos",
    "MealyStrategy",
    "minimize_dfa",
    "model_check",
    "Nfa",
    "nfa_to_dfa",
    "normalize_initial",
    "parity_accepts_lasso",
    "ParityAutomaton",
    "ParityGame",
    "parse_finite",
    "parse_plus",
    "Partition",
    "pers",
    "PlusFormula",
    "PnfSkeleton",
    "PointerState",
    "ppltl_to_dfa",
    "product",
    "Quantified",
    "QuantifiedComponent",
    "Quantifier",
    "recu",
    "safe",
    "simplify_strategy",
    "solve_parity_game",
    "SynthesisResult",
    "synthesize",
    "to_pnf",
    "to_text",
    "TransitionSystem",
    "TransitionSystemInput",
    "TurnGame",
    "verify_strategy",
]

__version__ = "0.1.0"
