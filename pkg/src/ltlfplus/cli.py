"""Command-line front end: ``ltlfplus {synth,sat,valid,mc,compile} ...``.

Exit status is 0 for a positive verdict, 1 for a negative one and 2 for
usage, parse or input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .arena import el_automaton, el_to_dot, plus_alphabet
from .automata import compile_dfa, to_dot
from .formula import Dialect, FormulaSyntaxError, atoms as formula_atoms, parse_plus, to_text
from .normal_form import to_pnf
from .parity import el_to_parity, parity_to_dot
from .reasoning import TransitionSystemError, TransitionSystemInput, countertrace, is_satisfiable, model_check
from .synthesis import SynthesisError, synthesize

POSITIVE, NEGATIVE, ERROR = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(ERROR, f"{self.prog}: error: {message}\n")


def _atom_list(text: str) -> list[str]:
    return [a.strip() for a in text.split(",") if a.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ltlfplus", description="Synthesis and reasoning for LTLf+ and PPLTL+.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--logic", required=True, choices=["ltlf", "ppltl"], help="finite-trace dialect")
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--formula", help="formula text")
        src.add_argument("--formula-file", type=Path, help="file holding the formula")
        p.add_argument("--minimize", action="store_true", help="minimize every component DFA")
        return p

    synth = command("synth", "decide realizability and extract a strategy")
    synth.add_argument("--agent", required=True, type=_atom_list, help="agent atoms, comma separated")
    synth.add_argument("--env", type=_atom_list, default=[], help="environment atoms, comma separated")
    synth.add_argument("--out", type=Path, help="write the strategy here")
    synth.add_argument("--format", choices=["json", "dot"], default="json")

    for name, help_text in (("sat", "satisfiability with a witness trace"), ("valid", "validity with a counter-trace")):
        p = command(name, help_text)
        p.add_argument("--out", type=Path, help="write the witness JSON here")

    mc = command("mc", "check a transition system against the formula")
    mc.add_argument("--ts", required=True, type=Path, help="transition system JSON")
    mc.add_argument("--out", type=Path, help="write the counterexample JSON here")

    comp = command("compile", "write the DFA, EL and parity automata")
    comp.add_argument("--out", type=Path, help="output directory (summary goes to stdout if omitted)")
    return parser


def _read_formula(args):
    text = args.formula if args.formula is not None else args.formula_file.read_text()
    return parse_plus(text.strip(), Dialect.coerce(args.logic))


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(path: Path | None, text: str):
    if path is None:
        sys.stdout.write(text)
    else:
        path.write_text(text)


def _synth(args, psi) -> int:
    result = synthesize(psi, args.agent, args.env, minimize=args.minimize)
    if not result.realizable:
        print("UNREALIZABLE")
        return NEGATIVE
    print("REALIZABLE")
    strategy = result.strategy
    _emit(args.out, strategy.to_dot() if args.format == "dot" else strategy.dumps())
    return POSITIVE


def _sat(args, psi) -> int:
    found = is_satisfiable(psi)
    print("SAT" if found.satisfiable else "UNSAT")
    if found.witness is not None:
        _emit(args.out, _dump(found.witness.to_json()))
    return POSITIVE if found.satisfiable else NEGATIVE


def _valid(args, psi) -> int:
    witness = countertrace(psi)
    print("VALID" if witness is None else "INVALID")
    if witness is not None:
        _emit(args.out, _dump(witness.to_json()))
    return POSITIVE if witness is None else NEGATIVE


def _mc(args, psi) -> int:
    ts = TransitionSystemInput.load(args.ts)
    result = model_check(ts, psi)
    print("HOLDS" if result.holds else "FAILS")
    if not result.holds:
        report = result.counterexample.to_json()
        report["states"] = {"stem": list(result.state_lasso[0]), "cycle": list(result.state_lasso[1])}
        _emit(args.out, _dump(report))
    return POSITIVE if result.holds else NEGATIVE


def _compile(args, psi) -> int:
    skeleton = to_pnf(psi)
    alphabet = plus_alphabet(skeleton)
    el = el_automaton(skeleton, alphabet, minimize=args.minimize)
    parity = el_to_parity(el)
    files = {}
    dfas = []
    for i, atom in enumerate(skeleton.atoms, start=1):
        dfa = compile_dfa(atom.body, atom.dialect, alphabet, minimize=args.minimize)
        files[f"dfa_{i}.dot"] = to_dot(dfa, title=to_text(atom.body))
        dfas.append({"index": i, "quantifier": atom.quantifier.value, "formula": to_text(atom.body), "states": dfa.num_states})
    files["el.dot"] = el_to_dot(el)
    files["parity.dot"] = parity_to_dot(parity)
    summary = {
        "formula": to_text(psi),
        "atoms": list(formula_atoms(psi)),
        "k": skeleton.k,
        "condition": str(el.condition),
        "dfas": dfas,
        "el_states": el.num_states,
        "parity_states": parity.num_states,
        "colors": sorted(set(parity.colors)),
    }
    if args.out is None:
        sys.stdout.write(_dump(summary))
        return POSITIVE
    args.out.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        (args.out / name).write_text(text)
    (args.out / "summary.json").write_text(_dump(summary))
    print(f"wrote {len(files) + 1} files to {args.out}")
    return POSITIVE


_COMMANDS = {"synth": _synth, "sat": _sat, "valid": _valid, "mc": _mc, "compile": _compile}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        psi = _read_formula(args)
        return _COMMANDS[args.command](args, psi)
    except (FormulaSyntaxError, SynthesisError, TransitionSystemError, OSError, ValueError) as exc:
        print(f"ltlfplus: error: {exc}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":
    sys.exit(main())
