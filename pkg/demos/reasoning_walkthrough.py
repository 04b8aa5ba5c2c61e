"""Satisfiability, validity and model checking on a small traffic light.

    python demos/reasoning_walkthrough.py
"""
from ltlfplus import TransitionSystemInput, countertrace, eval_plus, is_satisfiable, is_valid, model_check, parse_plus


def show(label, text, dialect="ppltl"):
    psi = parse_plus(text, dialect)
    found = is_satisfiable(psi)
    print(f"{label:<28} {text}")
    print(f"{'':<28} satisfiable={found.satisfiable} valid={is_valid(psi)}")
    if found.satisfiable:
        print(f"{'':<28} witness  {found.witness}")
        assert eval_plus(psi, found.witness.stem, found.witness.cycle)
    return psi


def main():
    show("contradiction", "safe(p) & guar(!p)")
    show("excluded middle", "guar(p) | safe(!p)")
    show("infinitely many p-endings", "recu(F(last & p))", "ltlf")
    psi = show("eventually p forever", "pers(p)")
    print(f"{'':<28} countertrace {countertrace(psi)}")

    # red -> green -> yellow -> red, where green may idle
    light = TransitionSystemInput(
        atoms=["green", "red"],
        states=["R", "G", "Y"],
        initial=["R"],
        edges=[
            ("R", {"red"}, "G"),
            ("G", {"green"}, "G"),
            ("G", {"green"}, "Y"),
            ("Y", set(), "R"),
        ],
    )
    print("\nmodel checking the light")
    for text in ("safe(!(red & green))", "recu(red)", "recu(Y(red) -> green)"):
        result = model_check(light, parse_plus(text, "ppltl"))
        print(f"  {text:<24} {'holds' if result.holds else 'fails'}")
        if not result.holds:
            stem, cycle = result.state_lasso
            print(f"    trace  {result.counterexample}")
            print(f"    states {' '.join(stem)} / {' '.join(cycle)}")


if __name__ == "__main__":
    main()
