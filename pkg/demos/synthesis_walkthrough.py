"""Arbiter for one requester, built step by step.

The environment raises ``req``; the agent answers with ``grant``. We ask
for two things: grants never come out of nowhere, and the agent must grant
infinitely often whenever the environment requests infinitely often.

    python demos/synthesis_walkthrough.py
"""
from ltlfplus import (
    Alphabet,
    build_turn_game,
    el_automaton,
    el_to_parity,
    parse_plus,
    solve_parity_game,
    synthesize,
    to_pnf,
)

ARBITER = "safe(grant -> req | Y(req)) & (pers(!req) | recu(grant))"


def main():
    psi = parse_plus(ARBITER, "ppltl")
    print("formula:", ARBITER)

    skeleton = to_pnf(psi)
    print(f"\n{skeleton.k} quantified components, over the skeleton {skeleton.skeleton}")
    for atom in skeleton.atoms:
        print(f"  {atom.index}: {atom.as_formula()}")

    alphabet = Alphabet(("grant", "req"))
    el = el_automaton(skeleton, alphabet)
    parity = el_to_parity(el)
    print(f"product automaton: {el.num_states} states")
    print(f"parity automaton:  {parity.num_states} states, colors {sorted(set(parity.colors))}")

    game = build_turn_game(parity, ["grant"], ["req"])
    solution = solve_parity_game(game.game)
    print(f"game: {game.game.num_vertices} vertices, agent wins {len(solution.winning[0])}")

    result = synthesize(psi, agent=["grant"], env=["req"])
    print("\nrealizable:", result.realizable)
    strategy = result.strategy
    print(f"controller: {len(strategy.states)} states")

    requests = [{"req"}, set(), set(), {"req"}, {"req"}, set()]
    print("\nround  req    grant")
    for t, letter in enumerate(strategy.outcome(requests)):
        print(f"{t:>5}  {'req' in letter!s:<5}  {'grant' in letter}")


if __name__ == "__main__":
    main()
