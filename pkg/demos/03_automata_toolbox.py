"""The automaton layer on its own: translate formulas, check totality,
complete deterministic automata, and test lasso acceptance."""

from astra import (
    Lasso,
    eval_lasso,
    is_total,
    ltl_to_buchi,
    nba_accepts,
    parse_formula,
    totalize,
)
from astra.dot import automaton_dot


def letters(*sets):
    return tuple(frozenset(s) for s in sets)


props = ("p1", "p2")

for text in ("p1 U p2", "G(p1 -> p2)", "G(p1 -> F p2)", "F(p1 U p2)"):
    formula = parse_formula(text, props)
    automaton = ltl_to_buchi(formula, props=props)
    total = totalize(automaton)
    verdict = f"total with {len(total.states)} states" if total else "not totalizable"
    print(f"{text:18s} -> {len(automaton.states)} states, {verdict}")

# acceptance agrees with direct evaluation on ultimately periodic words
formula = parse_formula("p1 U p2", props)
automaton = ltl_to_buchi(formula, props=props)
good = Lasso(letters({"p1"}), letters({"p2"}))
bad = Lasso((), letters({"p1"}))
for word, name in ((good, "p1 then p2 forever"), (bad, "p1 forever")):
    print(f"{name}: automaton={nba_accepts(automaton, word)} "
          f"evaluator={eval_lasso(word, formula, 1)}")

# the completed form gains a rejecting sink and becomes total
total = totalize(automaton)
print("completed automaton is total:", is_total(total))
print("\nDOT rendering of the completed automaton:\n")
print(automaton_dot(total))
