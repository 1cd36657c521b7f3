import json

import pytest

from astra.core import AlternatingTransitionSystem, Valuation
from astra.plan import ReactivePlan, SCR


def three_state_valuation():
    return Valuation(
        ["p1", "p2", "p3"],
        {"q1": {"p1", "p2"}, "q2": {"p2", "p3"}, "q3": {"p1", "p3"}},
    )


@pytest.fixture
def agent_system():
    """The three-state agent with actions a1/b1 at q1, a2 at q2, a3 at q3,
    encoded over a common control alphabet.  Controls that the agent does
    not offer in a state keep it in place, which preserves non-blocking
    without adding behaviour the plans below rely on."""
    states = ["q1", "q2", "q3"]
    controls = ["a1", "b1", "a2", "a3"]
    defined = {
        ("q1", "a1"): ["q2"],
        ("q1", "b1"): ["q3"],
        ("q2", "a2"): ["q1", "q3"],
        ("q3", "a3"): ["q3"],
    }
    transitions = []
    for q in states:
        for a in controls:
            for target in defined.get((q, a), [q]):
                transitions.append((q, a, "1", target))
    system = AlternatingTransitionSystem(states, controls, ["1"], transitions)
    return system, three_state_valuation()


@pytest.fixture
def two_control_agent():
    """The same agent over a two-letter control alphabet; at q2 and q3 both
    controls coincide with the only offered action."""
    transitions = [
        ("q1", "a1", "1", "q2"),
        ("q1", "b1", "1", "q3"),
        ("q2", "a1", "1", "q1"), ("q2", "a1", "1", "q3"),
        ("q2", "b1", "1", "q1"), ("q2", "b1", "1", "q3"),
        ("q3", "a1", "1", "q3"),
        ("q3", "b1", "1", "q3"),
    ]
    system = AlternatingTransitionSystem(
        ["q1", "q2", "q3"], ["a1", "b1"], ["1"], transitions
    )
    return system, three_state_valuation()


@pytest.fixture
def example_plan():
    """Four-rule plan for the three-state agent: reach q3 via q2, with an
    optional detour back through q1."""
    return ReactivePlan([
        SCR(1, "q1", "a1", frozenset({2})),
        SCR(2, "q2", "a2", frozenset({3, 4})),
        SCR(3, "q3", "a3", frozenset({3})),
        SCR(4, "q1", "b1", frozenset({3})),
    ])


@pytest.fixture
def detour_plan():
    """Plan whose rule 2 lists two successors labelled by the same world."""
    return ReactivePlan([
        SCR(1, "q1", "a1", frozenset({2})),
        SCR(2, "q2", "a2", frozenset({1, 4})),
        SCR(3, "q3", "a3", frozenset({1})),
        SCR(4, "q1", "a4", frozenset({3})),
    ])


@pytest.fixture
def deterministic_two_state():
    """Two states, two controls, one disturbance, deterministic moves."""
    transitions = [
        ("q1", "a", "1", "q1"),
        ("q1", "b", "1", "q2"),
        ("q2", "a", "1", "q1"),
        ("q2", "b", "1", "q1"),
    ]
    return AlternatingTransitionSystem(["q1", "q2"], ["a", "b"], ["1"], transitions)


def system_file_dict(system, valuation):
    return {
        "states": list(system.states),
        "controls": list(system.controls),
        "disturbances": list(system.disturbances),
        "transitions": [
            {"from": q, "control": a, "disturbance": b, "to": t}
            for q, a, b, t in system.transitions
        ],
        "valuation": {q: sorted(valuation.label(q)) for q in system.states},
    }


def write_json(path, payload):
    path.write_text(json.dumps(payload, indent=2), encoding="utf-8")
    return str(path)


@pytest.fixture
def agent_system_file(tmp_path, agent_system):
    system, valuation = agent_system
    return write_json(tmp_path / "system.json", system_file_dict(system, valuation))


@pytest.fixture
def example_plan_file(tmp_path, example_plan):
    from astra.plan import plan_to_dict

    return write_json(tmp_path / "plan.json", plan_to_dict(example_plan))
