"""Finite, non-blocking alternating transition systems and their basic views.

An alternating transition system splits its transition labels into a
controllable part (controls) and an uncontrollable part (disturbances).
This module holds the system model itself, valuation functions mapping
states to proposition sets, the reactive-agent view used by the planner,
finite state sequences, and the lasso representation of ultimately
periodic infinite words.

Indexing on sequences and lassos is 1-based everywhere user-visible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import (
    BlockedState,
    EmptyAlphabet,
    ExplosionGuard,
    InvalidDuration,
    SystemValidationError,
    UndeclaredSymbol,
)


@dataclass(frozen=True)
class Lasso:
    """The infinite word ``prefix . cycle . cycle . ...``.

    ``prefix`` may be empty, ``cycle`` may not.  Positions are 1-based;
    positions past ``len(prefix) + len(cycle)`` fold back into the cycle.
    """

    prefix: tuple
    cycle: tuple

    def __post_init__(self):
        if not self.cycle:
            raise ValueError("lasso cycle must be non-empty")

    @property
    def classes(self) -> int:
        """Number of distinct position classes, ``|prefix| + |cycle|``."""
        return len(self.prefix) + len(self.cycle)

    def normalize(self, position: int) -> int:
        if position < 1:
            raise ValueError("positions are 1-based")
        u, v = len(self.prefix), len(self.cycle)
        if position <= u + v:
            return position
        return u + 1 + ((position - u - 1) % v)

    def at(self, position: int):
        i = self.normalize(position)
        if i <= len(self.prefix):
            return self.prefix[i - 1]
        return self.cycle[i - len(self.prefix) - 1]

    def successor(self, position: int) -> int:
        """Position class reached one step after ``position``."""
        i = self.normalize(position)
        return len(self.prefix) + 1 if i == self.classes else i + 1

    def unroll(self, n: int) -> tuple:
        return tuple(self.at(i) for i in range(1, n + 1))

    def map(self, fn) -> "Lasso":
        return Lasso(tuple(fn(x) for x in self.prefix), tuple(fn(x) for x in self.cycle))

    def canonical(self) -> "Lasso":
        """Unique minimal representation of the denoted word.

        The cycle is reduced to its primitive period and the prefix is
        shortened while its last element equals the cycle's last element.
        Two lassos denote the same word iff their canonical forms are equal.
        """
        cycle = list(self.cycle)
        for d in range(1, len(cycle) + 1):
            if len(cycle) % d == 0 and cycle == cycle[:d] * (len(cycle) // d):
                cycle = cycle[:d]
                break
        prefix = list(self.prefix)
        while prefix and prefix[-1] == cycle[-1]:
            prefix.pop()
            cycle = [cycle[-1]] + cycle[:-1]
        return Lasso(tuple(prefix), tuple(cycle))


@dataclass(frozen=True)
class StateSequence:
    """Non-empty finite sequence of states with 1-based accessors."""

    items: tuple

    def __post_init__(self):
        if not self.items:
            raise ValueError("state sequences are non-empty")

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def at(self, i: int):
        if not 1 <= i <= len(self.items):
            raise IndexError(f"position {i} out of range 1..{len(self.items)}")
        return self.items[i - 1]

    @property
    def first(self):
        return self.items[0]

    @property
    def last(self):
        return self.items[-1]

    def slice(self, i: int, j: int) -> "StateSequence":
        """The subsequence from position ``i`` to ``j``, both inclusive."""
        if not (1 <= i <= j <= len(self.items)):
            raise IndexError(f"slice {i}..{j} out of range 1..{len(self.items)}")
        return StateSequence(self.items[i - 1 : j])


class Valuation:
    """Assignment of a proposition subset to every state."""

    def __init__(self, props, mapping):
        self.props = tuple(props)
        prop_set = set(self.props)
        self._map = {}
        for state, assigned in mapping.items():
            assigned = frozenset(assigned)
            extra = assigned - prop_set
            if extra:
                raise UndeclaredSymbol(
                    f"valuation of state {state!r} uses undeclared propositions "
                    f"{sorted(extra)}"
                )
            self._map[state] = assigned

    def states(self):
        return self._map.keys()

    def label(self, state) -> frozenset:
        try:
            return self._map[state]
        except KeyError:
            raise UndeclaredSymbol(f"state {state!r} has no valuation") from None

    def word(self, lasso: Lasso) -> Lasso:
        """Pointwise image of a state lasso under the valuation."""
        return lasso.map(self.label)


@dataclass(frozen=True)
class AgentStep:
    """One entry of a reactive agent's transition function."""

    action: str
    duration: int
    successors: tuple


@dataclass(frozen=True)
class ReactiveAgent:
    """A world-state transition function rooted at an initial state.

    ``succ`` maps every state to one entry per control label, in declared
    label order, each carrying the non-empty set of nondeterministic
    successors.  Durations are pinned to 1.
    """

    initial: str
    succ: dict

    def entries(self, state) -> tuple:
        return self.succ[state]


class AlternatingTransitionSystem:
    """States, controls, disturbances, transitions, and observations.

    The transition relation must be non-blocking: every
    (state, control, disturbance) triple has at least one successor.
    Declaration order of states and labels is preserved and drives all
    deterministic iteration in this library.
    """

    def __init__(self, states, controls, disturbances, transitions,
                 observations=None, obs_map=None):
        self.states = tuple(states)
        self.controls = tuple(controls)
        self.disturbances = tuple(disturbances)
        if not self.states or not self.controls or not self.disturbances:
            raise EmptyAlphabet("states, controls, and disturbances must be non-empty")
        for name, seq in (("states", self.states), ("controls", self.controls),
                          ("disturbances", self.disturbances)):
            if len(set(seq)) != len(seq):
                raise SystemValidationError(f"duplicate entries in {name}")

        state_set, control_set = set(self.states), set(self.controls)
        disturbance_set = set(self.disturbances)
        self.transitions = tuple(tuple(t) for t in transitions)
        by_qab = {}
        by_qa = {}
        for q, a, b, q2 in self.transitions:
            if q not in state_set or q2 not in state_set:
                raise UndeclaredSymbol(f"transition {(q, a, b, q2)} references an undeclared state")
            if a not in control_set:
                raise UndeclaredSymbol(f"transition {(q, a, b, q2)} references an undeclared control {a!r}")
            if b not in disturbance_set:
                raise UndeclaredSymbol(f"transition {(q, a, b, q2)} references an undeclared disturbance {b!r}")
            by_qab.setdefault((q, a, b), []).append(q2)
            by_qa.setdefault((q, a), []).append(q2)
        for q in self.states:
            for a in self.controls:
                for b in self.disturbances:
                    if (q, a, b) not in by_qab:
                        raise BlockedState(q, a, b)

        order = {q: i for i, q in enumerate(self.states)}
        self._succ_qab = {
            key: tuple(sorted(set(targets), key=order.__getitem__))
            for key, targets in by_qab.items()
        }
        self._succ_qa = {
            key: tuple(sorted(set(targets), key=order.__getitem__))
            for key, targets in by_qa.items()
        }

        if obs_map is None:
            obs_map = {q: q for q in self.states}
        missing = [q for q in self.states if q not in obs_map]
        if missing:
            raise UndeclaredSymbol(f"observation map is missing states {missing}")
        extra = [q for q in obs_map if q not in state_set]
        if extra:
            raise UndeclaredSymbol(f"observation map references undeclared states {extra}")
        self.obs_map = dict(obs_map)
        if observations is None:
            seen = []
            for q in self.states:
                if self.obs_map[q] not in seen:
                    seen.append(self.obs_map[q])
            observations = seen
        self.observations = tuple(observations)
        if set(self.obs_map.values()) - set(self.observations):
            raise UndeclaredSymbol("observation map uses undeclared observations")

    def state_index(self, q) -> int:
        return self.states.index(q)

    def successors(self, q, a) -> tuple:
        """All states reachable from ``q`` under control ``a`` for some disturbance."""
        if q not in set(self.states):
            raise UndeclaredSymbol(f"unknown state {q!r}")
        if a not in set(self.controls):
            raise UndeclaredSymbol(f"unknown control {a!r}")
        return self._succ_qa[(q, a)]

    def successors_under(self, q, a, b) -> tuple:
        return self._succ_qab[(q, a, b)]

    def reactive_agent(self, initial) -> ReactiveAgent:
        """The agent view rooted at ``initial``: per state, one entry per
        control label in declared order, each with duration 1."""
        if initial not in set(self.states):
            raise UndeclaredSymbol(f"unknown state {initial!r}")
        succ = {
            q: tuple(AgentStep(a, 1, self.successors(q, a)) for a in self.controls)
            for q in self.states
        }
        return ReactiveAgent(initial, succ)


def _string_list(raw, key):
    value = raw[key]
    if not isinstance(value, list) or not all(isinstance(x, str) for x in value):
        raise SystemValidationError(f"{key!r} must be a list of strings")
    return value


def validate_ats(raw: dict) -> AlternatingTransitionSystem:
    """Build a validated system from a parsed description (see ``load_system``).

    Unknown keys are rejected.  A ``durations`` map, if present, must pin
    every control to 1.
    """
    if not isinstance(raw, dict):
        raise SystemValidationError("system description must be a JSON object")
    allowed = {"states", "controls", "disturbances", "transitions",
               "observations", "valuation", "durations"}
    unknown = set(raw) - allowed
    if unknown:
        raise SystemValidationError(f"unknown keys in system description: {sorted(unknown)}")
    for key in ("states", "controls", "disturbances", "transitions"):
        if key not in raw:
            raise SystemValidationError(f"system description is missing {key!r}")

    if not isinstance(raw["transitions"], list):
        raise SystemValidationError("'transitions' must be a list")
    transitions = []
    for entry in raw["transitions"]:
        if not isinstance(entry, dict) or set(entry) != {"from", "control", "disturbance", "to"}:
            raise SystemValidationError(
                "each transition must be an object with exactly the keys "
                "from/control/disturbance/to"
            )
        transitions.append((entry["from"], entry["control"], entry["disturbance"], entry["to"]))

    durations = raw.get("durations", {})
    if not isinstance(durations, dict):
        raise SystemValidationError("'durations' must be an object")
    for control, d in durations.items():
        if d != 1:
            raise InvalidDuration(f"control {control!r} has duration {d!r}; only 1 is supported")

    obs_map = raw.get("observations")
    if obs_map is not None and not isinstance(obs_map, dict):
        raise SystemValidationError("'observations' must be an object mapping states")
    return AlternatingTransitionSystem(
        _string_list(raw, "states"), _string_list(raw, "controls"),
        _string_list(raw, "disturbances"), transitions,
        obs_map=dict(obs_map) if obs_map is not None else None,
    )


def parse_valuation(raw: dict, system: AlternatingTransitionSystem) -> Valuation:
    """Extract the valuation from a system description, defaulting to empty sets."""
    table = raw.get("valuation", {})
    if not isinstance(table, dict) or not all(
        isinstance(ps, list) for ps in table.values()
    ):
        raise SystemValidationError("'valuation' must map states to proposition lists")
    extra = set(table) - set(system.states)
    if extra:
        raise UndeclaredSymbol(f"valuation references undeclared states {sorted(extra)}")
    props = []
    for q in system.states:
        for p in table.get(q, []):
            if not isinstance(p, str) or not p.isidentifier():
                raise SystemValidationError(f"invalid proposition name {p!r}")
            if p not in props:
                props.append(p)
    mapping = {q: frozenset(table.get(q, [])) for q in system.states}
    return Valuation(props, mapping)


def load_system(path) -> tuple:
    """Read a system file and return ``(system, valuation)``."""
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    system = validate_ats(raw)
    return system, parse_valuation(raw, system)


def outcomes_prefixes(system, q, controller, n, cap=10**6) -> frozenset:
    """All length-``n`` closed-loop state sequences from ``q``.

    ``controller`` is anything with a functional ``feed(state) -> (controller,
    action)`` step.  Step ``i+1`` extends a sequence by every successor the
    disturbances allow under the controller's action after seeing the first
    ``i`` states.
    """
    if n < 1:
        raise ValueError("outcome length must be at least 1")
    current = {(q,): controller.feed(q)}
    for _ in range(n - 1):
        grown = {}
        for seq, (ctrl, action) in current.items():
            for q2 in system.successors(seq[-1], action):
                grown[seq + (q2,)] = ctrl.feed(q2)
        if len(grown) > cap:
            raise ExplosionGuard(f"more than {cap} outcome prefixes")
        current = grown
    return frozenset(StateSequence(seq) for seq in current)
