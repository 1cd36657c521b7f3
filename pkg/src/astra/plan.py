"""Reactive plans and their executable controllers.

A reactive plan is a finite set of situation control rules (plan state,
world state, action, successor plan states).  This module covers plan
well-formedness, generated trajectories and their satisfaction checks,
reachable-cycle search, plan simplification, and the strategy obtained by
walking a simplified plan along an observed state history.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass

from . import buchi, ltl
from .core import Lasso, StateSequence
from .errors import ExplosionGuard, PlanValidationError, UniquenessViolated

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SCR:
    """One situation control rule."""

    id: int
    world: str
    action: str
    successors: frozenset


class ReactivePlan:
    """An ordered set of SCRs with ids 1..k; execution starts at plan state 1."""

    def __init__(self, scrs):
        rules = sorted((SCR(s.id, s.world, s.action, frozenset(s.successors))
                        if isinstance(s, SCR) else SCR(*s) for s in scrs),
                       key=lambda s: s.id)
        if not rules:
            raise PlanValidationError("a plan needs at least one SCR")
        ids = [s.id for s in rules]
        if ids != list(range(1, len(rules) + 1)):
            raise PlanValidationError("plan state ids must be exactly 1..k")
        self.scrs = tuple(rules)
        self.by_id = {s.id: s for s in self.scrs}
        for s in self.scrs:
            dangling = s.successors - set(self.by_id)
            if dangling:
                raise PlanValidationError(
                    f"SCR {s.id} lists unknown successor plan states {sorted(dangling)}"
                )

    def __len__(self):
        return len(self.scrs)

    def __eq__(self, other):
        return isinstance(other, ReactivePlan) and self.scrs == other.scrs

    def __hash__(self):
        return hash(self.scrs)

    def __repr__(self):
        return f"ReactivePlan({list(self.scrs)!r})"

    def successor_ids(self, plan_state) -> tuple:
        return tuple(sorted(self.by_id[plan_state].successors))

    def world_of(self, plan_state) -> str:
        return self.by_id[plan_state].world

    def has_unique_world_successors(self) -> bool:
        for s in self.scrs:
            worlds = [self.by_id[j].world for j in s.successors]
            if len(worlds) != len(set(worlds)):
                return False
        return True

    def require_unique_world_successors(self):
        for s in self.scrs:
            seen = {}
            for j in sorted(s.successors):
                w = self.by_id[j].world
                if w in seen:
                    raise UniquenessViolated(
                        f"SCR {s.id}: successors {seen[w]} and {j} both carry world "
                        f"state {w!r}"
                    )
                seen[w] = j

    def validate_against(self, system):
        """Check the plan against a system: declared symbols, successor
        soundness, and full coverage of every disturbance-resolved successor."""
        states = set(system.states)
        controls = set(system.controls)
        for s in self.scrs:
            if s.world not in states:
                raise PlanValidationError(f"SCR {s.id}: unknown world state {s.world!r}")
            if s.action not in controls:
                raise PlanValidationError(f"SCR {s.id}: unknown action {s.action!r}")
            reachable = set(system.successors(s.world, s.action))
            successor_worlds = {self.by_id[j].world for j in s.successors}
            phantom = successor_worlds - reachable
            if phantom:
                raise PlanValidationError(
                    f"SCR {s.id}: successor worlds {sorted(phantom)} are not reachable "
                    f"from {s.world!r} under {s.action!r}"
                )
            missing = reachable - successor_worlds
            if missing:
                raise PlanValidationError(
                    f"SCR {s.id}: no successor plan state covers world states "
                    f"{sorted(missing)} reachable from {s.world!r} under {s.action!r}"
                )


def load_plan(path) -> ReactivePlan:
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    return plan_from_dict(raw)


def plan_from_dict(raw: dict) -> ReactivePlan:
    if not isinstance(raw, dict) or not isinstance(raw.get("scrs"), list):
        raise PlanValidationError("plan description must be an object with an 'scrs' list")
    unknown = set(raw) - {"scrs", "initial"}
    if unknown:
        raise PlanValidationError(f"unknown keys in plan description: {sorted(unknown)}")
    scrs = []
    for entry in raw["scrs"]:
        if not isinstance(entry, dict) or set(entry) != {"id", "world", "action", "successors"}:
            raise PlanValidationError(
                "each SCR must be an object with exactly the keys id/world/action/successors"
            )
        if (not isinstance(entry["id"], int) or isinstance(entry["id"], bool)
                or not isinstance(entry["world"], str)
                or not isinstance(entry["action"], str)
                or not isinstance(entry["successors"], list)
                or not all(isinstance(j, int) and not isinstance(j, bool)
                           for j in entry["successors"])):
            raise PlanValidationError(
                f"SCR {entry.get('id')!r}: id and successors must be integers, "
                "world and action strings"
            )
        scrs.append(SCR(entry["id"], entry["world"], entry["action"],
                        frozenset(entry["successors"])))
    return ReactivePlan(scrs)


def plan_to_dict(plan: ReactivePlan, initial=None) -> dict:
    out = {}
    if initial is not None:
        out["initial"] = initial
    out["scrs"] = [
        {"id": s.id, "world": s.world, "action": s.action,
         "successors": sorted(s.successors)}
        for s in plan.scrs
    ]
    return out


def dump_plan(plan: ReactivePlan, path, initial=None):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(plan_to_dict(plan, initial), fh, indent=2)
        fh.write("\n")


# ---------------------------------------------------------------------------
# trajectories


def plan_trajectory_exists(plan: ReactivePlan) -> bool:
    """Whether the plan generates any infinite trajectory: a cycle of plan
    states must be reachable from plan state 1."""
    color = {}
    stack = [(1, iter(plan.successor_ids(1)))]
    color[1] = "open"
    while stack:
        node, it = stack[-1]
        advanced = False
        for nxt in it:
            if color.get(nxt) == "open":
                return True
            if nxt not in color:
                color[nxt] = "open"
                stack.append((nxt, iter(plan.successor_ids(nxt))))
                advanced = True
                break
        if not advanced:
            color[node] = "done"
            stack.pop()
    return False


def plan_trajectories(plan: ReactivePlan, bound: int, cap=10**6) -> frozenset:
    """All world-state lassos of plan trajectories whose plan-state lasso
    uses at most ``bound`` plan states in prefix plus cycle.

    Lassos are returned in canonical form, so set comparisons are
    comparisons of the denoted words.  Intended for testing at small bounds.
    """
    found = set()
    walks = [(1,)]
    examined = 0
    while walks:
        walk = walks.pop()
        examined += 1
        if examined > cap:
            raise ExplosionGuard(f"more than {cap} plan walks at bound {bound}")
        last = walk[-1]
        for nxt in plan.successor_ids(last):
            for t, state in enumerate(walk):
                if state == nxt:
                    prefix = tuple(plan.world_of(i) for i in walk[:t])
                    cycle = tuple(plan.world_of(i) for i in walk[t:])
                    found.add(Lasso(prefix, cycle).canonical())
            if len(walk) < bound:
                walks.append(walk + (nxt,))
    return frozenset(found)


def _plan_violation_graph(plan, automaton, letter_of):
    """Product of the plan graph with an automaton reading world valuations."""

    def successors(node):
        plan_state, x = node
        letter = letter_of(plan.world_of(plan_state))
        targets = automaton.successors(x, letter)
        return tuple(
            (j, t) for j in plan.successor_ids(plan_state) for t in targets
        )

    return successors


def plan_violation(plan: ReactivePlan, formula: ltl.Formula, valuation) -> Lasso | None:
    """A generated trajectory violating the formula, as a world lasso, or
    ``None``.  Decided by an accepting-lasso search in the product of the
    plan graph with an automaton for the negated formula."""
    negated = buchi.ltl_to_buchi(ltl.Not(formula), props=valuation.props)
    successors = _plan_violation_graph(plan, negated, valuation.label)

    def is_accepting(node):
        return node[1] in negated.accepting

    for x0 in negated.initial:
        witness = buchi.accepting_lasso((1, x0), successors, is_accepting)
        if witness is not None:
            return witness.map(lambda node: plan.world_of(node[0]))
    return None


def plan_violation_total(plan: ReactivePlan, automaton, valuation) -> Lasso | None:
    """Violation search against a total automaton for the formula itself:
    a reachable cycle of the deterministic product that never touches an
    accepting automaton state spells out a rejected trajectory."""
    if not buchi.is_total(automaton):
        raise PlanValidationError("violation search needs a total automaton")
    x0 = automaton.initial[0]

    def successors(node):
        plan_state, x = node
        letter = valuation.label(plan.world_of(plan_state))
        x2 = automaton.successors(x, letter)[0]
        return tuple((j, x2) for j in plan.successor_ids(plan_state))

    # search for a reachable cycle among non-accepting product nodes
    root = (1, x0)
    order = [root]
    seen = {root}
    succ = {}
    i = 0
    while i < len(order):
        node = order[i]
        i += 1
        succ[node] = successors(node)
        for nxt in succ[node]:
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)

    rejecting = [n for n in order if n[1] not in automaton.accepting]
    rejecting_set = set(rejecting)
    sub = {n: tuple(d for d in succ[n] if d in rejecting_set) for n in rejecting}
    for scc in buchi._tarjan(rejecting, sub):
        members = set(scc)
        if len(scc) > 1 or any(d == n for n in scc for d in sub[n]):
            entry = scc[0]
            prefix = buchi._bfs_path(root, entry, succ)
            if entry in sub[entry]:
                cycle = (entry,)
            else:
                back = buchi._bfs_path_multi(
                    [n for n in sub[entry] if n in members], entry,
                    {n: tuple(d for d in sub[n] if d in members) for n in members},
                )
                cycle = tuple(back)
            lasso = Lasso(tuple(prefix), cycle)
            return lasso.map(lambda node: plan.world_of(node[0]))
    return None


def plan_satisfies(plan: ReactivePlan, formula: ltl.Formula, valuation) -> bool:
    """Whether the plan generates at least one trajectory and none of its
    trajectories violates the formula."""
    if not plan_trajectory_exists(plan):
        return False
    return plan_violation(plan, formula, valuation) is None


# ---------------------------------------------------------------------------
# simplification


def _bfs_shortest_walk(plan, src, dst):
    """Shortest plan-state walk from ``src`` to ``dst`` using at least one
    edge; ties resolved toward smaller plan ids."""
    parent = {}
    queue = []
    for j in plan.successor_ids(src):
        if j not in parent:
            parent[j] = None
            queue.append(j)
    def unwind(node):
        path = [node]
        while parent[path[-1]] is not None:
            path.append(parent[path[-1]])
        return (src,) + tuple(reversed(path))
    if dst in parent:
        return unwind(dst)
    while queue:
        node = queue.pop(0)
        for j in plan.successor_ids(node):
            if j not in parent:
                parent[j] = node
                if j == dst:
                    return unwind(j)
                queue.append(j)
    return None


def find_reachable_cycle(plan: ReactivePlan):
    """The first plan state (in id order) carrying both a shortest cycle
    through itself and a shortest path from plan state 1, as
    ``(prefix, suffix)`` id tuples; ``None`` when no state qualifies.

    Paths have at least one edge, so for plan state 1 the prefix is itself
    a cycle through 1.  Breadth-first search realizes the shortest-path
    requirement with unit edge weights.
    """
    for i in sorted(plan.by_id):
        suffix = _bfs_shortest_walk(plan, i, i)
        if suffix is None:
            continue
        prefix = _bfs_shortest_walk(plan, 1, i)
        if prefix is not None:
            return prefix, suffix
    return None


def simplify_plan(plan: ReactivePlan) -> ReactivePlan:
    """Collapse same-world successor groups to a single representative.

    Per SCR and world state, at most one successor survives: the one on the
    discovered prefix, else the one on the suffix, else the lowest id.  The
    result still generates a trajectory whenever the input does, and its
    trajectories are a subset of the input's.
    """
    cycle = find_reachable_cycle(plan)
    if cycle is None:
        logger.info("plan has no reachable cycle; returning it unchanged")
        return plan
    prefix, suffix = cycle

    def on_path(path, i, group):
        for n in range(len(path) - 1):
            if path[n] == i and path[n + 1] in group:
                return path[n + 1]
        return None

    rules = []
    for s in plan.scrs:
        groups = {}
        for j in sorted(s.successors):
            groups.setdefault(plan.by_id[j].world, []).append(j)
        kept = set()
        for _, group in sorted(groups.items()):
            if len(group) == 1:
                kept.add(group[0])
                continue
            choice = on_path(prefix, s.id, group)
            if choice is None:
                choice = on_path(suffix, s.id, group)
            if choice is None:
                choice = group[0]
            kept.add(choice)
        rules.append(SCR(s.id, s.world, s.action, frozenset(kept)))
    return ReactivePlan(rules)


# ---------------------------------------------------------------------------
# strategy extraction


class _Detached:
    __slots__ = ()

    def __repr__(self):
        return "Detached"


DETACHED = _Detached()


def strategy_action(plan: ReactivePlan, history) -> str:
    """The action the plan prescribes after observing ``history``.

    Walks the unique plan-state path matching the history from plan state 1
    and returns the matched rule's action; any mismatch falls back to the
    action of plan state 1.  Requires per-SCR unique successor worlds.
    """
    plan.require_unique_world_successors()
    states = tuple(history) if not isinstance(history, StateSequence) else history.items
    if not states:
        raise ValueError("the observed history must be non-empty")
    default = plan.by_id[1].action
    if states[0] != plan.by_id[1].world:
        return default
    cursor = 1
    for observed in states[1:]:
        match = None
        for j in sorted(plan.by_id[cursor].successors):
            if plan.by_id[j].world == observed:
                match = j
                break
        if match is None:
            return default
        cursor = match
    return plan.by_id[cursor].action


@dataclass(frozen=True)
class Controller:
    """Executable, finite-memory form of a simplified plan's strategy.

    The cursor is ``None`` before the first observation, a plan state while
    the observed history matches the plan, and ``DETACHED`` forever after
    the first mismatch.  Stepping is functional; controllers can be copied
    and advanced independently.
    """

    plan: ReactivePlan
    cursor: object = None

    def __post_init__(self):
        self.plan.require_unique_world_successors()

    @property
    def default_action(self) -> str:
        return self.plan.by_id[1].action

    @property
    def detached(self) -> bool:
        return self.cursor is DETACHED

    def feed(self, observed):
        """Consume one observed state; returns ``(controller, action)``."""
        if self.cursor is None:
            nxt = 1 if observed == self.plan.by_id[1].world else DETACHED
        elif self.cursor is DETACHED:
            nxt = DETACHED
        else:
            nxt = DETACHED
            for j in sorted(self.plan.by_id[self.cursor].successors):
                if self.plan.by_id[j].world == observed:
                    nxt = j
                    break
        ctrl = Controller(self.plan, nxt)
        action = self.default_action if nxt is DETACHED else self.plan.by_id[nxt].action
        return ctrl, action


def controller_step(controller: Controller, observed):
    """Functional single step; see :meth:`Controller.feed`."""
    return controller.feed(observed)
