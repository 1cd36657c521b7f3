"""Control-strategy search via a Buchi game on the product automaton.

For each candidate initial state, the specification automaton is composed
with the system, the resulting two-player game (control picks actions,
disturbances pick successors) is solved by the classical nested fixpoint,
and a winning positional strategy is unfolded into a reactive plan.  Every
returned plan is re-verified by the independent satisfaction check before
it leaves this module.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from . import buchi
from .errors import VerificationFailure
from .plan import (
    Controller,
    ReactivePlan,
    SCR,
    plan_satisfies,
    plan_trajectory_exists,
    plan_violation_total,
    simplify_plan,
)

logger = logging.getLogger(__name__)

FOUND = "found"
NOT_FOUND = "not-found"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class SynthesisResult:
    status: str
    initial: str | None = None
    plan: ReactivePlan | None = None
    controller: Controller | None = None

    @property
    def found(self) -> bool:
        return self.status == FOUND


class GameArena:
    """Bipartite game graph over a product automaton.

    Control owns the product states and picks a control label; the
    adversary owns the intermediate (state, action) choice nodes and picks
    any disturbance-resolved successor.  Non-blocking transitions plus a
    total specification automaton make every node live.
    """

    def __init__(self, product_automaton):
        self.product = product_automaton
        self.control_nodes = tuple(("s", s) for s in product_automaton.states)
        self.choice_nodes = tuple(
            ("c", s, a)
            for s in product_automaton.states
            for a in product_automaton.controls
            if product_automaton.successors(s, a)
        )
        self.accepting = frozenset(
            ("s", s) for s in product_automaton.accepting
        )
        moves = {}
        for node in self.control_nodes:
            _, s = node
            moves[node] = tuple(
                ("c", s, a)
                for a in product_automaton.controls
                if product_automaton.successors(s, a)
            )
        for node in self.choice_nodes:
            _, s, a = node
            moves[node] = tuple(("s", t) for t in product_automaton.successors(s, a))
        self.moves = moves
        self.nodes = self.control_nodes + self.choice_nodes

    def is_control(self, node) -> bool:
        return node[0] == "s"


@dataclass(frozen=True)
class GameSolution:
    winning: frozenset
    strategy: dict
    rank: dict

    def state_rank(self, product_state):
        return self.rank.get(("s", product_state))


def _controllable_predecessors(arena, target):
    """Nodes from which control is sure to be inside ``target`` after one
    move: control nodes with some move in, adversary nodes with every move in."""
    out = set()
    for node in arena.nodes:
        succs = arena.moves[node]
        if arena.is_control(node):
            if any(s in target for s in succs):
                out.add(node)
        elif all(s in target for s in succs):
            out.add(node)
    return out


def _attractor(arena, target):
    """Control attractor of ``target`` with entry layers as ranks."""
    rank = {node: 0 for node in target}
    frontier = set(target)
    layer = 0
    while frontier:
        layer += 1
        grown = set()
        for node in arena.nodes:
            if node in rank:
                continue
            succs = arena.moves[node]
            if arena.is_control(node):
                if any(s in rank for s in succs):
                    grown.add(node)
            elif all(s in rank for s in succs):
                grown.add(node)
        for node in grown:
            rank[node] = layer
        frontier = grown
    return rank


def solve_buchi_game(arena: GameArena) -> GameSolution:
    """Winning region and positional strategy for the objective of visiting
    accepting nodes infinitely often.

    Classical nested fixpoint: shrink a candidate region to the control
    attractor of those accepting nodes from which control can step back
    into the region, until stabilization.  The strategy follows decreasing
    attractor ranks and, from the recurrent accepting nodes, re-enters the
    attractor.
    """
    region = set(arena.nodes)
    while True:
        cpre = _controllable_predecessors(arena, region)
        recurrent = {n for n in arena.accepting if n in region and n in cpre}
        rank = _attractor(arena, recurrent)
        attractor = set(rank)
        if attractor == region:
            break
        region = attractor

    winning = frozenset(region)
    action_order = {a: i for i, a in enumerate(arena.product.controls)}
    strategy = {}
    for node in arena.control_nodes:
        if node not in winning:
            continue
        _, state = node
        candidates = []
        for choice in arena.moves[node]:
            if choice not in winning:
                continue
            _, _, action = choice
            candidates.append((rank[choice], action_order[action], action))
        if not candidates:
            continue
        candidates.sort()
        strategy[state] = candidates[0][2]
    return GameSolution(winning, strategy, dict(rank))


def spec_automaton(formula=None, valuation=None, automaton=None):
    """The total specification automaton for synthesis, or ``None`` when the
    route is unsupported (properly nondeterministic translation and no
    usable explicit automaton)."""
    if automaton is not None:
        if buchi.is_total(automaton):
            return automaton
        return buchi.totalize(automaton)
    translated = buchi.ltl_to_buchi(formula, props=valuation.props)
    return buchi.totalize(translated)


def _verify(plan, formula, valuation, automaton):
    if formula is not None:
        return plan_satisfies(plan, formula, valuation)
    return plan_trajectory_exists(plan) and \
        plan_violation_total(plan, automaton, valuation) is None


def extract_plan(product_automaton, solution: GameSolution) -> ReactivePlan:
    """Unfold a winning positional strategy into a reactive plan.

    Plan state i carries the world component of the i-th product state
    reached (breadth-first) under the strategy; its successor set covers
    every disturbance-resolved successor, as plan well-formedness demands.
    """
    start = product_automaton.initial
    ids = {start: 1}
    order = [start]
    queue = [start]
    while queue:
        state = queue.pop(0)
        action = solution.strategy[state]
        for target in product_automaton.successors(state, action):
            if target not in ids:
                ids[target] = len(order) + 1
                order.append(target)
                queue.append(target)
    rules = []
    for state in order:
        action = solution.strategy[state]
        successors = frozenset(
            ids[t] for t in product_automaton.successors(state, action)
        )
        rules.append(SCR(ids[state], product_automaton.world(state), action, successors))
    return ReactivePlan(rules)


def find_reactive_plan(system, q0, formula, valuation, automaton=None) -> SynthesisResult:
    """A reactive plan rooted at ``q0`` enforcing the specification.

    ``unknown`` means the specification automaton could not be made total,
    so this method cannot decide the instance; ``not-found`` means the game
    is lost from ``q0``.  A found plan is always independently re-verified.
    """
    spec = spec_automaton(formula, valuation, automaton)
    if spec is None:
        return SynthesisResult(UNKNOWN)
    return _plan_for_initial(system, q0, formula, valuation, spec)


def _plan_for_initial(system, q0, formula, valuation, spec) -> SynthesisResult:
    prod = buchi.product(system, q0, spec, valuation)
    arena = GameArena(prod)
    solution = solve_buchi_game(arena)
    if ("s", prod.initial) not in solution.winning:
        return SynthesisResult(NOT_FOUND)
    plan = extract_plan(prod, solution)
    if not _verify(plan, formula, valuation, spec):
        raise VerificationFailure(
            f"synthesized plan from {q0!r} failed independent verification"
        )
    return SynthesisResult(FOUND, initial=q0, plan=plan)


def synthesize(system, formula, valuation, initial_hint=None,
               automaton=None) -> SynthesisResult:
    """Search initial states in declared order for an enforceable plan; on
    success, simplify it and wrap it into an executable controller."""
    spec = spec_automaton(formula, valuation, automaton)
    if spec is None:
        logger.info("specification automaton is not totalizable; verdict unknown")
        return SynthesisResult(UNKNOWN)
    candidates = [initial_hint] if initial_hint is not None else list(system.states)
    for q0 in candidates:
        result = _plan_for_initial(system, q0, formula, valuation, spec)
        if result.found:
            simplified = simplify_plan(result.plan)
            if not _verify(simplified, formula, valuation, spec):
                raise VerificationFailure(
                    f"simplified plan from {q0!r} failed independent verification"
                )
            controller = Controller(simplified)
            return SynthesisResult(FOUND, initial=q0, plan=simplified,
                                   controller=controller)
    return SynthesisResult(NOT_FOUND)


def analyze(system, q0, formula, valuation, automaton=None):
    """Product and game solution for one initial state, for callers that
    need attractor ranks (simulation adversaries, exports).  ``None`` when
    the specification automaton is not totalizable."""
    spec = spec_automaton(formula, valuation, automaton)
    if spec is None:
        return None
    prod = buchi.product(system, q0, spec, valuation)
    arena = GameArena(prod)
    return spec, prod, solve_buchi_game(arena)
