"""Reactive control strategies for finite alternating transition systems.

Synthesis of situation-control-rule plans enforcing next-free temporal
specifications under disturbance, plan simplification and strategy
extraction, independent verification of any plan, and the constructive
round trip from winning controllers back to plans.
"""

from .core import (
    AlternatingTransitionSystem,
    AgentStep,
    Lasso,
    ReactiveAgent,
    StateSequence,
    Valuation,
    load_system,
    outcomes_prefixes,
    parse_valuation,
    validate_ats,
)
from .ltl import (
    And,
    Atom,
    Formula,
    Not,
    TrueF,
    TRUE,
    Until,
    always,
    atoms,
    eval_lasso,
    eventually,
    false,
    formula_to_str,
    implies,
    or_,
    parse_formula,
    trajectory_satisfies,
)
from .buchi import (
    BuchiAutomaton,
    Edge,
    Guard,
    ProductAutomaton,
    accepting_lasso,
    guard_from_text,
    is_total,
    load_automaton,
    ltl_to_buchi,
    nba_accepts,
    product,
    totalize,
    world_projection,
)
from .plan import (
    Controller,
    DETACHED,
    ReactivePlan,
    SCR,
    controller_step,
    dump_plan,
    find_reachable_cycle,
    load_plan,
    plan_from_dict,
    plan_satisfies,
    plan_to_dict,
    plan_trajectories,
    plan_trajectory_exists,
    plan_violation,
    plan_violation_total,
    simplify_plan,
    strategy_action,
)
from .planner import (
    FOUND,
    GameArena,
    GameSolution,
    NOT_FOUND,
    SynthesisResult,
    UNKNOWN,
    find_reactive_plan,
    solve_buchi_game,
    synthesize,
)
from .completeness import (
    AcceptingTransitionSystem,
    build_accepting_system,
    pigeonhole_cap,
    plan_from_accepting_system,
    recurrence_index,
)
from . import errors

__version__ = "0.1.0"
