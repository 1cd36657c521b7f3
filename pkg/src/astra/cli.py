"""Command-line surface: synthesize, verify, simulate, export.

Exit codes: 0 success (plan found / plan verified), 1 negative verdict
(no plan exists / plan violates the spec), 2 undecided (specification not
totalizable), 3 input or validation error.  All randomness flows from
``--seed``; identical invocations produce identical bytes.  The env var
``ASTRA_LOG`` selects the diagnostic logging level.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import random
import sys
from pathlib import Path

from . import buchi, dot, planner
from .core import load_system
from .errors import AstraError
from .ltl import parse_formula
from .plan import (
    Controller,
    load_plan,
    dump_plan,
    plan_satisfies,
    plan_trajectory_exists,
    plan_violation,
    plan_violation_total,
)
from .completeness import build_accepting_system

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_UNKNOWN = 2
EXIT_ERROR = 3


def _add_spec_arguments(sub, plan_file=False, out=False):
    sub.add_argument("--system", required=True, help="system file (JSON)")
    group = sub.add_mutually_exclusive_group()
    group.add_argument("--spec", help="specification formula")
    group.add_argument("--automaton", help="specification automaton file (JSON)")
    sub.add_argument("--initial", help="initial state hint")
    if plan_file:
        sub.add_argument("--plan", required=True, help="plan file (JSON)")
    if out:
        sub.add_argument("--out", required=True, help="output path")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="astra",
        description="Synthesize, verify, simulate, and export reactive plans "
                    "for alternating transition systems.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    synth = commands.add_parser("synth", help="synthesize a verified plan")
    _add_spec_arguments(synth, out=True)

    verify = commands.add_parser("verify", help="check a plan against a spec")
    _add_spec_arguments(verify, plan_file=True)

    simulate = commands.add_parser("simulate", help="run a plan in closed loop")
    _add_spec_arguments(simulate, plan_file=True)
    simulate.add_argument("--seed", type=int, default=0)
    simulate.add_argument("--policy", choices=("random", "adversarial", "scripted"),
                          default="random")
    simulate.add_argument("--steps", type=int, default=20)
    simulate.add_argument("--script", help="JSON list of disturbance labels")

    export = commands.add_parser("export", help="write a DOT rendering")
    export.add_argument("kind", choices=("system", "plan", "automaton", "product", "tfin"))
    export.add_argument("--system", help="system file (JSON)")
    group = export.add_mutually_exclusive_group()
    group.add_argument("--spec", help="specification formula")
    group.add_argument("--automaton", help="specification automaton file (JSON)")
    export.add_argument("--plan", help="plan file (JSON)")
    export.add_argument("--initial", help="initial/root state")
    export.add_argument("--out", required=True, help="output path")
    return parser


def _load_spec(args, valuation):
    """Returns (formula, explicit_automaton); exactly one is not None."""
    if args.spec is not None:
        return parse_formula(args.spec, props=valuation.props), None
    if args.automaton is not None:
        return None, buchi.load_automaton(args.automaton)
    raise AstraError("exactly one of --spec or --automaton is required")


def cmd_synth(args) -> int:
    system, valuation = load_system(args.system)
    formula, automaton = _load_spec(args, valuation)
    if args.initial is not None and args.initial not in set(system.states):
        raise AstraError(f"unknown initial state {args.initial!r}")
    result = planner.synthesize(system, formula, valuation,
                                initial_hint=args.initial, automaton=automaton)
    if result.status == planner.UNKNOWN:
        print("unknown: specification automaton is not totalizable")
        return EXIT_UNKNOWN
    if result.status == planner.NOT_FOUND:
        print("no enforcing plan exists from any candidate initial state")
        return EXIT_NEGATIVE
    dump_plan(result.plan, args.out, initial=result.initial)
    dot.write_dot(Path(args.out).with_suffix(".dot"), dot.plan_dot(result.plan))
    print(f"initial: {result.initial}")
    print("verified: true")
    return EXIT_OK


def _print_counterexample(lasso):
    print("violated: counterexample lasso")
    print("prefix: " + " ".join(lasso.prefix))
    print("cycle: " + " ".join(lasso.cycle))


def cmd_verify(args) -> int:
    system, valuation = load_system(args.system)
    formula, automaton = _load_spec(args, valuation)
    plan = load_plan(args.plan)
    plan.validate_against(system)
    if not plan_trajectory_exists(plan):
        print("violated: the plan generates no trajectory (no reachable cycle)")
        return EXIT_NEGATIVE
    if formula is not None:
        witness = plan_violation(plan, formula, valuation)
    else:
        total = planner.spec_automaton(automaton=automaton)
        if total is None:
            raise AstraError(
                "verification against an automaton needs a totalizable automaton"
            )
        witness = plan_violation_total(plan, total, valuation)
    if witness is not None:
        _print_counterexample(witness)
        return EXIT_NEGATIVE
    print("verified: true")
    return EXIT_OK


def _scripted_disturbances(args):
    if args.script is None:
        raise AstraError("the scripted policy needs --script")
    with open(args.script, encoding="utf-8") as fh:
        script = json.load(fh)
    if not isinstance(script, list):
        raise AstraError("the disturbance script must be a JSON list")
    if len(script) < args.steps:
        raise AstraError(
            f"the disturbance script has {len(script)} entries but --steps is {args.steps}"
        )
    return script


def cmd_simulate(args) -> int:
    system, valuation = load_system(args.system)
    formula, automaton = _load_spec(args, valuation)
    plan = load_plan(args.plan)
    plan.validate_against(system)
    controller = Controller(plan)
    if args.steps < 1:
        raise AstraError("--steps must be at least 1")

    if formula is not None:
        verified = plan_satisfies(plan, formula, valuation)
    else:
        total = planner.spec_automaton(automaton=automaton)
        verified = (
            total is not None
            and plan_trajectory_exists(plan)
            and plan_violation_total(plan, total, valuation) is None
        )
    if not verified:
        print("warning: plan failed verification; simulating anyway", file=sys.stderr)

    start = args.initial if args.initial is not None else plan.world_of(1)
    if start not in set(system.states):
        raise AstraError(f"unknown initial state {start!r}")

    rng = random.Random(args.seed)
    script = _scripted_disturbances(args) if args.policy == "scripted" else None
    tracker = None
    if args.policy == "adversarial":
        analysis = planner.analyze(system, start, formula, valuation,
                                   automaton=automaton)
        if analysis is None:
            raise AstraError(
                "the adversarial policy needs a totalizable specification"
            )
        _, prod, solution = analysis
        tracker = (prod, solution, prod.initial)

    def pick(step_index, state, action):
        nonlocal tracker
        if args.policy == "scripted":
            b = script[step_index]
            if b not in set(system.disturbances):
                raise AstraError(f"scripted disturbance {b!r} is not declared")
            return b, rng.choice(system.successors_under(state, action, b))
        if args.policy == "random":
            b = rng.choice(system.disturbances)
            return b, rng.choice(system.successors_under(state, action, b))
        prod, solution, ps = tracker
        worst = None
        for b in system.disturbances:
            for target in prod.successors_under(ps, action, b):
                rank = solution.state_rank(target)
                key = float("inf") if rank is None else rank
                if worst is None or key > worst[0]:
                    worst = (key, b, target)
        _, b, target = worst
        tracker = (prod, solution, target)
        return b, target[0]

    state = start
    controller, action = controller.feed(state)
    seen_pairs = {(controller.cursor, state)}
    lasso_detected = False
    was_detached = controller.detached
    if was_detached and verified:
        print("error: detached from a verified plan (model mismatch)",
              file=sys.stderr)
        return EXIT_ERROR
    for step in range(1, args.steps + 1):
        disturbance, nxt = pick(step - 1, state, action)
        print(f"{step} {state} {action} {disturbance} {nxt}")
        controller, action = controller.feed(nxt)
        if controller.detached and not was_detached:
            if verified:
                print("error: detached from a verified plan (model mismatch)",
                      file=sys.stderr)
                return EXIT_ERROR
            print("note: detached from plan; continuing with its default action")
        was_detached = controller.detached
        pair = (controller.cursor, nxt)
        if pair in seen_pairs:
            lasso_detected = True
        seen_pairs.add(pair)
        state = nxt
    print("satisfied (lasso detected)" if lasso_detected else "inconclusive prefix")
    return EXIT_OK


def cmd_export(args) -> int:
    if args.kind == "plan":
        if args.plan is None:
            raise AstraError("export plan needs --plan")
        content = dot.plan_dot(load_plan(args.plan))
    elif args.kind == "system":
        if args.system is None:
            raise AstraError("export system needs --system")
        system, valuation = load_system(args.system)
        content = dot.system_dot(system, valuation)
    elif args.kind == "automaton":
        if args.automaton is not None:
            content = dot.automaton_dot(buchi.load_automaton(args.automaton))
        elif args.spec is not None and args.system is not None:
            system, valuation = load_system(args.system)
            formula = parse_formula(args.spec, props=valuation.props)
            content = dot.automaton_dot(buchi.ltl_to_buchi(formula, props=valuation.props))
        elif args.spec is not None:
            content = dot.automaton_dot(buchi.ltl_to_buchi(parse_formula(args.spec)))
        else:
            raise AstraError("export automaton needs --spec or --automaton")
    elif args.kind == "product":
        if args.system is None:
            raise AstraError("export product needs --system")
        system, valuation = load_system(args.system)
        formula, automaton = _load_spec(args, valuation)
        spec = planner.spec_automaton(formula, valuation, automaton)
        if spec is None:
            raise AstraError("the specification automaton is not totalizable")
        root = args.initial if args.initial is not None else system.states[0]
        content = dot.product_dot(buchi.product(system, root, spec, valuation))
    else:  # tfin
        if args.system is None or args.plan is None:
            raise AstraError("export tfin needs --system and --plan")
        system, valuation = load_system(args.system)
        formula, automaton = _load_spec(args, valuation)
        spec = planner.spec_automaton(formula, valuation, automaton)
        if spec is None:
            raise AstraError("the specification automaton is not totalizable")
        plan = load_plan(args.plan)
        plan.validate_against(system)
        root = args.initial if args.initial is not None else plan.world_of(1)
        prod = buchi.product(system, root, spec, valuation)
        content = dot.accepting_system_dot(
            build_accepting_system(prod, Controller(plan))
        )
    dot.write_dot(args.out, content)
    return EXIT_OK


_COMMANDS = {
    "synth": cmd_synth,
    "verify": cmd_verify,
    "simulate": cmd_simulate,
    "export": cmd_export,
}


def main(argv=None) -> int:
    level = os.environ.get("ASTRA_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING))
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors, which would collide with the
        # undecided verdict; usage problems are input errors here
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    try:
        return _COMMANDS[args.command](args)
    except (AstraError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
