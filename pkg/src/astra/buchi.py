"""Buchi automata over proposition-set alphabets.

Provides translation of next-free temporal formulas into nondeterministic
Buchi automata, totality analysis and completion, synchronous products
with alternating transition systems, and lasso acceptance / emptiness
primitives.

Edges carry symbolic guards: boolean constraints over atomic propositions
standing for every letter (proposition subset) that satisfies them.  All
letter-level decisions (totality, determinism, completion) enumerate the
assignments over the relevant propositions; at the proposition counts this
library targets, direct enumeration is the reference semantics.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from . import ltl
from .core import Lasso
from .errors import AutomatonError

# ---------------------------------------------------------------------------
# guards


@dataclass(frozen=True)
class Guard:
    """A boolean constraint over ``atoms``.

    ``minterms`` holds every satisfying assignment as the frozenset of atoms
    made true; letters are matched by projecting them onto ``atoms``.
    """

    atoms: tuple
    minterms: frozenset
    text: str

    def matches(self, letter) -> bool:
        return frozenset(p for p in self.atoms if p in letter) in self.minterms

    def __str__(self):
        return self.text


def all_letters(props) -> tuple:
    """Every subset of ``props``, in a fixed bitmask order."""
    props = tuple(props)
    out = []
    for mask in range(2 ** len(props)):
        out.append(frozenset(p for i, p in enumerate(props) if mask >> i & 1))
    return tuple(out)


def _merge_implicants(i1, i2):
    diff = -1
    for k, (x, y) in enumerate(zip(i1, i2)):
        if x == y:
            continue
        if x is None or y is None or diff >= 0:
            return None
        diff = k
    if diff < 0:
        return None
    return i1[:diff] + (None,) + i1[diff + 1 :]


def _covers(implicant, minterm, atoms):
    return all(v is None or (a in minterm) == v for a, v in zip(atoms, implicant))


def _render_dnf(atoms, minterms):
    if not minterms:
        return "false"
    if len(minterms) == 2 ** len(atoms):
        return "true"
    def implicant_key(imp):
        return tuple(2 if v is None else int(v) for v in imp)

    current = {tuple(a in m for a in atoms) for m in minterms}
    primes = set()
    while current:
        merged = set()
        used = set()
        ordered = sorted(current, key=implicant_key)
        for idx, i1 in enumerate(ordered):
            for i2 in ordered[idx + 1 :]:
                m = _merge_implicants(i1, i2)
                if m is not None:
                    merged.add(m)
                    used.update((i1, i2))
        primes.update(set(ordered) - used)
        current = merged
    # deterministic greedy cover of the original minterms
    remaining = set(minterms)
    ordered = sorted(
        primes, key=lambda imp: (-sum(v is None for v in imp), implicant_key(imp))
    )
    chosen = []
    for imp in ordered:
        covered = {m for m in remaining if _covers(imp, m, atoms)}
        if covered:
            chosen.append(imp)
            remaining -= covered
        if not remaining:
            break
    terms = []
    for imp in chosen:
        lits = [a if v else "!" + a for a, v in zip(atoms, imp) if v is not None]
        terms.append(" & ".join(lits) if lits else "true")
    if len(terms) == 1:
        return terms[0]
    return " | ".join(f"({t})" if " & " in t else t for t in terms)


def guard_from_minterms(atoms, minterms) -> Guard:
    atoms = tuple(atoms)
    minterms = frozenset(frozenset(m) for m in minterms)
    return Guard(atoms, minterms, _render_dnf(atoms, minterms))


def guard_true() -> Guard:
    return guard_from_minterms((), [frozenset()])


def _eval_prop(expr, letter):
    if isinstance(expr, ltl.TrueF):
        return True
    if isinstance(expr, ltl.Atom):
        return expr.name in letter
    if isinstance(expr, ltl.Not):
        return not _eval_prop(expr.arg, letter)
    if isinstance(expr, ltl.And):
        return _eval_prop(expr.left, letter) and _eval_prop(expr.right, letter)
    raise AutomatonError("guards must be propositional")


def guard_from_text(text: str) -> Guard:
    expr = ltl.parse_formula(text, props=None)
    if ltl.until_subformulas(expr):
        raise AutomatonError(f"guard {text!r} uses a temporal operator")
    atoms = tuple(sorted(ltl.atoms(expr)))
    minterms = frozenset(m for m in all_letters(atoms) if _eval_prop(expr, m))
    return Guard(atoms, minterms, text.strip())


def lift_minterms(guard: Guard, universe) -> frozenset:
    """Satisfying assignments of ``guard`` expanded over ``universe``."""
    free = tuple(p for p in universe if p not in guard.atoms)
    out = set()
    for m in guard.minterms:
        for extra in all_letters(free):
            out.add(frozenset(m | extra))
    return frozenset(out)


# ---------------------------------------------------------------------------
# automata


@dataclass(frozen=True)
class Edge:
    src: str
    guard: Guard
    dst: str


class BuchiAutomaton:
    """(states, initial, alphabet 2^props as guards, edges, accepting)."""

    def __init__(self, states, initial, props, edges, accepting):
        self.states = tuple(states)
        state_set = set(self.states)
        if len(state_set) != len(self.states):
            raise AutomatonError("duplicate state names")
        self.initial = tuple(initial)
        self.accepting = frozenset(accepting)
        if set(self.initial) - state_set or self.accepting - state_set:
            raise AutomatonError("initial/accepting states must be declared states")
        self.edges = tuple(edges)
        props = list(props)
        for edge in self.edges:
            if edge.src not in state_set or edge.dst not in state_set:
                raise AutomatonError(f"edge {edge} references an undeclared state")
            for a in edge.guard.atoms:
                if a not in props:
                    props.append(a)
        self.props = tuple(props)
        out = {s: [] for s in self.states}
        for edge in self.edges:
            out[edge.src].append(edge)
        self._out = {s: tuple(es) for s, es in out.items()}

    def edges_from(self, state) -> tuple:
        return self._out[state]

    def successors(self, state, letter) -> tuple:
        seen = []
        for edge in self._out[state]:
            if edge.guard.matches(letter) and edge.dst not in seen:
                seen.append(edge.dst)
        return tuple(seen)


def load_automaton(path) -> BuchiAutomaton:
    """Read an automaton file: states, initial, accepting, guarded edges."""
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise AutomatonError("automaton description must be a JSON object")
    required = {"states", "initial", "accepting", "edges"}
    if set(raw) != required:
        raise AutomatonError(
            f"automaton description must have exactly the keys {sorted(required)}"
        )
    for key in ("states", "initial", "accepting", "edges"):
        if not isinstance(raw[key], list):
            raise AutomatonError(f"{key!r} must be a list")
    edges = []
    for entry in raw["edges"]:
        if not isinstance(entry, dict) or set(entry) != {"from", "guard", "to"}:
            raise AutomatonError("each edge must be an object with keys from/guard/to")
        if not all(isinstance(entry[k], str) for k in ("from", "guard", "to")):
            raise AutomatonError("edge fields must be strings")
        edges.append(Edge(entry["from"], guard_from_text(entry["guard"]), entry["to"]))
    return BuchiAutomaton(raw["states"], raw["initial"], (), edges, raw["accepting"])


# ---------------------------------------------------------------------------
# translation: obligation-set tableau -> transition-marked generalized
# automaton -> nondeterministic Buchi automaton


def _formula_key(node):
    if isinstance(node, ltl.TrueF):
        return (0,)
    if isinstance(node, ltl.Atom):
        return (1, node.name)
    if isinstance(node, ltl.Not):
        return (2, _formula_key(node.arg))
    if isinstance(node, ltl.And):
        return (3, _formula_key(node.left), _formula_key(node.right))
    return (4, _formula_key(node.left), _formula_key(node.right))


def _consistent(lits1, lits2):
    merged = lits1 | lits2
    pos = {l.name for l in merged if isinstance(l, ltl.Atom)}
    neg = {l.arg.name for l in merged if isinstance(l, ltl.Not)}
    return not (pos & neg)


def _cross(combos1, combos2):
    out = []
    seen = set()
    for l1, n1, f1 in combos1:
        for l2, n2, f2 in combos2:
            if not _consistent(l1, l2):
                continue
            combo = (l1 | l2, n1 | n2, f1 | f2)
            if combo not in seen:
                seen.add(combo)
                out.append(combo)
    return tuple(out)


_NO_COMBOS = ()
_UNIT = ((frozenset(), frozenset(), frozenset()),)


def _expansions(node, memo):
    """Decompositions of an obligation into (literals now, obligations next,
    untils fulfilled now).  Any run step discharging the obligation must
    match one decomposition."""
    if node in memo:
        return memo[node]
    if isinstance(node, ltl.TrueF):
        result = _UNIT
    elif isinstance(node, ltl.Atom):
        result = ((frozenset([node]), frozenset(), frozenset()),)
    elif isinstance(node, ltl.And):
        result = _cross(_expansions(node.left, memo), _expansions(node.right, memo))
    elif isinstance(node, ltl.Until):
        fulfil = tuple(
            (l, n, f | {node}) for l, n, f in _expansions(node.right, memo)
        )
        postpone = tuple(
            (l, n | {node}, f) for l, n, f in _expansions(node.left, memo)
        )
        result = fulfil + tuple(c for c in postpone if c not in fulfil)
    else:
        arg = node.arg
        if isinstance(arg, ltl.TrueF):
            result = _NO_COMBOS
        elif isinstance(arg, ltl.Atom):
            result = ((frozenset([node]), frozenset(), frozenset()),)
        elif isinstance(arg, ltl.Not):
            result = _expansions(arg.arg, memo)
        elif isinstance(arg, ltl.And):
            left = _expansions(ltl.Not(arg.left), memo)
            right = _expansions(ltl.Not(arg.right), memo)
            result = left + tuple(c for c in right if c not in left)
        else:
            # !(a U b)  ==  !b & (!a | next !(a U b))
            postponed = ((frozenset(), frozenset([node]), frozenset()),)
            right = _expansions(ltl.Not(arg.right), memo)
            left = _expansions(ltl.Not(arg.left), memo)
            result = _cross(right, left + tuple(c for c in postponed if c not in left))
    memo[node] = result
    return result


def _initial_obligations(formula):
    out = set()
    stack = [formula]
    while stack:
        node = stack.pop()
        if isinstance(node, ltl.TrueF):
            continue
        if isinstance(node, ltl.And):
            stack.extend((node.left, node.right))
            continue
        out.add(node)
    return frozenset(out)


def _literal_minterms(lits, atoms):
    """Full assignments over ``atoms`` consistent with the literal set."""
    pos = {l.name for l in lits if isinstance(l, ltl.Atom)}
    neg = {l.arg.name for l in lits if isinstance(l, ltl.Not)}
    free = tuple(a for a in atoms if a not in pos and a not in neg)
    out = set()
    base = frozenset(pos)
    for extra in all_letters(free):
        out.add(base | extra)
    return out


def _obligation_moves(obligations, atoms, memo):
    """Outgoing moves of an obligation set, merged per (target, marks)."""
    combos = _UNIT
    for ob in sorted(obligations, key=_formula_key):
        combos = _cross(combos, _expansions(ob, memo))
    merged = {}
    for lits, nexts, fulfilled in combos:
        key = (nexts, fulfilled)
        merged.setdefault(key, set()).update(_literal_minterms(lits, atoms))
    return merged


def _prune_subsumed(edges):
    """Drop letters of an edge whenever a same-source edge with a subset
    target and superset marks covers them; rerouting through the smaller
    obligation set preserves every accepting run."""
    pruned = []
    for dst, marks, minterms in edges:
        keep = set(minterms)
        for dst2, marks2, minterms2 in edges:
            if (dst2, marks2) == (dst, marks):
                continue
            if dst2 <= dst and marks2 >= marks:
                keep -= minterms2
        if keep:
            pruned.append((dst, marks, keep))
    return pruned


def _live_states(nodes, edges_by_src, accepting):
    """States that can reach a cycle through an accepting state."""
    sccs = _tarjan(nodes, edges_by_src)
    comp = {}
    for i, scc in enumerate(sccs):
        for n in scc:
            comp[n] = i
    good = set()
    for i, scc in enumerate(sccs):
        members = set(scc)
        has_cycle = len(scc) > 1 or any(
            d == n for n in scc for d in edges_by_src.get(n, ())
        )
        if has_cycle and any(n in accepting for n in members):
            good.add(i)
    live = set()
    # reverse reachability to good components
    rev = {}
    for n, dsts in edges_by_src.items():
        for d in dsts:
            rev.setdefault(d, set()).add(n)
    frontier = [n for n in nodes if comp.get(n) in good]
    live.update(frontier)
    while frontier:
        new = []
        for n in frontier:
            for p in rev.get(n, ()):
                if p not in live:
                    live.add(p)
                    new.append(p)
        frontier = new
    return live


def _tarjan(nodes, edges_by_src):
    """Iterative Tarjan; components in a deterministic order."""
    index = {}
    low = {}
    onstack = set()
    stack = []
    sccs = []
    counter = [0]
    for root in nodes:
        if root in index:
            continue
        work = [(root, 0)]
        while work:
            node, pi = work[-1]
            if pi == 0:
                index[node] = low[node] = counter[0]
                counter[0] += 1
                stack.append(node)
                onstack.add(node)
            advanced = False
            succs = edges_by_src.get(node, ())
            for i in range(pi, len(succs)):
                nxt = succs[i]
                if nxt not in index:
                    work[-1] = (node, i + 1)
                    work.append((nxt, 0))
                    advanced = True
                    break
                if nxt in onstack:
                    low[node] = min(low[node], index[nxt])
            if advanced:
                continue
            work.pop()
            if low[node] == index[node]:
                scc = []
                while True:
                    w = stack.pop()
                    onstack.discard(w)
                    scc.append(w)
                    if w == node:
                        break
                sccs.append(tuple(scc))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
    return sccs


def ltl_to_buchi(formula: ltl.Formula, props=None) -> BuchiAutomaton:
    """A nondeterministic Buchi automaton accepting exactly the words that
    satisfy ``formula``.

    States are obligation sets generated on the fly; acceptance bookkeeping
    tracks, per until subformula, the steps that either drop it or fulfil
    its right argument, and is then folded into plain Buchi acceptance by a
    level counter.  Language correctness is enforced by cross-checking
    against direct lasso evaluation in the test suite, not by matching any
    particular published automaton shape.
    """
    atoms = tuple(sorted(ltl.atoms(formula)))
    untils = ltl.until_subformulas(formula)
    memo = {}

    init = _initial_obligations(formula)
    moves = {}
    order = [init]
    queue = [init]
    seen = {init}
    while queue:
        state = queue.pop(0)
        merged = _obligation_moves(state, atoms, memo)
        edges = []
        for (nexts, fulfilled), minterms in sorted(
            merged.items(),
            key=lambda kv: (sorted(map(_formula_key, kv[0][0])),
                            sorted(map(_formula_key, kv[0][1]))),
        ):
            marks = frozenset(
                u for u in untils if u not in nexts or u in fulfilled
            )
            edges.append((nexts, marks, minterms))
        edges = _prune_subsumed(edges)
        moves[state] = edges
        for dst, _, _ in edges:
            if dst not in seen:
                seen.add(dst)
                order.append(dst)
                queue.append(dst)

    # acceptance sets that constrain nothing are dropped before degeneralizing
    relevant = [
        u for u in untils
        if any(u not in marks for edges in moves.values() for _, marks, _ in edges)
    ]
    k = len(relevant)

    def advance(level, marks):
        j = 0 if level == k else level
        while j < k and relevant[j] in marks:
            j += 1
        return j

    start = (init, 0)
    nodes = [start]
    node_seen = {start}
    node_edges = {}
    queue = [start]
    while queue:
        node = queue.pop(0)
        state, level = node
        outs = []
        for dst, marks, minterms in moves[state]:
            target = (dst, advance(level, marks))
            outs.append((target, minterms))
            if target not in node_seen:
                node_seen.add(target)
                nodes.append(target)
                queue.append(target)
        node_edges[node] = outs
    accepting_nodes = {n for n in nodes if n[1] == k} if k else set(nodes)

    succ_index = {n: tuple(t for t, _ in node_edges[n]) for n in nodes}
    live = _live_states(nodes, succ_index, accepting_nodes)
    live.add(start)
    kept = [n for n in nodes if n in live]
    names = {n: f"s{i}" for i, n in enumerate(kept)}

    edges = []
    for node in kept:
        for target, minterms in node_edges[node]:
            if target in live:
                edges.append(
                    Edge(names[node], guard_from_minterms(atoms, minterms), names[target])
                )
    universe = atoms if props is None else tuple(props)
    return BuchiAutomaton(
        states=[names[n] for n in kept],
        initial=(names[start],),
        props=universe,
        edges=edges,
        accepting=frozenset(names[n] for n in kept if n in accepting_nodes),
    )


# ---------------------------------------------------------------------------
# totality


def is_total(automaton: BuchiAutomaton) -> bool:
    """Exactly one initial state and, for every state and letter, exactly one
    successor.  Decided by enumerating the letters of the automaton's
    proposition universe."""
    if len(automaton.initial) != 1:
        return False
    letters = all_letters(automaton.props)
    for state in automaton.states:
        for letter in letters:
            if len(automaton.successors(state, letter)) != 1:
                return False
    return True


def _fresh_name(base, taken):
    name = base
    i = 2
    while name in taken:
        name = f"{base}_{i}"
        i += 1
    return name


def totalize(automaton: BuchiAutomaton):
    """A total automaton with the same language, or ``None``.

    Succeeds when the automaton, after unreachable-state pruning and
    guard merging between identical-target edges, is deterministic; missing
    letters are then routed to a fresh non-accepting sink.  ``None`` means
    the automaton is properly nondeterministic and out of scope for this
    completion (a value, not a failure).
    """
    if len(automaton.initial) > 1:
        return None
    universe = automaton.props
    reachable = []
    queue = list(automaton.initial)
    seen = set(queue)
    while queue:
        state = queue.pop(0)
        reachable.append(state)
        for edge in automaton.edges_from(state):
            if edge.dst not in seen:
                seen.add(edge.dst)
                queue.append(edge.dst)

    merged = {}
    for state in reachable:
        for edge in automaton.edges_from(state):
            merged.setdefault((state, edge.dst), set()).update(
                lift_minterms(edge.guard, universe)
            )
    by_src = {}
    for (src, dst), minterms in merged.items():
        by_src.setdefault(src, []).append((dst, minterms))

    full = set(all_letters(universe))
    missing = {}
    dst_order = {s: i for i, s in enumerate(reachable)}
    for state in reachable:
        covered = set()
        for dst, minterms in by_src.get(state, ()):
            if covered & minterms:
                return None
            covered |= minterms
        missing[state] = full - covered

    needs_sink = any(missing[s] for s in reachable) or not automaton.initial
    states = list(reachable)
    edges = []
    for state in reachable:
        for dst, minterms in sorted(
            by_src.get(state, ()), key=lambda dm: dst_order[dm[0]]
        ):
            edges.append(Edge(state, guard_from_minterms(universe, minterms), dst))
    accepting = automaton.accepting & set(reachable)
    initial = automaton.initial
    if needs_sink:
        sink = _fresh_name("sink", set(states))
        states.append(sink)
        for state in reachable:
            if missing[state]:
                edges.append(Edge(state, guard_from_minterms(universe, missing[state]), sink))
        edges.append(Edge(sink, guard_true(), sink))
        if not initial:
            initial = (sink,)
    return BuchiAutomaton(states, initial, universe, edges, accepting)


# ---------------------------------------------------------------------------
# acceptance and emptiness


def accepting_lasso(root, successors, accepting):
    """Some lasso from ``root`` whose cycle visits an accepting node, else
    ``None``.

    ``successors`` maps a node to its ordered successor tuple; ``accepting``
    is a predicate.  The returned lasso's prefix runs from the root to the
    chosen accepting node inclusive, and the cycle continues from that
    node's cycle successor back around to it.
    """
    order = [root]
    seen = {root}
    succ = {}
    i = 0
    while i < len(order):
        node = order[i]
        i += 1
        succ[node] = tuple(successors(node))
        for nxt in succ[node]:
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)

    sccs = _tarjan(order, succ)
    comp = {}
    for idx, scc in enumerate(sccs):
        for n in scc:
            comp[n] = idx
    cyclic = set()
    for idx, scc in enumerate(sccs):
        if len(scc) > 1 or any(d == n for n in scc for d in succ[n]):
            cyclic.add(idx)

    entry = None
    for node in order:
        if comp[node] in cyclic and accepting(node):
            entry = node
            break
    if entry is None:
        return None

    prefix = _bfs_path(root, entry, succ)
    members = set(sccs[comp[entry]])
    if entry in succ[entry]:
        cycle = (entry,)
    else:
        back = _bfs_path_multi(
            [n for n in succ[entry] if n in members], entry,
            {n: tuple(d for d in succ[n] if d in members) for n in members},
        )
        cycle = tuple(back)
    return Lasso(tuple(prefix), cycle)


def _bfs_path(src, dst, succ):
    if src == dst:
        return [src]
    parent = {src: None}
    queue = [src]
    while queue:
        node = queue.pop(0)
        for nxt in succ[node]:
            if nxt not in parent:
                parent[nxt] = node
                if nxt == dst:
                    path = [nxt]
                    while parent[path[-1]] is not None:
                        path.append(parent[path[-1]])
                    return path[::-1]
                queue.append(nxt)
    raise AssertionError("destination unreachable")


def _bfs_path_multi(sources, dst, succ):
    parent = {}
    queue = []
    for s in sources:
        if s not in parent:
            parent[s] = None
            queue.append(s)
    if dst in parent:
        return [dst]
    while queue:
        node = queue.pop(0)
        for nxt in succ[node]:
            if nxt not in parent:
                parent[nxt] = node
                if nxt == dst:
                    path = [nxt]
                    while parent[path[-1]] is not None:
                        path.append(parent[path[-1]])
                    return path[::-1]
                queue.append(nxt)
    raise AssertionError("cycle entry unreachable inside its component")


def nba_accepts(automaton: BuchiAutomaton, word: Lasso) -> bool:
    """Whether some run over the ultimately periodic word visits an
    accepting state infinitely often."""

    def successors(node):
        pos, state = node
        nxt = word.successor(pos)
        return tuple((nxt, t) for t in automaton.successors(state, word.at(pos)))

    def is_accepting(node):
        return node[1] in automaton.accepting

    return any(
        accepting_lasso((1, s0), successors, is_accepting) is not None
        for s0 in automaton.initial
    )


# ---------------------------------------------------------------------------
# product with an alternating transition system


class ProductAutomaton:
    """Synchronous product of a rooted system with a total specification
    automaton, restricted to the states reachable from the root.

    The automaton component reads the valuation of the current world state,
    so it is a function of the world path; each product state therefore has,
    per control and disturbance, exactly the disturbance-resolved world
    successors paired with one automaton successor.
    """

    def __init__(self, states, initial, controls, disturbances, edges, accepting):
        self.states = tuple(states)
        self.initial = initial
        self.controls = tuple(controls)
        self.disturbances = tuple(disturbances)
        self.edges = tuple(edges)
        self.accepting = frozenset(accepting)
        self._succ_a = {}
        self._succ_ab = {}
        index = {s: i for i, s in enumerate(self.states)}
        grouped_a = {}
        grouped_ab = {}
        for s, a, b, t in self.edges:
            grouped_a.setdefault((s, a), set()).add(t)
            grouped_ab.setdefault((s, a, b), set()).add(t)
        for key, targets in grouped_a.items():
            self._succ_a[key] = tuple(sorted(targets, key=index.__getitem__))
        for key, targets in grouped_ab.items():
            self._succ_ab[key] = tuple(sorted(targets, key=index.__getitem__))

    def successors(self, state, control) -> tuple:
        return self._succ_a.get((state, control), ())

    def successors_under(self, state, control, disturbance) -> tuple:
        return self._succ_ab.get((state, control, disturbance), ())

    @staticmethod
    def world(state):
        return state[0]

    @staticmethod
    def automaton_state(state):
        return state[1]


def world_projection(states) -> tuple:
    """World components of a sequence of product states."""
    return tuple(q for q, _ in states)


def product(system, q0, automaton: BuchiAutomaton, valuation) -> ProductAutomaton:
    """Product of the system rooted at ``q0`` with a total automaton."""
    if q0 not in set(system.states):
        raise AutomatonError(f"unknown initial state {q0!r}")
    if not is_total(automaton):
        raise AutomatonError("specification automaton must be total")
    x0 = automaton.initial[0]
    delta = {}

    def step(x, letter):
        key = (x, letter)
        if key not in delta:
            targets = automaton.successors(x, letter)
            delta[key] = targets[0]
        return delta[key]

    start = (q0, x0)
    order = [start]
    seen = {start}
    edges = []
    queue = [start]
    while queue:
        q, x = queue.pop(0)
        x2 = step(x, valuation.label(q))
        for a in system.controls:
            for b in system.disturbances:
                for q2 in system.successors_under(q, a, b):
                    target = (q2, x2)
                    edges.append(((q, x), a, b, target))
                    if target not in seen:
                        seen.add(target)
                        order.append(target)
                        queue.append(target)
    accepting = frozenset(s for s in order if s[1] in automaton.accepting)
    return ProductAutomaton(order, start, system.controls, system.disturbances,
                            edges, accepting)
