"""Witness/counterexample conditions, minimal-shape recognizers, and
constructive generation of minimal, natural, locally closed and combined
evidence submodels.

Conventions used throughout:
  - evidence for an assertion on a compound core formula f labels only the
    children of f;
  - open states may gain transitions in supermodels, closed states may not;
  - all constructions are deterministic (lexicographic tie-breaking), so
    identical inputs produce identical evidence.
"""

from __future__ import annotations

from dataclasses import dataclass

from .formula import (
    EG, EU, EX, NOT, OR, PROP, TRUE, TEMPORAL_OPS,
    Formula, formula_key, formula_set,
)
from .model import Model, ModelError


class EvidenceError(ValueError):
    """Raised on requests the evidence calculus does not cover."""


@dataclass(frozen=True)
class EvidenceRequest:
    """A state/formula selection plus presentation flavour."""

    state: str
    formula: Formula
    flavor: str = "minimal"  # "minimal" | "natural"
    locally_closed: bool = False

    def __post_init__(self):
        if self.flavor not in ("minimal", "natural"):
            raise EvidenceError(f"unknown flavor {self.flavor!r}")
        if not self.formula.is_compound:
            raise EvidenceError("evidence is only defined for compound formulas")


def _require_core_compound(m: Model, s: str, f: Formula):
    if s not in m.states:
        raise ModelError(f"unknown state {s!r}")
    if not (f.is_compound and f.is_core):
        raise EvidenceError(f"not a compound core formula: {f}")
    for c in f.children:
        if c not in m.context:
            raise EvidenceError(f"child {c} outside the model context")


# Witness and counterexample conditions -----------------------------------

def witness_states(m: Model, f: Formula) -> frozenset[str]:
    """All states where the witness condition for f holds."""
    if f.op == TRUE:
        return m.states
    if f.op == NOT:
        return m.sat(f.children[0], False)
    if f.op == OR:
        return m.sat(f.children[0], True) | m.sat(f.children[1], True)
    if f.op == EX:
        target = m.sat(f.children[0], True)
        return frozenset(s for s in m.states if m.successors(s) & target)
    if f.op == EU:
        # Forward search through psi1-tt states to a psi2-tt state; any such
        # finite prefix extends to a maximal path.
        ok1 = m.sat(f.children[0], True)
        result = set(m.sat(f.children[1], True))
        changed = True
        while changed:
            changed = False
            for s in ok1:
                if s not in result and m.successors(s) & result:
                    result.add(s)
                    changed = True
        return frozenset(result)
    if f.op == EG:
        # A maximal all-tt path ends in a closed deadlocked tt-state or
        # cycles inside the tt-region.
        region = m.sat(f.children[0], True)
        good = {s for s in region if not m.successors(s) and s in m.closed}
        for s in region:
            seen: set[str] = set()
            stack = [t for t in m.successors(s) if t in region]
            while stack:
                x = stack.pop()
                if x == s:
                    good.add(s)
                    break
                if x in seen:
                    continue
                seen.add(x)
                stack.extend(t for t in m.successors(x) if t in region)
        result = set(good)
        changed = True
        while changed:
            changed = False
            for s in region:
                if s not in result and m.successors(s) & result:
                    result.add(s)
                    changed = True
        return frozenset(result)
    raise EvidenceError(f"no witness condition for operator {f.op}")


def counter_states(m: Model, f: Formula) -> frozenset[str]:
    """All states where the counterexample condition for f holds."""
    if f.op == TRUE:
        return frozenset()
    if f.op == NOT:
        return m.sat(f.children[0], True)
    if f.op == OR:
        return m.sat(f.children[0], False) & m.sat(f.children[1], False)
    if f.op == EX:
        bad = m.sat(f.children[0], False)
        return frozenset(
            s for s in m.closed if m.successors(s) <= bad)
    if f.op == EU:
        # Greatest fixpoint: a state is safe if both children are ff there,
        # or it is closed with psi2 ff and every successor is safe.  Cycles
        # and deadlocks of closed psi2-ff states stay safe.
        both_ff = m.sat(f.children[0], False) & m.sat(f.children[1], False)
        closed_ff2 = m.closed_sat(f.children[1], False)
        safe = set(m.states)
        changed = True
        while changed:
            changed = False
            for s in list(safe):
                if s in both_ff:
                    continue
                if s in closed_ff2 and m.successors(s) <= safe:
                    continue
                safe.discard(s)
                changed = True
        return frozenset(safe)
    if f.op == EG:
        # Least fixpoint: every maximal path must hit a psi-ff state after a
        # prefix of closed states; cycles avoiding psi-ff states fail.
        ff = m.sat(f.children[0], False)
        result = set(ff)
        changed = True
        while changed:
            changed = False
            for s in m.closed:
                if s in result:
                    continue
                succ = m.successors(s)
                if succ and succ <= result:
                    result.add(s)
                    changed = True
        return frozenset(result)
    raise EvidenceError(f"no counterexample condition for operator {f.op}")


def witness_cond(m: Model, s: str, f: Formula) -> bool:
    _require_core_compound(m, s, f)
    return s in witness_states(m, f)


def counter_cond(m: Model, s: str, f: Formula) -> bool:
    _require_core_compound(m, s, f)
    return s in counter_states(m, f)


# Minimal evidence shape recognizers ---------------------------------------

def _labels_of(m: Model) -> dict[tuple[str, Formula], bool]:
    return dict(m.labelling)


def _single_state(m: Model, s: str) -> bool:
    return m.states == {s} and not m.closed and not m.transitions


def _walk_functional(m: Model, s: str):
    """Follow unique out-transitions from s.

    Returns (sequence, kind) where kind is "deadlock" if the walk ends at a
    state without outgoing transitions, or "lasso" if it closes on a visited
    state; None if the shape is not a single path (branching, unreachable
    states, or stray transitions).
    """
    out: dict[str, list[str]] = {x: [] for x in m.states}
    for (a, b) in m.transitions:
        out[a].append(b)
    if any(len(ts) > 1 for ts in out.values()):
        return None
    seq = [s]
    seen = {s}
    while True:
        targets = out[seq[-1]]
        if not targets:
            if set(seq) != m.states:
                return None
            return seq, "deadlock"
        t = targets[0]
        if t in seen:
            if set(seq) != m.states:
                return None
            return seq + [t], "lasso"
        seq.append(t)
        seen.add(t)


def is_min_witness(m: Model, s: str, f: Formula) -> bool:
    """Recognize exactly the minimal witness shapes."""
    _require_core_compound(m, s, f)
    labels = _labels_of(m)
    if f.op == TRUE:
        return _single_state(m, s) and not labels
    if f.op == NOT:
        return _single_state(m, s) and labels == {(s, f.children[0]): False}
    if f.op == OR:
        return _single_state(m, s) and (
            labels == {(s, f.children[0]): True}
            or labels == {(s, f.children[1]): True})
    if f.op == EX:
        psi = f.children[0]
        for t in sorted(m.states):
            if (m.states == {s, t} and not m.closed
                    and m.transitions == {(s, t)}
                    and labels == {(t, psi): True}):
                return True
        return False
    if f.op == EU:
        psi1, psi2 = f.children
        walk = _walk_functional(m, s)
        if walk is None or walk[1] != "deadlock" or m.closed:
            return False
        seq = walk[0]
        if len(set(seq)) != len(seq):
            return False
        expected = {(x, psi1): True for x in seq[:-1]}
        expected[(seq[-1], psi2)] = True
        return labels == expected
    if f.op == EG:
        psi = f.children[0]
        walk = _walk_functional(m, s)
        if walk is None:
            return False
        seq, kind = walk
        if kind == "deadlock":
            if m.closed != {seq[-1]}:
                return False
        else:
            if m.closed:
                return False
            seq = seq[:-1]
        expected = {(x, psi): True for x in set(seq)}
        return labels == expected
    raise EvidenceError(f"no minimal witness shape for operator {f.op}")


def is_min_counter(m: Model, s: str, f: Formula) -> bool:
    """Recognize exactly the minimal counterexample shapes."""
    _require_core_compound(m, s, f)
    labels = _labels_of(m)
    if f.op == TRUE:
        return False
    if f.op == NOT:
        return _single_state(m, s) and labels == {(s, f.children[0]): True}
    if f.op == OR:
        psi1, psi2 = f.children
        return _single_state(m, s) and labels == {
            (s, psi1): False, (s, psi2): False}
    if f.op == EX:
        psi = f.children[0]
        targets = m.states - {s} | ({s} if (s, s) in m.transitions else set())
        if m.closed != {s}:
            return False
        if m.transitions != {(s, t) for t in targets}:
            return False
        return labels == {(t, psi): False for t in targets}
    if f.op == EU:
        # Resolved reading: psi2 ff on every state, psi1 ff exactly on the
        # open frontier; every non-sink state is closed; all reachable from s.
        psi1, psi2 = f.children
        if not _all_reachable(m, s):
            return False
        sinks = {x for x in m.states if not m.successors(x)}
        if not (m.states - sinks) <= m.closed:
            return False
        expected = {(x, psi2): False for x in m.states}
        for x in m.states - m.closed:
            expected[(x, psi1)] = False
        return labels == expected
    if f.op == EG:
        # Acyclic graph rooted at s; interior states closed and unlabelled;
        # sinks open and labelled psi ff.
        psi = f.children[0]
        if not _all_reachable(m, s):
            return False
        if _has_cycle(m):
            return False
        incoming = {b for (_, b) in m.transitions}
        if {x for x in m.states if x not in incoming} != {s}:
            return False
        sinks = {x for x in m.states if not m.successors(x)}
        if m.closed != m.states - sinks:
            return False
        return labels == {(x, psi): False for x in sinks}
    raise EvidenceError(f"no minimal counterexample shape for operator {f.op}")


def _all_reachable(m: Model, s: str) -> bool:
    if s not in m.states:
        return False
    reach = {s}
    stack = [s]
    while stack:
        x = stack.pop()
        for t in m.successors(x):
            if t not in reach:
                reach.add(t)
                stack.append(t)
    return reach == m.states


def _has_cycle(m: Model) -> bool:
    colour = {x: 0 for x in m.states}  # 0 new, 1 active, 2 done

    def visit(x: str) -> bool:
        colour[x] = 1
        for t in m.successors(x):
            if colour[t] == 1:
                return True
            if colour[t] == 0 and visit(t):
                return True
        colour[x] = 2
        return False

    return any(colour[x] == 0 and visit(x) for x in m.states)


# Combined evidence (one submodel per formula) ----------------------------

def _require_fully_labelled(full: Model, f: Formula):
    for c in (f,) + f.children:
        for s in full.states:
            if (s, c) not in full.labelling:
                raise EvidenceError(
                    f"model is not fully labelled for {c} (state {s!r})")


def _eu_combined(full: Model, f: Formula) -> Model:
    psi1, psi2 = f.children
    tt = full.sat(f, True)
    seeds = full.sat(psi2, True)
    # Backward BFS layers from the seed set; parents chosen lexicographically
    # at the next layer down give shortest, hence acyclic, witness chains.
    dist = {t: 0 for t in seeds}
    layer = set(seeds)
    d = 0
    while layer:
        d += 1
        layer = {x for x in tt - dist.keys() if full.successors(x) & layer}
        for x in layer:
            dist[x] = d

    transitions: set[tuple[str, str]] = set()
    labelling: dict[tuple[str, Formula], bool] = {}
    closed: set[str] = set()
    for t in seeds:
        labelling[(t, psi2)] = True
    for x in sorted(tt - seeds):
        parent = min(y for y in full.successors(x)
                     if y in dist and dist[y] == dist[x] - 1)
        transitions.add((x, parent))
        labelling[(x, psi1)] = True
    # Counterexample side: interior ff-states satisfying psi1 are closed and
    # keep all outgoing transitions; frontier states have both children ff.
    ff = full.states - tt
    for x in ff:
        labelling[(x, psi2)] = False
        if full.labelling[(x, psi1)]:
            closed.add(x)
            transitions.update((x, t) for t in full.successors(x))
        else:
            labelling[(x, psi1)] = False
    return Model(full.states, frozenset(closed), frozenset(transitions),
                 labelling, full.context)


def _eg_combined(full: Model, f: Formula) -> Model:
    psi = f.children[0]
    tt = full.sat(f, True)
    transitions: set[tuple[str, str]] = set()
    labelling: dict[tuple[str, Formula], bool] = {}
    closed: set[str] = set()
    for x in sorted(tt):
        labelling[(x, psi)] = True
        succs = full.successors(x)
        if not succs:
            closed.add(x)  # finite maximal path ends in a closed state
            continue
        transitions.add((x, min(t for t in succs if t in tt)))
    ff = full.states - tt
    for x in ff:
        if full.labelling[(x, psi)]:
            closed.add(x)
            transitions.update((x, t) for t in full.successors(x))
        else:
            labelling[(x, psi)] = False
    return Model(full.states, frozenset(closed), frozenset(transitions),
                 labelling, full.context)


def _ex_combined(full: Model, f: Formula) -> Model:
    psi = f.children[0]
    tt = full.sat(f, True)
    psi_tt = full.sat(psi, True)
    transitions: set[tuple[str, str]] = set()
    labelling: dict[tuple[str, Formula], bool] = {}
    closed: set[str] = set()
    for x in tt:
        target = min(full.successors(x) & psi_tt)
        transitions.add((x, target))
        labelling[(target, psi)] = True
    for x in full.states - tt:
        closed.add(x)
        for t in full.successors(x):
            transitions.add((x, t))
            labelling[(t, psi)] = False
    return Model(full.states, frozenset(closed), frozenset(transitions),
                 labelling, full.context)


def _local_combined(full: Model, f: Formula) -> Model:
    labelling: dict[tuple[str, Formula], bool] = {}
    if f.op == NOT:
        psi = f.children[0]
        for s in full.states:
            labelling[(s, psi)] = full.labelling[(s, psi)]
    elif f.op == OR:
        psi1, psi2 = f.children
        for s in full.states:
            if full.labelling[(s, f)]:
                if full.labelling[(s, psi1)]:
                    labelling[(s, psi1)] = True
                else:
                    labelling[(s, psi2)] = True
            else:
                labelling[(s, psi1)] = False
                labelling[(s, psi2)] = False
    # TRUE: witnessed by the bare state, no labels.
    return Model(full.states, frozenset(), frozenset(), labelling, full.context)


def build_combined_evidence(full: Model, f: Formula,
                            flavor: str = "minimal") -> Model:
    """One submodel that is evidence for f at every state simultaneously.

    The reachable restriction at any state satisfies the matching Table
    condition there; for EU/EG it is moreover a minimal (or natural) shape.
    """
    if flavor not in ("minimal", "natural"):
        raise EvidenceError(f"unknown flavor {flavor!r}")
    if not (f.is_compound and f.is_core):
        raise EvidenceError(f"not a compound core formula: {f}")
    _require_fully_labelled(full, f)
    if f.op == EU:
        e = _eu_combined(full, f)
    elif f.op == EG:
        e = _eg_combined(full, f)
    elif f.op == EX:
        e = _ex_combined(full, f)
    else:
        e = _local_combined(full, f)
    if flavor == "natural" and f.op in (EU, EG):
        e = naturalize(e, full, f)
    return e


def build_min_evidence(full: Model, s: str, f: Formula) -> Model:
    """Minimal evidence for the assertion on (s, f) read off a sound model.

    For EU and EG this is the reachable restriction of the combined evidence
    at s; for the remaining operators it is the literal minimal shape.
    """
    if not (f.is_compound and f.is_core):
        raise EvidenceError(f"not a compound core formula: {f}")
    if (s, f) not in full.labelling:
        raise EvidenceError(f"({s!r}, {f}) is not labelled")
    value = full.labelling[(s, f)]
    if f.op in (EU, EG):
        return build_combined_evidence(full, f).restrict_reachable(s)
    if f.op == TRUE:
        if not value:
            raise EvidenceError("no counterexample shape exists for true")
        return Model(frozenset({s}), frozenset(), frozenset(), {}, full.context)
    if f.op == NOT:
        psi = f.children[0]
        return Model(frozenset({s}), frozenset(), frozenset(),
                     {(s, psi): not value}, full.context)
    if f.op == OR:
        psi1, psi2 = f.children
        if value:
            chosen = psi1 if full.labelling[(s, psi1)] else psi2
            labels = {(s, chosen): True}
        else:
            labels = {(s, psi1): False, (s, psi2): False}
        return Model(frozenset({s}), frozenset(), frozenset(), labels,
                     full.context)
    if f.op == EX:
        psi = f.children[0]
        if value:
            target = min(full.successors(s) & full.sat(psi, True))
            return Model(frozenset({s, target}), frozenset(),
                         frozenset({(s, target)}), {(target, psi): True},
                         full.context)
        targets = full.successors(s)
        return Model(frozenset({s}) | targets, frozenset({s}),
                     frozenset((s, t) for t in targets),
                     {(t, psi): False for t in targets}, full.context)
    raise EvidenceError(f"no evidence construction for operator {f.op}")


# Presentation enrichments -------------------------------------------------

def naturalize(e: Model, full: Model, f: Formula) -> Model:
    """Extend evidence with full's labels for every child of f at every
    non-terminal state (states with outgoing evidence transitions)."""
    nonterminal = {a for (a, _) in e.transitions}
    labelling = dict(e.labelling)
    for s in nonterminal:
        for c in f.children:
            if (s, c) in full.labelling:
                labelling[(s, c)] = full.labelling[(s, c)]
    return Model(e.states, e.closed, e.transitions, labelling, e.context)


def local_closure_formulas(f: Formula) -> tuple[Formula, ...]:
    """The non-temporal formulas reachable from f's compound children
    without passing through a temporal operator, in canonical order."""
    collected: set[Formula] = set()

    def collect(g: Formula):
        if g.op in TEMPORAL_OPS or g.op == PROP:
            return
        collected.add(g)
        for c in g.children:
            if c.op in TEMPORAL_OPS:
                continue
            collected.add(c)
            collect(c)

    for c in f.children:
        collect(c)
    return tuple(sorted(collected, key=formula_key))


def locally_close(e: Model, full: Model, f: Formula) -> Model:
    """Copy full's labels for the local substructure beneath f's children
    into every state of the evidence."""
    labelling = dict(e.labelling)
    for g in local_closure_formulas(f):
        for s in e.states:
            if (s, g) in full.labelling:
                labelling[(s, g)] = full.labelling[(s, g)]
    context = e.context.union(formula_set(local_closure_formulas(f)))
    return Model(e.states, e.closed, e.transitions, labelling, context)


def build_evidence(full: Model, request: EvidenceRequest) -> Model:
    """Evidence per request: minimal or natural, optionally locally closed."""
    f = request.formula
    if request.flavor == "natural" and f.op in (EU, EG):
        e = build_combined_evidence(full, f, "natural").restrict_reachable(
            request.state)
    else:
        e = build_min_evidence(full, request.state, f)
    if request.locally_closed:
        e = locally_close(e, full, f)
    return e
