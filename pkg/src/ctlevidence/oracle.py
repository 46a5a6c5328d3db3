"""Brute-force semantics used only for testing the checker and the evidence
calculus: naive path-based satisfaction, bounded sound-supermodel
enumeration, bounded constrained-set detection, and the syntactic
unconstrainedness test.

naive_sat shares no code with the checker's fixpoints.  It quantifies over
an explicitly enumerated set of maximal paths: every finite maximal path and
every lasso whose stem repeats no state except possibly its last.  This set
decides all the path conditions exactly: a witnessing maximal path can be
loop-pruned to a witnessing member (shortest EU prefixes are acyclic; an
all-good infinite path contains a simple all-good lasso; a finite maximal
path shortens to a simple one ending in the same deadlock), and every member
represents a genuine maximal path, so universal path conditions transfer in
both directions as the negations of existential ones.
"""

from __future__ import annotations

from itertools import product
from typing import Iterable, Iterator

from .checker import evaluate_work, label_model
from .formula import (
    AF, AG, AND, AU, EF, EG, EU, EX, AX, FALSE, NOT, OR, PROP, TRUE,
    Formula, FormulaSet, desugar, formula_set, pretty, subformula_closure,
)
from .model import Assertion, Model, Path

NAIVE_STATE_GUARD = 12
SUPERMODEL_STATE_GUARD = 8
SUPERMODEL_PROP_GUARD = 4
_EDGE_CAP = 10  # full new-edge subsets up to 2**_EDGE_CAP per fresh count


class OracleGuardError(ValueError):
    """Raised when an input exceeds the oracle's brute-force guards."""


class NaiveEvaluator:
    """Memoizing literal-semantics evaluator for one Kripke model."""

    def __init__(self, m: Model):
        if len(m.states) > NAIVE_STATE_GUARD:
            raise OracleGuardError(
                f"naive oracle is limited to {NAIVE_STATE_GUARD} states")
        if not m.is_kripke:
            raise OracleGuardError("naive oracle requires a Kripke model")
        self.m = m
        self.succ = {s: sorted(m.successors(s)) for s in m.states}
        self._paths: dict[str, list[Path]] = {}
        self._memo: dict[tuple[str, Formula], bool] = {}

    def paths(self, s: str) -> list[Path]:
        """Finite maximal paths and first-revisit lassos from s."""
        if s in self._paths:
            return self._paths[s]
        out: list[Path] = []

        def extend(stem: tuple[str, ...]):
            last = stem[-1]
            if not self.succ[last]:
                out.append(Path(stem))
                return
            for t in self.succ[last]:
                if t in stem:
                    out.append(Path(stem, stem.index(t)))
                else:
                    extend(stem + (t,))

        extend((s,))
        self._paths[s] = out
        return out

    def sat(self, s: str, f: Formula) -> bool:
        key = (s, f)
        if key in self._memo:
            return self._memo[key]
        value = self._sat(s, f)
        self._memo[key] = value
        return value

    def _sat(self, s: str, f: Formula) -> bool:
        op = f.op
        if op == PROP:
            value = self.m.label(s, f)
            if value is None:
                raise OracleGuardError(
                    f"proposition {pretty(f)} unlabelled at {s!r}")
            return value
        if op == TRUE:
            return True
        if op == FALSE:
            return False
        if op == NOT:
            return not self.sat(s, f.children[0])
        if op == AND:
            return self.sat(s, f.children[0]) and self.sat(s, f.children[1])
        if op == OR:
            return self.sat(s, f.children[0]) or self.sat(s, f.children[1])
        if op == EX:
            return any(self.sat(t, f.children[0]) for t in self.succ[s])
        if op == AX:
            return all(self.sat(t, f.children[0]) for t in self.succ[s])
        if op == EF:
            return any(self._scan_reach(p, f.children[0]) for p in self.paths(s))
        if op == AF:
            return all(self._scan_reach(p, f.children[0]) for p in self.paths(s))
        if op == AG:
            return all(self._scan_always(p, f.children[0]) for p in self.paths(s))
        if op == EG:
            return any(self._scan_always(p, f.children[0]) for p in self.paths(s))
        if op == EU:
            a, b = f.children
            return any(self._scan_until(p, a, b) for p in self.paths(s))
        if op == AU:
            a, b = f.children
            return all(self._scan_until(p, a, b) for p in self.paths(s))
        raise AssertionError(f"unhandled operator {op}")

    def _scan_reach(self, path: Path, f: Formula) -> bool:
        return any(self.sat(x, f) for x in path.stem)

    def _scan_always(self, path: Path, f: Formula) -> bool:
        return all(self.sat(x, f) for x in path.stem)

    def _scan_until(self, path: Path, a: Formula, b: Formula) -> bool:
        for x in path.stem:
            if self.sat(x, b):
                return True
            if not self.sat(x, a):
                return False
        return False


def naive_sat(m: Model, s: str, f: Formula) -> bool:
    """Literal path-quantified satisfaction; independent of the checker."""
    return NaiveEvaluator(m).sat(s, f)


# Bounded sound-supermodel enumeration -------------------------------------

def _fresh_names(m: Model, count: int) -> list[str]:
    names = []
    i = 0
    while len(names) < count:
        name = f"~{i}"
        if name not in m.states:
            names.append(name)
        i += 1
    return names


def _edge_variants(open_or_fresh: list[str], all_states: list[str],
                   fresh: list[str]) -> Iterator[frozenset[tuple[str, str]]]:
    candidates = [(a, b) for a in open_or_fresh for b in all_states]
    if len(candidates) <= _EDGE_CAP:
        for bits in product((False, True), repeat=len(candidates)):
            yield frozenset(c for c, keep in zip(candidates, bits) if keep)
        return
    # Structured fall-back beyond the cap: the hat extension of the
    # unconstrainedness construction, with one shared fresh sink per open
    # state, optionally looping.
    yield frozenset()
    if fresh:
        sources = [a for a in open_or_fresh if a not in fresh]
        hat = frozenset((a, fresh[0]) for a in sources)
        yield hat
        yield hat | {(fresh[0], fresh[0])}
        if len(fresh) > 1:
            chain = frozenset(
                (fresh[i], fresh[i + 1]) for i in range(len(fresh) - 1))
            yield hat | chain


def enumerate_supermodels(m: Model, fresh_budget: int,
                          context: FormulaSet | None = None) -> Iterator[Model]:
    """Yield sound supermodels of m, bounded as follows: at most fresh_budget
    fresh states, new transitions only out of open or fresh states, all
    states closed, every total propositional labelling; candidates whose
    induced labelling does not extend m's are dropped.
    """
    context = m.context if context is None else context.union(m.context)
    if len(m.states) + fresh_budget > SUPERMODEL_STATE_GUARD:
        raise OracleGuardError(
            f"supermodel enumeration is limited to {SUPERMODEL_STATE_GUARD} states")
    props = context.props
    if len(props) > SUPERMODEL_PROP_GUARD:
        raise OracleGuardError(
            f"supermodel enumeration is limited to {SUPERMODEL_PROP_GUARD} propositions")
    pinned = {(s, p): v for (s, p), v in m.labelling.items() if p.is_prop}
    compound_pins = [(s, f, v) for (s, f), v in m.labelling.items()
                     if f.is_compound]
    work = context.union(formula_set(desugar(f) for f in context))
    for k in range(fresh_budget + 1):
        fresh = _fresh_names(m, k)
        all_states = sorted(m.states) + fresh
        state_set = set(all_states)
        open_or_fresh = sorted(m.states - m.closed) + fresh
        free = [(s, p) for s in all_states for p in props
                if (s, p) not in pinned]
        for new_edges in _edge_variants(open_or_fresh, all_states, fresh):
            transitions = frozenset(m.transitions | new_edges)
            succ = {s: {b for (a, b) in transitions if a == s}
                    for s in all_states}
            preds = {s: {a for (a, b) in transitions if b == s}
                     for s in all_states}
            deadlocks = {s for s in all_states if not succ[s]}
            for bits in product((False, True), repeat=len(free)):
                labelling = dict(pinned)
                labelling.update(zip(free, bits))
                prop_truth = {
                    p: {s for s in all_states if labelling[(s, p)]}
                    for p in props}
                truth = evaluate_work(state_set, succ, preds, deadlocks,
                                      prop_truth, work)
                if any((s in truth[f]) != v for (s, f, v) in compound_pins):
                    continue
                for f in work:
                    if f.is_prop:
                        continue
                    for s in all_states:
                        labelling[(s, f)] = s in truth[f]
                yield Model(frozenset(all_states), frozenset(all_states),
                            transitions, labelling, work)


def is_evidence_semantic(m: Model, a: Assertion, fresh_budget: int) -> bool:
    """Bounded check of the semantic evidence definition: the enumerated
    supermodel stream is nonempty and every member satisfies the assertion."""
    children = set(a.formula.children)
    for (_, f) in m.labelling:
        if f not in children:
            raise ValueError(
                f"evidence for {a.formula} may only label its children, "
                f"found {pretty(f)}")
    context = subformula_closure(a.formula)
    seen = False
    for n in enumerate_supermodels(m, fresh_budget, context=context):
        seen = True
        if n.labelling[(a.state, a.formula)] != a.value:
            return False
    return seen


# Constrained formula sets --------------------------------------------------

def syntactically_unconstrained(g: Iterable[Formula]) -> bool:
    """Sufficient condition for unconstrainedness: members use only !, ||
    and E[. U .] over propositions, and no proposition occurs twice, within
    a member or across distinct members."""
    members = list(dict.fromkeys(g))
    if not members:
        raise ValueError("the formula set must be nonempty")
    seen_props: set[str] = set()

    def walk(f: Formula) -> bool:
        if f.op == PROP:
            if f.name in seen_props:
                return False
            seen_props.add(f.name)
            return True
        if f.op not in (NOT, OR, EU):
            return False
        return all(walk(c) for c in f.children)

    return all(walk(f) for f in members)


def is_constrained_closed_bounded(g: Iterable[Formula], max_states: int) -> bool:
    """Search fully closed models labelled only on g for one that admits no
    sound completion.  Sound but incomplete for constrainedness in general;
    exact over the fully closed candidates it explores."""
    members = list(dict.fromkeys(g))
    if not members:
        raise ValueError("the formula set must be nonempty")
    if max_states > 3:
        raise OracleGuardError("constrained-set search is limited to 3 states")
    context = formula_set(members)
    props = context.props
    if len(props) > SUPERMODEL_PROP_GUARD:
        raise OracleGuardError(
            f"constrained-set search is limited to {SUPERMODEL_PROP_GUARD} propositions")
    for n in range(1, max_states + 1):
        states = [f"s{i}" for i in range(n)]
        slots = [(s, f) for s in states for f in members]
        pairs = [(a, b) for a in states for b in states]
        for bits in product(range(3), repeat=len(slots)):
            labels = {slot: bit == 1 for slot, bit in zip(slots, bits)
                      if bit != 2}
            if not labels:
                continue
            for edge_bits in product((False, True), repeat=len(pairs)):
                transitions = frozenset(
                    p for p, keep in zip(pairs, edge_bits) if keep)
                if not _has_sound_completion(states, transitions, labels,
                                             context, props):
                    return True
    return False


def _has_sound_completion(states, transitions, labels, context, props) -> bool:
    """Truth in a fully closed model is determined by its structure and
    propositional labels; try every total propositional labelling."""
    state_set = frozenset(states)
    pinned = {(s, p): v for (s, p), v in labels.items() if p.is_prop}
    free = [(s, p) for s in states for p in props if (s, p) not in pinned]
    for bits in product((False, True), repeat=len(free)):
        labelling = dict(pinned)
        labelling.update({slot: v for slot, v in zip(free, bits)})
        base = Model(state_set, state_set, transitions, labelling, context)
        candidate = label_model(base, context)
        if all(candidate.labelling[key] == v for key, v in labels.items()):
            return True
    return False
