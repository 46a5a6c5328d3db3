"""Fixpoint labelling of Kripke models over all subformulas of a property.

The transition relation is not assumed total: maximal paths may be finite,
so the EU and EG fixpoints treat deadlock states per the finite-maximal-path
semantics.  check() is a pure function of (model, formula).
"""

from __future__ import annotations

from .formula import (
    EG, EU, EX, NOT, OR, TRUE,
    Formula, FormulaSet, desugar, formula_set, pretty, subformula_closure,
)
from .model import Model


class CheckError(ValueError):
    """Raised when the input model cannot support the requested check."""


def _eval_core(m_states, succ, preds, deadlocks, labels, f: Formula):
    """Compute the truth set of core formula f; children already in labels."""
    if f.op == TRUE:
        return set(m_states)
    if f.op == NOT:
        return m_states - labels[f.children[0]]
    if f.op == OR:
        return labels[f.children[0]] | labels[f.children[1]]
    if f.op == EX:
        target = labels[f.children[0]]
        return {s for s in m_states if succ[s] & target}
    if f.op == EU:
        ok1 = labels[f.children[0]]
        result = set(labels[f.children[1]])
        frontier = list(result)
        while frontier:
            t = frontier.pop()
            for s in preds[t]:
                if s in ok1 and s not in result:
                    result.add(s)
                    frontier.append(s)
        return result
    if f.op == EG:
        region = labels[f.children[0]]
        # Good anchors: deadlocked region states (finite maximal paths end
        # there) and region states lying on a cycle within the region.
        good = {s for s in region if s in deadlocks}
        for s in region:
            if s in good:
                continue
            seen, stack = set(), [t for t in succ[s] if t in region]
            while stack:
                x = stack.pop()
                if x == s:
                    good.add(s)
                    break
                if x in seen:
                    continue
                seen.add(x)
                stack.extend(t for t in succ[x] if t in region)
        result = set(good)
        frontier = list(good)
        while frontier:
            t = frontier.pop()
            for s in preds[t]:
                if s in region and s not in result:
                    result.add(s)
                    frontier.append(s)
        return result
    raise AssertionError(f"not a core operator: {f.op}")


def evaluate_work(states: set, succ: dict, preds: dict, deadlocks: set,
                  prop_truth: dict, work: FormulaSet) -> dict:
    """Truth sets for every formula in work, given proposition truth sets.

    work must contain the desugared image closure of each member; core
    members are evaluated by fixpoint, sugared ones copy their image.
    """
    truth = dict(prop_truth)
    for f in work:
        if f.is_prop:
            if f not in truth:
                raise CheckError(f"proposition {pretty(f)!r} has no truth set")
        elif f.is_core:
            truth[f] = _eval_core(states, succ, preds, deadlocks, truth, f)
    for f in work:
        if f not in truth:
            truth[f] = truth[desugar(f)]
    return truth


def label_model(m: Model, context: FormulaSet, permissive: bool = False) -> Model:
    """Extend m with a total labelling over every formula in context.

    Core compounds are computed by fixpoint; sugared compounds are labelled
    identically to their desugared images (which the closure of the context's
    desugaring always contains).
    """
    work = context.union(formula_set(desugar(f) for f in context))
    succ = {s: m.successors(s) for s in m.states}
    preds: dict[str, set[str]] = {s: set() for s in m.states}
    for (a, b) in m.transitions:
        preds[b].add(a)
    deadlocks = {s for s in m.states if not succ[s]}

    truth: dict[Formula, set[str]] = {}
    labelling = dict(m.labelling)
    states = set(m.states)
    # First pass: core formulas in canonical order (children before parents).
    for f in work:
        if f.is_prop:
            missing = [s for s in m.states if (s, f) not in labelling]
            if missing:
                if not permissive:
                    raise CheckError(
                        f"proposition {pretty(f)!r} missing from the model's "
                        f"labelling at {sorted(missing)} (strict mode)")
                for s in missing:
                    labelling[(s, f)] = False
            truth[f] = {s for s in m.states if labelling[(s, f)]}
        elif f.is_core:
            truth[f] = _eval_core(states, succ, preds, deadlocks, truth, f)
    # Second pass: sugared formulas copy their desugared image.
    for f in work:
        if f not in truth:
            truth[f] = truth[desugar(f)]
    for f in work:
        if f.is_prop:
            continue
        for s in m.states:
            labelling[(s, f)] = s in truth[f]

    return Model(m.states, m.closed, m.transitions, labelling,
                 m.context.union(work))


def check(m: Model, f: Formula, permissive: bool = False) -> Model:
    """Label a Kripke model with the truth of every subformula of f.

    The result is full over subformula_closure(desugar(f)) together with the
    original (sugared) subformulas of f, and sound: a pair is labelled tt
    exactly when the state satisfies the formula.
    """
    if not m.is_kripke:
        raise CheckError("check requires a Kripke model (all states closed, "
                         "propositional labels only)")
    context = subformula_closure(f).union(subformula_closure(desugar(f)))
    return label_model(m, context, permissive=permissive)
