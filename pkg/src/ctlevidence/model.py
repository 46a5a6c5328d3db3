"""Models with open/closed states, the submodel order, paths, and JSON I/O.

A model is a state set with a closed subset, a transition relation and a
partial labelling from (state, formula) pairs to booleans.  Both the checked
system and every piece of evidence are models.  Models are immutable after
construction; all operations here are pure.
"""

from __future__ import annotations

import json
import warnings as _warnings
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple

from .formula import Formula, FormulaSet, formula_set, parse_formula, pretty

MODEL_VERSION = "ctl-model/1"


class ModelError(ValueError):
    """Raised on malformed models or model files."""


class Assertion(NamedTuple):
    """The claim that formula has the given truth value at state."""

    state: str
    formula: Formula
    value: bool


@dataclass(frozen=True)
class Path:
    """A finite path, or a lasso when loop_index is set.

    A lasso with stem s0..sk and loop_index j stands for the infinite path
    s0..sk (sj..sk)^omega.
    """

    stem: tuple[str, ...]
    loop_index: int | None = None

    def __post_init__(self):
        if not self.stem:
            raise ModelError("paths are nonempty")
        if self.loop_index is not None and not (0 <= self.loop_index < len(self.stem)):
            raise ModelError("loop index out of range")

    @property
    def is_lasso(self) -> bool:
        return self.loop_index is not None

    def states(self) -> frozenset[str]:
        return frozenset(self.stem)


@dataclass(frozen=True)
class Model:
    states: frozenset[str]
    closed: frozenset[str]
    transitions: frozenset[tuple[str, str]]
    labelling: Mapping[tuple[str, Formula], bool]
    context: FormulaSet = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.context is None:
            object.__setattr__(
                self, "context", formula_set(f for (_, f) in self.labelling))
        if not self.closed <= self.states:
            raise ModelError("closed states must be states")
        for (src, tgt) in self.transitions:
            if src not in self.states or tgt not in self.states:
                raise ModelError(f"dangling transition ({src!r}, {tgt!r})")
        for (s, f) in self.labelling:
            if s not in self.states:
                raise ModelError(f"label on unknown state {s!r}")
            if f not in self.context:
                raise ModelError(f"label on formula outside context: {pretty(f)}")

    # Derived views -------------------------------------------------------

    def successors(self, s: str) -> frozenset[str]:
        if s not in self.states:
            raise ModelError(f"unknown state {s!r}")
        return frozenset(t for (src, t) in self.transitions if src == s)

    def label(self, s: str, f: Formula) -> bool | None:
        return self.labelling.get((s, f))

    def sat(self, f: Formula, value: bool) -> frozenset[str]:
        """S|f,v: the states where f is labelled with the given value."""
        return frozenset(
            s for (s, g), v in self.labelling.items() if g == f and v == value)

    def closed_sat(self, f: Formula, value: bool) -> frozenset[str]:
        """C|f,v: closed states where f is labelled with the given value."""
        return self.sat(f, value) & self.closed

    @property
    def is_kripke(self) -> bool:
        return self.closed == self.states and all(
            f.is_prop for (_, f) in self.labelling)

    @property
    def is_full(self) -> bool:
        if self.closed != self.states:
            return False
        return all((s, f) in self.labelling
                   for s in self.states for f in self.context)

    def restrict_reachable(self, s: str) -> "Model":
        """The submodel on the states reachable from s."""
        if s not in self.states:
            raise ModelError(f"unknown state {s!r}")
        reach = {s}
        frontier = [s]
        while frontier:
            x = frontier.pop()
            for t in sorted(self.successors(x)):
                if t not in reach:
                    reach.add(t)
                    frontier.append(t)
        return Model(
            frozenset(reach),
            self.closed & frozenset(reach),
            frozenset((a, b) for (a, b) in self.transitions if a in reach),
            {(x, f): v for (x, f), v in self.labelling.items() if x in reach},
            self.context,
        )

    def with_labels(self, extra: Mapping[tuple[str, Formula], bool]) -> "Model":
        return join(self, extra)


def is_submodel(m1: Model, m2: Model) -> bool:
    """The submodel order: componentwise subsets, and closed states of m1
    keep every transition they have in m2."""
    if not m1.context.issubset(m2.context):
        raise ModelError("submodel comparison requires nested contexts")
    if not (m1.states <= m2.states and m1.closed <= m2.closed
            and m1.transitions <= m2.transitions):
        return False
    for (s, f), v in m1.labelling.items():
        if m2.labelling.get((s, f)) != v:
            return False
    for (src, tgt) in m2.transitions - m1.transitions:
        if src in m1.closed:
            return False
    return True


def join(m: Model, extra: Mapping[tuple[str, Formula], bool]) -> Model:
    """Same structure, labelling extended; conflicting labels are an error."""
    merged = dict(m.labelling)
    for (s, f), v in extra.items():
        if s not in m.states:
            raise ModelError(f"label on unknown state {s!r}")
        old = merged.get((s, f))
        if old is not None and old != v:
            raise ModelError(f"conflicting label for ({s!r}, {pretty(f)})")
        merged[(s, f)] = v
    context = m.context.union(formula_set(f for (_, f) in extra))
    return Model(m.states, m.closed, m.transitions, merged, context)


def maximal_lassos(m: Model, s: str, max_len: int) -> frozenset[Path]:
    """All finite maximal paths from s with stem length <= max_len, plus all
    lassos from s with total length <= max_len.

    With max_len >= 2|S| this set is sufficient to decide the path conditions
    on m: every maximal path has a representative here by cycle pumping.
    """
    if s not in m.states:
        raise ModelError(f"unknown state {s!r}")
    if max_len < 1:
        raise ModelError("max_len must be positive")
    out: set[Path] = set()
    succ = {x: sorted(m.successors(x)) for x in m.states}

    def extend(stem: tuple[str, ...]):
        last = stem[-1]
        if not succ[last]:
            out.add(Path(stem))
            return
        for i, st in enumerate(stem):
            if (last, st) in m.transitions:
                out.add(Path(stem, i))
        if len(stem) < max_len:
            for t in succ[last]:
                extend(stem + (t,))

    extend((s,))
    return frozenset(out)


# JSON serialization ------------------------------------------------------

def load_model(text: str, permissive: bool = False,
               partial: bool = False) -> Model:
    """Load a model from its JSON serialization.

    Kripke input (all states closed, proposition labels only) must label
    every declared proposition at every state; with permissive=True missing
    entries default to ff and a warning is recorded via the warnings module.
    Evidence submodels are loaded with partial=True, which skips the
    totality check entirely.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelError(f"not valid JSON: {e}") from e
    if not isinstance(doc, dict) or doc.get("version") != MODEL_VERSION:
        raise ModelError(f"expected version {MODEL_VERSION!r}")
    raw_states = doc.get("states")
    if not isinstance(raw_states, list):
        raise ModelError("states must be a list")
    states: list[str] = []
    closed: set[str] = set()
    for entry in raw_states:
        if not isinstance(entry, dict) or not isinstance(entry.get("id"), str):
            raise ModelError(f"bad state entry: {entry!r}")
        sid = entry["id"]
        if sid in states:
            raise ModelError(f"duplicate state id {sid!r}")
        states.append(sid)
        if entry.get("closed", True):
            closed.add(sid)
    transitions: set[tuple[str, str]] = set()
    for pair in doc.get("transitions", []):
        if (not isinstance(pair, list)) or len(pair) != 2:
            raise ModelError(f"bad transition entry: {pair!r}")
        src, tgt = pair
        if src not in states or tgt not in states:
            raise ModelError(f"dangling state reference in transition {pair!r}")
        transitions.add((src, tgt))
    labelling: dict[tuple[str, Formula], bool] = {}
    labels = doc.get("labels", {})
    if not isinstance(labels, dict):
        raise ModelError("labels must be an object")
    label_formulas: list[Formula] = []
    for key in sorted(labels):
        try:
            f = parse_formula(key)
        except ValueError as e:
            raise ModelError(f"bad label key {key!r}: {e}") from e
        label_formulas.append(f)
        column = labels[key]
        if not isinstance(column, dict):
            raise ModelError(f"label column for {key!r} must be an object")
        for sid, value in column.items():
            if sid not in states:
                raise ModelError(f"label for unknown state {sid!r}")
            if not isinstance(value, bool):
                raise ModelError(f"label value for ({sid!r}, {key!r}) must be a bool")
            labelling[(sid, f)] = value
    # Kripke input mode (all states closed, propositional labels only)
    # requires total proposition columns; evidence submodels stay partial.
    kripke_input = not partial and len(closed) == len(states) and all(
        f.is_prop for f in label_formulas)
    if kripke_input:
        for f in label_formulas:
            missing = [sid for sid in states if (sid, f) not in labelling]
            if not missing:
                continue
            if not permissive:
                raise ModelError(
                    f"proposition {f.name!r} not labelled at {missing} "
                    f"(strict mode)")
            _warnings.warn(
                f"proposition {f.name!r} defaulted to ff at {sorted(missing)}",
                stacklevel=2)
            for sid in missing:
                labelling[(sid, f)] = False
    context = formula_set(label_formulas)
    return Model(frozenset(states), frozenset(closed), frozenset(transitions),
                 labelling, context)


def model_to_dict(m: Model) -> dict:
    """Canonical dict form: states, transitions and label keys sorted."""
    labels: dict[str, dict[str, bool]] = {}
    for (s, f), v in m.labelling.items():
        labels.setdefault(pretty(f), {})[s] = v
    return {
        "version": MODEL_VERSION,
        "states": [{"id": s, "closed": s in m.closed} for s in sorted(m.states)],
        "transitions": [list(t) for t in sorted(m.transitions)],
        "labels": {
            key: {s: column[s] for s in sorted(column)}
            for key, column in sorted(labels.items())
        },
    }


def dump_model(m: Model) -> str:
    return json.dumps(model_to_dict(m), indent=2, sort_keys=True) + "\n"


def kripke(states: Iterable[str],
           transitions: Iterable[tuple[str, str]],
           props: Mapping[str, Mapping[str, bool]]) -> Model:
    """Convenience constructor for fully closed, proposition-labelled models."""
    from .formula import prop
    state_set = frozenset(states)
    labelling = {
        (s, prop(name)): bool(v)
        for name, column in props.items() for s, v in column.items()
    }
    return Model(state_set, state_set, frozenset(transitions), labelling)
