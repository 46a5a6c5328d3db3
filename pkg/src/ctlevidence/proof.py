"""Proof objects, their validation, and the serialized exchange formats:
evidence bundles for the viewer and DOT export for static rendering.

A proof maps every compound assertion of a sound model to an evidence
submodel.  Proofs are built over the core fragment; sugared subformulas are
reconstructed at export time from their desugared images, which carry
identical labels.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from html import escape as _escape

from . import __version__
from .evidence import (
    build_combined_evidence, build_min_evidence, counter_cond,
    local_closure_formulas, witness_cond,
)
from .formula import (
    AND, AU, EG, EU, EX, FALSE, NOT, OR, PROP, TRUE,
    Formula, FormulaSet, desugar, formula_set, parse_formula, pretty,
    subformula_closure,
)
from .model import (
    Assertion, Model, ModelError, dump_model, is_submodel, load_model,
    model_to_dict,
)

BUNDLE_VERSION = "ctl-evidence/1"

_CORE_TEMPORAL = (EX, EU, EG)


class BundleError(ValueError):
    """Raised on malformed or inconsistent evidence bundles."""


@dataclass(frozen=True)
class Proof:
    model: Model
    evidence_map: dict[Assertion, Model]


@dataclass
class ProofReport:
    failures: list[tuple[Assertion, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def __str__(self) -> str:
        if self.ok:
            return "proof valid"
        lines = [f"{len(self.failures)} failing assertion(s):"]
        for a, clause in self.failures:
            lines.append(f"  ({a.state}, {pretty(a.formula)}, "
                         f"{'tt' if a.value else 'ff'}): {clause}")
        return "\n".join(lines)


def _core_restriction(full: Model) -> Model:
    """Drop sugared labels; the remaining context is still closed."""
    members = [f for f in full.context if f.is_core]
    context = formula_set(members)
    labelling = {(s, f): v for (s, f), v in full.labelling.items()
                 if f in context}
    return Model(full.states, full.closed, full.transitions, labelling, context)


def build_proof(full: Model) -> Proof:
    """Record evidence for every compound core assertion of a sound model.

    EU and EG assertions get the reachable restriction of the operator's
    combined evidence (a minimal shape by construction); EX and the local
    operators get their literal minimal shapes directly.
    """
    core = _core_restriction(full)
    evidence_map: dict[Assertion, Model] = {}
    for f in core.context.compounds:
        if f.op in (EU, EG):
            combined = build_combined_evidence(core, f)
            for s in sorted(core.states):
                a = Assertion(s, f, core.labelling[(s, f)])
                evidence_map[a] = combined.restrict_reachable(s)
        else:
            for s in sorted(core.states):
                a = Assertion(s, f, core.labelling[(s, f)])
                evidence_map[a] = build_min_evidence(core, s, f)
    return Proof(core, evidence_map)


def validate_proof(p: Proof) -> ProofReport:
    """Check every proof invariant; failures are report entries."""
    report = ProofReport()
    for a, e in p.evidence_map.items():
        if not a.formula.is_compound or p.model.labelling.get(
                (a.state, a.formula)) != a.value:
            report.failures.append((a, "bad-assertion"))
            continue
        try:
            if not is_submodel(e, p.model):
                report.failures.append((a, "not-submodel"))
                continue
        except ModelError:
            report.failures.append((a, "not-submodel"))
            continue
        children = set(a.formula.children)
        if any(f not in children for (_, f) in e.labelling):
            report.failures.append((a, "wrong-label-domain"))
            continue
        try:
            holds = (witness_cond(e, a.state, a.formula) if a.value
                     else counter_cond(e, a.state, a.formula))
        except (ValueError, ModelError):
            holds = False
        if not holds:
            report.failures.append((a, "condition-fails"))
    return report


# Evidence bundles ----------------------------------------------------------

@dataclass
class AstNode:
    id: str
    op: str
    text: str
    children: tuple[str, ...]
    core: str
    name: str = ""


@dataclass
class EvidenceBundle:
    version: str
    model: Model
    root: str
    nodes: dict[str, AstNode]
    combined: dict[str, dict[str, Model]]
    local_closure: dict[str, dict[str, dict[str, bool]]]
    provenance: dict

    def node_for(self, f: Formula) -> AstNode:
        text = pretty(f)
        for node in self.nodes.values():
            if node.text == text:
                return node
        raise BundleError(f"formula {text!r} not in the bundle AST")


def _ast_table(f: Formula) -> tuple[dict[str, AstNode], dict[Formula, str]]:
    members = subformula_closure(f).union(subformula_closure(desugar(f)))
    ids: dict[Formula, str] = {
        g: f"n{i}" for i, g in enumerate(members)}
    nodes = {}
    for g, node_id in ids.items():
        nodes[node_id] = AstNode(
            id=node_id,
            op=g.op,
            text=pretty(g),
            children=tuple(ids[c] for c in g.children),
            core=ids[desugar(g)],
            name=g.name,
        )
    return nodes, ids


def export_bundle(p: Proof, f: Formula, provenance: dict | None = None) -> str:
    """Serialize the proof of f as a canonical, byte-stable JSON bundle."""
    nodes, ids = _ast_table(f)
    # The exported model carries labels for sugared nodes too, copied from
    # their desugared images.
    labelling = dict(p.model.labelling)
    context = p.model.context.union(formula_set(ids))
    for g in ids:
        img = desugar(g)
        for s in p.model.states:
            if (s, img) in labelling:
                labelling[(s, g)] = labelling[(s, img)]
    display = Model(p.model.states, p.model.closed, p.model.transitions,
                    labelling, context)

    combined = {}
    closure_tables = {}
    for g, node_id in sorted(ids.items(), key=lambda kv: kv[1]):
        if not (g.is_compound and g.is_core):
            continue
        if g.op in _CORE_TEMPORAL:
            combined[node_id] = {
                "minimal": model_to_dict(build_combined_evidence(p.model, g)),
                "natural": model_to_dict(
                    build_combined_evidence(p.model, g, "natural")),
            }
        table: dict[str, dict[str, bool]] = {}
        for loc in local_closure_formulas(g):
            if loc not in ids:
                continue
            column = {
                s: p.model.labelling[(s, loc)]
                for s in sorted(p.model.states)
                if (s, loc) in p.model.labelling
            }
            table[ids[loc]] = column
        if table:
            closure_tables[node_id] = table

    doc = {
        "version": BUNDLE_VERSION,
        "model": model_to_dict(display),
        "ast": {
            "root": ids[f],
            "nodes": [
                {
                    "id": node.id,
                    "op": node.op,
                    "text": node.text,
                    "name": node.name,
                    "children": list(node.children),
                    "core": node.core,
                }
                for _, node in sorted(nodes.items())
            ],
        },
        "combined": combined,
        "localClosure": closure_tables,
        "provenance": {
            "tool": "ctlevidence",
            "toolVersion": __version__,
            "formula": pretty(f),
            **(provenance or {}),
        },
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def proof_from_bundle(bundle: EvidenceBundle) -> Proof:
    """Reconstruct a proof from a bundle: per-state evidence for temporal
    assertions is the reachable restriction of the stored combined evidence;
    local evidence is regenerated from the model's own labels."""
    core = _core_restriction(bundle.model)
    evidence_map: dict[Assertion, Model] = {}
    for node_id, flavors in bundle.combined.items():
        f = parse_formula(bundle.nodes[node_id].text)
        minimal = flavors.get("minimal")
        if minimal is None or f.op not in (EU, EG):
            continue
        minimal = Model(minimal.states, minimal.closed, minimal.transitions,
                        minimal.labelling, core.context)
        for s in sorted(core.states):
            a = Assertion(s, f, core.labelling[(s, f)])
            evidence_map[a] = minimal.restrict_reachable(s)
    for f in core.context.compounds:
        if f.op in (EU, EG):
            continue
        for s in sorted(core.states):
            a = Assertion(s, f, core.labelling[(s, f)])
            evidence_map[a] = build_min_evidence(core, s, f)
    return Proof(core, evidence_map)


def import_bundle(text: str) -> EvidenceBundle:
    """Parse and validate a bundle; dangling references are errors."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise BundleError(f"not valid JSON: {e}") from e
    if not isinstance(doc, dict) or doc.get("version") != BUNDLE_VERSION:
        raise BundleError(f"expected version {BUNDLE_VERSION!r}")
    try:
        model = load_model(json.dumps(doc["model"]))
    except (KeyError, ModelError) as e:
        raise BundleError(f"bad model block: {e}") from e
    ast = doc.get("ast")
    if not isinstance(ast, dict) or "nodes" not in ast:
        raise BundleError("missing ast block")
    nodes: dict[str, AstNode] = {}
    for entry in ast["nodes"]:
        node = AstNode(
            id=entry["id"], op=entry["op"], text=entry["text"],
            children=tuple(entry["children"]), core=entry["core"],
            name=entry.get("name", ""))
        if node.id in nodes:
            raise BundleError(f"duplicate node id {node.id!r}")
        nodes[node.id] = node
    for node in nodes.values():
        for ref in node.children + (node.core,):
            if ref not in nodes:
                raise BundleError(f"dangling node reference {ref!r}")
        try:
            parsed = parse_formula(node.text)
        except ValueError as e:
            raise BundleError(f"bad node text {node.text!r}: {e}") from e
        if parsed.op != node.op:
            raise BundleError(f"node {node.id!r} text does not match its op")
    if ast.get("root") not in nodes:
        raise BundleError("dangling root reference")

    combined: dict[str, dict[str, Model]] = {}
    for node_id, flavors in doc.get("combined", {}).items():
        if node_id not in nodes:
            raise BundleError(f"combined block for unknown node {node_id!r}")
        combined[node_id] = {}
        for flavor, block in flavors.items():
            try:
                sub = load_model(json.dumps(block), partial=True)
            except ModelError as e:
                raise BundleError(f"bad combined block: {e}") from e
            sub = Model(sub.states, sub.closed, sub.transitions,
                        sub.labelling, model.context.union(sub.context))
            if not is_submodel(sub, model):
                raise BundleError(
                    f"combined evidence for {node_id!r}/{flavor} is not a "
                    f"submodel of the full model")
            combined[node_id][flavor] = sub

    closure_tables: dict[str, dict[str, dict[str, bool]]] = {}
    for node_id, table in doc.get("localClosure", {}).items():
        if node_id not in nodes:
            raise BundleError(f"localClosure for unknown node {node_id!r}")
        for ref, column in table.items():
            if ref not in nodes:
                raise BundleError(f"dangling node reference {ref!r}")
            for state in column:
                if state not in model.states:
                    raise BundleError(f"dangling state reference {state!r}")
        closure_tables[node_id] = {
            ref: dict(column) for ref, column in table.items()}

    return EvidenceBundle(
        version=doc["version"], model=model, root=ast["root"], nodes=nodes,
        combined=combined, local_closure=closure_tables,
        provenance=doc.get("provenance", {}))


# DOT export ----------------------------------------------------------------

_OP_GLYPH = {
    TRUE: "true", FALSE: "false", NOT: "!", AND: "&amp;&amp;", OR: "||",
    EU: "E[ U ]", AU: "A[ U ]",
}


def _glyph(f: Formula) -> str:
    if f.op == PROP:
        return _escape(f.name)
    return _OP_GLYPH.get(f.op, f.op)


def _ast_rows(f: Formula) -> list[tuple[Formula, int]]:
    """Rows of the per-state AST display: root first, children bottom-to-top."""
    rows: list[tuple[Formula, int]] = []

    def walk(g: Formula, depth: int):
        rows.append((g, depth))
        for c in reversed(g.children):
            walk(c, depth + 1)

    walk(f, 0)
    return rows


def _quote(state: str) -> str:
    return '"' + state.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(m: Model, highlight: Model | None, f: Formula) -> str:
    """Render the model as a Graphviz digraph with one HTML table per state.

    Colour map: tt green, ff red, undefined grey; highlighted states are
    tinted blue and the rest greyed out; open states get dotted borders.
    """
    if highlight is not None and not is_submodel(highlight, m):
        raise ModelError("highlight must be a submodel of the model")
    rows = _ast_rows(f)
    lines = [
        "digraph ctl {",
        '  node [shape=box, margin=0.05];',
    ]
    for s in sorted(m.states):
        in_highlight = highlight is not None and s in highlight.states
        lookup = highlight.labelling if highlight is not None else m.labelling
        greyed = highlight is not None and not in_highlight
        cells = [f'<TR><TD ALIGN="LEFT"><B>{_escape(s)}</B></TD></TR>']
        for g, depth in rows:
            if greyed:
                colour = "gray90"
            else:
                value = lookup.get((s, g))
                colour = ("palegreen" if value is True
                          else "lightpink" if value is False else "gray90")
            indent = "&#160;" * (2 * depth)
            cells.append(
                f'<TR><TD ALIGN="LEFT" BGCOLOR="{colour}">'
                f'{indent}{_glyph(g)}</TD></TR>')
        label = ('<<TABLE BORDER="0" CELLBORDER="0" CELLSPACING="1">'
                 + "".join(cells) + "</TABLE>>")
        effective = highlight if in_highlight else m
        border = "dotted" if s not in effective.closed else "solid"
        style = f"{border},filled"
        fill = ("lightblue" if in_highlight
                else "gray92" if highlight is not None else "white")
        lines.append(f'  {_quote(s)} [style="{style}", fillcolor="{fill}", '
                     f'label={label}];')
    for (a, b) in sorted(m.transitions):
        attrs = ""
        if highlight is not None:
            if (a, b) in highlight.transitions:
                attrs = ' [color=blue, penwidth=2]'
            else:
                attrs = ' [color=gray70]'
        lines.append(f'  {_quote(a)} -> {_quote(b)}{attrs};')
    lines.append("}")
    return "\n".join(lines) + "\n"
