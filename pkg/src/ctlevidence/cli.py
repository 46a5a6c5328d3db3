"""Command-line front-end: check models, generate evidence, build and
validate proof bundles, and poke the testing oracle.

Exit codes: 0 for success (and satisfied properties), 1 for violated
properties or failed validation, 2 for usage and input errors.  All output
is deterministic for fixed inputs.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
import warnings as _warnings
from pathlib import Path as _FsPath

from .checker import CheckError, check
from .evidence import (
    EvidenceError, EvidenceRequest, build_evidence, counter_cond,
    witness_cond,
)
from .formula import (
    EU, Formula, ParseError, desugar, parse_formula, pretty,
    subformula_closure, subformulas_preorder,
)
from .model import Model, ModelError, dump_model, load_model, maximal_lassos
from .oracle import OracleGuardError, naive_sat
from .proof import (
    BundleError, build_proof, export_bundle, export_dot, import_bundle,
    proof_from_bundle, validate_proof,
)

_USAGE_ERRORS = (ParseError, ModelError, CheckError, EvidenceError,
                 BundleError, OracleGuardError, OSError)


def _load(path: str, permissive: bool) -> Model:
    text = _FsPath(path).read_text()
    with _warnings.catch_warnings(record=True) as caught:
        _warnings.simplefilter("always")
        m = load_model(text, permissive=permissive)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return m


def _tt(value: bool) -> str:
    return "tt" if value else "ff"


def _initial_state(m: Model, flag: str | None) -> str:
    if flag is None:
        return min(m.states)
    if flag not in m.states:
        raise ModelError(f"unknown state {flag!r}")
    return flag


def _print_table(full: Model, f: Formula, out):
    columns = list(subformula_closure(f))
    header = ["state"] + [pretty(g) for g in columns]
    rows = [[s] + [_tt(full.labelling[(s, g)]) for g in columns]
            for s in sorted(full.states)]
    widths = [max(len(r[i]) for r in [header] + rows)
              for i in range(len(header))]
    out.write(" | ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()
              + "\n")
    out.write("-+-".join("-" * w for w in widths) + "\n")
    for row in rows:
        out.write(" | ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip()
                  + "\n")


def _show_ast(f: Formula, out):
    out.write(f"ast for {pretty(f)}:\n")
    for i, node in enumerate(subformulas_preorder(f)):
        out.write(f"  {i}: {pretty(node)}\n")


def cmd_check(args) -> int:
    m = _load(args.model, args.permissive_labels)
    formulas: list[Formula] = []
    if args.formula_text:
        formulas.append(parse_formula(args.formula_text))
    for text in args.formula or []:
        formulas.append(parse_formula(text))
    if args.formula_file:
        for line in _FsPath(args.formula_file).read_text().splitlines():
            line = line.strip()
            if line and not line.startswith("#"):
                formulas.append(parse_formula(line))
    if not formulas:
        print("error: no formula given", file=sys.stderr)
        return 2
    initial = _initial_state(m, args.state)
    all_hold = True
    for f in formulas:
        full = check(m, f, permissive=args.permissive_labels)
        if args.show_ast:
            _show_ast(f, sys.stdout)
        _print_table(full, f, sys.stdout)
        value = full.labelling[(initial, f)]
        print(f"{pretty(f)} at {initial}: {_tt(value)}")
        all_hold = all_hold and value
    return 0 if all_hold else 1


def _select_subformula(f: Formula, selector: str | None) -> Formula:
    if selector is None:
        return f
    nodes = subformulas_preorder(f)
    try:
        index = int(selector)
    except ValueError:
        g = parse_formula(selector)
        if (g not in subformula_closure(f)
                and g not in subformula_closure(desugar(f))):
            raise EvidenceError(
                f"{pretty(g)} is not a subformula of {pretty(f)}")
        return g
    if not 0 <= index < len(nodes):
        raise EvidenceError(
            f"subformula index {index} out of range (0..{len(nodes) - 1})")
    return nodes[index]


def _strict_table2_diagnostic(e: Model, core: Formula, out):
    """Print both readings of the minimal EU-counterexample labelling: the
    resolved one (psi2 ff everywhere, psi1 ff on the open frontier) and the
    transposed one."""
    psi1, psi2 = core.children
    frontier = sorted(e.states - e.closed)
    out.write("strict-table2: EU counterexample labelling readings differ:\n")
    out.write(f"  resolved:   {pretty(psi2)} -> ff on all of "
              f"{sorted(e.states)}; {pretty(psi1)} -> ff on {frontier}\n")
    out.write(f"  transposed: {pretty(psi1)} -> ff on all of "
              f"{sorted(e.states)}; {pretty(psi2)} -> ff on {frontier}\n")


def cmd_evidence(args) -> int:
    m = _load(args.model, args.permissive_labels)
    f = parse_formula(args.formula)
    selected = _select_subformula(f, args.assert_formula)
    if not selected.is_compound:
        print(f"error: {pretty(selected)} is a proposition; nothing to "
              f"evidence", file=sys.stderr)
        return 2
    full = check(m, f, permissive=args.permissive_labels)
    state = _initial_state(m, args.state)
    core = desugar(selected)
    request = EvidenceRequest(
        state=state, formula=core,
        flavor="natural" if args.natural else "minimal",
        locally_closed=args.local_closure)
    evidence = build_evidence(full, request)
    if args.strict_table2 and core.op == EU and not full.labelling[(state, core)]:
        _strict_table2_diagnostic(evidence, core, sys.stderr)
    if args.format == "json":
        payload = dump_model(evidence)
    else:
        payload = export_dot(full, evidence, f)
    if args.output:
        _FsPath(args.output).write_text(payload)
    else:
        sys.stdout.write(payload)
    return 0


def cmd_proof(args) -> int:
    path = _FsPath(args.model)
    m = _load(args.model, args.permissive_labels)
    f = parse_formula(args.formula)
    full = check(m, f, permissive=args.permissive_labels)
    proof = build_proof(full)
    provenance = {
        "modelSha256": hashlib.sha256(path.read_bytes()).hexdigest(),
    }
    bundle_text = export_bundle(proof, f, provenance=provenance)
    if args.output:
        _FsPath(args.output).write_text(bundle_text)
    else:
        sys.stdout.write(bundle_text)
    if not args.validate:
        return 0
    bundle = import_bundle(bundle_text)
    rebuilt = proof_from_bundle(bundle)
    report = validate_proof(rebuilt)
    failures = list(report.failures)
    for node_id, flavors in bundle.combined.items():
        g = parse_formula(bundle.nodes[node_id].text)
        for flavor, block in flavors.items():
            for s in sorted(bundle.model.states):
                value = bundle.model.labelling[(s, g)]
                part = block.restrict_reachable(s)
                ok = (witness_cond(part, s, g) if value
                      else counter_cond(part, s, g))
                if not ok:
                    failures.append(
                        ((s, g, value), f"combined-{flavor}-condition-fails"))
    if failures:
        print(f"validation failed: {len(failures)} problem(s)",
              file=sys.stderr)
        for key, clause in failures:
            print(f"  {key}: {clause}", file=sys.stderr)
        return 1
    print("validation ok", file=sys.stderr)
    return 0


def cmd_oracle(args) -> int:
    m = _load(args.model, args.permissive_labels)
    if args.oracle_command == "sat":
        f = parse_formula(args.formula)
        state = _initial_state(m, args.state)
        value = naive_sat(m, state, f)
        print(_tt(value))
        return 0 if value else 1
    if args.oracle_command == "lassos":
        state = _initial_state(m, args.state)
        max_len = args.max_len or 2 * len(m.states)
        for p in sorted(maximal_lassos(m, state, max_len),
                        key=lambda p: (p.stem, p.loop_index is not None,
                                       p.loop_index or 0)):
            kind = (f"lasso@{p.loop_index}" if p.is_lasso else "maximal")
            print(f"{' '.join(p.stem)} [{kind}]")
        return 0
    raise AssertionError


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ctl",
        description="CTL model checking with witness/counterexample evidence")
    parser.add_argument("--permissive-labels", action="store_true",
                        help="default missing proposition labels to ff")
    parser.add_argument("--strict-table2", action="store_true",
                        help="print both readings of the EU counterexample "
                             "labelling when one is produced")
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="label a model with a formula")
    p_check.add_argument("model")
    p_check.add_argument("formula_text", nargs="?")
    p_check.add_argument("--formula", action="append")
    p_check.add_argument("--formula-file")
    p_check.add_argument("--state", help="initial state (default: least)")
    p_check.add_argument("--show-ast", action="store_true")
    p_check.set_defaults(handler=cmd_check)

    p_ev = sub.add_parser("evidence", help="emit evidence for an assertion")
    p_ev.add_argument("model")
    p_ev.add_argument("formula")
    p_ev.add_argument("--state")
    p_ev.add_argument("--assert-formula",
                      help="subformula to explain: preorder index or text")
    p_ev.add_argument("--natural", action="store_true")
    p_ev.add_argument("--local-closure", action="store_true")
    p_ev.add_argument("--format", choices=("dot", "json"), default="dot")
    p_ev.add_argument("-o", "--output")
    p_ev.set_defaults(handler=cmd_evidence)

    p_proof = sub.add_parser("proof", help="export an evidence bundle")
    p_proof.add_argument("model")
    p_proof.add_argument("formula")
    p_proof.add_argument("-o", "--output")
    p_proof.add_argument("--validate", action="store_true")
    p_proof.set_defaults(handler=cmd_proof)

    p_oracle = sub.add_parser("oracle", help="debug access to the test oracle")
    oracle_sub = p_oracle.add_subparsers(dest="oracle_command", required=True)
    p_sat = oracle_sub.add_parser("sat")
    p_sat.add_argument("model")
    p_sat.add_argument("formula")
    p_sat.add_argument("--state")
    p_sat.set_defaults(handler=cmd_oracle)
    p_lassos = oracle_sub.add_parser("lassos")
    p_lassos.add_argument("model")
    p_lassos.add_argument("--state")
    p_lassos.add_argument("--max-len", type=int)
    p_lassos.set_defaults(handler=cmd_oracle)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_arg_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except _USAGE_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
