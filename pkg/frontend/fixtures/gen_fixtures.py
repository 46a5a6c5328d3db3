"""Regenerate the viewer's cross-component fixtures.

For each fixture model/formula pair this writes the proof bundle and, for
every (state, temporal core node, natural, local-closure) selection, the
evidence JSON produced by the actual command-line tool.  The viewer tests
assert that client-side highlight computation reproduces these bytes.

Run from the repository root:  python frontend/fixtures/gen_fixtures.py
"""

from __future__ import annotations

import json
import random
import sys
import tempfile
from pathlib import Path

from ctlevidence.checker import check
from ctlevidence.cli import main as ctl_main
from ctlevidence.fixtures import chain, dead, game_board, loop
from ctlevidence.model import Model, dump_model, kripke
from ctlevidence.proof import build_proof, export_bundle, import_bundle

HERE = Path(__file__).parent


def _loop_with_q() -> Model:
    return kripke(["s"], [("s", "s")], {"p": {"s": True}, "q": {"s": False}})


def _random_model(seed: int, n: int) -> Model:
    rng = random.Random(seed)
    states = [f"s{i}" for i in range(n)]
    pairs = [(a, b) for a in states for b in states]
    transitions = rng.sample(pairs, rng.randint(n, min(len(pairs), 2 * n)))
    props = {
        name: {s: rng.random() < 0.5 for s in states} for name in ("p", "q")}
    return kripke(states, transitions, props)


FIXTURES = [
    ("chain_eu", chain(), "E[p U q]"),
    ("chain_ex", chain(), "EX q"),
    ("chain_eg", chain(), "EG p"),
    ("loop_eu", _loop_with_q(), "E[p U q]"),
    ("dead_eg", dead(), "EG p"),
    ("game_loop", game_board(), "EG (!win && EF win)"),
    ("game_win", game_board(), "E[!d1 U win]"),
    ("game_safe", game_board(), "AG !lost"),
    ("rand_au", _random_model(1201, 5), "A[p U q]"),
    ("rand_efex", _random_model(1202, 6), "EF (p && EX q)"),
]


def generate():
    for name, model, formula in FIXTURES:
        with tempfile.TemporaryDirectory() as tmp:
            model_path = Path(tmp) / "model.json"
            model_path.write_text(dump_model(model))
            bundle_path = HERE / f"{name}.bundle.json"
            code = ctl_main(["proof", str(model_path), formula,
                             "-o", str(bundle_path)])
            assert code == 0, f"proof export failed for {name}"
            bundle = import_bundle(bundle_path.read_text())
            states = sorted(bundle.model.states)
            selectable = sorted(
                (node.id, node.text) for node in bundle.nodes.values()
                if node.op != "prop")
            entries = []
            for node_id, node_text in selectable:
                temporal = bundle.nodes[node_id].op in (
                    "EX", "AX", "EF", "AF", "EG", "AG", "EU", "AU")
                for state in states:
                    for natural in (False, True):
                        for closure in (False, True):
                            out = Path(tmp) / "evidence.json"
                            argv = ["evidence", str(model_path), formula,
                                    "--state", state,
                                    "--assert-formula", node_text,
                                    "--format", "json", "-o", str(out)]
                            if natural:
                                argv.append("--natural")
                            if closure:
                                argv.append("--local-closure")
                            code = ctl_main(argv)
                            assert code == 0, f"evidence failed: {argv}"
                            entries.append({
                                "state": state,
                                "node": node_text,
                                "temporal": temporal,
                                "natural": natural,
                                "localClosure": closure,
                                "evidence": json.loads(out.read_text()),
                            })
            (HERE / f"{name}.expected.json").write_text(
                json.dumps(entries, indent=1, sort_keys=True) + "\n")
            print(f"{name}: {len(entries)} expected selections")


if __name__ == "__main__":
    sys.exit(generate())
