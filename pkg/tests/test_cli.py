import json

import pytest

from ctlevidence.cli import main
from ctlevidence.fixtures import chain, game_board
from ctlevidence.model import dump_model, load_model


@pytest.fixture
def chain_path(tmp_path):
    path = tmp_path / "chain.json"
    path.write_text(dump_model(chain()))
    return str(path)


@pytest.fixture
def game_path(tmp_path):
    path = tmp_path / "game.json"
    path.write_text(dump_model(game_board()))
    return str(path)


class TestCheck:
    def test_satisfied_exit_zero(self, chain_path, capsys):
        code = main(["check", chain_path, "E[p U q]", "--state", "a"])
        out = capsys.readouterr().out
        assert code == 0
        assert "E[p U q] at a: tt" in out
        lines = [l for l in out.splitlines() if l.startswith("a ")]
        assert lines and "tt" in lines[0]

    def test_violated_exit_one(self, chain_path):
        assert main(["check", chain_path, "EG p", "--state", "a"]) == 1

    def test_missing_file_exit_two(self, tmp_path, capsys):
        code = main(["check", str(tmp_path / "nope.json"), "p"])
        assert code == 2
        assert "error:" in capsys.readouterr().err

    def test_parse_error_exit_two(self, chain_path, capsys):
        assert main(["check", chain_path, "EX"]) == 2

    def test_default_initial_state_is_least(self, chain_path, capsys):
        code = main(["check", chain_path, "p"])
        assert code == 0  # p holds at a, the least state
        assert "p at a: tt" in capsys.readouterr().out

    def test_show_ast_preorder(self, chain_path, capsys):
        main(["check", chain_path, "E[!p U q]", "--show-ast"])
        out = capsys.readouterr().out
        assert "0: E[!p U q]" in out
        assert "1: !p" in out
        assert "2: p" in out
        assert "3: q" in out

    def test_multiple_formulas_in_order(self, chain_path, capsys):
        code = main(["check", chain_path, "--formula", "p",
                     "--formula", "q", "--state", "a"])
        out = capsys.readouterr().out
        assert code == 1  # q fails at a
        assert out.index("p at a: tt") < out.index("q at a: ff")

    def test_formula_file(self, chain_path, tmp_path, capsys):
        listing = tmp_path / "props.ctl"
        listing.write_text("# properties under test\nE[p U q]\n\nEX q\n")
        code = main(["check", chain_path, "--formula-file", str(listing),
                     "--state", "a"])
        out = capsys.readouterr().out
        assert code == 1  # EX q fails at a
        assert "E[p U q] at a: tt" in out
        assert "EX q at a: ff" in out


class TestEvidence:
    def test_json_output_deterministic(self, chain_path, capsys):
        argv = ["evidence", chain_path, "E[p U q]", "--state", "a",
                "--format", "json"]
        assert main(argv) == 0
        first = capsys.readouterr().out
        assert main(argv) == 0
        assert capsys.readouterr().out == first
        doc = json.loads(first)
        assert doc["labels"]["p"] == {"a": True, "b": True}
        assert doc["labels"]["q"] == {"c": True}

    def test_dot_golden(self, chain_path, tmp_path):
        out = tmp_path / "e.dot"
        code = main(["evidence", chain_path, "EX q", "--state", "b",
                     "-o", str(out)])
        assert code == 0
        from pathlib import Path
        golden = Path(__file__).parent / "golden" / "evidence_chain_ex.dot"
        assert out.read_text() == golden.read_text()

    def test_natural_local_closure_labels(self, chain_path, capsys):
        code = main(["evidence", chain_path, "E[p U q]", "--state", "a",
                     "--natural", "--local-closure", "--format", "json"])
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        # natural evidence defines both children on every non-terminal
        assert doc["labels"]["q"] == {"a": False, "b": False, "c": True}

    def test_proposition_selection_is_usage_error(self, chain_path, capsys):
        code = main(["evidence", chain_path, "E[p U q]", "--state", "a",
                     "--assert-formula", "1"])
        assert code == 2
        assert "nothing to evidence" in capsys.readouterr().err

    def test_subformula_by_index(self, game_path, capsys):
        code = main(["evidence", game_path, "EG (!win && EF win)",
                     "--state", "t0", "--assert-formula", "4",
                     "--format", "json"])
        assert code == 0
        json.loads(capsys.readouterr().out)

    def test_subformula_by_text(self, game_path, capsys):
        code = main(["evidence", game_path, "EG (!win && EF win)",
                     "--state", "t2", "--assert-formula", "EF win",
                     "--format", "json"])
        assert code == 0

    def test_strict_table2_diagnostic(self, chain_path, capsys):
        # E[q U !p] is violated at a, so the evidence is an EU counterexample
        code = main(["--strict-table2", "evidence", chain_path, "E[q U !p]",
                     "--state", "a", "--format", "json"])
        assert code == 0
        err = capsys.readouterr().err
        assert "strict-table2" in err
        assert "resolved" in err and "transposed" in err


class TestProofCommand:
    def test_bundle_written_and_validates(self, game_path, tmp_path, capsys):
        out = tmp_path / "bundle.json"
        code = main(["proof", game_path, "EG (!win && EF win)",
                     "-o", str(out), "--validate"])
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["version"] == "ctl-evidence/1"
        assert len(doc["combined"]) == 2
        assert "validation ok" in capsys.readouterr().err

    def test_byte_identical_runs(self, chain_path, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        main(["proof", chain_path, "E[p U q]", "-o", str(a)])
        main(["proof", chain_path, "E[p U q]", "-o", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_corrupted_bundle_fails_validation(self, chain_path, tmp_path,
                                               capsys, monkeypatch):
        out = tmp_path / "bundle.json"
        main(["proof", chain_path, "E[p U q]", "-o", str(out)])
        doc = json.loads(out.read_text())
        # flip one full-model label; the bundle internals no longer agree
        doc["model"]["labels"]["E[p U q]"]["a"] = False
        corrupted = tmp_path / "bad.json"
        corrupted.write_text(json.dumps(doc))

        from ctlevidence import cli as cli_module
        from ctlevidence.proof import import_bundle

        real_export = cli_module.export_bundle
        monkeypatch.setattr(
            cli_module, "export_bundle",
            lambda proof, f, provenance=None: corrupted.read_text())
        code = main(["proof", chain_path, "E[p U q]", "-o",
                     str(tmp_path / "ignored.json"), "--validate"])
        assert code == 1
        assert "validation failed" in capsys.readouterr().err


class TestOracleCommand:
    def test_sat(self, chain_path, capsys):
        assert main(["oracle", "sat", chain_path, "E[p U q]",
                     "--state", "a"]) == 0
        assert capsys.readouterr().out.strip() == "tt"
        assert main(["oracle", "sat", chain_path, "EG p",
                     "--state", "a"]) == 1

    def test_lassos(self, chain_path, capsys):
        assert main(["oracle", "lassos", chain_path, "--state", "a"]) == 0
        out = capsys.readouterr().out
        assert "a b c [maximal]" in out


class TestPermissiveLabels:
    def test_missing_label_defaults(self, tmp_path, capsys):
        doc = {
            "version": "ctl-model/1",
            "states": [{"id": "a"}, {"id": "b"}],
            "transitions": [["a", "b"]],
            "labels": {"p": {"a": True}},
        }
        path = tmp_path / "partial.json"
        path.write_text(json.dumps(doc))
        assert main(["check", str(path), "p", "--state", "a"]) == 2
        captured = capsys.readouterr()
        assert "error:" in captured.err
        assert main(["--permissive-labels", "check", str(path), "p",
                     "--state", "a"]) == 0
        captured = capsys.readouterr()
        assert "warning:" in captured.err
