import random

import pytest

from ctlevidence.checker import CheckError, check
from ctlevidence.evidence import counter_states, witness_states
from ctlevidence.formula import desugar, parse_formula as P, subformula_closure
from ctlevidence.oracle import NaiveEvaluator

from gen import random_formula, random_kripke


class TestFixtureValues:
    def test_chain_ex(self, chain):
        f = P("EX q")
        full = check(chain, f)
        assert {s: full.labelling[(s, f)] for s in "abc"} == {
            "a": False, "b": True, "c": False}

    def test_chain_eu(self, chain):
        f = P("E[p U q]")
        full = check(chain, f)
        assert all(full.labelling[(s, f)] for s in "abc")

    def test_dead_eg(self, dead):
        # the finite maximal path consisting of the deadlock alone witnesses EG
        f = P("EG p")
        assert check(dead, f).labelling[("t", f)] is True

    def test_chain_eg(self, chain):
        f = P("EG p")
        assert check(chain, f).labelling[("a", f)] is False

    def test_missing_prop_strict(self, chain):
        with pytest.raises(CheckError, match="missing"):
            check(chain, P("EX missing_prop"))

    def test_missing_prop_permissive(self, chain):
        f = P("EX zz")
        full = check(chain, f, permissive=True)
        assert not any(full.labelling[(s, f)] for s in "abc")

    def test_requires_kripke(self, chain):
        from ctlevidence.model import Model
        opened = Model(chain.states, frozenset(), chain.transitions,
                       dict(chain.labelling), chain.context)
        with pytest.raises(CheckError, match="Kripke"):
            check(opened, P("p"))


class TestAgainstOracle:
    def test_random_models(self):
        rng = random.Random(23)
        for _ in range(60):
            m = random_kripke(rng, max_states=5, max_transitions=8)
            ev = NaiveEvaluator(m)
            for _ in range(5):
                f = random_formula(rng, max_depth=3)
                full = check(m, f)
                for g in full.context:
                    for s in sorted(m.states):
                        assert full.labelling[(s, g)] == ev.sat(s, g), (
                            m, str(g), s)


class TestOutputShape:
    def test_full_over_context(self, chain):
        f = P("A[p U q]")
        full = check(chain, f)
        assert full.is_full

    def test_sugared_nodes_match_images(self, game):
        f = P("AG (trw || d1 || d2 || lost || win)")
        full = check(game, f)
        for g in subformula_closure(f):
            image = desugar(g)
            for s in sorted(game.states):
                assert full.labelling[(s, g)] == full.labelling[(s, image)]

    def test_deterministic(self, game):
        f = P("EG (!win && EF win)")
        assert check(game, f) == check(game, f)

    def test_soundness_matches_conditions(self):
        # On sound outputs the witness condition holds exactly at tt states
        # and the counterexample condition exactly at ff states.
        rng = random.Random(29)
        for _ in range(40):
            m = random_kripke(rng, max_states=5)
            f = random_formula(rng, max_depth=3)
            full = check(m, f)
            for g in full.context.compounds:
                if not g.is_core:
                    continue
                wit = witness_states(full, g)
                cnt = counter_states(full, g)
                for s in sorted(m.states):
                    value = full.labelling[(s, g)]
                    assert (s in wit) == value
                    assert (s in cnt) == (not value)
