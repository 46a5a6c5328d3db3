import json
import random

import pytest

from ctlevidence.formula import ex, parse_formula, prop
from ctlevidence.model import (
    Model, ModelError, Path, dump_model, is_submodel, join, kripke,
    load_model, maximal_lassos,
)

from gen import random_kripke, random_submodel


def _doc(states, transitions=(), labels=()):
    return json.dumps({
        "version": "ctl-model/1",
        "states": states,
        "transitions": [list(t) for t in transitions],
        "labels": dict(labels),
    })


class TestLoad:
    def test_smallest_kripke(self):
        m = load_model(_doc([{"id": "s"}], labels={"p": {"s": True}}))
        assert m.states == {"s"}
        assert m.closed == {"s"}
        assert m.is_kripke

    def test_dangling_transition(self):
        with pytest.raises(ModelError, match="dangling"):
            load_model(_doc([{"id": "a"}], [("a", "x")]))

    def test_duplicate_state(self):
        with pytest.raises(ModelError, match="duplicate"):
            load_model(_doc([{"id": "a"}, {"id": "a"}]))

    def test_bad_version(self):
        with pytest.raises(ModelError, match="version"):
            load_model(json.dumps({"version": "nope", "states": []}))

    def test_chain_fixture(self, chain):
        text = dump_model(chain)
        again = load_model(text)
        assert again == chain

    def test_strict_totality(self):
        doc = _doc([{"id": "a"}, {"id": "b"}], labels={"p": {"a": True}})
        with pytest.raises(ModelError, match="not labelled"):
            load_model(doc)

    def test_permissive_defaults_ff(self):
        doc = _doc([{"id": "a"}, {"id": "b"}], labels={"p": {"a": True}})
        with pytest.warns(UserWarning, match="defaulted to ff"):
            m = load_model(doc, permissive=True)
        assert m.labelling[("b", prop("p"))] is False

    def test_partial_labels_fine_on_open_models(self):
        doc = _doc([{"id": "a", "closed": False}, {"id": "b"}],
                   labels={"p": {"a": True}})
        m = load_model(doc)
        assert ("b", prop("p")) not in m.labelling

    def test_compound_label_keys_roundtrip(self):
        e = Model(frozenset({"s"}), frozenset(), frozenset(),
                  {("s", ex(prop("p"))): True})
        assert load_model(dump_model(e)) == e


class TestSubmodel:
    def test_reflexive(self, chain):
        assert is_submodel(chain, chain)

    def test_closed_state_loses_transition(self, chain):
        smaller = Model(chain.states, chain.closed,
                        chain.transitions - {("b", "c")},
                        dict(chain.labelling), chain.context)
        assert not is_submodel(smaller, chain)

    def test_opened_state_may_lose_transition(self, chain):
        smaller = Model(
            chain.states, chain.closed - {"b"},
            chain.transitions - {("b", "c")},
            {k: v for k, v in chain.labelling.items() if k[0] != "b"},
            chain.context)
        assert is_submodel(smaller, chain)

    def test_partial_order(self):
        rng = random.Random(11)
        for _ in range(100):
            m = random_kripke(rng, max_states=5)
            m1 = random_submodel(rng, m)
            m2 = random_submodel(rng, m1)
            assert is_submodel(m1, m1)
            assert is_submodel(m2, m1) and is_submodel(m1, m)
            assert is_submodel(m2, m)  # transitivity
            if is_submodel(m1, m2):  # antisymmetry
                assert m1 == m2

    def test_supermodel_preservation(self):
        rng = random.Random(12)
        for _ in range(60):
            m2 = random_kripke(rng, max_states=5)
            m1 = random_submodel(rng, m2)
            bound = 2 * max(len(m1.states), len(m2.states))
            for s in sorted(m1.states):
                succ1, succ2 = m1.successors(s), m2.successors(s)
                assert succ1 <= succ2
                if s in m1.closed:
                    assert succ1 == succ2
                for p in maximal_lassos(m1, s, bound):
                    if p.is_lasso:
                        continue
                    # finite maximal paths of m1 are path-prefixes in m2,
                    # maximal there too when they end in a closed state
                    assert all((a, b) in m2.transitions
                               for a, b in zip(p.stem, p.stem[1:]))
                    if p.stem[-1] in m1.closed:
                        assert not m2.successors(p.stem[-1])


class TestOperations:
    def test_successors(self, chain, loop, dead):
        assert chain.successors("a") == {"b"}
        assert dead.successors("t") == set()
        assert loop.successors("s") == {"s"}

    def test_successors_unknown_state(self, chain):
        with pytest.raises(ModelError):
            chain.successors("zz")

    def test_restrict_terminal(self, chain):
        r = chain.restrict_reachable("c")
        assert r.states == {"c"}
        assert r.closed == {"c"}
        assert not r.transitions
        assert set(r.labelling) == {("c", prop("p")), ("c", prop("q"))}

    def test_restrict_all_reachable(self, chain):
        assert chain.restrict_reachable("a") == chain

    def test_restrict_component(self):
        m = kripke(["a", "b", "x", "y", "z"],
                   [("a", "b"), ("x", "y"), ("y", "z"), ("z", "x")],
                   {"p": {s: True for s in "abxyz"}})
        r = m.restrict_reachable("x")
        assert r.states == {"x", "y", "z"}
        assert r.transitions == {("x", "y"), ("y", "z"), ("z", "x")}

    def test_restrict_is_submodel(self):
        rng = random.Random(13)
        for _ in range(50):
            m = random_submodel(rng, random_kripke(rng, max_states=5))
            for s in sorted(m.states):
                assert is_submodel(m.restrict_reachable(s), m)

    def test_join_identity(self, chain):
        assert join(chain, {}) == chain

    def test_join_disjoint(self, chain):
        f = ex(prop("p"))
        bigger = join(chain, {("a", f): True})
        assert bigger.labelling[("a", f)] is True
        assert len(bigger.labelling) == len(chain.labelling) + 1

    def test_join_conflict(self, chain):
        with pytest.raises(ModelError, match="conflicting"):
            join(chain, {("a", prop("p")): False})


class TestMaximalLassos:
    def test_loop(self, loop):
        paths = maximal_lassos(loop, "s", 4)
        assert Path(("s",), 0) in paths
        # unrollings of the single lasso, one per (stem length, loop index)
        assert len(paths) == 1 + 2 + 3 + 4
        assert all(p.is_lasso for p in paths)

    def test_chain(self, chain):
        assert maximal_lassos(chain, "a", 6) == {Path(("a", "b", "c"))}

    def test_deadlock(self, dead):
        assert maximal_lassos(dead, "t", 3) == {Path(("t",))}
