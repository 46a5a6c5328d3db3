import random

import pytest
from hypothesis import given, strategies as st

from ctlevidence.formula import (
    Formula, ParseError, and_, depth, desugar, ef, eg, eu, ex, formula_set,
    not_, or_, parse_formula, pretty, prop, subformula_closure, true,
)
from ctlevidence.oracle import NaiveEvaluator

from gen import random_formula, random_kripke

names = st.sampled_from(["p", "q", "r", "win", "d1"])
formulas = st.recursive(
    names.map(prop) | st.just(true()) | st.just(Formula("false")),
    lambda kids: st.one_of(
        kids.map(not_), kids.map(ex), kids.map(eg), kids.map(ef),
        kids.map(lambda f: Formula("AX", (f,))),
        kids.map(lambda f: Formula("AF", (f,))),
        kids.map(lambda f: Formula("AG", (f,))),
        st.tuples(kids, kids).map(lambda t: and_(*t)),
        st.tuples(kids, kids).map(lambda t: or_(*t)),
        st.tuples(kids, kids).map(lambda t: eu(*t)),
        st.tuples(kids, kids).map(lambda t: Formula("AU", t)),
    ),
    max_leaves=12,
)


class TestParse:
    def test_true(self):
        assert parse_formula("true") == true()

    def test_game_eg(self):
        f = parse_formula("EG (!win && EF win)")
        assert f == eg(and_(not_(prop("win")), ef(prop("win"))))

    def test_game_eu(self):
        f = parse_formula("E [!d1 U win]")
        assert f == eu(not_(prop("d1")), prop("win"))

    def test_missing_operand(self):
        with pytest.raises(ParseError):
            parse_formula("EX")

    def test_error_position(self):
        with pytest.raises(ParseError) as err:
            parse_formula("p &&")
        assert err.value.line == 1
        assert err.value.column == 5

    def test_reserved_ident(self):
        with pytest.raises(ParseError):
            parse_formula("EF && p")

    def test_precedence(self):
        assert parse_formula("!p && q || r") == or_(
            and_(not_(prop("p")), prop("q")), prop("r"))

    def test_prefix_binds_tighter_than_and(self):
        assert parse_formula("EX p && q") == and_(ex(prop("p")), prop("q"))

    def test_e_and_a_usable_as_idents(self):
        assert parse_formula("E && A") == and_(prop("E"), prop("A"))

    @given(formulas)
    def test_roundtrip(self, f):
        assert parse_formula(pretty(f)) == f


class TestDesugar:
    def test_core_unchanged(self):
        f = ex(prop("p"))
        assert desugar(f) == f

    def test_ef(self):
        assert desugar(ef(prop("win"))) == eu(true(), prop("win"))

    def test_ag(self):
        assert desugar(parse_formula("AG p")) == not_(
            eu(true(), not_(prop("p"))))

    @given(formulas)
    def test_idempotent_and_core(self, f):
        d = desugar(f)
        assert desugar(d) == d
        assert d.is_core

    def test_oracle_agreement(self):
        # Sugared operators evaluate directly in the oracle, so agreement
        # before and after desugaring checks the rewrite rules themselves.
        rng = random.Random(7)
        for _ in range(200):
            m = random_kripke(rng, max_states=5)
            f = random_formula(rng, max_depth=3)
            ev = NaiveEvaluator(m)
            for s in sorted(m.states):
                assert ev.sat(s, f) == ev.sat(s, desugar(f)), (m, pretty(f), s)


class TestClosure:
    def test_prop(self):
        assert list(subformula_closure(prop("p"))) == [prop("p")]

    def test_not(self):
        assert set(subformula_closure(not_(prop("p")))) == {
            prop("p"), not_(prop("p"))}

    def test_game_eu(self):
        f = parse_formula("E[!d1 U win]")
        assert set(subformula_closure(f)) == {
            prop("d1"), not_(prop("d1")), prop("win"), f}

    @given(formulas)
    def test_closure_properties(self, f):
        closure = subformula_closure(f)
        assert f in closure
        for g in closure:
            for c in g.children:
                assert c in closure
        assert len(closure) <= _node_count(f)
        assert closure.depth() == depth(f)

    @given(formulas)
    def test_members_sorted_by_depth(self, f):
        closure = subformula_closure(f)
        depths = [depth(g) for g in closure]
        assert depths == sorted(depths)


class TestDepth:
    def test_prop(self):
        assert depth(prop("p")) == 1

    def test_not(self):
        assert depth(not_(prop("p"))) == 2

    def test_or_ex(self):
        assert depth(or_(prop("p"), ex(prop("q")))) == 3


def _node_count(f):
    return 1 + sum(_node_count(c) for c in f.children)


def test_formula_set_core_flag():
    assert formula_set([ex(prop("p"))]).core_only
    assert not formula_set([parse_formula("AX p")]).core_only


def test_structural_identity():
    assert parse_formula("E[!d1 U win]") == parse_formula("E [ !d1 U win ]")
    assert hash(parse_formula("p && q")) == hash(and_(prop("p"), prop("q")))
