from __future__ import annotations

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from grig2.action import evaluate
from grig2.interval import PieceUndetermined, build_rows, crosscheck, interval_apply

RHO = {"a": "a", "b": "d", "c": "c", "d": "b"}
points = st.text("01", min_size=1, max_size=14).filter(lambda p: "0" in p)
omegas = st.sampled_from(["/0", "/01", "/012", "2/1", "10/20"])


def test_rows():
    r = build_rows("/012", 3)
    assert r.column(1) == ("T", "T", "I")
    assert r.U == ("T", "T", "I") and r.W == ("I", "T", "T")


def test_exhaustive_depth_three():
    prefixes = ["".join(p) for p in itertools.product("012", repeat=3)]
    assert crosscheck(prefixes, 3) == RHO


def test_degenerate_omega_needs_given_relabeling():
    assert crosscheck(["/0"], 10, relabel=RHO) == RHO


@given(st.sampled_from("abcd"), omegas, points)
def test_generators_are_involutions(g, om, p):
    assert interval_apply(g, om, interval_apply(g, om, p)) == p


@given(st.sampled_from("abcd"), omegas, points)
def test_matches_tree(g, om, p):
    assert interval_apply(g, om, p) == evaluate(RHO[g], om, p)


def test_all_ones_point_undetermined():
    with pytest.raises(PieceUndetermined):
        interval_apply("b", "/012", "111")
