from __future__ import annotations

import random
from fractions import Fraction

import pytest

from grig2.algebra import GroupMeasure, augmentation, convolution_power
from grig2.nested import (
    build_matrix,
    entropy_report,
    grig_nested,
    induced_measure,
    mg_matrix,
    quotient_occupancy,
    rwidf_simulate_trace,
    substitute_t_identity,
    total_variation,
    uniform_mu0,
    walk_distribution,
    walk_simulate,
)
from grig2.universal import UNIVERSAL, ball
from grig2.words import EMPTY, Letter, parse, reduce

F = Fraction
MU0 = uniform_mu0()


def test_nested_structure_is_valid():
    for level in range(3):
        assert grig_nested(level).check()


def test_phi_of_generators():
    ns = grig_nested()
    assert ns.image(parse("a")) == ((EMPTY, EMPTY), (1, 0))
    assert ns.image(parse("b")) == ((parse("t0"), parse("b@1")), (0, 1))
    with pytest.raises(ValueError):
        ns.phi(Letter("t1", 0))


def test_matrix_of_mu0():
    M = build_matrix(MU0)
    assert M[0, 1] == GroupMeasure.point(EMPTY, F(1, 5))
    assert M[0, 0] == GroupMeasure({"": F(1, 5), "t0": F(1, 5), "t1": F(1, 5), "t2": F(1, 5)})
    assert M[1, 1] == GroupMeasure({"": F(1, 5), "b@1": F(1, 5), "c@1": F(1, 5), "d@1": F(1, 5)})
    assert augmentation(M).is_stochastic()


def test_embedding_multiplicative():
    elems = ball(UNIVERSAL, 3).elements
    rng = random.Random(2)
    for _ in range(40):
        g, h = rng.choice(elems), rng.choice(elems)
        assert mg_matrix(g * h) == mg_matrix(g) @ mg_matrix(h)


def test_induced_x0():
    S = substitute_t_identity(build_matrix(MU0))
    mu = induced_measure(S, 0)
    assert mu == GroupMeasure({"": F(12, 25), "a": F(2, 5), "b@1": F(1, 25), "c@1": F(1, 25), "d@1": F(1, 25)})
    assert mu.mass == 1


def test_induced_x1():
    S = substitute_t_identity(build_matrix(MU0))
    assert induced_measure(S, 1) == GroupMeasure(
        {"": F(8, 25), "a": F(2, 25), "b@1": F(1, 5), "c@1": F(1, 5), "d@1": F(1, 5)}
    )


def test_induced_without_substitution():
    M = build_matrix(MU0)
    mu0 = induced_measure(M, 0)
    assert mu0 == GroupMeasure(
        {"": F(7, 25), "t0": F(1, 5), "t1": F(1, 5), "t2": F(1, 5), "b@1": F(1, 25), "c@1": F(1, 25), "d@1": F(1, 25)}
    )
    mu1 = induced_measure(M, 1)
    assert mu1 == GroupMeasure(
        {"": F(7, 25), "t0": F(1, 25), "t1": F(1, 25), "t2": F(1, 25), "b@1": F(1, 5), "c@1": F(1, 5), "d@1": F(1, 5)}
    )


def test_substitution_keeps_augmentation():
    M = build_matrix(MU0)
    assert augmentation(substitute_t_identity(M)) == augmentation(M)


def test_truncated_close_to_exact():
    S = substitute_t_identity(build_matrix(MU0))
    ex = induced_measure(S, 0)
    tr = induced_measure(S, 0, "truncated", F(1, 10**12))
    assert all(abs(float(ex[w] - tr[w])) < 1e-9 for w in ex.atoms)
    assert induced_measure(S, 0, "truncated", F(1, 10**3), renormalize=True).mass == 1


def test_walk_simulate_positions_reduced():
    path = walk_simulate(MU0, 50, seed=4)
    assert len(path.positions) == 51
    assert all(reduce(p) == p for p in path.positions)
    assert walk_simulate(MU0, 50, seed=4) == path


def test_walk_distribution_close_and_job_independent():
    exact = convolution_power(MU0, 2)
    emp = walk_distribution(MU0, 2, 20000, seed=1)
    assert sum(emp.values()) == 20000
    tv = total_variation({w: F(c, 20000) for w, c in emp.items()}, exact.atoms)
    assert tv < 0.02
    assert walk_distribution(MU0, 2, 20000, seed=1, jobs=2) == emp


def test_trace_reproducible_and_job_independent():
    S = substitute_t_identity(build_matrix(MU0))
    a = rwidf_simulate_trace(S, 0, 5000, seed=9)
    b = rwidf_simulate_trace(S, 0, 5000, seed=9, jobs=3)
    assert a == b
    assert sum(a.counts.values()) == 5000
    assert a.steps == sum(a.occupation)


def test_quotient_occupancy():
    occ = quotient_occupancy(build_matrix(MU0), 200_000, seed=0)
    assert abs(occ[0] - 0.5) < 0.01


def test_entropy_report_shape():
    rows = entropy_report(MU0, kmax=3)
    assert [r[0] for r in rows] == [1, 2, 3]
    assert all(h_ind < h_base for _, h_base, h_ind in rows)
