import warnings

import pytest
from hypothesis import given, settings, strategies as st

from conftest import XY, corpus_model
from lieroid.algebroid import (
    FORM, VECTOR, Algebroid, InconsistentAlgebroidWarning, Kind, RankMismatch, Tensor,
    VarianceMismatch, anchor_apply, anchor_defect, bracket_sections, cartan_defect, classify,
    coframe, d_rho, evaluate, frame_vector, interior, jacobiator_sections, lie_derivative, pairing,
    schouten, section, wedge,
)
from lieroid.coeff import Chart
from lieroid.dsl.generate import random_instance

R1 = Chart(("x",))
seeds = st.integers(0, 10 ** 6)


def heis():
    return corpus_model("heisenberg").algebroid("H")


def tangent(chart):
    n = chart.dim
    return Algebroid(chart, n, [[1 if i == j else 0 for j in range(n)] for i in range(n)])


def instance(seed, kind="skew", rank=3, chart_dim=1, max_degree=1):
    m = random_instance(seed, {"kind": kind, "rank": rank, "chart_dim": chart_dim,
                               "max_degree": max_degree})
    return m, m.algebroid("A")


# --- worked values ------------------------------------------------------------------

def test_brackets_and_anchor():
    H = heis()
    assert bracket_sections(H, H.e(0), H.e(1)) == H.e(2)
    T = tangent(R1)
    x = R1.var(0)
    assert bracket_sections(T, section(T, [x]), T.e(0)) == section(T, [-1])
    assert anchor_apply(T, T.e(0), x ** 2) == 2 * x
    assert anchor_apply(H, H.e(0), H.chart.one()) == 0
    T2 = tangent(XY)
    assert anchor_apply(T2, section(T2, [XY.var(1), 0]), XY.var(0)) == XY.var(1)
    a = section(H, [1, 2, 3])
    assert bracket_sections(H, a, a).is_zero()


def test_pairing_is_a_determinant():
    H = heis()
    e1, e2, e3 = (H.e(i) for i in range(3))
    a1, a2, a3 = (H.ecov(i) for i in range(3))
    assert pairing(wedge(e1, e2), wedge(a1, a2)) == 1
    assert evaluate(wedge(e1, e2), [a2, a1]) == -1
    assert interior(e1, wedge(a1, a2)) == a2
    assert interior(e2, wedge(a1, a2)) == -a1
    pi, xi = -wedge(e1, e2), e3
    tri = wedge(xi, pi)
    for al, be, ga in [(a1, a2, a3), (a3, a1, a2), (a2, a3, a3)]:
        expand = (pairing(xi, al) * evaluate(pi, [be, ga]) - pairing(xi, be) * evaluate(pi, [al, ga])
                  + pairing(xi, ga) * evaluate(pi, [al, be]))
        assert evaluate(tri, [al, be, ga]) == expand
    with pytest.raises(VarianceMismatch):
        wedge(e1, a1)


def test_differential_examples():
    T = tangent(R1)
    x = R1.var(0)
    assert d_rho(T, Tensor.scalar(R1, 1, x ** 2)) == Tensor.from_vector(R1, [2 * x], FORM)
    H = heis()
    assert d_rho(H, H.ecov(2)) == -wedge(H.ecov(0), H.ecov(1))
    ab = Algebroid(Chart(()), 2)
    assert d_rho(ab, ab.ecov(0)).is_zero()


def test_lie_derivative_examples():
    H = heis()
    assert lie_derivative(H, H.e(0), H.e(1)) == H.e(2)
    assert lie_derivative(H, H.e(2), wedge(H.ecov(0), H.ecov(1))).is_zero()
    T = tangent(R1)
    phi = Tensor.scalar(R1, 1, R1.var(0) ** 3)
    assert lie_derivative(T, T.e(0), phi).value() == 3 * R1.var(0) ** 2


def test_cartan_examples():
    H = heis()
    assert cartan_defect(H, H.e(2), H.ecov(2)).is_zero()
    T = tangent(XY)
    assert cartan_defect(T, T.e(0), Tensor.from_vector(XY, [0, XY.var(0)], FORM)).is_zero()


def test_schouten_examples():
    H = heis()
    f, g = Tensor.scalar(H.chart, 3, 2, VECTOR), Tensor.scalar(H.chart, 3, 5, VECTOR)
    assert schouten(H, f, g).is_zero()
    pi = -wedge(H.e(0), H.e(1))
    assert evaluate(schouten(H, pi, pi), [H.ecov(0), H.ecov(1), H.ecov(2)]) == -2


def test_anchor_defect_and_classification():
    H = heis()
    assert classify(H) == Kind.LIE
    assert jacobiator_sections(H, 0, 1, 2).is_zero()
    x = R1.var(0)
    bad = Algebroid(R1, 2, [[1], [x]])
    # rho[e1,e2] - [d/dx, x d/dx] = 0 - d/dx
    assert anchor_defect(bad, 0, 1).components == (-R1.one(),)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", InconsistentAlgebroidWarning)
        assert classify(bad) == Kind.SKEW
    # [e1,e2]=e3, [e2,e3]=e1 closes into a Lie algebra after all
    lie = Algebroid(Chart(()), 3, structure={(0, 1): [0, 0, 1], (1, 2): [1, 0, 0]})
    assert jacobiator_sections(lie, 0, 1, 2).is_zero()
    skew = Algebroid(Chart(()), 3, structure={(0, 1): [0, 0, 1], (1, 2): [0, 1, 0]})
    assert jacobiator_sections(skew, 0, 1, 2) == -skew.e(2)
    assert classify(skew) == Kind.ALMOST_LIE


def test_inconsistent_classification_warns():
    x = R1.var(0)
    bad = Algebroid(R1, 2, [[1], [x]])
    with pytest.warns(InconsistentAlgebroidWarning):
        classify(bad)


def test_rank_mismatch():
    H = heis()
    with pytest.raises(RankMismatch):
        bracket_sections(H, H.e(0), frame_vector(tangent(R1), 0))


# --- properties on random instances ------------------------------------------------

def _forms(A):
    yield from (Tensor.scalar(A.chart, A.rank, v) for v in A.chart.gens())
    for i in range(A.rank):
        yield A.ecov(i)
    for i in range(A.rank):
        for j in range(i + 1, A.rank):
            yield wedge(A.ecov(i), A.ecov(j))


def d_squared_vanishes(A):
    return all(d_rho(A, d_rho(A, F)).is_zero() for F in _forms(A))


@settings(max_examples=25, deadline=None)
@given(seeds, st.sampled_from(["skew", "lie-algebra", "tangent-like"]), st.integers(1, 3))
def test_d_squared_iff_lie(seed, kind, rank):
    _, A = instance(seed, kind, rank)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", InconsistentAlgebroidWarning)
        lie = classify(A) == Kind.LIE
    assert d_squared_vanishes(A) == lie
    if lie or not any(anchor_defect(A, i, j).components for i in range(rank) for j in range(rank)):
        for v in A.chart.gens():
            assert d_rho(A, d_rho(A, Tensor.scalar(A.chart, rank, v))).is_zero()


@settings(max_examples=25, deadline=None)
@given(seeds, st.integers(1, 3), st.integers(0, 3))
def test_cartan_formula(seed, rank, degree):
    m, A = instance(seed, "skew", rank, chart_dim=2)
    X = m.tensor("X")
    F = m.tensor("F")
    for a in [X] + [A.e(i) for i in range(rank)]:
        assert cartan_defect(A, a, F).is_zero()


@settings(max_examples=20, deadline=None)
@given(seeds, st.integers(2, 3))
def test_schouten_graded_symmetry(seed, rank):
    m, A = instance(seed, "skew", rank)
    P, Q = m.tensor("P"), m.tensor("Q")
    k, l = P.degree, Q.degree
    assert schouten(A, P, Q) == schouten(A, Q, P) * (-1) ** (k * l)


@settings(max_examples=15, deadline=None)
@given(seeds, st.sampled_from(["lie-algebra", "tangent-like"]), st.integers(2, 3))
def test_graded_jacobi_on_lie_bases(seed, kind, rank):
    m, A = instance(seed, kind, rank)
    P, Q, R = m.tensor("P"), m.tensor("X"), m.tensor("Q")
    k, l, r = P.degree, Q.degree, R.degree
    total = (schouten(A, schouten(A, Q, R), P) * (-1) ** (k * l)
             + schouten(A, schouten(A, R, P), Q) * (-1) ** (l * r)
             + schouten(A, schouten(A, P, Q), R) * (-1) ** (r * k))
    assert total.is_zero()


@settings(max_examples=20, deadline=None)
@given(seeds, st.integers(1, 3))
def test_lie_derivative_duality(seed, rank):
    m, A = instance(seed, "skew", rank, chart_dim=2)
    X, Q = m.tensor("X"), m.tensor("Q")
    F = m.tensor("F")
    if F.degree != Q.degree:
        F = d_rho(A, F) if F.degree + 1 == Q.degree else None
    if F is None or F.degree != Q.degree:
        Q = Tensor.scalar(A.chart, rank, A.chart.one(), VECTOR)
        F = Tensor.scalar(A.chart, rank, A.chart.var(0))
    lhs = pairing(lie_derivative(A, X, Q), F)
    rhs = anchor_apply(A, X, pairing(Q, F)) - pairing(Q, lie_derivative(A, X, F))
    assert lhs == rhs
