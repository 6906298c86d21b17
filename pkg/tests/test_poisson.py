from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from conftest import corpus_model
from lieroid.algebroid import FORM, VECTOR, Kind, Tensor, anchor_defect, classify, d_rho, evaluate, schouten, wedge
from lieroid.linalg import Degenerate
from lieroid.poisson import (
    BivectorContext, NotLie, dpi_equals_minus_bracket_defect, dual_algebroid, is_poisson,
    is_symplectic, jacobiator_pi, koszul_bracket, pi_from_nondegenerate_form, sharp_pi,
    schouten_via_cyclic, symplectic_schouten_identity, torsion_defect_pi,
)
from lieroid.dsl.generate import random_instance

seeds = st.integers(0, 10 ** 6)


@pytest.fixture
def heis():
    m = corpus_model("heisenberg")
    H = m.algebroid("H")
    return H, BivectorContext(H, m.tensor("pi"))


@pytest.fixture
def plane():
    m = corpus_model("plane_kaehler")
    return m.algebroid("T"), m.tensor("omega")


def coframes(A):
    return [A.ecov(i) for i in range(A.rank)]


def test_heisenberg_values(heis):
    H, ctx = heis
    a1, a2, a3 = coframes(H)
    assert sharp_pi(ctx, a1) == -H.e(1)
    assert koszul_bracket(ctx, a1, a3) == -a1
    assert koszul_bracket(ctx, a2, a2).is_zero()
    assert schouten_via_cyclic(ctx, a1, a2, a3) == -2
    assert evaluate(schouten(H, ctx.pi, ctx.pi), [a1, a2, a3]) == -2
    assert torsion_defect_pi(ctx, a1, a2, a3) == 0
    assert not is_poisson(ctx)
    D = dual_algebroid(ctx)
    assert D.c[0][2] == (-D.chart.one(), D.chart.zero(), D.chart.zero())
    assert D.c[1][2] == (D.chart.zero(), -D.chart.one(), D.chart.zero())
    assert not any(D.c[0][1])
    for Q in (Tensor.scalar(H.chart, 3, 4, VECTOR), ctx.pi, H.e(2)):
        assert dpi_equals_minus_bracket_defect(ctx, Q).is_zero()
    cmp = jacobiator_pi(ctx, a1, a2, a3)
    assert cmp.defect.is_zero()


def test_zero_bivector(heis):
    H, _ = heis
    ctx = BivectorContext(H, Tensor.zero(H.chart, 3, VECTOR, 2))
    a1, a2, a3 = coframes(H)
    assert sharp_pi(ctx, a1).is_zero()
    assert koszul_bracket(ctx, a1, a2).is_zero()
    assert schouten_via_cyclic(ctx, a1, a2, a3) == 0
    assert is_poisson(ctx)
    D = dual_algebroid(ctx)
    assert D.zero_anchor() and not any(x for p in D.c for row in p for x in row)


def test_symplectic_plane(plane):
    T, om = plane
    assert is_symplectic(T, om)
    ctx = pi_from_nondegenerate_form(T, om)
    a1, a2 = coframes(T)
    # flat is -i_a omega, so sharp e^1 = +e2 and pi(e^1, e^2) = +1
    assert evaluate(ctx.pi, [a1, a2]) == 1
    assert sharp_pi(ctx, a1) == T.e(1)
    assert is_poisson(ctx)
    assert classify(dual_algebroid(ctx)) == Kind.LIE
    assert jacobiator_pi(ctx, a1, a2, a1).direct.is_zero()
    assert symplectic_schouten_identity(T, om).holds


def test_degenerate_forms(heis):
    H, _ = heis
    with pytest.raises(Degenerate):
        pi_from_nondegenerate_form(H, -wedge(H.ecov(0), H.ecov(1)))
    assert not is_symplectic(H, -wedge(H.ecov(0), H.ecov(1)))


def test_jacobiator_needs_lie_base():
    m = random_instance(3, {"kind": "skew", "rank": 3})
    A = m.algebroid("A")
    if classify(A) == Kind.LIE:
        pytest.skip("random skew instance happens to be Lie")
    ctx = BivectorContext(A, m.tensor("P"))
    with pytest.raises(NotLie):
        jacobiator_pi(ctx, *coframes(A))


def _ctx(seed, kind="skew", rank=3, chart_dim=1, max_degree=1):
    m = random_instance(seed, {"kind": kind, "rank": rank, "chart_dim": chart_dim,
                               "max_degree": max_degree})
    A = m.algebroid("A")
    return m, A, BivectorContext(A, m.tensor("P"))


@settings(max_examples=20, deadline=None)
@given(seeds, st.integers(2, 3))
def test_torsion_and_cyclic_identity(seed, rank):
    m, A, ctx = _ctx(seed, rank=rank)
    PP = schouten(A, ctx.pi, ctx.pi)
    cf = coframes(A)
    for i, j, k in product(range(rank), repeat=3):
        assert torsion_defect_pi(ctx, cf[i], cf[j], cf[k]) == 0
        assert schouten_via_cyclic(ctx, cf[i], cf[j], cf[k]) == evaluate(PP, [cf[i], cf[j], cf[k]])
    assert dpi_equals_minus_bracket_defect(ctx, m.tensor("Q")).is_zero()


@settings(max_examples=15, deadline=None)
@given(seeds, st.sampled_from(["lie-algebra", "tangent-like"]), st.integers(2, 3))
def test_jacobiator_theorem_on_lie_bases(seed, kind, rank):
    _, A, ctx = _ctx(seed, kind, rank)
    cf = coframes(A)
    for i, j, k in product(range(rank), repeat=3):
        assert jacobiator_pi(ctx, cf[i], cf[j], cf[k]).defect.is_zero()
    if is_poisson(ctx):
        assert classify(dual_algebroid(ctx)) == Kind.LIE


def test_poisson_on_almost_lie_base():
    from lieroid.algebroid import Algebroid
    from lieroid.coeff import Chart
    B = Algebroid(Chart(()), 3, structure={(0, 1): [0, 0, 1], (1, 2): [0, 1, 0]})
    assert classify(B) == Kind.ALMOST_LIE
    ctx = BivectorContext(B, wedge(B.e(0), B.e(2)))
    assert is_poisson(ctx)
    D = dual_algebroid(ctx)
    assert all(anchor_defect(D, i, j).is_zero() for i in range(3) for j in range(3))
    assert classify(D) in (Kind.ALMOST_LIE, Kind.LIE)
