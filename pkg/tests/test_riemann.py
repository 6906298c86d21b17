from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from conftest import corpus_model
from lieroid.algebroid import Algebroid, Tensor, VECTOR
from lieroid.coeff import Chart
from lieroid.dsl.generate import random_instance
from lieroid.linalg import Degenerate
from lieroid.poisson import BivectorContext, pi_from_nondegenerate_form
from lieroid.riemann import (
    Metric, cometric, contravariant_levi_civita, covariant_derivative, dpi_djstar_identity,
    flat_g, is_djstar_zero, is_riemann_poisson, j_endomorphisms, kaehler_transport_identity,
    levi_civita, metricity_identity, sharp_g, torsion_identity,
)
from lieroid.poisson import is_poisson

seeds = st.integers(0, 10 ** 6)


def instance(seed, kind="skew", rank=3, chart_dim=1):
    m = random_instance(seed, {"kind": kind, "rank": rank, "chart_dim": chart_dim, "max_degree": 1})
    A = m.algebroid("A")
    return m, A, m.tensor("g")


def test_cometric_and_musical_maps():
    R1 = Chart(("x",))
    x = R1.var(0)
    g = Metric(R1, [[1, 0], [0, x ** 2 + 1]])
    assert cometric(g).matrix == ((R1.one(), R1.zero()), (R1.zero(), 1 / (x ** 2 + 1)))
    a = Tensor.from_vector(R1, [x, 3])
    assert sharp_g(g, flat_g(g, a)) == a
    with pytest.raises(Degenerate):
        Metric(R1, [[1, 1], [1, 1]])
    with pytest.raises(ValueError):
        Metric(R1, [[1, 2], [0, 1]])


def test_flat_and_heisenberg_connections():
    m = corpus_model("plane_kaehler")
    T, g = m.algebroid("T"), m.tensor("g")
    conn = levi_civita(T, g)
    assert not any(x for row in conn.gamma for v in row for x in v)
    H = corpus_model("heisenberg")
    A, gH = H.algebroid("H"), H.tensor("g")
    c = levi_civita(A, gH)
    assert c.gamma[0][1][2] == Fraction(1, 2)
    assert metricity_identity(c, gH).holds and torsion_identity(c).holds
    assert not any(covariant_derivative(c, gH).values())


def test_plane_kaehler_compatibility():
    m = corpus_model("plane_kaehler")
    T, om, g = m.algebroid("T"), m.tensor("omega"), m.tensor("g")
    ctx = pi_from_nondegenerate_form(T, om)
    J, Js = j_endomorphisms(ctx, g)
    one = T.chart.one()
    assert J.matrix == ((0 * one, -one), (one, 0 * one))
    assert is_riemann_poisson(ctx, g)
    assert kaehler_transport_identity(T, om, g).holds


def test_heisenberg_not_riemann_poisson():
    m = corpus_model("heisenberg")
    ctx = BivectorContext(m.algebroid("H"), m.tensor("pi"))
    assert not is_riemann_poisson(ctx, m.tensor("g"))
    zero = BivectorContext(m.algebroid("H"), Tensor.zero(ctx.chart, 3, VECTOR, 2))
    assert is_riemann_poisson(zero, m.tensor("g"))
    assert not any(x for row in contravariant_levi_civita(zero, m.tensor("g")).gamma for v in row for x in v)


@settings(max_examples=20, deadline=None)
@given(seeds, st.integers(1, 3), st.integers(0, 2))
def test_levi_civita_metric_and_torsion_free(seed, rank, n):
    m, A, g = instance(seed, rank=rank, chart_dim=n)
    c = levi_civita(A, g)
    assert metricity_identity(c, g).holds
    assert torsion_identity(c).holds
    ctx = BivectorContext(A, m.tensor("P"))
    D = contravariant_levi_civita(ctx, g)
    assert metricity_identity(D, cometric(g, D.base)).holds
    assert torsion_identity(D).holds


@settings(max_examples=10, deadline=None)
@given(seeds, st.integers(2, 3))
def test_levi_civita_is_unique(seed, rank):
    _, A, g = instance(seed, rank=rank)
    c = levi_civita(A, g)
    for i, j, k in product(range(rank), repeat=3):
        bent = c.perturbed(i, j, k, Fraction(1, 3))
        assert not (metricity_identity(bent, g).holds and torsion_identity(bent).holds)


@settings(max_examples=15, deadline=None)
@given(seeds, st.integers(2, 3))
def test_dpi_iff_djstar_and_riemann_poisson_implies_poisson(seed, rank):
    m, A, g = instance(seed, rank=rank)
    ctx = BivectorContext(A, m.tensor("P"))
    assert dpi_djstar_identity(ctx, g).holds
    rp = is_riemann_poisson(ctx, g)
    assert rp == is_djstar_zero(ctx, g)
    if rp:
        assert is_poisson(ctx)


@settings(max_examples=10, deadline=None)
@given(seeds)
def test_sharp_g_intertwines_j(seed):
    m, A, g = instance(seed, rank=3)
    ctx = BivectorContext(A, m.tensor("P"))
    J, Js = j_endomorphisms(ctx, g)
    for i in range(3):
        alpha = A.ecov(i)
        assert sharp_g(g, Js.apply(alpha.vec())).vec() == J.apply(sharp_g(g, alpha).vec()).vec()
