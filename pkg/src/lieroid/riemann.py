"""Metrics, Levi-Civita connections and Riemann-Poisson compatibility."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from .algebroid import (
    FORM, VECTOR, Algebroid, Endo, Tensor, as_vector, coframe, evaluate,
    increasing_tuples, sort_sign,
)
from .coeff import Chart, Scalar
from .identity import Identity, tabulate, zero_identity
from .linalg import Degenerate, det, inverse, is_symmetric, matmul, matvec, neg, transpose
from .poisson import BivectorContext, dual_algebroid, pi_matrix, sharp_omega_matrix, sharp_vec

HALF = Fraction(1, 2)


class BaseMismatch(ValueError):
    pass


class Metric:
    """Symmetric nondegenerate bilinear form on the fibres of ``base`` (or its dual)."""

    def __init__(self, chart: Chart, matrix: Sequence[Sequence], riemannian: bool = False,
                 base: Algebroid | None = None):
        r = len(matrix)
        m = [[chart.const(x) for x in row] for row in matrix]
        if any(len(row) != r for row in m):
            raise ValueError("metric matrix must be square")
        if not is_symmetric(m):
            raise ValueError("metric matrix is not symmetric")
        if not det(m):
            raise Degenerate("metric is degenerate")
        self.chart = chart
        self.rank = r
        self.matrix = tuple(tuple(row) for row in m)
        self.riemannian = riemannian
        self.base = base
        self._inv = None

    @property
    def inverse_matrix(self):
        if self._inv is None:
            self._inv = tuple(tuple(row) for row in inverse(self.matrix))
        return self._inv

    def __call__(self, a, b) -> Scalar:
        u = as_vector(a, self.chart, self.rank)
        v = as_vector(b, self.chart, self.rank)
        acc = self.chart.zero()
        for i, ui in enumerate(u):
            if not ui:
                continue
            row = self.matrix[i]
            for j, vj in enumerate(v):
                if vj and row[j]:
                    acc = acc + ui * row[j] * vj
        return acc

    def __eq__(self, other):
        return isinstance(other, Metric) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return "Metric([" + ", ".join("[" + ", ".join(map(str, r)) + "]" for r in self.matrix) + "])"


def cometric(g: Metric, base: Algebroid | None = None) -> Metric:
    return Metric(g.chart, g.inverse_matrix, g.riemannian, base)


def flat_g(g: Metric, a) -> Tensor:
    return Tensor.from_vector(g.chart, matvec(g.matrix, as_vector(a, g.chart, g.rank)), FORM)


def sharp_g(g: Metric, alpha) -> Tensor:
    return Tensor.from_vector(g.chart, matvec(g.inverse_matrix, as_vector(alpha, g.chart, g.rank)), VECTOR)


# --- connections ----------------------------------------------------------------------

@dataclass(frozen=True)
class Connection:
    """``nabla_{e_i} e_j = sum_k gamma[i][j][k] e_k`` on the frame of ``base``."""

    base: Algebroid
    gamma: tuple
    label: str = field(default="", compare=False)

    def nabla(self, a, b) -> list[Scalar]:
        A = self.base
        av = as_vector(a, A.chart, A.rank)
        bv = as_vector(b, A.chart, A.rank)
        out = [A.chart.zero()] * A.rank
        for i, ai in enumerate(av):
            if not ai:
                continue
            for j, bj in enumerate(bv):
                if not bj:
                    continue
                g = self.gamma[i][j]
                f = ai * bj
                for k in range(A.rank):
                    if g[k]:
                        out[k] = out[k] + f * g[k]
        if A.n:
            for j, bj in enumerate(bv):
                if bj:
                    out[j] = out[j] + A.rho_vec(av, bj)
        return out

    def torsion(self, a, b) -> list[Scalar]:
        A = self.base
        return [x - y - z for x, y, z in zip(self.nabla(a, b), self.nabla(b, a), A.bracket_vec(
            as_vector(a, A.chart, A.rank), as_vector(b, A.chart, A.rank)))]

    def perturbed(self, i: int, j: int, k: int, delta) -> "Connection":
        g = [[list(v) for v in row] for row in self.gamma]
        g[i][j][k] = g[i][j][k] + delta
        return Connection(self.base, tuple(tuple(tuple(v) for v in row) for row in g), self.label)


def _unit(chart: Chart, r: int, i: int) -> list[Scalar]:
    v = [chart.zero()] * r
    v[i] = chart.one()
    return v


def levi_civita(A: Algebroid, g: Metric) -> Connection:
    if g.rank != A.rank:
        raise BaseMismatch("metric rank does not match the algebroid")
    r, chart = A.rank, A.chart
    G = g.matrix
    Ginv = g.inverse_matrix

    def gc(i, j, k):
        # g([e_i, e_j], e_k)
        acc = chart.zero()
        for m, c in enumerate(A.c[i][j]):
            if c and G[m][k]:
                acc = acc + c * G[m][k]
        return acc

    gamma = []
    for i in range(r):
        row = []
        for j in range(r):
            K = []
            for k in range(r):
                v = chart.zero()
                if A.n:
                    v = A.rho_frame(i, G[j][k]) + A.rho_frame(j, G[i][k]) - A.rho_frame(k, G[i][j])
                v = v - gc(j, k, i) - gc(i, k, j) + gc(i, j, k)
                K.append(v * HALF)
            out = []
            for m in range(r):
                acc = chart.zero()
                for k in range(r):
                    if K[k] and Ginv[k][m]:
                        acc = acc + K[k] * Ginv[k][m]
                out.append(acc)
            row.append(tuple(out))
        gamma.append(tuple(row))
    return Connection(A, tuple(gamma), "levi-civita")


def metricity_identity(conn: Connection, g: Metric) -> Identity:
    """``rho(e_i) g(e_j, e_k) = g(nabla_i e_j, e_k) + g(e_j, nabla_i e_k)``."""
    A = conn.base
    r = A.rank
    e = [_unit(A.chart, r, i) for i in range(r)]

    def sides(i, j, k):
        lhs = A.rho_frame(i, g.matrix[j][k])
        rhs = g(conn.gamma[i][j], e[k]) + g(e[j], conn.gamma[i][k])
        return lhs, rhs

    return tabulate("metricity", product(range(r), repeat=3), sides)


def torsion_identity(conn: Connection) -> Identity:
    """``nabla_i e_j - nabla_j e_i = [e_i, e_j]``."""
    A = conn.base
    r = A.rank
    e = [_unit(A.chart, r, i) for i in range(r)]
    return tabulate("torsion_free", increasing_tuples(r, 2),
                    lambda i, j: ([x - y for x, y in zip(conn.gamma[i][j], conn.gamma[j][i])],
                                  list(A.c[i][j])))


def contravariant_levi_civita(ctx: BivectorContext, g: Metric) -> Connection:
    dual = dual_algebroid(ctx)
    return levi_civita(dual, cometric(g, dual))


def j_endomorphisms(ctx: BivectorContext, g: Metric) -> tuple[Endo, Endo]:
    """``g(J sharp_g a, sharp_g b) = pi(a, b)`` and ``g*(J* a, b) = pi(a, b)``."""
    P = pi_matrix(ctx.pi)
    G = [list(r) for r in g.matrix]
    J = neg(matmul(P, G))
    Jstar = neg(matmul(G, P))
    return Endo(g.chart, J, VECTOR), Endo(g.chart, Jstar, FORM)


# --- covariant derivatives -------------------------------------------------------------

class CovariantDerivative:
    """``(nabla_{e_a} T)(e_I)`` stored as ``table[(a,) + I]`` for increasing ``I``."""

    def __init__(self, conn: Connection, degree: int, table: dict, variance: str):
        self.conn = conn
        self.degree = degree
        self.table = table
        self.variance = variance

    def component(self, a: int, idx: Sequence[int]) -> Scalar:
        s, key = sort_sign(tuple(idx))
        chart = self.conn.base.chart
        if s == 0:
            return chart.zero()
        v = self.table.get((a,) + key, chart.zero())
        return v if s > 0 else -v

    def __call__(self, x, *ys) -> Scalar:
        A = self.conn.base
        xv = as_vector(x, A.chart, A.rank)
        total = A.chart.zero()
        for a, xa in enumerate(xv):
            if not xa:
                continue
            slice_ = Tensor(A.chart, A.rank, self.variance, self.degree,
                            {key[1:]: v for key, v in self.table.items() if key[0] == a})
            val = evaluate(slice_, ys)
            if val:
                total = total + xa * val
        return total

    def is_zero(self) -> bool:
        return not any(self.table.values())

    def nonzero(self) -> dict:
        return {k: v for k, v in self.table.items() if v}


def covariant_derivative(conn: Connection, T):
    A = conn.base
    if isinstance(T, Endo):
        return covariant_derivative_endo(conn, T)
    if isinstance(T, Metric):
        return _covariant_metric(conn, T)
    expected = VECTOR if A.is_dual else FORM
    if T.variance != expected or T.rank != A.rank or T.chart is not A.chart:
        raise BaseMismatch("tensor does not live on the connection's base as a covariant tensor")
    r, k = A.rank, T.degree
    table = {}
    for a in range(r):
        for I in increasing_tuples(r, k):
            v = T.comps.get(I)
            acc = A.rho_frame(a, v) if (v is not None and A.n) else A.chart.zero()
            for t in range(k):
                g = conn.gamma[a][I[t]]
                for m, gm in enumerate(g):
                    if gm:
                        idx = I[:t] + (m,) + I[t + 1:]
                        c = T[idx]
                        if c:
                            acc = acc - gm * c
            table[(a,) + I] = acc
    return CovariantDerivative(conn, k, table, T.variance)


def _covariant_metric(conn: Connection, g: Metric) -> dict:
    A = conn.base
    r = A.rank
    e = [_unit(A.chart, r, i) for i in range(r)]
    out = {}
    for a, j, k in product(range(r), repeat=3):
        out[(a, j, k)] = (A.rho_frame(a, g.matrix[j][k]) - g(conn.gamma[a][j], e[k])
                          - g(e[j], conn.gamma[a][k]))
    return out


def covariant_derivative_endo(conn: Connection, phi: Endo) -> list[list[list[Scalar]]]:
    """``out[a][j]`` = components of ``(nabla_{e_a} phi)(e_j)``."""
    A = conn.base
    r = A.rank
    cols = [[phi.matrix[i][j] for i in range(r)] for j in range(r)]
    out = []
    for a in range(r):
        ea = _unit(A.chart, r, a)
        row = []
        for j in range(r):
            first = conn.nabla(ea, cols[j])
            second = phi.apply(conn.gamma[a][j]).vec()
            row.append([x - y for x, y in zip(first, second)])
        out.append(row)
    return out


def endo_derivative_along(conn: Connection, nabla_phi, a, b) -> list[Scalar]:
    """``(nabla_a phi)(b)`` for arbitrary sections, given the frame table."""
    A = conn.base
    av = as_vector(a, A.chart, A.rank)
    bv = as_vector(b, A.chart, A.rank)
    out = [A.chart.zero()] * A.rank
    for i, ai in enumerate(av):
        if not ai:
            continue
        for j, bj in enumerate(bv):
            if not bj:
                continue
            f = ai * bj
            for k, v in enumerate(nabla_phi[i][j]):
                if v:
                    out[k] = out[k] + f * v
    return out


# --- compatibility -----------------------------------------------------------------------

def dpi_table(ctx: BivectorContext, g: Metric, conn: Connection | None = None) -> CovariantDerivative:
    conn = conn or contravariant_levi_civita(ctx, g)
    return covariant_derivative(conn, ctx.pi)


def is_riemann_poisson(ctx: BivectorContext, g: Metric) -> bool:
    return dpi_table(ctx, g).is_zero()


def djstar_table(ctx: BivectorContext, g: Metric, conn: Connection | None = None):
    conn = conn or contravariant_levi_civita(ctx, g)
    _, Jstar = j_endomorphisms(ctx, g)
    return covariant_derivative_endo(conn, Endo(g.chart, Jstar.matrix, VECTOR))


def is_djstar_zero(ctx: BivectorContext, g: Metric) -> bool:
    return all(not x for row in djstar_table(ctx, g) for v in row for x in v)


def dpi_djstar_identity(ctx: BivectorContext, g: Metric) -> Identity:
    """``g*(a, (D_c J*) b) = -(D_c pi)(a, b)`` on coframe triples."""
    conn = contravariant_levi_civita(ctx, g)
    D = dpi_table(ctx, g, conn)
    DJ = djstar_table(ctx, g, conn)
    gs = cometric(g)
    r = ctx.rank
    e = [_unit(g.chart, r, i) for i in range(r)]
    return tabulate("dpi_djstar", product(range(r), repeat=3),
                    lambda a, b, c: (gs(e[a], DJ[c][b]), -D.component(c, (a, b))))


def kaehler_transport_identity(A: Algebroid, omega: Tensor, g: Metric) -> Identity:
    """``D pi(a, b, c) = nabla omega(sharp a, sharp b, sharp c)`` for pi built from omega."""
    from .poisson import pi_from_nondegenerate_form
    ctx = pi_from_nondegenerate_form(A, omega)
    D = dpi_table(ctx, g)
    nO = covariant_derivative(levi_civita(A, g), omega)
    m = sharp_omega_matrix(omega)
    r = A.rank
    cols = [[m[i][j] for i in range(r)] for j in range(r)]
    return tabulate("kaehler_transport", product(range(r), repeat=3),
                    lambda a, b, c: (D.component(a, (b, c)), nO(cols[a], cols[b], cols[c])))


def connection_transport_identity(conn_dual: Connection, conn_base: Connection,
                                  sharp_cols: Sequence[Sequence[Scalar]], name: str) -> Identity:
    """``sharp(D_a b) = nabla_{sharp a}(sharp b)`` on coframe pairs; ``sharp_cols[i]`` is sharp of e^i."""
    r = conn_base.base.rank
    chart = conn_base.base.chart

    def sharp(v):
        out = [chart.zero()] * r
        for i, vi in enumerate(v):
            if vi:
                for k in range(r):
                    if sharp_cols[i][k]:
                        out[k] = out[k] + vi * sharp_cols[i][k]
        return out

    return tabulate(name, product(range(r), repeat=2),
                    lambda a, b: (sharp(conn_dual.gamma[a][b]),
                                  conn_base.nabla(sharp_cols[a], sharp_cols[b])))
