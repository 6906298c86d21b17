"""Contravariant calculus of a bivector field on an algebroid."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .algebroid import (
    FORM, VECTOR, Algebroid, ChartVectorField, Kind, Tensor, VarianceMismatch,
    as_vector, classify, coframe, coframe_name, d_rho, evaluate, increasing_tuples,
    interior, lie_derivative, retag, schouten, tensor_from_function, wedge,
)
from .coeff import Scalar
from .identity import HypothesisFailed, Identity, tabulate
from .linalg import Degenerate, inverse, matvec


class NotLie(HypothesisFailed):
    def __init__(self, detail: str = "base algebroid is not Lie"):
        super().__init__("base_is_lie", detail)


HALF = Fraction(1, 2)


@dataclass(frozen=True)
class BivectorContext:
    base: Algebroid
    pi: Tensor

    def __post_init__(self):
        if self.pi.variance != VECTOR or self.pi.degree != 2:
            raise VarianceMismatch("pi must be a bivector")
        if self.pi.rank != self.base.rank:
            raise ValueError("bivector rank does not match the algebroid")

    @property
    def chart(self):
        return self.base.chart

    @property
    def rank(self):
        return self.base.rank


def _form(ctx, a) -> list[Scalar]:
    return as_vector(a, ctx.base.chart, ctx.base.rank)


def pi_matrix(pi: Tensor) -> list[list[Scalar]]:
    r = pi.rank
    return [[pi[(i, j)] for j in range(r)] for i in range(r)]


def sharp_vec(pi: Tensor, alpha) -> list[Scalar]:
    a = as_vector(alpha, pi.chart, pi.rank)
    r = pi.rank
    out = []
    for j in range(r):
        acc = pi.chart.zero()
        for i in range(r):
            if a[i]:
                p = pi[(i, j)]
                if p:
                    acc = acc + a[i] * p
        out.append(acc)
    return out


def sharp_pi(ctx: BivectorContext, alpha) -> Tensor:
    return Tensor.from_vector(ctx.chart, sharp_vec(ctx.pi, alpha))


def rho_pi(ctx: BivectorContext, alpha) -> ChartVectorField:
    return ctx.base.rho_field(sharp_vec(ctx.pi, alpha))


def koszul_bracket(ctx: BivectorContext, alpha, beta) -> Tensor:
    A = ctx.base
    a = Tensor.from_vector(A.chart, _form(ctx, alpha), FORM)
    b = Tensor.from_vector(A.chart, _form(ctx, beta), FORM)
    out = lie_derivative(A, sharp_vec(ctx.pi, a), b) - lie_derivative(A, sharp_vec(ctx.pi, b), a)
    return out - d_rho(A, ctx.pi(a, b))


def dual_algebroid(ctx: BivectorContext) -> Algebroid:
    A = ctx.base
    r = A.rank
    anchor = [A.rho_field(sharp_vec(ctx.pi, coframe(A, i))).components for i in range(r)]
    structure = {}
    for i, j in increasing_tuples(r, 2):
        structure[(i, j)] = koszul_bracket(ctx, coframe(A, i), coframe(A, j)).vec()
    dual = Algebroid(A.chart, r, anchor, structure, name=f"{A.name}*",
                     frame=[coframe_name(n) for n in A.frame])
    dual.is_dual = True
    return dual


def _cyclic(a, b, c):
    return ((a, b, c), (b, c, a), (c, a, b))


def schouten_via_cyclic(ctx: BivectorContext, alpha, beta, gamma) -> Scalar:
    A = ctx.base
    forms = [Tensor.from_vector(A.chart, _form(ctx, x), FORM) for x in (alpha, beta, gamma)]
    total = A.chart.zero()
    for a, b, c in _cyclic(*forms):
        total = total - A.rho_vec(sharp_vec(ctx.pi, a), ctx.pi(b, c))
        total = total + ctx.pi(koszul_bracket(ctx, a, b), c)
    return total


def schouten_cyclic_identity(ctx: BivectorContext) -> Identity:
    A = ctx.base
    PP = schouten(A, ctx.pi, ctx.pi)
    co = [coframe(A, i) for i in range(A.rank)]
    return tabulate("schouten_via_cyclic", increasing_tuples(A.rank, 3),
                    lambda i, j, k: (PP[(i, j, k)], schouten_via_cyclic(ctx, co[i], co[j], co[k])))


def dpi_equals_minus_bracket_defect(ctx: BivectorContext, Q) -> Tensor:
    A = ctx.base
    if not isinstance(Q, Tensor):
        Q = Tensor.scalar(A.chart, A.rank, Q, VECTOR)
    dual = dual_algebroid(ctx)
    dq = retag(d_rho(dual, retag(Q, FORM)), VECTOR)
    return dq + schouten(A, ctx.pi, Q)


def sharp_bracket_defect(ctx: BivectorContext, alpha, beta) -> list[Scalar]:
    """``sharp([alpha, beta]_pi) - [sharp alpha, sharp beta]``."""
    A = ctx.base
    lhs = sharp_vec(ctx.pi, koszul_bracket(ctx, alpha, beta))
    rhs = A.bracket_vec(sharp_vec(ctx.pi, alpha), sharp_vec(ctx.pi, beta))
    return [x - y for x, y in zip(lhs, rhs)]


def torsion_defect_pi(ctx: BivectorContext, alpha, beta, gamma) -> Scalar:
    lhs, rhs = _torsion_sides(ctx, alpha, beta, gamma, schouten(ctx.base, ctx.pi, ctx.pi))
    return lhs - rhs


def _torsion_sides(ctx, alpha, beta, gamma, PP):
    A = ctx.base
    g = _form(ctx, gamma)
    t = sharp_bracket_defect(ctx, alpha, beta)
    lhs = A.chart.zero()
    for x, y in zip(g, t):
        if x and y:
            lhs = lhs + x * y
    rhs = PP(alpha, beta, gamma) * HALF
    return lhs, rhs


def torsion_identity_pi(ctx: BivectorContext) -> Identity:
    A = ctx.base
    PP = schouten(A, ctx.pi, ctx.pi)
    co = [coframe(A, i) for i in range(A.rank)]
    return tabulate("torsion_pi", product(range(A.rank), repeat=3),
                    lambda i, j, k: _torsion_sides(ctx, co[i], co[j], co[k], PP))


@dataclass(frozen=True)
class JacobiatorComparison:
    direct: Tensor
    theorem_rhs: Tensor

    @property
    def defect(self) -> Tensor:
        return self.direct - self.theorem_rhs


def jacobiator_direct(bracket, alpha, beta, gamma) -> Tensor:
    total = None
    for a, b, c in _cyclic(alpha, beta, gamma):
        t = bracket(bracket(a, b), c)
        total = t if total is None else total + t
    return total


def jacobiator_pi(ctx: BivectorContext, alpha, beta, gamma) -> JacobiatorComparison:
    A = ctx.base
    if classify(A) != Kind.LIE:
        raise NotLie()
    forms = [Tensor.from_vector(A.chart, _form(ctx, x), FORM) for x in (alpha, beta, gamma)]
    br = lambda a, b: koszul_bracket(ctx, a, b)
    direct = jacobiator_direct(br, *forms)
    rhs = Tensor.zero(A.chart, A.rank, FORM, 1)
    for a, b, c in _cyclic(*forms):
        rhs = rhs + lie_derivative(A, sharp_bracket_defect(ctx, a, b), c)
        sa = sharp_vec(ctx.pi, a)
        inner = ctx.pi(lie_derivative(A, sa, b), c) + ctx.pi(b, lie_derivative(A, sa, c))
        rhs = rhs - d_rho(A, inner)
    return JacobiatorComparison(direct, rhs)


def is_poisson(ctx: BivectorContext) -> bool:
    return schouten(ctx.base, ctx.pi, ctx.pi).is_zero()


# --- nondegenerate 2-forms ----------------------------------------------------------

def form_matrix(omega: Tensor) -> list[list[Scalar]]:
    r = omega.rank
    return [[omega[(i, j)] for j in range(r)] for i in range(r)]


def flat_omega(omega: Tensor, a) -> Tensor:
    """``-i_a omega``."""
    return -interior(as_vector(a, omega.chart, omega.rank), omega)


def sharp_omega_matrix(omega: Tensor) -> list[list[Scalar]]:
    """Matrix of the inverse of ``a -> -i_a omega`` (columns are images of the coframe)."""
    if omega.variance != FORM or omega.degree != 2:
        raise VarianceMismatch("expected a 2-form")
    if omega.rank % 2:
        raise Degenerate("a 2-form on an odd-rank bundle is degenerate")
    # (-i_a omega)_j = sum_i a_i omega_ji, i.e. the matrix omega itself
    return inverse(form_matrix(omega))


def sharp_omega(omega: Tensor, alpha) -> Tensor:
    m = sharp_omega_matrix(omega)
    return Tensor.from_vector(omega.chart, matvec(m, as_vector(alpha, omega.chart, omega.rank)))


def pi_from_nondegenerate_form(A: Algebroid, omega: Tensor) -> BivectorContext:
    m = sharp_omega_matrix(omega)
    r = A.rank
    # pi(e^i, e^j) = e^j(sharp e^i) = m[j][i]
    pi = tensor_from_function(A.chart, r, VECTOR, 2, lambda I: m[I[1]][I[0]])
    return BivectorContext(A, pi)


def is_symplectic(A: Algebroid, omega: Tensor) -> bool:
    try:
        sharp_omega_matrix(omega)
    except Degenerate:
        return False
    return d_rho(A, omega).is_zero()


def symplectic_schouten_identity(A: Algebroid, omega: Tensor) -> Identity:
    """``[pi, pi](a, b, c) = 2 d omega(sharp a, sharp b, sharp c)`` on coframe triples."""
    ctx = pi_from_nondegenerate_form(A, omega)
    PP = schouten(A, ctx.pi, ctx.pi)
    dO = d_rho(A, omega)
    m = sharp_omega_matrix(omega)
    cols = [[m[i][j] for i in range(A.rank)] for j in range(A.rank)]
    return tabulate("symplectic_schouten", increasing_tuples(A.rank, 3),
                    lambda i, j, k: (PP[(i, j, k)], 2 * evaluate(dO, [cols[i], cols[j], cols[k]])))
