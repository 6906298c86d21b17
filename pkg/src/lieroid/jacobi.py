"""Jacobi pairs, the twisted dual skew algebroid and metric compatibility."""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import product

from .algebroid import (
    FORM, VECTOR, Algebroid, ChartVectorField, Kind, Tensor, as_vector, classify, coframe,
    coframe_name, d_rho, increasing_tuples, lie_derivative, schouten, wedge,
)
from .coeff import Scalar
from .identity import HypothesisFailed, Identity, tabulate, zero_identity
from .poisson import (
    BivectorContext, JacobiatorComparison, NotLie, jacobiator_direct, koszul_bracket, sharp_vec,
)
from .riemann import (
    Connection, Metric, cometric, covariant_derivative, covariant_derivative_endo, flat_g,
    j_endomorphisms, levi_civita,
)

HALF = Fraction(1, 2)


class MissingLambda(ValueError):
    pass


class NotJacobi(HypothesisFailed):
    def __init__(self, detail: str = "", witness=None):
        super().__init__("is_jacobi", detail, witness)


@dataclass(frozen=True)
class JacobiContext:
    base: Algebroid
    pi: Tensor
    xi: Tensor
    lam: Tensor | None = None
    lam_source: str | None = None   # "given" or "metric"

    def __post_init__(self):
        r = self.base.rank
        if self.pi.variance != VECTOR or self.pi.degree != 2 or self.pi.rank != r:
            raise ValueError("pi must be a bivector of the base rank")
        if self.xi.variance != VECTOR or self.xi.degree != 1 or self.xi.rank != r:
            raise ValueError("xi must be a section of the base")
        if self.lam is not None and (self.lam.variance != FORM or self.lam.degree != 1):
            raise ValueError("lambda must be a 1-form")

    @property
    def chart(self):
        return self.base.chart

    @property
    def rank(self):
        return self.base.rank

    @property
    def bivector(self) -> BivectorContext:
        return BivectorContext(self.base, self.pi)

    def with_lambda(self, lam: Tensor, source: str = "given") -> "JacobiContext":
        return replace(self, lam=lam, lam_source=source)

    def require_lambda(self) -> Tensor:
        if self.lam is None:
            raise MissingLambda("lambda has not been set on this Jacobi context")
        return self.lam


def _f(J, a) -> Tensor:
    if isinstance(a, Tensor):
        return a
    return Tensor.from_vector(J.chart, as_vector(a, J.chart, J.rank), FORM)


def jacobi_defects(J: JacobiContext) -> tuple[Tensor, Tensor]:
    """``([pi,pi] - 2 xi^pi, L_xi pi)``."""
    A = J.base
    PP = schouten(A, J.pi, J.pi)
    return PP - wedge(J.xi, J.pi).scale(2), lie_derivative(A, J.xi, J.pi)


def is_jacobi(J: JacobiContext) -> bool:
    a, b = jacobi_defects(J)
    return a.is_zero() and b.is_zero()


def jacobi_bracket(J: JacobiContext, phi, psi) -> Scalar:
    A = J.base
    phi, psi = A.chart.const(phi), A.chart.const(psi)
    xi = J.xi.vec()
    return (J.pi(d_rho(A, phi), d_rho(A, psi)) + phi * A.rho_vec(xi, psi)
            - psi * A.rho_vec(xi, phi))


def sharp_pi_xi_vec(J: JacobiContext, alpha) -> list[Scalar]:
    a = as_vector(alpha, J.chart, J.rank)
    xi = J.xi.vec()
    s = sharp_vec(J.pi, a)
    ax = J.chart.zero()
    for x, y in zip(a, xi):
        if x and y:
            ax = ax + x * y
    if ax:
        s = [si + ax * xk for si, xk in zip(s, xi)]
    return s


def sharp_pi_xi(J: JacobiContext, alpha) -> Tensor:
    return Tensor.from_vector(J.chart, sharp_pi_xi_vec(J, alpha))


def rho_pi_xi(J: JacobiContext, alpha) -> ChartVectorField:
    return J.base.rho_field(sharp_pi_xi_vec(J, alpha))


def _pair(J, alpha: Tensor, v) -> Scalar:
    acc = J.chart.zero()
    for x, y in zip(alpha.vec(), as_vector(v, J.chart, J.rank)):
        if x and y:
            acc = acc + x * y
    return acc


def lambda_bracket(J: JacobiContext, alpha, beta) -> Tensor:
    lam = J.require_lambda()
    A = J.base
    a, b = _f(J, alpha), _f(J, beta)
    out = koszul_bracket(J.bivector, a, b)
    ax, bx = _pair(J, a, J.xi), _pair(J, b, J.xi)
    if ax:
        out = out + (lie_derivative(A, J.xi, b) - b).scale(ax)
    if bx:
        out = out - (lie_derivative(A, J.xi, a) - a).scale(bx)
    p = J.pi(a, b)
    if p:
        out = out - lam.scale(p)
    return out


def triple_dual_algebroid(J: JacobiContext) -> Algebroid:
    J.require_lambda()
    A = J.base
    r = A.rank
    anchor = [A.rho_field(sharp_pi_xi_vec(J, coframe(A, i))).components for i in range(r)]
    structure = {(i, j): lambda_bracket(J, coframe(A, i), coframe(A, j)).vec()
                 for i, j in increasing_tuples(r, 2)}
    dual = Algebroid(A.chart, r, anchor, structure, name=f"{A.name}*",
                     frame=[coframe_name(n) for n in A.frame])
    dual.is_dual = True
    return dual


def triple_torsion_sides(J: JacobiContext, alpha, beta) -> tuple[list[Scalar], list[Scalar]]:
    A = J.base
    lam = J.require_lambda()
    a, b = _f(J, alpha), _f(J, beta)
    lhs = [x - y for x, y in zip(sharp_pi_xi_vec(J, lambda_bracket(J, a, b)),
                                 A.bracket_vec(sharp_pi_xi_vec(J, a), sharp_pi_xi_vec(J, b)))]
    p = J.pi(a, b)
    w = [x - y for x, y in zip(J.xi.vec(), sharp_pi_xi_vec(J, lam))]
    rhs = [p * wk for wk in w]
    return lhs, rhs


def _require_jacobi(J: JacobiContext):
    a, b = jacobi_defects(J)
    if not a.is_zero():
        raise NotJacobi("[pi,pi] != 2 xi^pi", a.first_nonzero())
    if not b.is_zero():
        raise NotJacobi("L_xi pi != 0", b.first_nonzero())


def triple_torsion_defect(J: JacobiContext, alpha, beta) -> Tensor:
    _require_jacobi(J)
    lhs, rhs = triple_torsion_sides(J, alpha, beta)
    return Tensor.from_vector(J.chart, [x - y for x, y in zip(lhs, rhs)])


def triple_torsion_identity(J: JacobiContext, check_hypothesis: bool = True) -> Identity:
    if check_hypothesis:
        _require_jacobi(J)
    co = [coframe(J.base, i) for i in range(J.rank)]
    return tabulate("triple_torsion", increasing_tuples(J.rank, 2),
                    lambda i, j: triple_torsion_sides(J, co[i], co[j]))


def twisted_almost_lie_criterion(J: JacobiContext) -> bool:
    """``xi - sharp_{pi,xi}(lambda)`` lies in the kernel of the anchor."""
    lam = J.require_lambda()
    w = [x - y for x, y in zip(J.xi.vec(), sharp_pi_xi_vec(J, lam))]
    return J.base.rho_field(w).is_zero()


def _cyclic(a, b, c):
    return ((a, b, c), (b, c, a), (c, a, b))


def _section_from_trivector(J, T: Tensor, a: Tensor, b: Tensor) -> list[Scalar]:
    # s with delta(s) = T(a, b, delta)
    return [T(a, b, coframe(J.base, k)) for k in range(J.rank)]


def triple_jacobiator_rhs(J: JacobiContext, alpha, beta, gamma) -> Tensor:
    A = J.base
    lam = J.require_lambda()
    bctx = J.bivector
    forms = [_f(J, x) for x in (alpha, beta, gamma)]
    PP = schouten(A, J.pi, J.pi)
    xiPi = wedge(J.xi, J.pi)
    half_defect = PP.scale(HALF) - xiPi
    twice_defect = xiPi.scale(2) - PP
    LxiPi = lie_derivative(A, J.xi, J.pi)
    Lxi = {id(f): lie_derivative(A, J.xi, f) for f in forms}
    br = lambda x, y: koszul_bracket(bctx, x, y)

    a, b, c = forms
    scalar_three = twice_defect(a, b, c)
    out = Tensor.zero(A.chart, A.rank, FORM, 1)
    coeff = scalar_three
    for x, y, z in _cyclic(*forms):
        out = out + lie_derivative(A, _section_from_trivector(J, half_defect, x, y), z)
        coeff = coeff + _pair(J, z, J.xi) * LxiPi(x, y)
    out = out + lam.scale(coeff)
    out = out + d_rho(A, scalar_three)
    for x, y, z in _cyclic(*forms):
        zx = _pair(J, z, J.xi)
        if zx:
            Lbr = (lie_derivative(A, J.xi, br(x, y)) - br(Lxi[id(x)], y) - br(x, Lxi[id(y)]))
            out = out - Lbr.scale(zx)
        out = out + (Lxi[id(z)] - z).scale(LxiPi(x, y))
        out = out + (Lxi[id(z)] - lambda_bracket(J, lam, z)).scale(J.pi(x, y))
    return out


def triple_jacobiator(J: JacobiContext, alpha, beta, gamma) -> JacobiatorComparison:
    if classify(J.base) != Kind.LIE:
        raise NotLie()
    forms = [_f(J, x) for x in (alpha, beta, gamma)]
    direct = jacobiator_direct(lambda x, y: lambda_bracket(J, x, y), *forms)
    return JacobiatorComparison(direct, triple_jacobiator_rhs(J, *forms))


def lie_corollary_condition(J: JacobiContext) -> bool:
    """``L_xi alpha = [lambda, alpha]^lambda`` for every coframe element."""
    lam = J.require_lambda()
    for i in range(J.rank):
        e = coframe(J.base, i)
        if lie_derivative(J.base, J.xi, e) != lambda_bracket(J, lam, e):
            return False
    return True


# --- metric triples ----------------------------------------------------------------------

def lambda_from_metric(J: JacobiContext, g: Metric) -> Tensor:
    Jend, _ = j_endomorphisms(J.bivector, g)
    xi = J.xi.vec()
    return flat_g(g, xi).scale(g(xi, xi)) - flat_g(g, Jend.apply(xi))


def with_metric_lambda(J: JacobiContext, g: Metric) -> JacobiContext:
    return J.with_lambda(lambda_from_metric(J, g), "metric")


def triple_levi_civita(J: JacobiContext, g: Metric) -> Connection:
    dual = triple_dual_algebroid(J)
    return levi_civita(dual, cometric(g, dual))


def _metric_ctx(J: JacobiContext, g: Metric) -> JacobiContext:
    if J.lam is None or J.lam_source != "metric":
        return with_metric_lambda(J, g)
    return J


def compatibility_identity(J: JacobiContext, g: Metric) -> Identity:
    """Triple compatibility on all coframe triples, ``DPi(a,b,c) = (D_a Pi)(b,c)``."""
    J = _metric_ctx(J, g)
    conn = triple_levi_civita(J, g)
    D = covariant_derivative(conn, J.pi)
    _, Jstar = j_endomorphisms(J.bivector, g)
    gs = cometric(g)
    r = J.rank
    xi = J.xi.vec()
    co = [coframe(J.base, i) for i in range(r)]
    jx = [_pair(J, Jstar.apply(co[i]), xi) for i in range(r)]   # (J* e^i)(xi)

    def sides(a, b, c):
        rhs = (xi[c] * J.pi[(a, b)] - xi[b] * J.pi[(a, c)]
               - jx[c] * gs.matrix[a][b] + jx[b] * gs.matrix[a][c]) * HALF
        return D.component(a, (b, c)), rhs

    return tabulate("triple_compatibility", product(range(r), repeat=3), sides)


def compatibility_endo_identity(J: JacobiContext, g: Metric, printed_sign: bool = False) -> Identity:
    """The same condition written through ``(D_a J*) b``.

    With ``printed_sign`` the term ``g*(a,b) J* flat(xi)`` enters with a minus sign;
    the default uses the sign that makes it equivalent to the trivector form.
    """
    J = _metric_ctx(J, g)
    conn = triple_levi_civita(J, g)
    _, Jstar = j_endomorphisms(J.bivector, g)
    DJ = covariant_derivative_endo(conn, Jstar)
    gs = cometric(g)
    r = J.rank
    xi = J.xi.vec()
    co = [coframe(J.base, i) for i in range(r)]
    flat_xi = flat_g(g, xi)
    jflat = Jstar.apply(flat_xi).vec()
    jcols = [Jstar.apply(co[i]).vec() for i in range(r)]
    jx = [_pair(J, Jstar.apply(co[i]), xi) for i in range(r)]
    s3 = -1 if printed_sign else 1

    def sides(a, b):
        p = J.pi[(a, b)]
        rhs = []
        for k in range(r):
            v = (p * flat_xi[k] - xi[b] * jcols[a][k] + s3 * gs.matrix[a][b] * jflat[k]
                 + (jx[b] if k == a else 0))
            rhs.append(v * HALF)
        return DJ[a][b], rhs

    return tabulate("triple_compatibility_endo", product(range(r), repeat=2), sides)


def is_triple_compatible(J: JacobiContext, g: Metric) -> bool:
    tri = compatibility_identity(J, g).holds
    endo = compatibility_endo_identity(J, g).holds
    if tri != endo:
        raise AssertionError("trivector and endomorphism forms of compatibility disagree")
    return tri


def cyclic_compatibility_identity(J: JacobiContext, g: Metric) -> Identity:
    """Cyclic sum of ``DPi`` against ``xi ^ pi`` on coframe triples."""
    J = _metric_ctx(J, g)
    conn = triple_levi_civita(J, g)
    D = covariant_derivative(conn, J.pi)
    w = wedge(J.xi, J.pi)
    return tabulate("cyclic_compatibility", increasing_tuples(J.rank, 3),
                    lambda a, b, c: (D.component(a, (b, c)) + D.component(b, (c, a))
                                     + D.component(c, (a, b)), w[(a, b, c)]))


@dataclass(frozen=True)
class CriterionReport:
    lie_xi_pi_zero: bool
    compatible: bool
    is_jacobi: bool
    wedge_zero: bool

    @property
    def hypotheses_hold(self) -> bool:
        return self.lie_xi_pi_zero and self.compatible

    @property
    def agree(self) -> bool:
        return self.is_jacobi == self.wedge_zero


def criterion_report(J: JacobiContext, g: Metric) -> CriterionReport:
    J = _metric_ctx(J, g)
    lam = J.lam
    sp = sharp_vec(J.pi, lam)
    w = [x - y for x, y in zip(J.xi.vec(), sp)]
    wedge_zero = wedge(Tensor.from_vector(J.chart, w), J.pi).is_zero()
    return CriterionReport(
        lie_xi_pi_zero=lie_derivative(J.base, J.xi, J.pi).is_zero(),
        compatible=is_triple_compatible(J, g),
        is_jacobi=is_jacobi(J),
        wedge_zero=wedge_zero,
    )


def compatibility_jacobi_criterion(J: JacobiContext, g: Metric) -> tuple[bool, bool]:
    J = _metric_ctx(J, g)
    rep = criterion_report(J, g)
    if not rep.lie_xi_pi_zero:
        raise HypothesisFailed("lie_xi_pi_zero", "L_xi pi does not vanish",
                               lie_derivative(J.base, J.xi, J.pi).first_nonzero())
    if not rep.compatible:
        raise HypothesisFailed("triple_compatible", "the triple (pi, xi, g) is not compatible",
                               compatibility_identity(J, g).witness())
    return rep.is_jacobi, rep.wedge_zero
