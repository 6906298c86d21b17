"""Cosymplectic, contact, lcs and almost contact metric structures."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .algebroid import (
    FORM, VECTOR, Algebroid, Endo, Kind, Tensor, as_vector, classify, coframe, d_rho,
    evaluate, frame_vector, increasing_tuples, lie_derivative, schouten, tensor_from_function,
    wedge, wedge_power,
)
from .coeff import Scalar
from .identity import HypothesisFailed, Identity, tabulate
from .jacobi import (
    JacobiContext, compatibility_identity, is_jacobi, sharp_pi_xi_vec, triple_levi_civita,
    with_metric_lambda, is_triple_compatible,
)
from .linalg import Degenerate, inverse, matmul, matvec, neg, solve, transpose
from .poisson import form_matrix, sharp_omega_matrix
from .riemann import (
    Metric, cometric, connection_transport_identity, covariant_derivative,
    covariant_derivative_endo, endo_derivative_along, j_endomorphisms, levi_civita,
)

HALF = Fraction(1, 2)


class EvenRank(ValueError):
    pass


class DegenerateTopForm(ValueError):
    pass


class NotContact(ValueError):
    pass


class AxiomViolation(HypothesisFailed):
    def __init__(self, axiom: str, witness=None):
        self.axiom = axiom
        super().__init__(axiom, "almost contact metric axiom violated", witness)


class NotAssociated(HypothesisFailed):
    def __init__(self, axiom: str, witness=None):
        self.axiom = axiom
        super().__init__("metric_associated", f"solved structure violates {axiom}", witness)


def _unit(A, i):
    v = [A.chart.zero()] * A.rank
    v[i] = A.chart.one()
    return v


def _columns(m):
    r = len(m)
    return [[m[i][j] for i in range(r)] for j in range(r)]


def _require_odd(A: Algebroid):
    if A.rank % 2 == 0:
        raise EvenRank(f"rank {A.rank} is even")


# --- almost cosymplectic ---------------------------------------------------------------

@dataclass(frozen=True)
class CosymplecticPair:
    base: Algebroid
    omega: Tensor
    eta: Tensor
    reeb: Tensor
    fundamental_pi: Tensor
    flat_matrix: tuple     # flat(a) = flat_matrix @ a
    sharp_matrix: tuple

    @property
    def jacobi(self) -> JacobiContext:
        return JacobiContext(self.base, self.fundamental_pi, self.reeb)

    def flat(self, a) -> list[Scalar]:
        return matvec(self.flat_matrix, as_vector(a, self.base.chart, self.base.rank))

    def sharp(self, alpha) -> list[Scalar]:
        return matvec(self.sharp_matrix, as_vector(alpha, self.base.chart, self.base.rank))


def top_form(A: Algebroid, omega: Tensor, eta: Tensor) -> Scalar:
    m = (A.rank - 1) // 2
    top = wedge(eta, wedge_power(omega, m))
    return top[tuple(range(A.rank))]


def make_cosymplectic(A: Algebroid, omega: Tensor, eta: Tensor) -> CosymplecticPair:
    _require_odd(A)
    if not top_form(A, omega, eta):
        raise DegenerateTopForm("eta ^ omega^m vanishes")
    r = A.rank
    W = form_matrix(omega)
    ev = eta.vec()
    # (-i_a omega + eta(a) eta)_j = sum_i (omega_ji + eta_j eta_i) a_i
    M = [[-W[i][j] + ev[j] * ev[i] for i in range(r)] for j in range(r)]
    S = inverse(M)
    reeb = solve(M, ev)
    cols = _columns(S)
    pi = tensor_from_function(A.chart, r, VECTOR, 2, lambda I: omega(cols[I[0]], cols[I[1]]))
    return CosymplecticPair(A, omega, eta, Tensor.from_vector(A.chart, reeb), pi,
                            tuple(tuple(row) for row in M), tuple(tuple(row) for row in S))


def reeb_identity(P: CosymplecticPair) -> Identity:
    """``i_xi omega = 0`` and ``eta(xi) = 1``."""
    A = P.base
    xi = P.reeb.vec()
    lhs = {("i_xi_omega", j): P.omega(xi, _unit(A, j)) for j in range(A.rank)}
    lhs[("eta_xi",)] = P.eta(xi)
    rhs = {("eta_xi",): A.chart.one()}
    return Identity("reeb", lhs, rhs)


def sharp_lemma_identity(P: CosymplecticPair) -> Identity:
    """``beta(sharp_{pi,xi} alpha) = beta(sharp_{omega,eta} alpha)`` on coframe pairs."""
    J = P.jacobi
    A = P.base
    return tabulate("sharp_pi_xi_equals_sharp_omega_eta", product(range(A.rank), repeat=2),
                    lambda i, j: (sharp_pi_xi_vec(J, coframe(A, i))[j], P.sharp_matrix[j][i]))


def cosymplectic_identity_defects(P: CosymplecticPair) -> tuple[Identity, Identity]:
    A = P.base
    r = A.rank
    PP = schouten(A, P.fundamental_pi, P.fundamental_pi)
    xi = P.reeb
    lhs3 = PP.scale(HALF) - wedge(xi, P.fundamental_pi)
    dO = d_rho(A, P.omega)
    de = d_rho(A, P.eta)
    LO = lie_derivative(A, xi, P.omega)
    Le = lie_derivative(A, xi, P.eta)
    rhs3 = dO + wedge(P.eta, de - P.omega - LO)
    LPi = lie_derivative(A, xi, P.fundamental_pi)
    rhs2 = wedge(P.eta, Le) - LO
    flats = _columns(P.flat_matrix)
    t1 = tabulate("cosymplectic_item1", increasing_tuples(r, 3),
                  lambda i, j, k: (lhs3(flats[i], flats[j], flats[k]), rhs3[(i, j, k)]))
    t2 = tabulate("cosymplectic_item2", increasing_tuples(r, 2),
                  lambda i, j: (LPi(flats[i], flats[j]), rhs2[(i, j)]))
    return t1, t2


def is_contact(A: Algebroid, eta: Tensor) -> bool:
    _require_odd(A)
    return bool(top_form(A, d_rho(A, eta), eta))


def contact_pair(A: Algebroid, eta: Tensor) -> CosymplecticPair:
    if not is_contact(A, eta):
        raise NotContact("eta ^ (d eta)^m vanishes")
    return make_cosymplectic(A, d_rho(A, eta), eta)


def contact_to_jacobi(A: Algebroid, eta: Tensor) -> JacobiContext:
    J = contact_pair(A, eta).jacobi
    if classify(A) == Kind.LIE and not is_jacobi(J):
        raise AssertionError("contact fundamental pair on a Lie algebroid is not Jacobi")
    return J


# --- locally conformally symplectic -------------------------------------------------------

@dataclass(frozen=True)
class LcsPair:
    base: Algebroid
    omega: Tensor
    theta: Tensor
    pi: Tensor
    xi: Tensor
    sharp_matrix: tuple    # sharp_omega; flat_omega is the matrix of omega

    @property
    def jacobi(self) -> JacobiContext:
        return JacobiContext(self.base, self.pi, self.xi)

    @property
    def flat_matrix(self):
        return form_matrix(self.omega)


def make_lcs(A: Algebroid, omega: Tensor, theta: Tensor) -> LcsPair:
    S = sharp_omega_matrix(omega)
    r = A.rank
    cols = _columns(S)
    pi = tensor_from_function(A.chart, r, VECTOR, 2, lambda I: omega(cols[I[0]], cols[I[1]]))
    xi = Tensor.from_vector(A.chart, matvec(S, theta.vec()))
    return LcsPair(A, omega, theta, pi, xi, tuple(tuple(row) for row in S))


def lcs_defects(P: LcsPair) -> tuple[Tensor, Tensor]:
    A = P.base
    return d_rho(A, P.omega) + wedge(P.theta, P.omega), d_rho(A, P.theta)


def is_lcs(P: LcsPair) -> bool:
    a, b = lcs_defects(P)
    return a.is_zero() and b.is_zero()


def lcs_identity_defects(P: LcsPair) -> tuple[Identity, Identity]:
    A = P.base
    r = A.rank
    PP = schouten(A, P.pi, P.pi)
    lhs3 = PP.scale(HALF) - wedge(P.xi, P.pi)
    rhs3 = d_rho(A, P.omega) + wedge(P.theta, P.omega)
    LPi = lie_derivative(A, P.xi, P.pi)
    LO = lie_derivative(A, P.xi, P.omega)
    flats = _columns(P.flat_matrix)
    t1 = tabulate("lcs_item1", increasing_tuples(r, 3),
                  lambda i, j, k: (lhs3(flats[i], flats[j], flats[k]), rhs3[(i, j, k)]))
    t2 = tabulate("lcs_item2", increasing_tuples(r, 2),
                  lambda i, j: (LPi(flats[i], flats[j]), -LO[(i, j)]))
    return t1, t2


# --- almost contact metric ------------------------------------------------------------------

@dataclass(frozen=True)
class AlmostContactMetric:
    base: Algebroid
    phi: Endo
    xi: Tensor
    eta: Tensor
    g: Metric


def acm_axioms(A: Algebroid, phi: Endo, xi: Tensor, eta: Tensor, g: Metric) -> dict[str, Identity]:
    r = A.rank
    ch = A.chart
    xv, ev = xi.vec(), eta.vec()
    Phi = [list(row) for row in phi.matrix]
    P2 = matmul(Phi, Phi)
    G = [list(row) for row in g.matrix]
    iso = matmul(matmul(transpose(Phi), G), Phi)
    return {
        "eta(xi)=1": Identity("eta(xi)=1", {(): eta(xv)}, {(): ch.one()}),
        "phi^2=-id+eta(x)xi": tabulate(
            "phi^2=-id+eta(x)xi", product(range(r), repeat=2),
            lambda i, j: (P2[i][j], (-ch.one() if i == j else ch.zero()) + xv[i] * ev[j])),
        "g(phi a,phi b)=g(a,b)-eta(a)eta(b)": tabulate(
            "g(phi a,phi b)=g(a,b)-eta(a)eta(b)", product(range(r), repeat=2),
            lambda i, j: (iso[i][j], G[i][j] - ev[i] * ev[j])),
    }


def acm_derived_identities(S: AlmostContactMetric) -> dict[str, Identity]:
    A, g = S.base, S.g
    r = A.rank
    ch = A.chart
    xv, ev = S.xi.vec(), S.eta.vec()
    phixi = S.phi.apply(xv).vec()
    etaphi = [S.eta(S.phi.apply(_unit(A, j))) for j in range(r)]
    flat = matvec(g.matrix, xv)
    return {
        "phi(xi)=0": tabulate("phi(xi)=0", [(k,) for k in range(r)], lambda k: (phixi[k], ch.zero())),
        "eta o phi=0": tabulate("eta o phi=0", [(k,) for k in range(r)], lambda k: (etaphi[k], ch.zero())),
        "flat_g(xi)=eta": tabulate("flat_g(xi)=eta", [(k,) for k in range(r)], lambda k: (flat[k], ev[k])),
        "g(xi,xi)=1": Identity("g(xi,xi)=1", {(): g(xv, xv)}, {(): ch.one()}),
        "g(phi a,b)=-g(a,phi b)": tabulate(
            "g(phi a,b)=-g(a,phi b)", product(range(r), repeat=2),
            lambda i, j: (g(S.phi.apply(_unit(A, i)), _unit(A, j)),
                          -g(_unit(A, i), S.phi.apply(_unit(A, j))))),
    }


def make_acm(A: Algebroid, phi: Endo, xi: Tensor, eta: Tensor, g: Metric) -> AlmostContactMetric:
    for name, ident in acm_axioms(A, phi, xi, eta, g).items():
        if not ident.holds:
            raise AxiomViolation(name, ident.witness())
    return AlmostContactMetric(A, phi, xi, eta, g)


def acm_fundamental_pi(S: AlmostContactMetric) -> Tensor:
    A = S.base
    m = matmul([list(r) for r in S.phi.matrix], [list(r) for r in S.g.inverse_matrix])
    return tensor_from_function(A.chart, A.rank, VECTOR, 2, lambda I: m[I[0]][I[1]])


def acm_jacobi(S: AlmostContactMetric) -> JacobiContext:
    return JacobiContext(S.base, acm_fundamental_pi(S), S.xi)


def acm_isometry_identity(S: AlmostContactMetric) -> Identity:
    """``g(sharp_{pi,xi} a, sharp_{pi,xi} b) = g*(a, b)`` on coframe pairs."""
    return _sharp_isometry_identity(acm_jacobi(S), S.g)


def _sharp_isometry_identity(J: JacobiContext, g: Metric, name="sharp_isometry") -> Identity:
    A = J.base
    cols = [sharp_pi_xi_vec(J, coframe(A, i)) for i in range(A.rank)]
    gi = g.inverse_matrix
    return tabulate(name, product(range(A.rank), repeat=2),
                    lambda i, j: (g(cols[i], cols[j]), gi[i][j]))


def make_contact_riemannian(A: Algebroid, eta: Tensor, g: Metric):
    pair = contact_pair(A, eta)
    D = form_matrix(pair.omega)
    # g(a, phi b) = d eta(a, b)  =>  G phi = D
    Phi = matmul([list(r) for r in g.inverse_matrix], D)
    phi = Endo(A.chart, Phi, VECTOR)
    try:
        acm = make_acm(A, phi, pair.reeb, eta, g)
    except AxiomViolation as exc:
        raise NotAssociated(exc.axiom, exc.witness) from None
    return acm, phi


def kenmotsu_identity(S: AlmostContactMetric) -> Identity:
    A, g = S.base, S.g
    r = A.rank
    conn = levi_civita(A, g)
    nphi = covariant_derivative_endo(conn, S.phi)
    xv = S.xi.vec()
    cols = [S.phi.apply(_unit(A, i)).vec() for i in range(r)]

    def sides(a, b):
        gab = g(cols[a], _unit(A, b))
        eb = S.eta[(b,)]
        rhs = [(gab * xv[k] - eb * cols[a][k]) * HALF for k in range(r)]
        return nphi[a][b], rhs

    return tabulate("half_kenmotsu", product(range(r), repeat=2), sides)


def is_half_kenmotsu(S: AlmostContactMetric) -> bool:
    return kenmotsu_identity(S).holds


def sharp_morphism_identity(J: JacobiContext) -> Identity:
    """``sharp_{pi,xi}[a, b]^lambda = [sharp a, sharp b]`` on coframe pairs."""
    from .jacobi import lambda_bracket
    A = J.base
    co = [coframe(A, i) for i in range(A.rank)]
    return tabulate("sharp_morphism", increasing_tuples(A.rank, 2),
                    lambda i, j: (sharp_pi_xi_vec(J, lambda_bracket(J, co[i], co[j])),
                                  A.bracket_vec(sharp_pi_xi_vec(J, co[i]), sharp_pi_xi_vec(J, co[j]))))


def triple_transport_identity(J: JacobiContext, g: Metric) -> Identity:
    """``sharp(D_a b) = nabla_{sharp a}(sharp b)`` for the metric triple connection."""
    Jm = with_metric_lambda(J, g)
    A = J.base
    cols = [sharp_pi_xi_vec(Jm, coframe(A, i)) for i in range(A.rank)]
    return connection_transport_identity(triple_levi_civita(Jm, g), levi_civita(A, g), cols,
                                         "triple_transport")


def phi_transport_identity(S: AlmostContactMetric) -> Identity:
    """``sharp((D_a J*) b) = -(nabla_{sharp a} phi)(sharp b)`` on coframe pairs."""
    A, g = S.base, S.g
    r = A.rank
    J = with_metric_lambda(acm_jacobi(S), g)
    conn = triple_levi_civita(J, g)
    _, Jstar = j_endomorphisms(J.bivector, g)
    DJ = covariant_derivative_endo(conn, Jstar)
    base_conn = levi_civita(A, g)
    nphi = covariant_derivative_endo(base_conn, S.phi)
    cols = [sharp_pi_xi_vec(J, coframe(A, i)) for i in range(r)]
    return tabulate("phi_transport", product(range(r), repeat=2),
                    lambda a, b: (sharp_pi_xi_vec(J, DJ[a][b]),
                                  [-x for x in endo_derivative_along(base_conn, nphi, cols[a], cols[b])]))


# --- metrics and lcs ----------------------------------------------------------------------

def lcs_isometry_identity(P: LcsPair, g: Metric) -> Identity:
    return _sharp_isometry_identity(P.jacobi, g, "lcs_isometry")


def hermitian_identity(P: LcsPair, g: Metric) -> Identity:
    """``g*(J* a, J* b) = g*(a, b)``."""
    _, Jstar = j_endomorphisms(P.jacobi.bivector, g)
    A = P.base
    gs = cometric(g)
    cols = [Jstar.apply(coframe(A, i)).vec() for i in range(A.rank)]
    return tabulate("hermitian", product(range(A.rank), repeat=2),
                    lambda i, j: (gs(cols[i], cols[j]), gs.matrix[i][j]))


def omega_association_identity(P: LcsPair, g: Metric) -> Identity:
    """``omega(a, b) = g(J a, b)`` and ``g(J a, J b) = g(a, b)`` on frame pairs."""
    Jend, _ = j_endomorphisms(P.jacobi.bivector, g)
    A = P.base
    r = A.rank
    jc = [Jend.apply(_unit(A, i)).vec() for i in range(r)]
    lhs, rhs = {}, {}
    for i, j in product(range(r), repeat=2):
        lhs[("omega", i, j)] = P.omega[(i, j)]
        rhs[("omega", i, j)] = g(jc[i], _unit(A, j))
        lhs[("orth", i, j)] = g(jc[i], jc[j])
        rhs[("orth", i, j)] = g.matrix[i][j]
    return Identity("omega_associated", lhs, rhs)


def is_metric_associated_lcs(P: LcsPair, g: Metric) -> bool:
    iso = lcs_isometry_identity(P, g).holds
    if P.theta.is_zero():
        herm = hermitian_identity(P, g).holds
        if herm != iso:
            raise AssertionError("isometry and Hermitian forms of association disagree")
    return iso


def conformal_identity(P: LcsPair, g: Metric) -> Identity:
    """``Lambda_theta = lhs - rhs`` on frame triples."""
    A = P.base
    r = A.rank
    nO = covariant_derivative(levi_civita(A, g), P.omega)
    th = P.theta.vec()
    st = matvec(g.inverse_matrix, th)
    O = P.omega
    e = [_unit(A, i) for i in range(r)]
    Ost = [O(st, e[c]) for c in range(r)]

    def sides(a, b, c):
        rhs = (th[b] * O[(a, c)] - th[c] * O[(a, b)]) * HALF
        rhs = rhs - (g.matrix[a][b] * Ost[c] - g.matrix[a][c] * Ost[b]) * HALF
        return nO.component(a, (b, c)), rhs

    return tabulate("conformal_defect", product(range(r), repeat=3), sides)


def conformal_defect(P: LcsPair, g: Metric) -> dict:
    return conformal_identity(P, g).defect()


@dataclass(frozen=True)
class LckReport:
    is_lcs: bool
    metric_associated_lcs: bool
    metric_associated_omega: bool
    theta_exact: bool | None
    compatible: bool
    conformally_kaehler: bool
    j_sharp_lemma: bool
    transport_corollary: bool

    @property
    def agree(self) -> bool:
        return self.compatible == self.conformally_kaehler

    def failed_hypothesis(self) -> str | None:
        if not self.is_lcs:
            return "is_lcs"
        if not self.metric_associated_omega:
            return "metric_associated_omega"
        if self.theta_exact is False:
            return "theta_exact"
        return None


def j_sharp_lemma_identity(P: LcsPair, g: Metric) -> Identity:
    """``J o sharp_{pi,xi} = sharp_{pi,xi} o J*`` on the coframe."""
    J = P.jacobi
    Jend, Jstar = j_endomorphisms(J.bivector, g)
    A = P.base
    return tabulate("j_sharp_lemma", [(i,) for i in range(A.rank)],
                    lambda i: (Jend.apply(sharp_pi_xi_vec(J, coframe(A, i))).vec(),
                               sharp_pi_xi_vec(J, Jstar.apply(coframe(A, i)))))


def omega_transport_identity(P: LcsPair, g: Metric) -> Identity:
    """``D pi(a, b, c) = nabla omega(sharp a, sharp b, sharp c)`` with the metric triple connection."""
    J = with_metric_lambda(P.jacobi, g)
    A = P.base
    r = A.rank
    D = covariant_derivative(triple_levi_civita(J, g), J.pi)
    nO = covariant_derivative(levi_civita(A, g), P.omega)
    cols = [sharp_pi_xi_vec(J, coframe(A, i)) for i in range(r)]
    return tabulate("omega_transport", product(range(r), repeat=3),
                    lambda a, b, c: (D.component(a, (b, c)), nO(cols[a], cols[b], cols[c])))


def lck_report(P: LcsPair, g: Metric, theta_exact: bool | None = None) -> LckReport:
    return LckReport(
        is_lcs=is_lcs(P),
        metric_associated_lcs=lcs_isometry_identity(P, g).holds,
        metric_associated_omega=omega_association_identity(P, g).holds,
        theta_exact=theta_exact,
        compatible=is_triple_compatible(P.jacobi, g),
        conformally_kaehler=conformal_identity(P, g).holds,
        j_sharp_lemma=j_sharp_lemma_identity(P, g).holds,
        transport_corollary=omega_transport_identity(P, g).holds,
    )


def lck_equivalence_check(P: LcsPair, g: Metric, theta_exact: bool | None = None) -> tuple[bool, bool]:
    """Both verdicts; raises when the pair is not lcs or g is not associated with omega.

    Isometry of ``sharp_{pi,xi}`` is recorded in :func:`lck_report` but not enforced.
    """
    rep = lck_report(P, g, theta_exact)
    failed = rep.failed_hypothesis()
    if failed == "is_lcs":
        a, b = lcs_defects(P)
        bad = a if not a.is_zero() else b
        raise HypothesisFailed(failed, "omega is not lcs for theta", bad.first_nonzero())
    if failed == "metric_associated_omega":
        raise HypothesisFailed(failed, "g is not associated with omega", omega_association_identity(P, g).witness())
    if failed:
        raise HypothesisFailed(failed, "theta is asserted not exact")
    return rep.compatible, rep.conformally_kaehler
