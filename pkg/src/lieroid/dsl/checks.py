"""Check registry and report construction.

A checker resolves its arguments against a model and returns a list of
identities; the check passes when every identity holds.  Conditional
statements raise :class:`HypothesisFailed` when their premises are not met.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from itertools import product
from typing import Callable

from .. import jacobi as jac
from .. import poisson as poi
from .. import riemann as rie
from .. import structures as st
from ..algebroid import (
    FORM, VECTOR, Algebroid, Endo, Kind, Tensor, classify, coframe, d_rho, increasing_tuples,
    interior, lie_derivative, retag, schouten, wedge,
)
from ..coeff import Scalar
from ..identity import HypothesisFailed, Identity, tabulate, zero_identity
from ..linalg import Degenerate
from ..riemann import Metric
from .model import CheckRequest, Model, UnknownName


class CheckArgumentError(TypeError):
    pass


PASS, FAIL, HYPOTHESIS_FAILED, ERROR = "PASS", "FAIL", "HYPOTHESIS_FAILED", "ERROR"
INTERNAL_INCONSISTENCY = "INTERNAL_INCONSISTENCY"

# exceptions that signal an unmet precondition rather than an engine fault
_PRECONDITIONS = {
    Degenerate: "nondegenerate",
    st.EvenRank: "odd_rank",
    st.DegenerateTopForm: "top_form_nonzero",
    st.NotContact: "is_contact",
    jac.MissingLambda: "lambda_given",
}


# --- argument kinds ------------------------------------------------------------------------

def _kind_ok(kind: str, v) -> bool:
    if kind == "A":
        return isinstance(v, Algebroid)
    if kind == "g":
        return isinstance(v, Metric)
    if kind == "phi":
        return isinstance(v, Endo)
    if not isinstance(v, Tensor):
        return False
    return {
        "P": v.variance == VECTOR and v.degree == 2,
        "X": v.variance == VECTOR and v.degree == 1,
        "Q": v.variance == VECTOR,
        "F": v.variance == FORM,
        "f1": v.variance == FORM and v.degree == 1,
        "f2": v.variance == FORM and v.degree == 2,
    }[kind]


_KIND_NAMES = {"A": "algebroid", "g": "metric", "phi": "endomorphism", "P": "bivector",
               "X": "section", "Q": "multivector", "F": "form", "f1": "1-form", "f2": "2-form"}


@dataclass(frozen=True)
class Checker:
    name: str
    signature: tuple[str, ...]
    fn: Callable
    doc: str = ""


REGISTRY: dict[str, Checker] = {}


def checker(name: str, *signature: str):
    def deco(fn):
        REGISTRY[name] = Checker(name, signature, fn, (fn.__doc__ or "").strip())
        return fn
    return deco


def resolve(m: Model, req: CheckRequest) -> list:
    if req.name not in REGISTRY:
        raise UnknownName(req.name, req.line)
    return resolve_args(m, req.name, req.args, REGISTRY[req.name].signature)


def resolve_args(m: Model, what: str, args, sig) -> list:
    """Look up ``args`` in ``m`` and check them against a signature of kind codes.

    A leading algebroid argument may be omitted; it is then the base of the first tensor.
    """
    args = tuple(args)
    if sig and sig[0] == "A" and len(args) == len(sig) - 1 and args and args[0] in m.tensors:
        args = (m.tensors[args[0]].base,) + args
    if len(args) != len(sig):
        raise CheckArgumentError(f"{what} takes {len(sig)} arguments ({', '.join(_KIND_NAMES[s] for s in sig)})")
    vals = []
    base = None
    for name, kind in zip(args, sig):
        v = m.lookup(name)
        if not _kind_ok(kind, v):
            raise CheckArgumentError(f"{name} is not a {_KIND_NAMES[kind]}")
        if kind == "A":
            base = v
        elif base is not None and m.base_of(name) is not base:
            raise CheckArgumentError(f"{name} does not live on {base.name}")
        vals.append(v)
    return vals


# --- small helpers --------------------------------------------------------------------------

def flag(name: str, failed: bool, chart, label=("violated",)) -> Identity:
    """A predicate as an identity: the indicator of failure must vanish."""
    return Identity(name, {label: chart.one() if failed else chart.zero()}, {})


def agreement(name: str, chart, **verdicts: bool) -> Identity:
    """All booleans agree; the first one is the reference."""
    items = list(verdicts.items())
    ref = items[0][1]
    lhs = {(k,): chart.const(int(v)) for k, v in items[1:]}
    rhs = {(k,): chart.const(int(ref)) for k, _ in items[1:]}
    return Identity(name, lhs, rhs)


def tensor_zero(name: str, t: Tensor) -> Identity:
    return zero_identity(name, t.comps)


def require(ident: Identity, hypothesis: str):
    if not ident.holds:
        raise HypothesisFailed(hypothesis, ident.name, ident.witness())


def _jacobi_ctx(A, P, xi, lam=None) -> jac.JacobiContext:
    J = jac.JacobiContext(A, P, xi)
    return J.with_lambda(lam, "given") if lam is not None else J


def _jacobi_identity(J) -> list[Identity]:
    a, b = jac.jacobi_defects(J)
    PP = schouten(J.base, J.pi, J.pi)
    return [sides("[pi,pi]=2xi^pi", PP, wedge(J.xi, J.pi).scale(2)), tensor_zero("L_xi pi", b)]


def sides(name: str, lhs: Tensor, rhs: Tensor) -> Identity:
    return Identity(name, dict(lhs.comps), dict(rhs.comps))


def _lie_identities(A) -> list[Identity]:
    """``[[a,b],c] = -[[b,c],a] - [[c,a],b]`` and ``rho[a,b] = [rho a, rho b]`` on the frame."""
    r = A.rank
    e = [[A.chart.one() if k == i else A.chart.zero() for k in range(r)] for i in range(r)]
    br = A.bracket_vec

    def jac_sides(i, j, k):
        other = [x + y for x, y in zip(br(br(e[j], e[k]), e[i]), br(br(e[k], e[i]), e[j]))]
        return br(br(e[i], e[j]), e[k]), [-x for x in other]

    def anchor_sides(i, j):
        return (A.rho_field(A.c[i][j]).components,
                A.anchor_field(i).bracket(A.anchor_field(j)).components)

    return [tabulate("jacobiator", increasing_tuples(r, 3), jac_sides),
            tabulate("anchor_defect", increasing_tuples(r, 2), anchor_sides)]


# --- algebroid ---------------------------------------------------------------------------------

@checker("lie", "A")
def check_lie(m, A):
    """Frame Jacobiators and anchor defects vanish."""
    return _lie_identities(A)


@checker("almost_lie", "A")
def check_almost_lie(m, A):
    return _lie_identities(A)[1:]


@checker("d_squared", "A")
def check_d_squared(m, A):
    """``d d = 0`` on coordinate functions and coframe elements."""
    ids = []
    for i in range(A.n):
        ids.append(tensor_zero(f"dd({A.chart.names[i]})", d_rho(A, d_rho(A, A.chart.var(i)))))
    for i in range(A.rank):
        ids.append(tensor_zero(f"dd(e^{i + 1})", d_rho(A, d_rho(A, coframe(A, i)))))
    return ids


@checker("d_squared_iff_lie", "A")
def check_d_squared_iff_lie(m, A):
    dd = all(i.holds for i in check_d_squared(m, A))
    return [agreement("d_squared_iff_lie", A.chart, lie=classify(A) == Kind.LIE, d_squared=dd)]


@checker("cartan", "A", "X", "F")
def check_cartan(m, A, X, eta):
    """``L_a = i_a d + d i_a`` on the given section and form (``L_a f = i_a df`` in degree 0)."""
    a = X.vec()
    if eta.degree == 0:
        lhs = Tensor.scalar(A.chart, A.rank, A.rho_vec(a, eta.value()), FORM)
        rhs = interior(a, d_rho(A, eta))
    else:
        lhs = lie_derivative(A, a, eta)
        rhs = interior(a, d_rho(A, eta)) + d_rho(A, interior(a, eta))
    return [sides("cartan", lhs, rhs)]


# --- bivectors -----------------------------------------------------------------------------------

@checker("schouten_cyclic", "A", "P")
def check_schouten_cyclic(m, A, P):
    """Axiom-driven ``[pi,pi]`` against the cyclic formula on coframe triples."""
    return [poi.schouten_cyclic_identity(poi.BivectorContext(A, P))]


@checker("dpi_bracket", "A", "P", "Q")
def check_dpi_bracket(m, A, P, Q):
    """``d_{rho_pi} Q + [pi, Q] = 0``."""
    ctx = poi.BivectorContext(A, P)
    dual = poi.dual_algebroid(ctx)
    dq = retag(d_rho(dual, retag(Q, FORM)), VECTOR)
    return [sides("dpi_plus_bracket", dq, -schouten(A, P, Q))]


@checker("torsion_pi", "A", "P")
def check_torsion_pi(m, A, P):
    return [poi.torsion_identity_pi(poi.BivectorContext(A, P))]


@checker("poisson", "A", "P")
def check_poisson(m, A, P):
    return [tensor_zero("[pi,pi]", schouten(A, P, P))]


@checker("dual_lie", "A", "P")
def check_dual_lie(m, A, P):
    return _lie_identities(poi.dual_algebroid(poi.BivectorContext(A, P)))


@checker("dual_jacobiator", "A", "P")
def check_dual_jacobiator(m, A, P):
    """Direct Jacobiator of the Koszul bracket against its closed form (Lie base)."""
    ctx = poi.BivectorContext(A, P)
    co = [coframe(A, i) for i in range(A.rank)]
    return [tabulate("dual_jacobiator", increasing_tuples(A.rank, 3),
                     lambda i, j, k: _cmp(poi.jacobiator_pi(ctx, co[i], co[j], co[k]), A.rank))]


@checker("poisson_dual_jacobiator", "A", "P")
def check_poisson_dual_jacobiator(m, A, P):
    """On a Lie base, a Poisson bivector has a Lie dual bracket."""
    if classify(A) != Kind.LIE:
        raise poi.NotLie()
    require(check_poisson(m, A, P)[0], "is_poisson")
    dual = poi.dual_algebroid(poi.BivectorContext(A, P))
    return _lie_identities(dual)


def _cmp(c, r):
    return [c.direct[(k,)] for k in range(r)], [c.theorem_rhs[(k,)] for k in range(r)]


@checker("symplectic", "A", "f2")
def check_symplectic(m, A, om):
    degenerate = False
    try:
        poi.sharp_omega_matrix(om)
    except Degenerate:
        degenerate = True
    return [flag("nondegenerate", degenerate, A.chart), tensor_zero("d_omega", d_rho(A, om))]


@checker("symplectic_schouten", "A", "f2")
def check_symplectic_schouten(m, A, om):
    return [poi.symplectic_schouten_identity(A, om)]


# --- metrics -------------------------------------------------------------------------------------

@checker("metricity", "A", "g")
def check_metricity(m, A, g):
    return [rie.metricity_identity(rie.levi_civita(A, g), g)]


@checker("torsion_free", "A", "g")
def check_torsion_free(m, A, g):
    return [rie.torsion_identity(rie.levi_civita(A, g))]


def _contra(A, P, g):
    ctx = poi.BivectorContext(A, P)
    dual = poi.dual_algebroid(ctx)
    gs = rie.cometric(g, dual)
    return rie.levi_civita(dual, gs), gs


@checker("contra_metricity", "A", "P", "g")
def check_contra_metricity(m, A, P, g):
    conn, gs = _contra(A, P, g)
    return [rie.metricity_identity(conn, gs)]


@checker("contra_torsion_free", "A", "P", "g")
def check_contra_torsion_free(m, A, P, g):
    conn, _ = _contra(A, P, g)
    return [rie.torsion_identity(conn)]


def _dpi_identity(A, P, g) -> Identity:
    D = rie.dpi_table(poi.BivectorContext(A, P), g)
    return zero_identity("D_pi", D.nonzero())


@checker("riemann_poisson", "A", "P", "g")
def check_riemann_poisson(m, A, P, g):
    return [_dpi_identity(A, P, g)]


@checker("riemann_poisson_implies_poisson", "A", "P", "g")
def check_rp_implies_poisson(m, A, P, g):
    require(_dpi_identity(A, P, g), "is_riemann_poisson")
    return check_poisson(m, A, P)


@checker("dpi_djstar", "A", "P", "g")
def check_dpi_djstar(m, A, P, g):
    return [rie.dpi_djstar_identity(poi.BivectorContext(A, P), g)]


@checker("kaehler_transport", "A", "f2", "g")
def check_kaehler_transport(m, A, om, g):
    """``D pi = nabla omega(sharp, sharp, sharp)`` for a symplectic form with associated metric."""
    require(tensor_zero("d_omega", d_rho(A, om)), "is_symplectic")
    L = st.make_lcs(A, om, Tensor.zero(A.chart, A.rank, FORM, 1))
    require(st.omega_association_identity(L, g), "metric_associated_omega")
    return [rie.kaehler_transport_identity(A, om, g)]


# --- Jacobi pairs ------------------------------------------------------------------------------------

@checker("jacobi", "A", "P", "X")
def check_jacobi(m, A, P, xi):
    return _jacobi_identity(_jacobi_ctx(A, P, xi))


@checker("jacobi_schouten", "A", "P", "X")
def check_jacobi_schouten(m, A, P, xi):
    """``[pi,pi] = 2 xi^pi`` with ``[pi,pi]`` computed both from the axioms and cyclically."""
    ctx = poi.BivectorContext(A, P)
    PP = schouten(A, P, P)
    w = wedge(xi, P).scale(2)
    co = [coframe(A, i) for i in range(A.rank)]
    trip = list(increasing_tuples(A.rank, 3))
    return [
        tabulate("schouten_axioms", trip, lambda i, j, k: (PP[(i, j, k)], w[(i, j, k)])),
        tabulate("schouten_cyclic", trip,
                 lambda i, j, k: (poi.schouten_via_cyclic(ctx, co[i], co[j], co[k]), w[(i, j, k)])),
    ]


@checker("triple_dual_lie", "A", "P", "X", "f1")
def check_triple_dual_lie(m, A, P, xi, lam):
    return _lie_identities(jac.triple_dual_algebroid(_jacobi_ctx(A, P, xi, lam)))


@checker("triple_morphism", "A", "P", "X", "f1")
def check_triple_morphism(m, A, P, xi, lam):
    """``sharp_{pi,xi}`` intertwines the twisted bracket with the algebroid bracket."""
    return [st.sharp_morphism_identity(_jacobi_ctx(A, P, xi, lam))]


@checker("triple_torsion", "A", "P", "X", "f1")
def check_triple_torsion(m, A, P, xi, lam):
    J = _jacobi_ctx(A, P, xi, lam)
    return [jac.triple_torsion_identity(J)]


@checker("triple_jacobiator", "A", "P", "X", "f1")
def check_triple_jacobiator(m, A, P, xi, lam):
    J = _jacobi_ctx(A, P, xi, lam)
    co = [coframe(A, i) for i in range(A.rank)]
    return [tabulate("triple_jacobiator", increasing_tuples(A.rank, 3),
                     lambda i, j, k: _cmp(jac.triple_jacobiator(J, co[i], co[j], co[k]), A.rank))]


@checker("compatible", "A", "P", "X", "g")
def check_compatible(m, A, P, xi, g):
    return [jac.compatibility_identity(_jacobi_ctx(A, P, xi), g)]


@checker("compatibility_forms_agree", "A", "P", "X", "g")
def check_compat_forms(m, A, P, xi, g):
    """The trivector and endomorphism forms of compatibility give the same verdict."""
    J = _jacobi_ctx(A, P, xi)
    return [agreement("compatibility_forms", A.chart,
                      trivector=jac.compatibility_identity(J, g).holds,
                      endomorphism=jac.compatibility_endo_identity(J, g).holds)]


@checker("jacobi_criterion", "A", "P", "X", "g")
def check_jacobi_criterion(m, A, P, xi, g):
    """For a compatible triple with ``L_xi pi = 0``: Jacobi iff the wedge condition."""
    ok, wedge_zero = jac.compatibility_jacobi_criterion(_jacobi_ctx(A, P, xi), g)
    return [agreement("jacobi_criterion", A.chart, is_jacobi=ok, wedge_zero=wedge_zero)]


# --- structures ----------------------------------------------------------------------------------------

@checker("contact", "A", "f1")
def check_contact(m, A, eta):
    return [flag("top_form_vanishes", not st.is_contact(A, eta), A.chart)]


@checker("contact_jacobi", "A", "f1")
def check_contact_jacobi(m, A, eta):
    """The fundamental pair of a contact form is Jacobi."""
    return _jacobi_identity(st.contact_pair(A, eta).jacobi)


@checker("contact_iff_jacobi", "A", "f1")
def check_contact_iff_jacobi(m, A, eta):
    """On a Lie base, contact iff the fundamental pair of ``(d eta, eta)`` is Jacobi."""
    if classify(A) != Kind.LIE:
        raise poi.NotLie()
    contact = st.is_contact(A, eta)
    try:
        J = st.make_cosymplectic(A, d_rho(A, eta), eta).jacobi
        ok = jac.is_jacobi(J)
    except st.DegenerateTopForm:
        ok = False
    return [agreement("contact_iff_jacobi", A.chart, contact=contact, jacobi=ok)]


@checker("contact_pair", "A", "f1", "P", "X")
def check_contact_pair(m, A, eta, P, xi):
    """The declared bivector and Reeb section are those of the contact form."""
    pair = st.contact_pair(A, eta)
    return [tensor_zero("pi_difference", pair.fundamental_pi - P),
            tensor_zero("reeb_difference", pair.reeb - xi)]


@checker("cosymplectic", "A", "f2", "f1")
def check_cosymplectic(m, A, om, eta):
    """Reeb section, the sharp lemma and both unconditional identities."""
    pair = st.make_cosymplectic(A, om, eta)
    return [st.reeb_identity(pair), st.sharp_lemma_identity(pair), *st.cosymplectic_identity_defects(pair)]


@checker("lcs", "A", "f2", "f1")
def check_lcs(m, A, om, theta):
    degenerate = False
    try:
        poi.sharp_omega_matrix(om)
    except Degenerate:
        degenerate = True
    a = d_rho(A, om) + wedge(theta, om)
    return [flag("nondegenerate", degenerate, A.chart), tensor_zero("d_omega+theta^omega", a),
            tensor_zero("d_theta", d_rho(A, theta))]


@checker("lcs_identities", "A", "f2", "f1")
def check_lcs_identities(m, A, om, theta):
    return list(st.lcs_identity_defects(st.make_lcs(A, om, theta)))


@checker("lcs_iff_jacobi", "A", "f2", "f1")
def check_lcs_iff_jacobi(m, A, om, theta):
    """Lcs iff the associated pair is Jacobi, split into its two halves."""
    L = st.make_lcs(A, om, theta)
    a, b = st.lcs_defects(L)
    ja, jb = jac.jacobi_defects(L.jacobi)
    ids = [agreement("lcs_iff_jacobi", A.chart, lcs=st.is_lcs(L), jacobi=jac.is_jacobi(L.jacobi)),
           agreement("wedge_iff_schouten", A.chart, wedge=a.is_zero(), schouten=ja.is_zero())]
    if a.is_zero():
        ids.append(agreement("closed_iff_invariant", A.chart, closed=b.is_zero(), invariant=jb.is_zero()))
    return ids


@checker("acm", "A", "phi", "X", "f1", "g")
def check_acm(m, A, phi, xi, eta, g):
    """Derived identities of an almost contact metric structure."""
    S = st.make_acm(A, phi, xi, eta, g)
    return list(st.acm_derived_identities(S).values())


@checker("acm_isometry", "A", "phi", "X", "f1", "g")
def check_acm_isometry(m, A, phi, xi, eta, g):
    return [st.acm_isometry_identity(st.make_acm(A, phi, xi, eta, g))]


def _contact_metric(A, eta, g):
    acm, _ = st.make_contact_riemannian(A, eta, g)
    return acm


@checker("contact_metric", "A", "f1", "g")
def check_contact_metric(m, A, eta, g):
    """Solved structure tensor is an almost contact metric structure; transport law."""
    S = _contact_metric(A, eta, g)
    return list(st.acm_derived_identities(S).values()) + [
        st.triple_transport_identity(st.acm_jacobi(S), g)]


@checker("half_kenmotsu", "A", "f1", "g")
def check_half_kenmotsu(m, A, eta, g):
    return [st.kenmotsu_identity(_contact_metric(A, eta, g))]


@checker("kenmotsu_equivalence", "A", "f1", "g")
def check_kenmotsu_equivalence(m, A, eta, g):
    """Compatibility of the contact triple iff the structure is half-Kenmotsu."""
    S = _contact_metric(A, eta, g)
    return [agreement("kenmotsu_equivalence", A.chart,
                      compatible=jac.is_triple_compatible(st.acm_jacobi(S), g),
                      half_kenmotsu=st.is_half_kenmotsu(S))]


@checker("phi_transport", "A", "f1", "g")
def check_phi_transport(m, A, eta, g):
    S = _contact_metric(A, eta, g)
    J = st.acm_jacobi(S).with_lambda(S.eta, "given")
    require(st.sharp_morphism_identity(J), "sharp_is_morphism")
    return [st.phi_transport_identity(S)]


@checker("lcs_metric", "A", "f2", "f1", "g")
def check_lcs_metric(m, A, om, theta, g):
    return [st.lcs_isometry_identity(st.make_lcs(A, om, theta), g)]


@checker("conformal", "A", "f2", "f1", "g")
def check_conformal(m, A, om, theta, g):
    return [st.conformal_identity(st.make_lcs(A, om, theta), g)]


@checker("lck", "A", "f2", "f1", "g")
def check_lck(m, A, om, theta, g, theta_exact=None):
    """Compatibility of the lcs triple iff the conformal defect vanishes."""
    L = st.make_lcs(A, om, theta)
    compatible, conformal = st.lck_equivalence_check(L, g, theta_exact)
    ids = [agreement("lck_equivalence", A.chart, compatible=compatible, conformally_kaehler=conformal)]
    if st.lcs_isometry_identity(L, g).holds:
        ids += [st.j_sharp_lemma_identity(L, g), st.omega_transport_identity(L, g)]
    return ids


# --- running ----------------------------------------------------------------------------------------------

@dataclass
class CheckResult:
    check: CheckRequest
    verdict: str
    witness: tuple | None = None
    hypothesis: str | None = None
    message: str = ""
    seconds: float = 0.0
    identities: list = field(default_factory=list, repr=False, compare=False)

    def line(self) -> str:
        out = f"{self.verdict:<17} {self.check.label()}"
        if self.witness:
            name, label, value = self.witness
            out += f"  [{name} at {label}: {value}]"
        if self.hypothesis:
            out += f"  [hypothesis: {self.hypothesis}]"
        if self.message and self.verdict == ERROR:
            out += f"  [{self.message}]"
        return out

    def as_dict(self, timing=True) -> dict:
        d = {"check": self.check.label(), "verdict": self.verdict,
             "witness": list(self.witness[:1]) + [list(self.witness[1]), self.witness[2]]
             if self.witness else None,
             "hypothesis": self.hypothesis, "message": self.message}
        if timing:
            d["seconds"] = round(self.seconds, 6)
        return d


@dataclass
class Report:
    results: list[CheckResult]

    @property
    def ok(self) -> bool:
        return not any(r.verdict in (FAIL, ERROR, INTERNAL_INCONSISTENCY) for r in self.results)

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def text(self, timing=False) -> str:
        lines = []
        for r in self.results:
            line = r.line()
            if timing:
                line += f"  ({r.seconds * 1000:.1f} ms)"
            lines.append(line)
        return "\n".join(lines)

    def json_lines(self, timing=True) -> str:
        return "\n".join(json.dumps(r.as_dict(timing), sort_keys=True) for r in self.results)

    def verdicts(self) -> dict[str, str]:
        return {r.check.label(): r.verdict for r in self.results}


def _witness(ident: Identity):
    w = ident.witness()
    if w is None:
        return None
    label, value = w
    return ident.name, tuple(label), str(value)


def run_check(m: Model, req: CheckRequest) -> CheckResult:
    t0 = time.perf_counter()
    try:
        args = resolve(m, req)
        opts = dict(req.options)
        ids = REGISTRY[req.name].fn(m, *args, **opts)
        res = CheckResult(req, PASS, identities=ids)
        for ident in ids:
            if not ident.holds:
                res = CheckResult(req, FAIL, _witness(ident), identities=ids)
                break
    except HypothesisFailed as exc:
        w = exc.witness
        if w is not None:
            label, value = w
            w = (exc.hypothesis, tuple(label), str(value))
        res = CheckResult(req, HYPOTHESIS_FAILED, w, exc.hypothesis, str(exc))
    except tuple(_PRECONDITIONS) as exc:
        name = next(v for k, v in _PRECONDITIONS.items() if isinstance(exc, k))
        res = CheckResult(req, HYPOTHESIS_FAILED, None, name, str(exc))
    except Exception as exc:  # reported, never aborts the run
        res = CheckResult(req, ERROR, message=f"{type(exc).__name__}: {exc}")
    res.seconds = time.perf_counter() - t0
    return res


def run_checks(m: Model) -> Report:
    return Report([run_check(m, req) for req in m.checks])
