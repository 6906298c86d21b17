"""Reproducible random models for the property suites."""

from __future__ import annotations

import random
from itertools import product

from ..algebroid import FORM, VECTOR, Algebroid, Tensor, d_rho, increasing_tuples, wedge, wedge_power
from ..coeff import Chart, Scalar
from ..linalg import Degenerate, inverse, matvec, transpose
from ..riemann import Metric
from .model import AlgebroidDecl, CheckRequest, Model, TensorDecl

KINDS = ("skew", "lie-algebra", "tangent-like", "cosymplectic-data", "lcs-data")
COORDS = ("x", "y")

# curated Lie algebras: {(i, j): [c_ij^k]}
LIE_ALGEBRAS: dict[int, dict[str, dict]] = {
    1: {"r": {}},
    2: {"r2": {}, "aff": {(0, 1): [0, 1]}},
    3: {
        "r3": {},
        "heisenberg": {(0, 1): [0, 0, 1]},
        "solvable": {(0, 1): [0, 1, 0], (0, 2): [0, 0, 1]},
        "solvable_minus": {(0, 1): [0, 1, 0], (0, 2): [0, 0, -1]},
        "e2": {(0, 1): [0, 0, 1], (0, 2): [0, -1, 0]},
        "so3": {(0, 1): [0, 0, 1], (1, 2): [1, 0, 0], (0, 2): [0, -1, 0]},
        "sl2": {(0, 1): [0, 0, 1], (0, 2): [0, -1, 0], (1, 2): [-1, 0, 0]},
        "aff_r": {(0, 1): [0, 1, 0]},
    },
    4: {
        "r4": {},
        "heisenberg_r": {(0, 1): [0, 0, 1, 0]},
        "aff_aff": {(0, 1): [0, 1, 0, 0], (2, 3): [0, 0, 0, 1]},
        "so3_r": {(0, 1): [0, 0, 1, 0], (1, 2): [1, 0, 0, 0], (0, 2): [0, -1, 0, 0]},
        "oscillator": {(0, 1): [0, 0, 1, 0], (3, 0): [0, 1, 0, 0], (3, 1): [-1, 0, 0, 0]},
    },
}

DEFAULTS = {"rank": 3, "chart_dim": 1, "max_degree": 1, "kind": "skew"}


class UnsupportedParams(ValueError):
    pass


def _validate(params: dict) -> dict:
    p = {**DEFAULTS, **(params or {})}
    unknown = set(p) - set(DEFAULTS)
    if unknown:
        raise UnsupportedParams(f"unknown parameters {sorted(unknown)}")
    if p["kind"] not in KINDS:
        raise UnsupportedParams(f"kind must be one of {', '.join(KINDS)}")
    if not (isinstance(p["rank"], int) and 1 <= p["rank"] <= 4):
        raise UnsupportedParams("rank must be between 1 and 4")
    if not (isinstance(p["chart_dim"], int) and 0 <= p["chart_dim"] <= 2):
        raise UnsupportedParams("chart_dim must be between 0 and 2")
    if not (isinstance(p["max_degree"], int) and 0 <= p["max_degree"] <= 2):
        raise UnsupportedParams("max_degree must be between 0 and 2")
    if p["kind"] == "tangent-like" and (p["chart_dim"] < 1 or p["chart_dim"] > p["rank"]):
        raise UnsupportedParams("tangent-like needs 1 <= chart_dim <= rank")
    if p["kind"] == "cosymplectic-data" and p["rank"] % 2 == 0:
        raise UnsupportedParams("cosymplectic data needs odd rank")
    if p["kind"] == "lcs-data" and p["rank"] % 2:
        raise UnsupportedParams("lcs data needs even rank")
    return p


class _Gen:
    def __init__(self, seed, chart: Chart, rank: int, max_degree: int):
        self.rng = random.Random(seed)
        self.chart = chart
        self.rank = rank
        self.deg = max_degree

    def poly(self, density=0.5, scale=2) -> Scalar:
        n = self.chart.dim
        terms = {}
        for m in product(range(self.deg + 1), repeat=n):
            if sum(m) <= self.deg and self.rng.random() < density:
                terms[m] = self.rng.randint(-scale, scale)
        return self.chart.poly(terms)

    def nonzero_const(self, scale=2):
        return self.rng.choice([c for c in range(-scale, scale + 1) if c])

    def tensor(self, variance, degree, density=0.6) -> Tensor:
        comps = {}
        for I in increasing_tuples(self.rank, degree):
            if self.rng.random() < density:
                comps[I] = self.poly()
        return Tensor(self.chart, self.rank, variance, degree, comps)

    def nonzero_tensor(self, variance, degree) -> Tensor:
        for _ in range(20):
            t = self.tensor(variance, degree)
            if not t.is_zero():
                return t
        I = tuple(range(degree))
        return Tensor(self.chart, self.rank, variance, degree, {I: self.chart.one()})

    def metric(self) -> Metric:
        r = self.rank
        while True:
            m = [[self.chart.zero()] * r for _ in range(r)]
            for i in range(r):
                m[i][i] = self.chart.const(self.rng.randint(1, 3)) + self.poly(0.3, 1) * self.poly(0.3, 1)
                for j in range(i):
                    if self.rng.random() < 0.3:
                        v = self.chart.const(self.rng.randint(-1, 1))
                        m[i][j] = m[j][i] = v
            try:
                return Metric(self.chart, m)
            except Degenerate:
                continue

    def invertible_const(self):
        r = self.rank
        while True:
            B = [[self.rng.randint(-1, 1) + (1 if i == j else 0) for j in range(r)] for i in range(r)]
            try:
                return B, inverse([[self.chart.const(x) for x in row] for row in B])
            except Degenerate:
                continue


def _decl(name, A: Algebroid) -> AlgebroidDecl:
    r = A.rank
    br = []
    for i, j in increasing_tuples(r, 2):
        v = tuple(A.c[i][j])
        if any(v):
            br.append(((i, j), v))
    return AlgebroidDecl(name, tuple(A.chart.names), tuple(A.frame), tuple(tuple(row) for row in A.anchor),
                         tuple(br))


def _skew(g: _Gen) -> Algebroid:
    r, n = g.rank, g.chart.dim
    anchor = [[g.poly(0.4) for _ in range(n)] for _ in range(r)]
    structure = {(i, j): [g.poly(0.4) for _ in range(r)] for i, j in increasing_tuples(r, 2)}
    return Algebroid(g.chart, r, anchor, structure)


def _lie_algebra(g: _Gen) -> tuple[Algebroid, str]:
    r = g.rank
    name = g.rng.choice(sorted(LIE_ALGEBRAS[r]))
    c = {k: [g.chart.const(x) for x in v] for k, v in LIE_ALGEBRAS[r][name].items()}
    zero = [g.chart.zero()] * r

    def bracket(a, b):
        out = list(zero)
        for (i, j), v in c.items():
            f = a[i] * b[j] - a[j] * b[i]
            if f:
                out = [o + f * x for o, x in zip(out, v)]
        return out

    B, Binv = g.invertible_const()
    cols = [[g.chart.const(B[i][j]) for i in range(r)] for j in range(r)]    # f_j = sum_i B_ij e_i
    structure = {}
    for i, j in increasing_tuples(r, 2):
        structure[(i, j)] = matvec(Binv, bracket(cols[i], cols[j]))
    return Algebroid(g.chart, r, None, structure), name


def _tangent_like(g: _Gen) -> Algebroid:
    r, n = g.rank, g.chart.dim
    ch = g.chart
    # X_i = d/dx_i + sum_{j>i} p_ij d/dx_j, plus central sections in the kernel of the anchor
    M = [[ch.one() if i == j else (g.poly(0.5) if j > i else ch.zero()) for j in range(n)] for i in range(n)]
    Minv = inverse(M)
    from ..algebroid import ChartVectorField
    fields = [ChartVectorField(ch, M[i]) for i in range(n)]
    structure = {}
    for i, j in increasing_tuples(n, 2):
        v = fields[i].bracket(fields[j]).components
        w = matvec(transpose(Minv), v)      # v = sum_k w_k X_k
        structure[(i, j)] = list(w) + [ch.zero()] * (r - n)
    anchor = [M[i] for i in range(n)] + [[ch.zero()] * n for _ in range(r - n)]
    return Algebroid(ch, r, anchor, structure)


def _cosymplectic_data(g: _Gen):
    for _ in range(50):
        om = g.tensor(FORM, 2)
        eta = g.tensor(FORM, 1)
        if _top(g, om, eta):
            return om, eta
    raise UnsupportedParams("could not draw nondegenerate cosymplectic data")


def _top(g, om, eta):
    m = (g.rank - 1) // 2
    return wedge(eta, wedge_power(om, m))[tuple(range(g.rank))]


def _lcs_data(g: _Gen):
    from ..poisson import sharp_omega_matrix
    for _ in range(50):
        om = g.tensor(FORM, 2)
        try:
            sharp_omega_matrix(om)
        except Degenerate:
            continue
        return om, g.tensor(FORM, 1)
    raise UnsupportedParams("could not draw a nondegenerate 2-form")


def random_instance(seed: int, params: dict | None = None) -> Model:
    p = _validate(params)
    kind, r = p["kind"], p["rank"]
    n = 0 if kind == "lie-algebra" else p["chart_dim"]
    chart = Chart(COORDS[:n])
    g = _Gen((seed, kind, r, n, p["max_degree"]).__repr__(), chart, r, p["max_degree"])
    m = Model()
    if kind == "lie-algebra":
        A, label = _lie_algebra(g)
    elif kind == "tangent-like":
        A = _tangent_like(g)
    else:
        A = _skew(g)
    A.name = "A"
    m.algebroids["A"] = _decl("A", A)
    A = m.algebroid("A")

    def add(name, value, kind_=None):
        if isinstance(value, Metric):
            m.tensors[name] = TensorDecl(name, "metric", None, "A", value)
        else:
            k = kind_ or ("form" if value.variance == FORM else "multivector")
            m.tensors[name] = TensorDecl(name, k, value.degree, "A", value)

    def check(name, *args):
        m.checks.append(CheckRequest(name, args))

    add("X", g.nonzero_tensor(VECTOR, 1))
    add("F", g.nonzero_tensor(FORM, g.rng.randint(1, r)))
    add("P", g.tensor(VECTOR, 2) if r >= 2 else Tensor.zero(chart, r, VECTOR, 2))
    add("Q", g.tensor(VECTOR, g.rng.randint(0, r)))
    add("g", g.metric())

    check("cartan", "A", "X", "F")
    if r >= 2:
        check("schouten_cyclic", "A", "P")
        check("torsion_pi", "A", "P")
    check("dpi_bracket", "A", "P", "Q")
    check("metricity", "A", "g")
    check("torsion_free", "A", "g")
    check("contra_metricity", "A", "P", "g")
    check("contra_torsion_free", "A", "P", "g")

    if kind == "cosymplectic-data":
        om, eta = _cosymplectic_data(g)
        add("omega", om)
        add("eta", eta)
        check("cosymplectic", "A", "omega", "eta")
    elif kind == "lcs-data":
        om, theta = _lcs_data(g)
        add("omega", om)
        add("theta", theta)
        check("lcs_identities", "A", "omega", "theta")
        check("lcs_iff_jacobi", "A", "omega", "theta")

    if kind in ("lie-algebra", "tangent-like"):
        _conditional(g, m, A, add, check)
    return m


def _conditional(g: _Gen, m: Model, A: Algebroid, add, check):
    """Statements assuming a Lie base, with curated data that often meets their premises."""
    from ..structures import is_contact, contact_pair, make_lcs
    r = A.rank
    chart = A.chart
    check("lie", "A")
    check("d_squared_iff_lie", "A")
    if r < 2:
        return
    check("dual_jacobiator", "A", "P")
    check("poisson_dual_jacobiator", "A", "P")
    check("riemann_poisson_implies_poisson", "A", "P", "g")
    pair = None
    if r % 2 == 1:
        eta = g.nonzero_tensor(FORM, 1)
        if is_contact(A, eta):
            cp = contact_pair(A, eta)
            pair = (cp.fundamental_pi, cp.reeb, eta)
            add("eta", eta)
            check("contact_iff_jacobi", "A", "eta")
    elif A.n >= 1 and r == A.n:
        # theta exact on a tangent-like base, so the pair is Jacobi
        h = g.poly()
        theta = d_rho(A, h)
        for _ in range(20):
            om = g.tensor(FORM, 2)
            try:
                L = make_lcs(A, om, theta)
            except Degenerate:
                continue
            if r == 2:
                pair = (L.pi, L.xi, theta)
            break
    if pair is None:
        pair = (g.tensor(VECTOR, 2), g.tensor(VECTOR, 1), g.tensor(FORM, 1))
    pi, xi, lam = pair
    add("pi", pi)
    add("xi", xi)
    add("lam", lam if lam.degree == 1 else g.tensor(FORM, 1))
    check("triple_torsion", "A", "pi", "xi", "lam")
    check("triple_jacobiator", "A", "pi", "xi", "lam")
    check("compatibility_forms_agree", "A", "pi", "xi", "g")
