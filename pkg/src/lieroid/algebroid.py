"""Calculus on an anchored vector bundle with a global frame.

An :class:`Algebroid` is given by a frame ``e_1..e_r`` over a chart with
coordinates ``x_1..x_n``: the anchor matrix (``rho(e_i) = sum_j
anchor[i][j] d/dx_j``) and skew structure functions ``[e_i, e_j] = sum_k
c[i][j][k] e_k``.  Sections, multivectors and forms are :class:`Tensor`
objects holding components on strictly increasing index tuples.

Conventions used everywhere:

* ``<a_1 ^ ... ^ a_k, alpha_1 ^ ... ^ alpha_k> = det(alpha_i(a_j))``, so a
  form component ``eta[I]`` is ``eta(e_I)`` and a multivector component
  ``P[I]`` is ``P(e^I)``;
* interior products insert into the first slot.
"""

from __future__ import annotations

import enum
import itertools
import warnings
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .coeff import Chart, ChartMismatch, Scalar


class RankMismatch(ValueError):
    pass


class VarianceMismatch(TypeError):
    pass


class DegreeMismatch(ValueError):
    pass


class ShapeError(ValueError):
    pass


class InconsistentAlgebroidWarning(UserWarning):
    """Frame Jacobiators vanish although the anchor is not a bracket morphism."""


VECTOR = "multivector"
FORM = "form"


# --- permutation helpers -------------------------------------------------------

def sort_sign(idx: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sign of the permutation sorting ``idx`` and the sorted tuple; 0 on repeats."""
    if len(set(idx)) != len(idx):
        return 0, ()
    lst = list(idx)
    sign = 1
    for i in range(1, len(lst)):
        j = i
        while j > 0 and lst[j - 1] > lst[j]:
            lst[j - 1], lst[j] = lst[j], lst[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(lst)


@lru_cache(maxsize=None)
def _perms(k: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    out = []
    for p in itertools.permutations(range(k)):
        out.append((p, sort_sign(p)[0]))
    return tuple(out)


def small_det(chart: Chart, rows: Sequence[Sequence[Scalar]]) -> Scalar:
    k = len(rows)
    if k == 0:
        return chart.one()
    if k == 1:
        return rows[0][0]
    if k == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = chart.zero()
    for p, s in _perms(k):
        term = None
        for i in range(k):
            x = rows[i][p[i]]
            if not x:
                term = None
                break
            term = x if term is None else term * x
        if term is not None:
            total = total + term if s > 0 else total - term
    return total


def increasing_tuples(r: int, k: int) -> Iterable[tuple[int, ...]]:
    return itertools.combinations(range(r), k)


# --- vector fields on the chart ------------------------------------------------

class ChartVectorField:
    """Vector field ``sum_j components[j] d/dx_j`` on the chart."""

    __slots__ = ("chart", "components")

    def __init__(self, chart: Chart, components: Sequence[Scalar]):
        if len(components) != chart.dim:
            raise ShapeError(f"expected {chart.dim} components, got {len(components)}")
        self.chart = chart
        self.components = tuple(chart.const(c) for c in components)

    def is_zero(self) -> bool:
        return not any(self.components)

    def apply(self, f: Scalar) -> Scalar:
        out = self.chart.zero()
        for j, c in enumerate(self.components):
            if c:
                out = out + c * f.partial(j)
        return out

    def bracket(self, other: "ChartVectorField") -> "ChartVectorField":
        comps = []
        for m in range(self.chart.dim):
            comps.append(self.apply(other.components[m]) - other.apply(self.components[m]))
        return ChartVectorField(self.chart, comps)

    def __sub__(self, other: "ChartVectorField") -> "ChartVectorField":
        return ChartVectorField(self.chart, [a - b for a, b in zip(self.components, other.components)])

    def __eq__(self, other):
        return isinstance(other, ChartVectorField) and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __repr__(self):
        names = self.chart.names
        terms = [f"({c})*d/d{names[j]}" for j, c in enumerate(self.components) if c]
        return "ChartVectorField(" + (" + ".join(terms) or "0") + ")"


# --- tensors --------------------------------------------------------------------

class Tensor:
    """Alternating multivector or form with Scalar components.

    ``comps`` maps strictly increasing index tuples to nonzero Scalars.
    """

    __slots__ = ("chart", "rank", "variance", "degree", "comps")

    def __init__(self, chart: Chart, rank: int, variance: str, degree: int,
                 comps: Mapping[tuple[int, ...], Scalar] | None = None):
        if variance not in (VECTOR, FORM):
            raise ValueError(f"unknown variance {variance!r}")
        self.chart = chart
        self.rank = rank
        self.variance = variance
        self.degree = degree
        clean: dict[tuple[int, ...], Scalar] = {}
        for idx, v in (comps or {}).items():
            idx = tuple(idx)
            if len(idx) != degree:
                raise DegreeMismatch(f"index {idx} has wrong length for degree {degree}")
            if any(not 0 <= i < rank for i in idx):
                raise ShapeError(f"index {idx} out of range for rank {rank}")
            v = chart.const(v)
            if not v:
                continue
            s, key = sort_sign(idx)
            if s == 0:
                raise ShapeError(f"repeated index in {idx}")
            v = v if s > 0 else -v
            if key in clean:
                v = clean[key] + v
                if not v:
                    del clean[key]
                    continue
            clean[key] = v
        self.comps = clean

    @classmethod
    def _raw(cls, chart, rank, variance, degree, comps):
        t = object.__new__(cls)
        t.chart = chart
        t.rank = rank
        t.variance = variance
        t.degree = degree
        t.comps = comps
        return t

    # constructors
    @classmethod
    def zero(cls, chart: Chart, rank: int, variance: str, degree: int) -> "Tensor":
        return cls._raw(chart, rank, variance, degree, {})

    @classmethod
    def scalar(cls, chart: Chart, rank: int, value, variance: str = FORM) -> "Tensor":
        v = chart.const(value)
        return cls._raw(chart, rank, variance, 0, {(): v} if v else {})

    @classmethod
    def from_vector(cls, chart: Chart, values: Sequence[Scalar], variance: str = VECTOR) -> "Tensor":
        return cls._raw(chart, len(values), variance, 1,
                        {(i,): chart.const(v) for i, v in enumerate(values) if v})

    # access
    def __getitem__(self, idx) -> Scalar:
        if isinstance(idx, int):
            idx = (idx,)
        s, key = sort_sign(tuple(idx))
        if s == 0:
            return self.chart.zero()
        v = self.comps.get(key)
        if v is None:
            return self.chart.zero()
        return v if s > 0 else -v

    def vec(self) -> list[Scalar]:
        if self.degree != 1:
            raise DegreeMismatch("vec() needs a degree-1 tensor")
        z = self.chart.zero()
        return [self.comps.get((i,), z) for i in range(self.rank)]

    def value(self) -> Scalar:
        if self.degree != 0:
            raise DegreeMismatch("value() needs a degree-0 tensor")
        return self.comps.get((), self.chart.zero())

    def is_zero(self) -> bool:
        return not self.comps

    def first_nonzero(self):
        for key in sorted(self.comps):
            return key, self.comps[key]
        return None

    def _check(self, other: "Tensor"):
        if not isinstance(other, Tensor):
            raise TypeError(f"expected Tensor, got {type(other).__name__}")
        if other.chart is not self.chart:
            raise ChartMismatch(f"{other.chart} vs {self.chart}")
        if other.rank != self.rank:
            raise RankMismatch(f"rank {other.rank} vs {self.rank}")
        if other.variance != self.variance:
            raise VarianceMismatch(f"{other.variance} vs {self.variance}")
        if other.degree != self.degree:
            raise DegreeMismatch(f"degree {other.degree} vs {self.degree}")

    # arithmetic
    def __add__(self, other: "Tensor") -> "Tensor":
        self._check(other)
        out = dict(self.comps)
        for k, v in other.comps.items():
            if k in out:
                s = out[k] + v
                if s:
                    out[k] = s
                else:
                    del out[k]
            else:
                out[k] = v
        return Tensor._raw(self.chart, self.rank, self.variance, self.degree, out)

    def __neg__(self) -> "Tensor":
        return Tensor._raw(self.chart, self.rank, self.variance, self.degree,
                           {k: -v for k, v in self.comps.items()})

    def __sub__(self, other: "Tensor") -> "Tensor":
        return self + (-other)

    def scale(self, f) -> "Tensor":
        f = self.chart.const(f)
        if not f:
            return Tensor.zero(self.chart, self.rank, self.variance, self.degree)
        return Tensor._raw(self.chart, self.rank, self.variance, self.degree,
                           {k: f * v for k, v in self.comps.items()})

    def __mul__(self, f):
        if isinstance(f, Tensor):
            return NotImplemented
        return self.scale(f)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Tensor):
            return NotImplemented
        return (self.chart is other.chart and self.rank == other.rank
                and self.variance == other.variance and self.degree == other.degree
                and self.comps == other.comps)

    def __hash__(self):
        return hash((self.variance, self.degree, tuple(sorted(self.comps.items()))))

    def __xor__(self, other: "Tensor") -> "Tensor":
        return wedge(self, other)

    def __call__(self, *args) -> Scalar:
        return evaluate(self, args)

    def __repr__(self) -> str:
        return f"Tensor({self.variance}, deg={self.degree}, {format_tensor(self)})"


def format_tensor(t: Tensor, frame: Sequence[str] | None = None) -> str:
    if not t.comps:
        return "0"
    names = list(frame) if frame else [f"e{i + 1}" for i in range(t.rank)]
    if t.variance == FORM:
        names = [coframe_name(n) for n in names]
    parts = []
    for key in sorted(t.comps):
        v = t.comps[key]
        if not key:
            parts.append(f"({v})")
        else:
            parts.append(f"({v})*" + "^".join(names[i] for i in key))
    return " + ".join(parts)


def coframe_name(frame_name: str) -> str:
    """``e3`` -> ``e^3``; other names get a ``^`` suffix."""
    m = len(frame_name.rstrip("0123456789"))
    if 0 < m < len(frame_name):
        return frame_name[:m] + "^" + frame_name[m:]
    return frame_name + "^"


def frame_vector(A: "Algebroid", i: int) -> Tensor:
    return Tensor._raw(A.chart, A.rank, VECTOR, 1, {(i,): A.chart.one()})


def coframe(A: "Algebroid", i: int) -> Tensor:
    return Tensor._raw(A.chart, A.rank, FORM, 1, {(i,): A.chart.one()})


def section(A: "Algebroid", values: Sequence) -> Tensor:
    if len(values) != A.rank:
        raise RankMismatch(f"section needs {A.rank} components")
    return Tensor.from_vector(A.chart, [A.chart.const(v) for v in values], VECTOR)


def one_form(A: "Algebroid", values: Sequence) -> Tensor:
    if len(values) != A.rank:
        raise RankMismatch(f"form needs {A.rank} components")
    return Tensor.from_vector(A.chart, [A.chart.const(v) for v in values], FORM)


def as_vector(x, chart: Chart, rank: int) -> list[Scalar]:
    """Components of a degree-1 tensor or plain sequence."""
    if isinstance(x, Tensor):
        if x.rank != rank:
            raise RankMismatch(f"rank {x.rank} vs {rank}")
        return x.vec()
    vals = list(x)
    if len(vals) != rank:
        raise RankMismatch(f"expected {rank} components, got {len(vals)}")
    return [chart.const(v) for v in vals]


def dual_variance(v: str) -> str:
    return FORM if v == VECTOR else VECTOR


def retag(t: Tensor, variance: str) -> Tensor:
    """Same components read with the other variance (A-forms as A*-multivectors)."""
    return Tensor._raw(t.chart, t.rank, variance, t.degree, t.comps)


# --- exterior algebra ---------------------------------------------------------

def wedge(P: Tensor, Q: Tensor) -> Tensor:
    if P.variance != Q.variance:
        raise VarianceMismatch(f"cannot wedge {P.variance} with {Q.variance}")
    if P.rank != Q.rank:
        raise RankMismatch(f"rank {P.rank} vs {Q.rank}")
    out: dict[tuple[int, ...], Scalar] = {}
    for I, p in P.comps.items():
        sI = set(I)
        for J, q in Q.comps.items():
            if sI.intersection(J):
                continue
            s, key = sort_sign(I + J)
            v = p * q
            if s < 0:
                v = -v
            if key in out:
                v = out[key] + v
                if not v:
                    del out[key]
                    continue
            out[key] = v
    return Tensor._raw(P.chart, P.rank, P.variance, P.degree + Q.degree, out)


def wedge_power(P: Tensor, m: int) -> Tensor:
    out = Tensor.scalar(P.chart, P.rank, 1, P.variance)
    for _ in range(m):
        out = wedge(out, P)
    return out


def pairing(P: Tensor, eta: Tensor) -> Scalar:
    if P.variance == eta.variance:
        raise VarianceMismatch("pairing needs a multivector and a form")
    if P.degree != eta.degree:
        raise DegreeMismatch(f"degree {P.degree} vs {eta.degree}")
    total = P.chart.zero()
    small, big = (P, eta) if len(P.comps) <= len(eta.comps) else (eta, P)
    for k, v in small.comps.items():
        w = big.comps.get(k)
        if w is not None:
            total = total + v * w
    return total


def interior(a, eta: Tensor) -> Tensor:
    """Insert ``a`` into the first slot of ``eta`` (``a`` of the dual variance)."""
    if isinstance(a, Tensor):
        if a.variance == eta.variance:
            raise VarianceMismatch("interior product needs opposite variances")
        if a.degree != 1:
            raise DegreeMismatch("interior product inserts a degree-1 element")
        av = a.vec()
    else:
        av = as_vector(a, eta.chart, eta.rank)
    if eta.degree == 0:
        raise DegreeMismatch("cannot insert into a degree-0 tensor")
    out: dict[tuple[int, ...], Scalar] = {}
    for I, v in eta.comps.items():
        for pos, i in enumerate(I):
            ai = av[i]
            if not ai:
                continue
            J = I[:pos] + I[pos + 1:]
            term = ai * v
            if pos % 2:
                term = -term
            if J in out:
                term = out[J] + term
                if not term:
                    del out[J]
                    continue
            out[J] = term
    return Tensor._raw(eta.chart, eta.rank, eta.variance, eta.degree - 1, out)


def evaluate(T: Tensor, args: Sequence) -> Scalar:
    """``T(args...)``: forms eat sections, multivectors eat 1-forms."""
    if len(args) != T.degree:
        raise DegreeMismatch(f"{T.degree} arguments expected, got {len(args)}")
    if T.degree == 0:
        return T.value()
    vecs = []
    for a in args:
        if isinstance(a, Tensor) and a.variance == T.variance:
            raise VarianceMismatch("argument has the same variance as the tensor")
        vecs.append(as_vector(a, T.chart, T.rank))
    total = T.chart.zero()
    for I, v in T.comps.items():
        rows = [[vecs[j][i] for j in range(T.degree)] for i in I]
        d = small_det(T.chart, rows)
        if d:
            total = total + v * d
    return total


def component_with(T: Tensor, slots: Sequence, vector_slot: int | None = None,
                   vector: Sequence[Scalar] | None = None) -> Scalar:
    """Evaluate ``T`` on frame indices, optionally replacing one slot by a vector."""
    if vector_slot is None:
        return T[tuple(slots)]
    acc = T.chart.zero()
    for m, vm in enumerate(vector):
        if not vm:
            continue
        idx = list(slots)
        idx[vector_slot] = m
        c = T[tuple(idx)]
        if c:
            acc = acc + vm * c
    return acc


def tensor_from_function(chart: Chart, rank: int, variance: str, degree: int, fn) -> Tensor:
    """Tabulate an alternating tensor from its values on increasing frame tuples."""
    comps = {}
    for I in increasing_tuples(rank, degree):
        v = fn(I)
        if v:
            comps[I] = chart.const(v)
    return Tensor._raw(chart, rank, variance, degree, comps)


# --- endomorphisms -----------------------------------------------------------------

class Endo:
    """(1,1)-tensor.  ``matrix[i][j]`` is the i-th component of the image of the j-th basis element.

    ``on`` is ``VECTOR`` for endomorphisms of A and ``FORM`` for those of A*.
    """

    __slots__ = ("chart", "rank", "matrix", "on")

    def __init__(self, chart: Chart, matrix: Sequence[Sequence], on: str = VECTOR):
        r = len(matrix)
        if any(len(row) != r for row in matrix):
            raise ShapeError("endomorphism matrix must be square")
        self.chart = chart
        self.rank = r
        self.matrix = tuple(tuple(chart.const(x) for x in row) for row in matrix)
        self.on = on

    def apply(self, v) -> Tensor:
        vec = as_vector(v, self.chart, self.rank)
        out = []
        for row in self.matrix:
            acc = self.chart.zero()
            for x, y in zip(row, vec):
                if x and y:
                    acc = acc + x * y
            out.append(acc)
        return Tensor.from_vector(self.chart, out, self.on)

    __call__ = apply

    def compose(self, other: "Endo") -> "Endo":
        from .linalg import matmul
        return Endo(self.chart, matmul(self.matrix, other.matrix), self.on)

    def is_zero(self) -> bool:
        return not any(x for row in self.matrix for x in row)

    def __add__(self, other: "Endo") -> "Endo":
        return Endo(self.chart, [[a + b for a, b in zip(r1, r2)]
                                 for r1, r2 in zip(self.matrix, other.matrix)], self.on)

    def __neg__(self) -> "Endo":
        return Endo(self.chart, [[-a for a in row] for row in self.matrix], self.on)

    def __sub__(self, other: "Endo") -> "Endo":
        return self + (-other)

    def __eq__(self, other):
        return isinstance(other, Endo) and self.matrix == other.matrix and self.on == other.on

    def __hash__(self):
        return hash((self.matrix, self.on))

    def __repr__(self):
        rows = ", ".join("[" + ", ".join(str(x) for x in row) + "]" for row in self.matrix)
        return f"Endo([{rows}])"


# --- the algebroid ----------------------------------------------------------------

class Kind(str, enum.Enum):
    SKEW = "Skew"
    ALMOST_LIE = "AlmostLie"
    LIE = "Lie"

    def __str__(self):
        return self.value


class Algebroid:
    """Anchored bundle with skew bracket, given on a global frame."""

    # set on algebroids built on a dual bundle, whose forms are multivectors of the base
    is_dual = False

    def __init__(self, chart: Chart, rank: int, anchor: Sequence[Sequence] | None = None,
                 structure=None, name: str = "A", frame: Sequence[str] | None = None):
        if rank < 1:
            raise ShapeError("rank must be positive")
        n = chart.dim
        self.chart = chart
        self.rank = rank
        self.name = name
        self.frame = tuple(frame) if frame else tuple(f"e{i + 1}" for i in range(rank))
        if len(self.frame) != rank:
            raise ShapeError("frame names do not match rank")
        z = chart.zero()
        if anchor is None:
            anchor = [[z] * n for _ in range(rank)]
        if len(anchor) != rank or any(len(row) != n for row in anchor):
            raise ShapeError(f"anchor must be a {rank}x{n} matrix")
        self.anchor = tuple(tuple(chart.const(x) for x in row) for row in anchor)
        self.c = self._structure_table(structure)
        self._anchor_fields = tuple(ChartVectorField(chart, row) for row in self.anchor)

    def _structure_table(self, structure):
        r, chart = self.rank, self.chart
        z = chart.zero()
        table = [[[z] * r for _ in range(r)] for _ in range(r)]
        if structure is None:
            pass
        elif isinstance(structure, Mapping):
            for (i, j), vals in structure.items():
                vals = [chart.const(v) for v in vals]
                if len(vals) != r:
                    raise ShapeError(f"bracket [{i},{j}] needs {r} components")
                if i == j:
                    if any(vals):
                        raise ShapeError(f"[e{i + 1},e{i + 1}] must vanish")
                    continue
                table[i][j] = vals
                table[j][i] = [-v for v in vals]
        else:
            if len(structure) != r:
                raise ShapeError("structure table has wrong shape")
            for i in range(r):
                for j in range(r):
                    vals = [chart.const(v) for v in structure[i][j]]
                    if len(vals) != r:
                        raise ShapeError("structure table has wrong shape")
                    table[i][j] = vals
            for i in range(r):
                for j in range(r):
                    for k in range(r):
                        if table[i][j][k] != -table[j][i][k]:
                            raise ShapeError(f"structure functions not skew at ({i},{j},{k})")
        return tuple(tuple(tuple(row) for row in plane) for plane in table)

    # ----- basic data
    @property
    def n(self) -> int:
        return self.chart.dim

    def anchor_field(self, i: int) -> ChartVectorField:
        return self._anchor_fields[i]

    def e(self, i: int) -> Tensor:
        return frame_vector(self, i)

    def ecov(self, i: int) -> Tensor:
        return coframe(self, i)

    def zero_anchor(self) -> bool:
        return not any(x for row in self.anchor for x in row)

    def __eq__(self, other):
        return (isinstance(other, Algebroid) and self.chart is other.chart
                and self.rank == other.rank and self.anchor == other.anchor and self.c == other.c)

    def __hash__(self):
        return hash((self.chart.names, self.rank, self.anchor, self.c))

    def __repr__(self):
        return f"Algebroid({self.name}, rank={self.rank}, coords={list(self.chart.names)})"

    # ----- primitive derivations
    def rho_frame(self, i: int, f: Scalar) -> Scalar:
        out = self.chart.zero()
        for j, a in enumerate(self.anchor[i]):
            if a:
                out = out + a * f.partial(j)
        return out

    def rho_vec(self, a: Sequence[Scalar], f: Scalar) -> Scalar:
        if f.is_constant():
            return self.chart.zero()
        out = self.chart.zero()
        for i, ai in enumerate(a):
            if ai:
                out = out + ai * self.rho_frame(i, f)
        return out

    def rho_field(self, a: Sequence[Scalar]) -> ChartVectorField:
        comps = []
        for j in range(self.n):
            acc = self.chart.zero()
            for i, ai in enumerate(a):
                if ai and self.anchor[i][j]:
                    acc = acc + ai * self.anchor[i][j]
            comps.append(acc)
        return ChartVectorField(self.chart, comps)

    def bracket_vec(self, a: Sequence[Scalar], b: Sequence[Scalar]) -> list[Scalar]:
        r = self.rank
        out = [self.chart.zero()] * r
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                if not bj or i == j:
                    continue
                cij = self.c[i][j]
                f = None
                for k in range(r):
                    if cij[k]:
                        if f is None:
                            f = ai * bj
                        out[k] = out[k] + f * cij[k]
        if self.n:
            for k in range(r):
                if b[k]:
                    out[k] = out[k] + self.rho_vec(a, b[k])
                if a[k]:
                    out[k] = out[k] - self.rho_vec(b, a[k])
        return out

    def bracket_with_frame(self, a: Sequence[Scalar], j: int) -> list[Scalar]:
        """``[a, e_j]``."""
        r = self.rank
        out = [self.chart.zero()] * r
        for i, ai in enumerate(a):
            if not ai:
                continue
            for k in range(r):
                if self.c[i][j][k]:
                    out[k] = out[k] + ai * self.c[i][j][k]
            if self.n:
                d = self.rho_frame(j, ai)
                if d:
                    out[i] = out[i] - d
        return out


# --- operations ----------------------------------------------------------------------

def _vec(A: Algebroid, a) -> list[Scalar]:
    return as_vector(a, A.chart, A.rank)


def _check_base(A: Algebroid, T: Tensor):
    if T.chart is not A.chart:
        raise ChartMismatch(f"{T.chart} vs {A.chart}")
    if T.rank != A.rank:
        raise RankMismatch(f"tensor rank {T.rank} vs algebroid rank {A.rank}")


def bracket_sections(A: Algebroid, a, b) -> Tensor:
    return Tensor.from_vector(A.chart, A.bracket_vec(_vec(A, a), _vec(A, b)))


def anchor_apply(A: Algebroid, a, phi) -> Scalar:
    return A.rho_vec(_vec(A, a), A.chart.const(phi))


def d_rho(A: Algebroid, eta) -> Tensor:
    """Exterior differential on frame tuples."""
    if not isinstance(eta, Tensor):
        eta = Tensor.scalar(A.chart, A.rank, eta)
    _check_base(A, eta)
    if eta.variance != FORM:
        raise VarianceMismatch("d_rho acts on forms")
    k = eta.degree
    r = A.rank
    if k + 1 > r:
        return Tensor.zero(A.chart, r, FORM, k + 1)
    out = {}
    for I in increasing_tuples(r, k + 1):
        acc = A.chart.zero()
        if A.n:
            for t in range(k + 1):
                rest = I[:t] + I[t + 1:]
                v = eta.comps.get(rest)
                if v is not None and not v.is_constant():
                    d = A.rho_frame(I[t], v)
                    if d:
                        acc = acc + d if t % 2 == 0 else acc - d
        if k >= 1:
            for s in range(k + 1):
                for t in range(s + 1, k + 1):
                    cst = A.c[I[s]][I[t]]
                    rest = I[:s] + I[s + 1:t] + I[t + 1:]
                    term = A.chart.zero()
                    for m in range(r):
                        if cst[m]:
                            v = eta[(m,) + rest]
                            if v:
                                term = term + cst[m] * v
                    if term:
                        acc = acc + term if (s + t) % 2 == 0 else acc - term
        if acc:
            out[I] = acc
    return Tensor._raw(A.chart, r, FORM, k + 1, out)


def _lie_form(A: Algebroid, a: list[Scalar], eta: Tensor) -> Tensor:
    k, r = eta.degree, A.rank
    if k == 0:
        return Tensor.scalar(A.chart, r, A.rho_vec(a, eta.value()), FORM)
    brackets = [A.bracket_with_frame(a, j) for j in range(r)]
    out = {}
    for I in increasing_tuples(r, k):
        v = eta.comps.get(I)
        acc = A.rho_vec(a, v) if v is not None else A.chart.zero()
        for t in range(k):
            acc = acc - component_with(eta, I, t, brackets[I[t]])
        if acc:
            out[I] = acc
    return Tensor._raw(A.chart, r, FORM, k, out)


def _lie_multivector(A: Algebroid, a: list[Scalar], P: Tensor) -> Tensor:
    k, r = P.degree, A.rank
    if k == 0:
        return Tensor.scalar(A.chart, r, A.rho_vec(a, P.value()), VECTOR)
    brackets = [A.bracket_with_frame(a, j) for j in range(r)]
    out: dict[tuple[int, ...], Scalar] = {}

    def add(key, val):
        s, key = sort_sign(key)
        if s == 0 or not val:
            return
        val = val if s > 0 else -val
        if key in out:
            val = out[key] + val
            if not val:
                del out[key]
                return
        out[key] = val

    for I, v in P.comps.items():
        add(I, A.rho_vec(a, v))
        for t in range(k):
            br = brackets[I[t]]
            for m, bm in enumerate(br):
                if bm:
                    add(I[:t] + (m,) + I[t + 1:], v * bm)
    return Tensor._raw(A.chart, r, VECTOR, k, out)


def lie_derivative(A: Algebroid, a, T) -> Tensor:
    av = _vec(A, a)
    if not isinstance(T, Tensor):
        return Tensor.scalar(A.chart, A.rank, A.rho_vec(av, A.chart.const(T)))
    _check_base(A, T)
    if T.variance == FORM:
        return _lie_form(A, av, T)
    return _lie_multivector(A, av, T)


def cartan_defect(A: Algebroid, a, eta: Tensor) -> Tensor:
    if eta.degree == 0:
        return Tensor.zero(A.chart, A.rank, FORM, 0)
    lhs = lie_derivative(A, a, eta)
    rhs = interior(_vec(A, a), d_rho(A, eta)) + d_rho(A, interior(_vec(A, a), eta))
    return lhs - rhs


def schouten(A: Algebroid, P, Q) -> Tensor:
    """Bracket of multivectors by recursion on the defining axioms."""
    chart, r = A.chart, A.rank
    if not isinstance(P, Tensor):
        P = Tensor.scalar(chart, r, P, VECTOR)
    if not isinstance(Q, Tensor):
        Q = Tensor.scalar(chart, r, Q, VECTOR)
    for T in (P, Q):
        _check_base(A, T)
        if T.variance != VECTOR:
            raise VarianceMismatch("schouten bracket acts on multivectors")
    k, l = P.degree, Q.degree
    deg = k + l - 1
    if deg < 0:
        return Tensor.zero(chart, r, VECTOR, 0)
    if deg > r:
        return Tensor.zero(chart, r, VECTOR, deg)
    if k == 1:
        return lie_derivative(A, P, Q)
    if l == 0:
        if k == 0:
            return Tensor.zero(chart, r, VECTOR, 0)
        return _schouten_general(A, Q, P)
    if l == 1:
        out = lie_derivative(A, Q, P)
        return out if k % 2 == 0 else -out
    return _schouten_general(A, P, Q)


def _schouten_general(A: Algebroid, P: Tensor, Q: Tensor) -> Tensor:
    chart, r = A.chart, A.rank
    k = P.degree
    sgn_head = 1 if k % 2 == 0 else -1        # [P, a] = (-1)^k L_a P
    sgn_tail = 1 if (k + 1) % 2 == 0 else -1  # (-1)^{(k+1)*1}
    memo: dict[tuple[int, ...], Tensor] = {}

    def with_frame(J: tuple[int, ...]) -> Tensor:
        # [P, e_J] for a frame monomial e_J
        got = memo.get(J)
        if got is not None:
            return got
        if len(J) == 1:
            v = lie_derivative(A, frame_vector(A, J[0]), P)
            res = v if sgn_head > 0 else -v
        else:
            res = expand(Tensor._raw(chart, r, VECTOR, len(J), {J: chart.one()}))
        memo[J] = res
        return res

    def expand(Qt: Tensor) -> Tensor:
        deg = k + Qt.degree - 1
        total = Tensor.zero(chart, r, VECTOR, deg)
        for I, q in Qt.comps.items():
            head = [chart.zero()] * r
            head[I[0]] = q
            tail = Tensor._raw(chart, r, VECTOR, len(I) - 1, {I[1:]: chart.one()})
            headt = Tensor.from_vector(chart, head)
            term1 = wedge(lie_derivative(A, head, P), tail)
            if sgn_head < 0:
                term1 = -term1
            term2 = wedge(headt, with_frame(I[1:]))
            if sgn_tail < 0:
                term2 = -term2
            total = total + term1 + term2
        return total

    if Q.degree == 1:
        v = lie_derivative(A, Q, P)
        return v if sgn_head > 0 else -v
    return expand(Q)


def anchor_defect(A: Algebroid, i: int, j: int) -> ChartVectorField:
    lhs = A.rho_field(A.c[i][j])
    rhs = A.anchor_field(i).bracket(A.anchor_field(j))
    return lhs - rhs


def jacobiator_sections(A: Algebroid, i: int, j: int, k: int) -> Tensor:
    def e(m):
        v = [A.chart.zero()] * A.rank
        v[m] = A.chart.one()
        return v

    def cyc(p, q, s):
        return A.bracket_vec(A.bracket_vec(e(p), e(q)), e(s))

    total = [x + y + z for x, y, z in zip(cyc(i, j, k), cyc(j, k, i), cyc(k, i, j))]
    return Tensor.from_vector(A.chart, total)


def jacobiator_vec(A: Algebroid, a, b, c) -> list[Scalar]:
    a, b, c = _vec(A, a), _vec(A, b), _vec(A, c)
    t1 = A.bracket_vec(A.bracket_vec(a, b), c)
    t2 = A.bracket_vec(A.bracket_vec(b, c), a)
    t3 = A.bracket_vec(A.bracket_vec(c, a), b)
    return [x + y + z for x, y, z in zip(t1, t2, t3)]


def anchor_defects(A: Algebroid) -> dict[tuple[int, int], ChartVectorField]:
    out = {}
    for i, j in increasing_tuples(A.rank, 2):
        d = anchor_defect(A, i, j)
        if not d.is_zero():
            out[(i, j)] = d
    return out


def jacobiators(A: Algebroid) -> dict[tuple[int, int, int], Tensor]:
    out = {}
    for i, j, k in increasing_tuples(A.rank, 3):
        jac = jacobiator_sections(A, i, j, k)
        if not jac.is_zero():
            out[(i, j, k)] = jac
    return out


def classify(A: Algebroid) -> Kind:
    anchor_ok = not anchor_defects(A)
    jac_ok = not jacobiators(A)
    if anchor_ok and jac_ok:
        return Kind.LIE
    if anchor_ok:
        return Kind.ALMOST_LIE
    if jac_ok:
        warnings.warn(
            f"{A.name}: frame Jacobiators vanish but the anchor does not preserve brackets; "
            "classified as Skew",
            InconsistentAlgebroidWarning,
            stacklevel=2,
        )
    return Kind.SKEW
