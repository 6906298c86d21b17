"""Dense linear algebra over the Scalar field (small matrices only)."""

from __future__ import annotations

from typing import Sequence

from .coeff import Chart, Scalar


class Degenerate(ValueError):
    """A matrix that must be invertible has zero determinant in the field."""


Matrix = list[list[Scalar]]


def identity(chart: Chart, r: int) -> Matrix:
    one, zero = chart.one(), chart.zero()
    return [[one if i == j else zero for j in range(r)] for i in range(r)]


def zeros(chart: Chart, rows: int, cols: int) -> Matrix:
    z = chart.zero()
    return [[z] * cols for _ in range(rows)]


def transpose(m: Sequence[Sequence[Scalar]]) -> Matrix:
    return [list(col) for col in zip(*m)]


def matmul(a: Sequence[Sequence[Scalar]], b: Sequence[Sequence[Scalar]]) -> Matrix:
    bt = transpose(b)
    out = []
    for row in a:
        out_row = []
        for col in bt:
            acc = None
            for x, y in zip(row, col):
                if x and y:
                    acc = x * y if acc is None else acc + x * y
            out_row.append(acc if acc is not None else row[0].chart.zero())
        out.append(out_row)
    return out


def matvec(m: Sequence[Sequence[Scalar]], v: Sequence[Scalar]) -> list[Scalar]:
    out = []
    for row in m:
        acc = v[0].chart.zero() if v else None
        for x, y in zip(row, v):
            if x and y:
                acc = acc + x * y
        out.append(acc)
    return out


def neg(m: Sequence[Sequence[Scalar]]) -> Matrix:
    return [[-x for x in row] for row in m]


def is_zero_matrix(m: Sequence[Sequence[Scalar]]) -> bool:
    return all(not x for row in m for x in row)


def is_symmetric(m: Sequence[Sequence[Scalar]]) -> bool:
    r = len(m)
    return all(m[i][j] == m[j][i] for i in range(r) for j in range(i + 1, r))


def _eliminate(m: Sequence[Sequence[Scalar]], rhs: Sequence[Sequence[Scalar]] | None):
    """Gauss-Jordan; returns (det, reduced rhs) or det=0 with rhs None."""
    r = len(m)
    a = [list(row) for row in m]
    b = [list(row) for row in rhs] if rhs is not None else None
    chart = a[0][0].chart if r else None
    det = chart.one() if r else None
    for col in range(r):
        piv = next((i for i in range(col, r) if a[i][col]), None)
        if piv is None:
            return chart.zero(), None
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            if b is not None:
                b[col], b[piv] = b[piv], b[col]
            det = -det
        p = a[col][col]
        det = det * p
        inv = p.inverse()
        a[col] = [x * inv for x in a[col]]
        if b is not None:
            b[col] = [x * inv for x in b[col]]
        for i in range(r):
            if i != col and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
                if b is not None:
                    b[i] = [x - f * y for x, y in zip(b[i], b[col])]
    return det, b


def det(m: Sequence[Sequence[Scalar]]) -> Scalar:
    if not m:
        raise ValueError("empty matrix")
    d, _ = _eliminate(m, None)
    return d


def inverse(m: Sequence[Sequence[Scalar]]) -> Matrix:
    if not m:
        return []
    chart = m[0][0].chart
    d, b = _eliminate(m, identity(chart, len(m)))
    if b is None:
        raise Degenerate("matrix is singular over the coefficient field")
    return b


def solve(m: Sequence[Sequence[Scalar]], v: Sequence[Scalar]) -> list[Scalar]:
    d, b = _eliminate(m, [[x] for x in v])
    if b is None:
        raise Degenerate("matrix is singular over the coefficient field")
    return [row[0] for row in b]
