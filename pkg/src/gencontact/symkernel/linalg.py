"""Dense matrices over the rational-function field (lists of rows)."""
from __future__ import annotations

from typing import Sequence

from .ring import Chart, RationalExpr

Matrix = list[list[RationalExpr]]


def identity(chart: Chart, n: int) -> Matrix:
    return [[chart.one if i == j else chart.zero for j in range(n)] for i in range(n)]


def zeros(chart: Chart, rows: int, cols: int | None = None) -> Matrix:
    return [[chart.zero] * (rows if cols is None else cols) for _ in range(rows)]


def transpose(m: Sequence[Sequence[RationalExpr]]) -> Matrix:
    return [list(col) for col in zip(*m)]


def matmul(a, b) -> Matrix:
    chart = a[0][0].chart
    bt = transpose(b)
    out = []
    for row in a:
        out_row = []
        for col in bt:
            acc = chart.zero
            for x, y in zip(row, col):
                if x.num.is_zero() or y.num.is_zero():
                    continue
                acc = acc + x * y
            out_row.append(acc)
        out.append(out_row)
    return out


def add(a, b) -> Matrix:
    return [[x + y for x, y in zip(r, s)] for r, s in zip(a, b)]


def sub(a, b) -> Matrix:
    return [[x - y for x, y in zip(r, s)] for r, s in zip(a, b)]


def neg(a) -> Matrix:
    return [[-x for x in r] for r in a]


def scale(a, f) -> Matrix:
    return [[f * x for x in r] for r in a]


def is_zero(a) -> bool:
    return all(x.is_zero() for r in a for x in r)


def inverse(m) -> Matrix | None:
    """Gauss-Jordan inverse; None if the matrix is singular over the field."""
    n = len(m)
    if n == 0:
        return []
    chart = m[0][0].chart
    aug = [list(row) + [chart.one if i == j else chart.zero for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        pivot = None
        best = None
        for r in range(col, n):
            v = aug[r][col]
            if not v.is_zero():
                # prefer simple pivots to keep intermediate swell down
                size = len(v.num) + len(v.den)
                if best is None or size < best:
                    pivot, best = r, size
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = aug[col][col].inverse()
        aug[col] = [inv * x for x in aug[col]]
        for r in range(n):
            if r != col and not aug[r][col].is_zero():
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def rank(m) -> int:
    if not m:
        return 0
    rows = [list(r) for r in m]
    rk = 0
    ncols = len(rows[0])
    for col in range(ncols):
        pivot = next((r for r in range(rk, len(rows)) if not rows[r][col].is_zero()), None)
        if pivot is None:
            continue
        rows[rk], rows[pivot] = rows[pivot], rows[rk]
        inv = rows[rk][col].inverse()
        for r in range(len(rows)):
            if r != rk and not rows[r][col].is_zero():
                f = rows[r][col] * inv
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rk])]
        rk += 1
    return rk
