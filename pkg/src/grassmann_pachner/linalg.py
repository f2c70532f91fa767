"""Dense linear algebra over the package's scalar fields.

Matrices are plain lists of rows.  Exact input is eliminated without any
rounding; float input uses partial pivoting and a tolerance-relative zero
threshold (see :meth:`FloatField.zero_threshold`).
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

from .scalars import EXACT, Field


def _copy(rows: Sequence[Sequence]) -> list[list]:
    return [list(r) for r in rows]


def rref(rows: Sequence[Sequence], field: Field = EXACT, ncols: int | None = None):
    """Reduced row echelon form.

    Returns ``(matrix, pivots)`` where ``pivots`` lists the pivot column of
    each nonzero row, in order.
    """
    m = _copy(rows)
    if not m:
        return m, []
    ncols = len(m[0]) if ncols is None else ncols
    threshold = field.zero_threshold(e for r in m for e in r)
    exact = threshold == 0.0

    def negligible(x):
        return x == 0 if exact else abs(x) <= threshold

    pivots: list[int] = []
    r = 0
    nrows = len(m)
    for c in range(ncols):
        if r == nrows:
            break
        if exact:
            p = next((k for k in range(r, nrows) if m[k][c] != 0), None)
        else:
            p = max(range(r, nrows), key=lambda k: abs(m[k][c]))
            if negligible(m[p][c]):
                p = None
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = field.reciprocal(m[r][c])
        row = [x * inv for x in m[r]]
        m[r] = row
        for k in range(nrows):
            if k == r:
                continue
            f = m[k][c]
            if f == 0:
                continue
            mk = m[k]
            m[k] = [a - f * b for a, b in zip(mk, row)]
            if not exact:
                m[k][c] = 0j
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(rows: Sequence[Sequence], field: Field = EXACT) -> int:
    if not rows or not rows[0]:
        return 0
    return len(rref(rows, field)[1])


def nullspace(rows: Sequence[Sequence], ncols: int, field: Field = EXACT) -> list[list]:
    """Basis of ``{v : M v = 0}``, one vector per free column."""
    if not rows:
        one, zero = field.coerce(1), field.coerce(0)
        return [[one if j == i else zero for j in range(ncols)] for i in range(ncols)]
    red, pivots = rref(rows, field, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    one, zero = field.coerce(1), field.coerce(0)
    basis = []
    for fc in free:
        v = [zero] * ncols
        v[fc] = one
        for row, pc in zip(red, pivots):
            v[pc] = -row[fc]
        basis.append(v)
    return basis


def solve(a: Sequence[Sequence], b: Sequence[Sequence], field: Field = EXACT) -> list[list]:
    """Solve ``A X = B`` for square invertible ``A``; raises ZeroDivisionError if singular."""
    n = len(a)
    aug = [list(a[i]) + list(b[i]) for i in range(n)]
    red, pivots = rref(aug, field, ncols=n)
    if pivots != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), 0) for col in bt] for row in a]


def transpose(a: Sequence[Sequence]) -> list[list]:
    return [list(c) for c in zip(*a)]


def bareiss_rank(rows: Sequence[Sequence]) -> int:
    """Rank of a rational matrix by fraction-free (Bareiss) elimination.

    Each row is first scaled to integers, so every intermediate value is an
    exact integer and the divisions are exact.
    """
    m = []
    for r in rows:
        fr = [Fraction(x) for x in r]
        den = lcm(*(x.denominator for x in fr)) if fr else 1
        m.append([int(x * den) for x in fr])
    if not m or not m[0]:
        return 0
    nrows, ncols = len(m), len(m[0])
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((k for k in range(r, nrows) if m[k][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        for k in range(r + 1, nrows):
            mk = m[k]
            f = mk[c]
            m[k] = [(piv * mk[j] - f * m[r][j]) // prev for j in range(ncols)]
        prev = piv
        r += 1
    return r
