"""Square matrices of rational functions, stored as tuples of tuples."""

from __future__ import annotations

from typing import Sequence

from .errors import Degenerate, KvcertError
from .poly import MultiPoly
from .ratfunc import RatFunc

Matrix = tuple[tuple[RatFunc, ...], ...]


def as_matrix(rows: Sequence[Sequence[RatFunc]]) -> Matrix:
    m = tuple(tuple(r) for r in rows)
    if any(len(r) != len(m[0]) for r in m):
        raise ValueError("ragged matrix")
    return m


def zeros(n: int, variables, cols: int | None = None) -> Matrix:
    z = RatFunc.constant(0, variables)
    return tuple(tuple(z for _ in range(n if cols is None else cols)) for _ in range(n))


def identity(n: int, variables) -> Matrix:
    one, z = RatFunc.constant(1, variables), RatFunc.constant(0, variables)
    return tuple(tuple(one if i == j else z for j in range(n)) for i in range(n))


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m)) if m else m


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    out = []
    for row in a:
        new = []
        for col in bt:
            acc = None
            for x, y in zip(row, col):
                if x.is_zero() or y.is_zero():
                    continue
                acc = x * y if acc is None else acc + x * y
            new.append(acc if acc is not None else row[0] * 0)
        out.append(tuple(new))
    return tuple(out)


def matadd(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(a, b))


def matsub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(a, b))


def matpow(m: Matrix, k: int, variables) -> Matrix:
    result = identity(len(m), variables)
    for _ in range(k):
        result = matmul(result, m)
    return result


def mat_eq(a: Matrix, b: Matrix) -> bool:
    return len(a) == len(b) and all(x == y for r, s in zip(a, b) for x, y in zip(r, s))


def is_symmetric(m: Matrix) -> bool:
    return all(m[i][j] == m[j][i] for i in range(len(m)) for j in range(i + 1, len(m)))


def _row_multiplier(row: Sequence[RatFunc]) -> MultiPoly:
    """A common multiple of the row's denominators (not necessarily least)."""
    mult = None
    for f in row:
        d = f.den
        if d.is_constant():
            continue
        if mult is None:
            mult = d
        elif mult.divide_exact(d) is not None:
            continue
        elif d.divide_exact(mult) is not None:
            mult = d
        else:
            mult = mult * d
    return mult


def _polynomial_rows(m: Matrix) -> tuple[list[list[MultiPoly]], list[RatFunc]]:
    """Scale each row into polynomials; return the rows and the scale factors."""
    rows, scales = [], []
    for row in m:
        variables = row[0].variables
        mult = _row_multiplier(row)
        s = RatFunc.constant(1, variables) if mult is None else RatFunc(mult)
        new = []
        for f in row:
            g = f * s
            if not g.den.is_constant():
                raise KvcertError("row scaling failed to clear denominators")
            new.append(g.num.scale(1 / g.den.constant_value()))
        rows.append(new)
        scales.append(s)
    return rows, scales


def _exact(p: MultiPoly, d: MultiPoly) -> MultiPoly:
    q = p.divide_exact(d)
    if q is None:
        raise KvcertError("fraction-free elimination produced an inexact division")
    return q


def _bareiss(rows: list[list[MultiPoly]], n: int) -> tuple[list[list[MultiPoly]], MultiPoly]:
    """Fraction-free Gauss-Jordan on an n x (n+c) polynomial array.

    Returns the reduced array, whose left block is ``d*I``, and ``d``.
    """
    a = [list(r) for r in rows]
    variables = a[0][0].variables
    prev = MultiPoly.constant(1, variables)
    width = len(a[0])
    for k in range(n):
        piv = next((r for r in range(k, n) if not a[r][k].is_zero()), None)
        if piv is None:
            raise Degenerate("determinant is identically zero")
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
        akk = a[k][k]
        for i in range(n):
            if i == k:
                continue
            aik = a[i][k]
            for j in range(width):
                v = akk * a[i][j]
                if not aik.is_zero() and not a[k][j].is_zero():
                    v = v - aik * a[k][j]
                a[i][j] = _exact(v, prev) if not prev.is_constant() else v.scale(1 / prev.constant_value())
        prev = akk
    return a, prev


def determinant(m: Matrix) -> RatFunc:
    n = len(m)
    if n == 0:
        raise ValueError("empty matrix")
    variables = m[0][0].variables
    rows, scales = _polynomial_rows(m)
    # Gaussian elimination without back-substitution keeps track of swaps via sign
    a = [list(r) for r in rows]
    sign = 1
    prev = MultiPoly.constant(1, variables)
    for k in range(n - 1):
        piv = next((r for r in range(k, n) if not a[r][k].is_zero()), None)
        if piv is None:
            return RatFunc.constant(0, variables)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                v = a[k][k] * a[i][j] - a[i][k] * a[k][j]
                a[i][j] = _exact(v, prev)
            a[i][k] = MultiPoly.constant(0, variables)
        prev = a[k][k]
    det = RatFunc(a[n - 1][n - 1].scale(sign))
    for s in scales:
        det = det / s
    return det


def inverse(m: Matrix) -> Matrix:
    """Exact inverse by fraction-free elimination; raises Degenerate."""
    n = len(m)
    if n == 0:
        return m
    variables = m[0][0].variables
    rows, scales = _polynomial_rows(m)
    one, zero = MultiPoly.constant(1, variables), MultiPoly.constant(0, variables)
    aug = [row + [one if i == j else zero for j in range(n)] for i, row in enumerate(rows)]
    reduced, d = _bareiss(aug, n)
    # P = D*M with D = diag(scales), so M^-1 = P^-1 * D
    out = []
    for i in range(n):
        out.append(tuple(RatFunc(reduced[i][n + j], d) * scales[j] for j in range(n)))
    return tuple(out)
