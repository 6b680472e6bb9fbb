"""Exact matrix arithmetic over the integers and rationals.

Matrices are plain lists of rows (lists of int or Fraction) and every
operation is exact.  hnf() rotates the smallest nonzero entry into the
pivot position at each step; without that the intermediate entries
explode on the 60x40 stacks produced by the gluing construction.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path


def identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(rows: int, cols: int) -> list[list[int]]:
    return [[0] * cols for _ in range(rows)]


def copy_matrix(m: list[list]) -> list[list]:
    return [list(row) for row in m]


def transpose(m: list[list]) -> list[list]:
    return [list(col) for col in zip(*m)]


def matmul(a: list[list], b: list[list]) -> list[list]:
    if a and b and len(a[0]) != len(b):
        raise ValueError(f"shape mismatch: {len(a[0])} vs {len(b)}")
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec(m: list[list], v: list) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in m]


def vec_mat(v: list, m: list[list]) -> list:
    return [sum(x * y for x, y in zip(v, col)) for col in zip(*m)]


def dot(v: list, w: list) -> int:
    return sum(x * y for x, y in zip(v, w))


def hnf(m: list[list[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """Row Hermite normal form of an integer matrix.

    Returns (h, t) with t unimodular and t * m == h.  Pivots are
    positive, entries below a pivot are zero, entries above it are
    reduced into [0, pivot), and zero rows sit at the bottom.  h has
    the same shape as m.
    """
    h = [list(row) for row in m]
    rows = len(h)
    cols = len(h[0]) if rows else 0
    t = identity(rows)
    r = 0
    for c in range(cols):
        while True:
            piv = None
            best = None
            for i in range(r, rows):
                v = abs(h[i][c])
                if v and (best is None or v < best):
                    piv, best = i, v
            if piv is None:
                break
            if piv != r:
                h[r], h[piv] = h[piv], h[r]
                t[r], t[piv] = t[piv], t[r]
            clean = True
            for i in range(r + 1, rows):
                if h[i][c]:
                    q = h[i][c] // h[r][c]
                    h[i] = [x - q * y for x, y in zip(h[i], h[r])]
                    t[i] = [x - q * y for x, y in zip(t[i], t[r])]
                    if h[i][c]:
                        clean = False
            if clean:
                break
        if r >= rows or h[r][c] == 0:
            continue
        if h[r][c] < 0:
            h[r] = [-x for x in h[r]]
            t[r] = [-x for x in t[r]]
        for i in range(r):
            q = h[i][c] // h[r][c]
            if q:
                h[i] = [x - q * y for x, y in zip(h[i], h[r])]
                t[i] = [x - q * y for x, y in zip(t[i], t[r])]
        r += 1
    return h, t


def hnf_basis(m: list[list[int]]) -> list[list[int]]:
    """Nonzero rows of the row Hermite normal form of m."""
    h, _ = hnf(m)
    return [row for row in h if any(row)]


def snf_diagonal(m: list[list[int]]) -> list[int]:
    """Nonzero elementary divisors d1 | d2 | ... of an integer matrix."""
    a = [list(row) for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    divs = []
    t = 0
    while t < rows and t < cols:
        best = None
        bi = bj = -1
        for i in range(t, rows):
            for j in range(t, cols):
                v = abs(a[i][j])
                if v and (best is None or v < best):
                    best, bi, bj = v, i, j
        if best is None:
            break
        a[t], a[bi] = a[bi], a[t]
        for row in a:
            row[t], row[bj] = row[bj], row[t]
        again = False
        for i in range(t + 1, rows):
            if a[i][t]:
                q = a[i][t] // a[t][t]
                a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    again = True
        for j in range(t + 1, cols):
            if a[t][j]:
                q = a[t][j] // a[t][t]
                for row in a:
                    row[j] -= q * row[t]
                if a[t][j]:
                    again = True
        if again:
            continue
        p = a[t][t]
        bad = None
        for i in range(t + 1, rows):
            if any(a[i][j] % p for j in range(t + 1, cols)):
                bad = i
                break
        if bad is not None:
            a[t] = [x + y for x, y in zip(a[t], a[bad])]
            continue
        divs.append(abs(p))
        t += 1
    return divs


def snf_with_transforms(
    m: list[list[int]],
) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Smith normal form with transforms: returns (u, d, v) where u and
    v are unimodular and u * m * v == d is diagonal with each diagonal
    entry nonnegative and dividing the next."""
    a = [list(row) for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    u = identity(rows)
    v = identity(cols)
    t = 0
    while t < rows and t < cols:
        best = None
        bi = bj = -1
        for i in range(t, rows):
            for j in range(t, cols):
                w = abs(a[i][j])
                if w and (best is None or w < best):
                    best, bi, bj = w, i, j
        if best is None:
            break
        a[t], a[bi] = a[bi], a[t]
        u[t], u[bi] = u[bi], u[t]
        for row in a:
            row[t], row[bj] = row[bj], row[t]
        for row in v:
            row[t], row[bj] = row[bj], row[t]
        again = False
        for i in range(t + 1, rows):
            if a[i][t]:
                q = a[i][t] // a[t][t]
                a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                u[i] = [x - q * y for x, y in zip(u[i], u[t])]
                if a[i][t]:
                    again = True
        for j in range(t + 1, cols):
            if a[t][j]:
                q = a[t][j] // a[t][t]
                for row in a:
                    row[j] -= q * row[t]
                for row in v:
                    row[j] -= q * row[t]
                if a[t][j]:
                    again = True
        if again:
            continue
        p = a[t][t]
        bad = None
        for i in range(t + 1, rows):
            if any(a[i][j] % p for j in range(t + 1, cols)):
                bad = i
                break
        if bad is not None:
            a[t] = [x + y for x, y in zip(a[t], a[bad])]
            u[t] = [x + y for x, y in zip(u[t], u[bad])]
            continue
        if p < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return u, a, v


def det(m: list[list]):
    """Exact determinant.  Integer input gives an int (fraction-free
    elimination); rational input gives a Fraction."""
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    if all(isinstance(x, int) for row in m for x in row):
        return _det_bareiss(m)
    return _det_fraction(m)


def _det_bareiss(m: list[list[int]]) -> int:
    a = [list(row) for row in m]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _det_fraction(m: list[list]) -> Fraction:
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    out = Fraction(1)
    for k in range(n):
        piv = None
        for i in range(k, n):
            if a[i][k]:
                piv = i
                break
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            out = -out
        out *= a[k][k]
        for i in range(k + 1, n):
            if a[i][k]:
                f = a[i][k] / a[k][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return out


def inverse(m: list[list]) -> list[list[Fraction]]:
    """Exact inverse with Fraction entries.  Raises ValueError if the
    matrix is singular or not square."""
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("inverse of a non-square matrix")
    a = [
        [Fraction(x) for x in row] + [Fraction(1 if i == j else 0) for j in range(n)]
        for i, row in enumerate(m)
    ]
    for k in range(n):
        piv = None
        for i in range(k, n):
            if a[i][k]:
                piv = i
                break
        if piv is None:
            raise ValueError("matrix is singular")
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
        f = a[k][k]
        a[k] = [x / f for x in a[k]]
        for i in range(n):
            if i != k and a[i][k]:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return [row[n:] for row in a]


def format_entry(x) -> str:
    if isinstance(x, Fraction) and x.denominator != 1:
        return f"{x.numerator}/{x.denominator}"
    return str(int(x))


def parse_entry(s: str):
    if "/" in s:
        return Fraction(s)
    return int(s)


def write_matrix_text(m: list[list]) -> str:
    lines = [f"{len(m)} {len(m[0]) if m else 0}"]
    for row in m:
        lines.append(" ".join(format_entry(x) for x in row))
    return "\n".join(lines) + "\n"


def read_matrix_text(text: str) -> list[list]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty matrix text")
    r, c = map(int, lines[0].split())
    if len(lines) - 1 < r:
        raise ValueError(f"expected {r} rows, found {len(lines) - 1}")
    rows = []
    for i in range(r):
        row = [parse_entry(tok) for tok in lines[1 + i].split()]
        if len(row) != c:
            raise ValueError(f"row {i} has {len(row)} entries, expected {c}")
        rows.append(row)
    return rows


def write_matrix(path, m: list[list]) -> None:
    Path(path).write_text(write_matrix_text(m))


def read_matrix(path) -> list[list]:
    return read_matrix_text(Path(path).read_text())
