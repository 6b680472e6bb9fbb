"""Exact lattice basis reduction driven by Gram matrices.

Both routines work purely on inner products, so they apply to lattices
given by a Gram matrix with no coordinate representation.  Arithmetic
is over Fraction throughout.
"""

from __future__ import annotations

from fractions import Fraction

from .matrices import identity


def ldl(gram: list[list]) -> tuple[list[list[Fraction]], list[Fraction]]:
    """Exact LDL decomposition of a positive definite Gram matrix.

    Returns (mu, d) with mu unit lower triangular and
    gram == mu * diag(d) * transpose(mu).  Raises ValueError when the
    input is not positive definite.
    """
    n = len(gram)
    mu = [[Fraction(0)] * n for _ in range(n)]
    d = [Fraction(0)] * n
    for i in range(n):
        mu[i][i] = Fraction(1)
        for j in range(i):
            s = Fraction(gram[i][j])
            for k in range(j):
                s -= mu[i][k] * mu[j][k] * d[k]
            mu[i][j] = s / d[j]
        s = Fraction(gram[i][i])
        for k in range(i):
            s -= mu[i][k] * mu[i][k] * d[k]
        if s <= 0:
            raise ValueError("gram matrix is not positive definite")
        d[i] = s
    return mu, d


def lll_gram(
    gram: list[list], delta: Fraction = Fraction(3, 4)
) -> tuple[list[list[Fraction]], list[list[int]]]:
    """Exact LLL reduction of a positive definite Gram matrix.

    Returns (reduced, u) with u unimodular and
    reduced == u * gram * transpose(u).
    """
    n = len(gram)
    a = [[Fraction(x) for x in row] for row in gram]
    u = identity(n)
    if n == 0:
        return a, u

    mu = [[Fraction(0)] * n for _ in range(n)]
    d = [Fraction(0)] * n

    def gs_row(k):
        for j in range(k):
            s = a[k][j]
            for i in range(j):
                s -= mu[k][i] * mu[j][i] * d[i]
            mu[k][j] = s / d[j]
        s = a[k][k]
        for i in range(k):
            s -= mu[k][i] * mu[k][i] * d[i]
        if s <= 0:
            raise ValueError("gram matrix is not positive definite")
        d[k] = s

    def size_reduce(k, l):
        if 2 * abs(mu[k][l]) <= 1:
            return
        q = round(mu[k][l])
        u[k] = [x - q * y for x, y in zip(u[k], u[l])]
        a[k] = [x - q * y for x, y in zip(a[k], a[l])]
        for r in range(n):
            a[r][k] -= q * a[r][l]
        mu[k][l] -= q
        for i in range(l):
            mu[k][i] -= q * mu[l][i]

    d[0] = Fraction(a[0][0])
    if d[0] <= 0:
        raise ValueError("gram matrix is not positive definite")
    kmax = 0
    k = 1
    while k < n:
        if k > kmax:
            gs_row(k)
            kmax = k
        size_reduce(k, k - 1)
        if d[k] < (delta - mu[k][k - 1] ** 2) * d[k - 1]:
            u[k - 1], u[k] = u[k], u[k - 1]
            a[k - 1], a[k] = a[k], a[k - 1]
            for row in a:
                row[k - 1], row[k] = row[k], row[k - 1]
            m = mu[k][k - 1]
            b = d[k] + m * m * d[k - 1]
            mu[k][k - 1] = m * d[k - 1] / b
            d[k] = d[k - 1] * d[k] / b
            d[k - 1] = b
            for j in range(k - 1):
                mu[k - 1][j], mu[k][j] = mu[k][j], mu[k - 1][j]
            for i in range(k + 1, kmax + 1):
                t = mu[i][k]
                mu[i][k] = mu[i][k - 1] - m * t
                mu[i][k - 1] = t + mu[k][k - 1] * mu[i][k]
            k = max(k - 1, 1)
        else:
            for l in range(k - 2, -1, -1):
                size_reduce(k, l)
            k += 1
    return a, u
