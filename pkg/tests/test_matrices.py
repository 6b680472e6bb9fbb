import random
from fractions import Fraction

import pytest

from lat40.matrices import (
    det,
    hnf,
    hnf_basis,
    identity,
    inverse,
    matmul,
    read_matrix_text,
    snf_diagonal,
    snf_with_transforms,
    transpose,
    write_matrix_text,
)


def random_int_matrix(rng, rows, cols, lo=-9, hi=9):
    return [[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)]


def is_unimodular(m):
    return abs(det(m)) == 1


def in_hnf_form(h):
    nonzero = [row for row in h if any(row)]
    if h[: len(nonzero)] != nonzero:
        return False  # zero rows must sit at the bottom
    last = -1
    for r, row in enumerate(nonzero):
        j = next(k for k, x in enumerate(row) if x)
        if j <= last or row[j] <= 0:
            return False
        last = j
        for r2, other in enumerate(nonzero):
            if r2 < r and not 0 <= other[j] < row[j]:
                return False
            if r2 > r and other[j] != 0:
                return False
    return True


def test_hnf_identity():
    h, t = hnf(identity(3))
    assert h == identity(3)
    assert t == identity(3)


def test_hnf_small_example():
    m = [[2, 0], [1, 1]]
    h, t = hnf(m)
    assert h == [[1, 1], [0, 2]]
    assert matmul(t, m) == h
    assert is_unimodular(t)


def test_hnf_diag_lattice():
    m = [[0] * 40 for _ in range(40)]
    for i in range(20):
        m[i][i] = 3
        m[20 + i][20 + i] = 21
    h, t = hnf(m)
    assert h == m
    assert det(h) == 3**20 * 21**20


def test_hnf_properties_random():
    rng = random.Random(7)
    for _ in range(60):
        rows = rng.randint(1, 6)
        cols = rng.randint(1, 6)
        m = random_int_matrix(rng, rows, cols)
        h, t = hnf(m)
        assert matmul(t, m) == h
        assert is_unimodular(t)
        assert in_hnf_form(h)
        # HNF is a canonical form: row-permuted input gives the same H
        perm = list(range(rows))
        rng.shuffle(perm)
        h2, _ = hnf([m[i] for i in perm])
        assert h2 == h


def test_hnf_det_vs_pivots():
    rng = random.Random(11)
    for _ in range(40):
        n = rng.randint(1, 5)
        m = random_int_matrix(rng, n, n)
        d = det(m)
        if d == 0:
            continue
        h, _ = hnf(m)
        prod = 1
        for i in range(n):
            prod *= h[i][i]
        assert abs(d) == prod


def test_snf_diagonal():
    assert snf_diagonal(identity(4)) == [1, 1, 1, 1]
    assert snf_diagonal([[2, 0], [0, 4]]) == [2, 4]
    m = [[0] * 40 for _ in range(40)]
    for i in range(20):
        m[i][i] = 3
        m[20 + i][20 + i] = 21
    assert snf_diagonal(m) == [3] * 20 + [21] * 20


def test_snf_divisibility_random():
    rng = random.Random(3)
    for _ in range(40):
        n = rng.randint(1, 5)
        m = random_int_matrix(rng, n, n)
        divs = snf_diagonal(m)
        for a, b in zip(divs, divs[1:]):
            assert b % a == 0
        d = det(m)
        if d:
            prod = 1
            for x in divs:
                prod *= x
            assert prod == abs(d)


def test_snf_with_transforms():
    rng = random.Random(13)
    for _ in range(40):
        rows = rng.randint(1, 5)
        cols = rng.randint(1, 5)
        m = random_int_matrix(rng, rows, cols)
        u, d, v = snf_with_transforms(m)
        assert matmul(matmul(u, m), v) == d
        assert is_unimodular(u)
        assert is_unimodular(v)
        for i in range(min(rows, cols)):
            for j in range(min(rows, cols)):
                if i != j:
                    assert d[i][j] == 0


def test_det_examples():
    assert det(identity(5)) == 1
    assert det([[6, 3], [3, 12]]) == 63


def test_det_random_vs_fraction_elimination():
    rng = random.Random(5)
    for _ in range(50):
        n = rng.randint(1, 5)
        m = random_int_matrix(rng, n, n)
        frac = det([[Fraction(x) for x in row] for row in m])
        assert det(m) == frac


def test_inverse():
    rng = random.Random(9)
    count = 0
    while count < 30:
        n = rng.randint(1, 5)
        m = random_int_matrix(rng, n, n)
        if det(m) == 0:
            continue
        count += 1
        inv = inverse(m)
        assert matmul(m, inv) == [
            [Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)
        ]
    with pytest.raises(ValueError):
        inverse([[1, 2], [2, 4]])


def test_matrix_text_round_trip():
    m = [[1, -2, Fraction(3, 7)], [0, Fraction(-5, 2), 9]]
    text = write_matrix_text(m)
    back = read_matrix_text(text)
    assert back == m
    assert write_matrix_text(back) == text


def test_matrix_text_rejects_bad_shape():
    with pytest.raises(ValueError):
        read_matrix_text("2 2\n1 2 3\n4 5 6\n")


def test_transpose_matmul():
    a = [[1, 2, 3], [4, 5, 6]]
    assert transpose(a) == [[1, 4], [2, 5], [3, 6]]
    assert matmul(a, transpose(a)) == [[14, 32], [32, 77]]
    assert hnf_basis([[0, 0], [2, 4]]) == [[2, 4]]
