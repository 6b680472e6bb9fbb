"""Exact bounded-norm vector enumeration over a lattice Gram matrix.

The enumeration is depth first over coordinates of the LLL-reduced
basis, with interval bounds decided purely in integer arithmetic
(isqrt plus one squared comparison), so no floating point enters any
accept or prune decision.  One representative per antipodal pair is
walked (highest nonzero coordinate positive) and the mirror image is
emitted alongside it.
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, lcm
from pathlib import Path

import numpy as np

from .lattice import (
    AmbientFrame,
    Lattice,
    frame_inner_int,
    frame_scaled_gram,
    gram,
    make_lattice,
)
from .matrices import matmul
from .reduction import ldl, lll_gram


@dataclass(frozen=True)
class VectorSet:
    """Deduplicated, lexicographically sorted coordinate rows with their
    exact norms.  With modulo_sign set, the stored representative of
    each antipodal pair is the lexicographically larger one."""

    frame: AmbientFrame
    vectors: tuple[tuple[int, ...], ...]
    norms: tuple[int, ...]
    modulo_sign: bool = False

    def __len__(self) -> int:
        return len(self.vectors)

    @property
    def common_norm(self) -> int:
        norms = set(self.norms)
        if len(norms) != 1:
            raise ValueError("vector set does not have a uniform norm")
        return norms.pop()


def _floor_shifted_sqrt(a: int, q: int, b: int, s: int) -> int:
    """floor((a + q*sqrt(s)) / (q*b)) for integers with q, b > 0, s >= 0,
    computed exactly."""
    d = q * b
    f = (a + q * isqrt(s)) // d
    lhs = (f + 1) * d - a
    if lhs <= 0 or lhs * lhs <= q * q * s:
        return f + 1
    return f


def _coordinate_bounds(mu, d, bound: int):
    """Exact worst-case envelopes for the search: xb[k] bounds |x_k| and
    cb[j] bounds the partial sum |c_j|, over every partial assignment
    whose remaining budget is nonnegative (up to one unit of padding).

    Writing y_j = x_j + c_j, a feasible partial assignment satisfies
    sum d_j y_j^2 <= bound, and x = transpose(inverse(mu)) y restricted
    to the assigned suffix, so by Cauchy-Schwarz
    |x_k|^2 <= bound * sum_{j>=k} inv_mu[j][k]^2 / d_j, the k-th
    diagonal entry of the inverse Gram matrix."""
    n = len(d)
    inv_mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        inv_mu[i][i] = Fraction(1)
        for j in range(i):
            inv_mu[i][j] = -sum(
                mu[i][k] * inv_mu[k][j] for k in range(j, i)
            )
    xb = [0] * n
    for k in range(n):
        dual_kk = sum(inv_mu[j][k] ** 2 / d[j] for j in range(k, n))
        rad2 = (bound + 1) * dual_kk
        xb[k] = isqrt(rad2.numerator // rad2.denominator) + 2
    cb = [
        sum((abs(mu[k][j]) * xb[k] for k in range(j + 1, n)), Fraction(0))
        for j in range(n)
    ]
    return xb, cb


def _int64_safe_accumulator_bound(mu, d, qden, mnum, bound: int) -> int:
    """Exact worst-case bound on any scaled partial-sum entry during the
    search."""
    n = len(d)
    xb, _ = _coordinate_bounds(mu, d, bound)
    worst = 0
    for j in range(n):
        s = sum(abs(mnum[k][j]) * xb[k] for k in range(j + 1, n))
        worst = max(worst, s)
    return worst


class _FloatEnvelopeError(Exception):
    """Raised when the worst-case float error analysis cannot certify
    the vectorized prefilter; callers fall back to exact arithmetic."""


def _enumerate_coords_batched(gram_mat: list[list[int]], bound: int):
    """Vectorized variant of _enumerate_coords: a float64 prefilter
    walks the tree with outward-rounded bounds and every surviving
    candidate is re-verified in exact integer arithmetic, so the result
    is identical to the exact walker.

    Soundness of the prefilter: coordinates and partial sums are
    bounded by the exact envelopes xb/cb; a forward error analysis over
    those envelopes bounds the accumulated float error of every pruning
    quantity, and the pruning margin must exceed that bound by a factor
    of 100 (otherwise _FloatEnvelopeError asks for the exact path).
    Pruning keeps every branch whose padded budget stays above -margin,
    so no branch containing a true solution is ever cut; false
    surviving leaves are removed by the exact norm recomputation."""
    n = len(gram_mat)
    mu, d = ldl(gram_mat)
    xb, cb = _coordinate_bounds(mu, d, bound)
    # worst-case float64 error of one budget update, summed over a full
    # descent: the partial sum c_j is off by at most ec_j, the term
    # d_j (x_j + c_j)^2 has |x_j + c_j| <= sqrt((bound + 1) / d_j), and
    # each arithmetic step rounds once
    eps = 2.0**-50
    err = 0.0
    for j in range(n):
        ec = 2.0 * n * eps * float(cb[j])
        err += (
            2.0 * ((bound + 1) * float(d[j])) ** 0.5 * ec
            + float(d[j]) * ec * ec
            + 4.0 * eps * (bound + 1)
        )
    # the margin only needs to dominate the accumulated error for the
    # pruning to be one-sided; widening it further just admits more
    # false positives for the exact recheck to discard
    margin = max(1e-6, err * 1000.0)
    if margin > 0.125:
        raise _FloatEnvelopeError(f"error bound {err} is too large")
    if max(xb) > 126:
        raise _FloatEnvelopeError("coordinate envelope exceeds int8")
    gmax = max(abs(x) for row in gram_mat for x in row)
    if n * n * max(xb) ** 2 * gmax >= 2**62:
        raise _FloatEnvelopeError("norm recomputation exceeds int64")

    d_f = np.array([float(x) for x in d])
    mu_f = np.array([[float(x) for x in row] for row in mu])
    g_np = np.array(gram_mat, dtype=np.int64)
    # one chunk expands to at most chunk * branching child rows, and one
    # child buffer per level can be live at a time; 64k rows keeps the
    # worst-case working set well under a gigabyte
    chunk = 1 << 16
    hits = []
    stack = [
        (
            n - 1,
            np.zeros((1, n), dtype=np.int8),
            np.array([float(bound)]),
            np.array([True]),
        )
    ]
    while stack:
        lev, xs, budget, az = stack.pop()
        if len(xs) > chunk:
            for i in range(0, len(xs), chunk):
                stack.append(
                    (lev, xs[i : i + chunk], budget[i : i + chunk], az[i : i + chunk])
                )
            continue
        if lev == n - 1:
            c = np.zeros(len(xs))
        else:
            c = xs[:, lev + 1 :].astype(np.float64) @ mu_f[lev + 1 :, lev]
        r = np.sqrt(np.maximum(budget + margin, 0.0) / d_f[lev])
        lo = np.ceil(-c - r - margin).astype(np.int64)
        hi = np.floor(-c + r + margin).astype(np.int64)
        lo = np.where(az, np.maximum(lo, 0), lo)
        cnt = np.maximum(hi - lo + 1, 0)
        total = int(cnt.sum())
        if total == 0:
            continue
        parent = np.repeat(np.arange(len(xs)), cnt)
        first = np.repeat(np.cumsum(cnt) - cnt, cnt)
        x = lo[parent] + (np.arange(total) - first)
        nb = budget[parent] - d_f[lev] * (x + c[parent]) ** 2
        keep = nb >= -margin
        parent, x, nb = parent[keep], x[keep], nb[keep]
        if len(x) == 0:
            continue
        if np.abs(x).max() > 126:
            raise _FloatEnvelopeError("coordinate escaped its envelope")
        cz = az[parent] & (x == 0)
        xs_child = xs[parent]
        xs_child[:, lev] = x
        if lev == 0:
            xs_child = xs_child[~cz]
            if len(xs_child):
                hits.append(xs_child)
        else:
            stack.append((lev - 1, xs_child, nb, cz))
    if not hits:
        return []
    allx = np.concatenate(hits).astype(np.int64)
    norms = np.einsum("ij,jk,ik->i", allx, g_np, allx)
    ok = norms <= bound
    return [
        (tuple(int(v) for v in row), int(m))
        for row, m in zip(allx[ok], norms[ok])
    ]


def _enumerate_coords(gram_mat: list[list], bound: int):
    """Return (coords, norm) pairs, one representative per antipodal
    pair of nonzero x with x * gram * x^T <= bound; the highest nonzero
    coordinate of each representative is positive."""
    n = len(gram_mat)
    mu, d = ldl(gram_mat)
    qden = [1] * n
    for j in range(n):
        q = 1
        for i in range(j + 1, n):
            q = lcm(q, mu[i][j].denominator)
        qden[j] = q
    mnum = [[0] * n for _ in range(n)]
    for j in range(n):
        for i in range(j + 1, n):
            mnum[i][j] = int(mu[i][j] * qden[j])
    dnum = [x.numerator for x in d]
    dden = [x.denominator for x in d]
    xs = [0] * n
    out = []

    # vectorized partial-sum updates are exact as long as every value
    # provably fits in int64; otherwise fall back to big integers
    use_np = _int64_safe_accumulator_bound(mu, d, qden, mnum, bound) < 2**62
    mnp = np.array(mnum, dtype=np.int64) if use_np else None

    def descend(lev: int, budget: Fraction, acc, all_zero: bool):
        p = int(acc[lev])
        q = qden[lev]
        a = budget.numerator * dden[lev]
        b = budget.denominator * dnum[lev]
        s = a * b
        hi = _floor_shifted_sqrt(-p * b, q, b, s)
        lo = 0 if all_zero else -_floor_shifted_sqrt(p * b, q, b, s)
        for x in range(lo, hi + 1):
            xs[lev] = x
            num = x * q + p
            term = Fraction(dnum[lev] * num * num, dden[lev] * q * q)
            child = budget - term
            if child < 0:
                continue
            if lev == 0:
                if not (all_zero and x == 0):
                    norm = Fraction(bound) - child
                    out.append((tuple(xs), norm))
            else:
                if use_np:
                    nxt = acc[:lev] + mnp[lev, :lev] * x if x else acc[:lev]
                else:
                    nxt = [acc[j] + mnum[lev][j] * x for j in range(lev)]
                descend(lev - 1, child, nxt, all_zero and x == 0)
        xs[lev] = 0

    start = np.zeros(n, dtype=np.int64) if use_np else [0] * n
    descend(n - 1, Fraction(bound), start, True)
    return out


def _enumerate(gram_mat: list, bound: int) -> list:
    """Dispatch between the vectorized prefilter walker and the pure
    exact walker.  Both return the same (coords, norm) pairs; the
    vectorized one is used for larger integral Gram matrices whenever
    its error analysis certifies the float pruning."""
    n = len(gram_mat)
    rows = []
    integral = True
    for row in gram_mat:
        conv = []
        for x in row:
            f = Fraction(x)
            if f.denominator != 1:
                integral = False
                break
            conv.append(int(f))
        if not integral:
            break
        rows.append(conv)
    if integral and n >= 12:
        try:
            return _enumerate_coords_batched(rows, bound)
        except _FloatEnvelopeError:
            pass
    return _enumerate_coords(gram_mat, bound)


def vectors_of_norm_at_most(lat: Lattice, bound: int) -> VectorSet:
    """All nonzero lattice vectors v with v.v <= bound, both signs,
    sorted lexicographically.  Norms are re-verified through the frame
    Gram product independently of the enumeration arithmetic."""
    if bound <= 0:
        raise ValueError("bound must be positive")
    g = gram(lat)
    # a strong reduction parameter keeps the search tree small; the
    # result set does not depend on the basis
    reduced, u = lll_gram(g, delta=Fraction(99, 100))
    red_basis = matmul(u, [list(r) for r in lat.basis])
    hits = _enumerate(reduced, bound)
    found = []
    for coords, norm in hits:
        if norm.denominator != 1:
            raise ArithmeticError(f"non-integer norm {norm}")
    coord_rows = [coords for coords, _ in hits]
    for vec, (_, norm) in zip(_apply_basis(coord_rows, red_basis), hits):
        found.append((vec, int(norm)))
        found.append((tuple(-x for x in vec), int(norm)))
    found.sort()
    vectors = tuple(v for v, _ in found)
    norms = tuple(m for _, m in found)
    _verify_norms(lat.frame, vectors, norms)
    return VectorSet(lat.frame, vectors, norms, modulo_sign=False)


def _apply_basis(coord_rows: list, basis: list[list[int]]) -> list[tuple]:
    """Multiply coordinate rows by the basis, exactly; vectorized when
    the worst-case product provably fits in int64."""
    if not coord_rows:
        return []
    cmax = max((max(abs(x) for x in row) for row in coord_rows), default=0)
    bmax = max(abs(x) for row in basis for x in row)
    if cmax * bmax * len(basis) < 2**62:
        prods = np.array(coord_rows, dtype=np.int64) @ np.array(
            basis, dtype=np.int64
        )
        return [tuple(int(x) for x in row) for row in prods]
    return [
        tuple(
            sum(row[i] * basis[i][j] for i in range(len(row)) if row[i])
            for j in range(len(basis[0]))
        )
        for row in coord_rows
    ]


def _verify_norms(
    frame: AmbientFrame, vectors: tuple, norms: tuple
) -> None:
    """Recompute every norm via the scaled frame Gram and compare."""
    if not vectors:
        return
    num, denom = frame_scaled_gram(frame)
    peak = max(abs(x) for row in vectors for x in row)
    gpeak = max(abs(x) for row in num for x in row)
    n = len(vectors[0])
    # int64 is safe when the worst-case triple product cannot overflow
    if peak and n * n * peak * peak * gpeak < 2**62:
        vs = np.array(vectors, dtype=np.int64)
        gm = np.array([list(r) for r in num], dtype=np.int64)
        prods = np.einsum("ij,jk,ik->i", vs, gm, vs)
        if prods.shape[0] != len(norms) or any(
            int(p) != m * denom for p, m in zip(prods, norms)
        ):
            raise ArithmeticError("norm re-verification failed")
        return
    for vec, m in zip(vectors, norms):
        if frame_inner_int(frame, list(vec), list(vec)) != m:
            raise ArithmeticError("norm re-verification failed")


def min_norm(lat: Lattice) -> int:
    """Exact minimum norm of the nonzero vectors."""
    g = gram(lat)
    reduced, _ = lll_gram(g)
    start = min(int(reduced[i][i]) for i in range(len(reduced)))
    vs = vectors_of_norm_at_most(lat, start)
    return min(vs.norms)


def count_norm(lat: Lattice, m: int) -> int:
    """Exact count of vectors of norm exactly m."""
    vs = vectors_of_norm_at_most(lat, m)
    return sum(1 for x in vs.norms if x == m)


def fold_modulo_sign(vs: VectorSet) -> VectorSet:
    """Keep the lexicographically larger vector of each antipodal pair."""
    if vs.modulo_sign:
        return vs
    keep = []
    for vec, m in zip(vs.vectors, vs.norms):
        if vec >= tuple(-x for x in vec):
            keep.append((vec, m))
    keep.sort()
    return VectorSet(
        vs.frame,
        tuple(v for v, _ in keep),
        tuple(m for _, m in keep),
        modulo_sign=True,
    )


def write_vector_cache_text(vs: VectorSet) -> str:
    """Header `count dim norm frame-id` followed by one coordinate row
    per line.  A uniform norm is stated in the header; otherwise the
    header says `mixed` and each row carries its norm as a trailing
    column."""
    dim = len(vs.vectors[0]) if vs.vectors else vs.frame.dim
    uniform = len(set(vs.norms)) <= 1
    head = str(vs.norms[0]) if uniform and vs.norms else "mixed"
    lines = [f"{len(vs.vectors)} {dim} {head} {vs.frame.name}"]
    for vec, m in zip(vs.vectors, vs.norms):
        row = " ".join(str(x) for x in vec)
        lines.append(row if uniform else f"{row} {m}")
    return "\n".join(lines) + "\n"


def read_vector_cache_text(
    text: str, frame: AmbientFrame, modulo_sign: bool = False
) -> VectorSet:
    lines = text.splitlines()
    count, dim, head, frame_id = lines[0].split()
    count, dim = int(count), int(dim)
    if frame_id != frame.name:
        raise ValueError(f"cache frame {frame_id!r} does not match {frame.name!r}")
    vectors = []
    norms = []
    for ln in lines[1 : 1 + count]:
        fields = [int(x) for x in ln.split()]
        if head == "mixed":
            fields, m = fields[:-1], fields[-1]
        else:
            m = int(head)
        if len(fields) != dim:
            raise ValueError("cache row has wrong dimension")
        vectors.append(tuple(fields))
        norms.append(m)
    if len(vectors) != count:
        raise ValueError("cache is truncated")
    if sorted(vectors) != vectors:
        raise ValueError("cache rows are not sorted")
    vectors = tuple(vectors)
    norms = tuple(norms)
    _verify_norms(frame, vectors, norms)
    return VectorSet(frame, vectors, norms, modulo_sign=modulo_sign)


def cache_dir() -> Path:
    env = os.environ.get("LAT40_CACHE")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "lat40"


def _cache_key(lat: Lattice, bound: int) -> str:
    h = hashlib.sha256()
    h.update(lat.frame.name.encode())
    for row in lat.frame.gram:
        h.update(repr(row).encode())
    for row in lat.basis:
        h.update(repr(row).encode())
    h.update(str(bound).encode())
    return h.hexdigest()[:16]


def cached_vectors_of_norm_at_most(lat: Lattice, bound: int) -> VectorSet:
    """Disk-cached enumeration keyed by frame, basis, and bound."""
    path = cache_dir() / f"vectors-{_cache_key(lat, bound)}.txt"
    if path.exists():
        return read_vector_cache_text(path.read_text(), lat.frame)
    vs = vectors_of_norm_at_most(lat, bound)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(write_vector_cache_text(vs))
    tmp.replace(path)
    return vs
