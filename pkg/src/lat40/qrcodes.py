"""Generalized quadratic residue codes of length 20 over Z/nZ.

Coordinates are ordered (1, 2, ..., 18, 0, infinity): position k holds
field element k+1 for k < 18, position 18 holds 0, and position 19 is
the infinite place.  A code is generated by twenty rows u_1, ..., u_18,
u_0, u_infinity determined by a six-parameter tuple (a, b, d, s, t, e)
and the Legendre character mod 19.

A pair of such codes (mod 3 and mod 21) defines a glue group between
the lattice L = diag(3I, 21I) and its dual; isotropy_check and
index_check decide whether the glued lattice is even and unimodular.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .lattice import AmbientFrame, E_FRAME, frame_scaled_gram
from .matrices import det, hnf_basis, matmul, transpose


def legendre19(x: int) -> int:
    """Legendre character mod 19: 0, 1, or -1."""
    x %= 19
    if x == 0:
        return 0
    return 1 if pow(x, 9, 19) == 1 else -1


@dataclass(frozen=True)
class CodeSpec:
    """Modulus and parameter tuple (a, b, d, s, t, e), reduced mod n."""

    modulus: int
    params: tuple[int, int, int, int, int, int]

    def __post_init__(self):
        object.__setattr__(
            self, "params", tuple(p % self.modulus for p in self.params)
        )


C3_SPEC = CodeSpec(3, (1, 0, 0, 0, 1, 1))
C21_SPEC = CodeSpec(21, (0, 7, 1, 0, 4, 17))

# position of each field element in the coordinate order (1,...,18,0)
_FIELD_AT = list(range(1, 19)) + [0]


def field_permutation(fn) -> list[int]:
    """Coordinate permutation induced by a bijection of F_19; the
    infinite place stays fixed.  Returns p with new[i] = old[p[i]]."""
    pos = {f: k for k, f in enumerate(_FIELD_AT)}
    p = [0] * 20
    for k, f in enumerate(_FIELD_AT):
        p[pos[fn(f) % 19]] = k
    p[19] = 19
    return p


def gqr_generators(spec: CodeSpec) -> list[list[int]]:
    """Twenty generator rows, entries lifted to [0, n)."""
    n = spec.modulus
    a, b, d, s, t, e = (p % n for p in spec.params)
    rows = []
    for i in _FIELD_AT:
        row = []
        for j in _FIELD_AT:
            if i == j:
                row.append(d)
            elif legendre19(i - j) == 1:
                row.append(s)
            else:
                row.append(t)
        row.append(e)
        rows.append(row)
    rows.append([a] * 19 + [b])
    return rows


def code_rowspace_hnf(rows: list[list[int]], n: int) -> list[list[int]]:
    """HNF basis of the integer lattice spanned by the rows and n*Z^20;
    two generator sets give the same code mod n iff these agree."""
    cols = len(rows[0])
    stack = [list(r) for r in rows]
    for k in range(cols):
        stack.append([n if c == k else 0 for c in range(cols)])
    return hnf_basis(stack)


def isotropy_check(
    u_rows: list[list[int]],
    w_rows: list[list[int]],
    frame: AmbientFrame = E_FRAME,
) -> bool:
    """Glue-vector isotropy: with g_i = (u_i, w_i) as frame coordinates,
    every pairwise inner product must be an integer and every norm an
    even integer.  In the distinguished frame this is the congruence
    pair mod 21 (off-diagonal) and mod 42 (diagonal) of the scaled
    Gram products."""
    num, denom = frame_scaled_gram(frame)
    glue = [list(u) + list(w) for u, w in zip(u_rows, w_rows)]
    prods = matmul(matmul(glue, [list(r) for r in num]), transpose(glue))
    k = len(glue)
    for i in range(k):
        if prods[i][i] % (2 * denom):
            return False
        for j in range(i + 1, k):
            if prods[i][j] % denom:
                return False
    return True


def glue_basis(
    u_rows: list[list[int]],
    w_rows: list[list[int]],
    moduli: tuple[int, int] = (3, 21),
) -> list[list[int]]:
    """Basis (in HNF) of the preimage lattice of the code generated by
    the combined rows (u_i, w_i): the HNF of those rows stacked over
    diag(m1*I, m2*I)."""
    m1, m2 = moduli
    half = len(u_rows[0])
    stack = [list(u) + list(w) for u, w in zip(u_rows, w_rows)]
    for k in range(half):
        stack.append([m1 if c == k else 0 for c in range(2 * half)])
    for k in range(half):
        stack.append([m2 if c == half + k else 0 for c in range(2 * half)])
    basis = hnf_basis(stack)
    if len(basis) < 2 * half:
        raise ValueError("glue stack does not have full rank")
    return basis


def index_check(basis: list[list[int]], expected_abs_det: int = 63**10) -> bool:
    """True iff |det(basis)| matches the self-duality index."""
    return abs(det([list(r) for r in basis])) == expected_abs_det


@dataclass(frozen=True)
class SearchResult:
    survivors: tuple[tuple[CodeSpec, CodeSpec], ...]
    examined: int
    passed_isotropy: int
    passed_index: int
    passed_min: int


def _scalar_orbit_rep(params: tuple[int, ...], n: int) -> tuple[int, ...]:
    units = [c for c in range(1, n) if _gcd(c, n) == 1]
    return min(tuple((c * p) % n for p in params) for c in units)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def search_params(
    params3=None,
    params21=None,
    check_min: bool = False,
    max_results: int | None = None,
    reduce_scalars: bool = False,
) -> SearchResult:
    """Scan parameter pairs for codes whose glue lattice is even and
    unimodular.  Stages: isotropy, then determinant, then (optionally)
    minimal norm 4 by enumeration.  Candidate iterables default to the
    full spaces (Z/3)^6 and (Z/21)^6; restrict them for desk-scale
    sweeps.  Enumeration order is lexicographic and the result order is
    deterministic."""
    if params3 is None:
        params3 = product(range(3), repeat=6)
    if params21 is None:
        params21 = product(range(21), repeat=6)
    p3_list = sorted({tuple(q % 3 for q in p) for p in params3})
    p21_list = sorted({tuple(q % 21 for q in p) for p in params21})
    if reduce_scalars:
        p3_list = sorted({_scalar_orbit_rep(p, 3) for p in p3_list})
        p21_list = sorted({_scalar_orbit_rep(p, 21) for p in p21_list})
    survivors = []
    examined = n_iso = n_idx = n_min = 0
    for p3 in p3_list:
        spec3 = CodeSpec(3, p3)
        u = gqr_generators(spec3)
        for p21 in p21_list:
            examined += 1
            spec21 = CodeSpec(21, p21)
            w = gqr_generators(spec21)
            if not isotropy_check(u, w):
                continue
            n_iso += 1
            basis = glue_basis(u, w)
            if not index_check(basis):
                continue
            n_idx += 1
            if check_min:
                from .enumeration import min_norm
                from .lattice import make_lattice

                lat = make_lattice(E_FRAME, basis)
                if min_norm(lat) != 4:
                    continue
                n_min += 1
            survivors.append((spec3, spec21))
            if max_results is not None and len(survivors) >= max_results:
                return SearchResult(
                    tuple(survivors), examined, n_iso, n_idx, n_min
                )
    return SearchResult(tuple(survivors), examined, n_iso, n_idx, n_min)
