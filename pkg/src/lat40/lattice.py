"""Lattices presented by integer coordinate rows in a fixed ambient frame.

A frame is a basis of the ambient rational vector space together with
its Gram matrix; every lattice here stores integer coordinates with
respect to some frame.  The distinguished frame "o40" is the dual-unit
frame used by the 40-dimensional construction: its Gram matrix is
(1/21) * [[28*I, 7*I], [7*I, 2*I]] in 20-by-20 blocks, so all inner
products are computed exactly as integers divided by 21.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from pathlib import Path

from .matrices import (
    det,
    hnf_basis,
    inverse,
    read_matrix_text,
    vec_mat,
    write_matrix_text,
)


@dataclass(frozen=True)
class AmbientFrame:
    """Ambient basis identified by name, with its exact Gram matrix."""

    name: str
    gram: tuple[tuple[Fraction, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.gram)


def _o40_frame() -> AmbientFrame:
    rows = []
    for i in range(40):
        row = [Fraction(0)] * 40
        if i < 20:
            row[i] = Fraction(28, 21)
            row[20 + i] = Fraction(7, 21)
        else:
            row[i - 20] = Fraction(7, 21)
            row[i] = Fraction(2, 21)
        rows.append(tuple(row))
    return AmbientFrame("o40", tuple(rows))


E_FRAME = _o40_frame()


@lru_cache(maxsize=None)
def frame_scaled_gram(frame: AmbientFrame) -> tuple[tuple[tuple[int, ...], ...], int]:
    """Common-denominator form of the frame Gram: (numerators, denom)."""
    denom = 1
    for row in frame.gram:
        for x in row:
            denom = lcm(denom, Fraction(x).denominator)
    num = tuple(
        tuple(int(Fraction(x) * denom) for x in row) for row in frame.gram
    )
    return num, denom


def frame_inner(frame: AmbientFrame, x: list, y: list) -> Fraction:
    """Exact inner product of two coordinate rows in the frame."""
    num, denom = frame_scaled_gram(frame)
    s = 0
    for i, xi in enumerate(x):
        if xi:
            row = num[i]
            s += xi * sum(yj * row[j] for j, yj in enumerate(y) if yj)
    return Fraction(s, denom)


def frame_inner_int(frame: AmbientFrame, x: list, y: list) -> int:
    """Inner product that must be an integer; raises if it is not."""
    v = frame_inner(frame, x, y)
    if v.denominator != 1:
        raise ValueError(f"inner product {v} is not an integer")
    return v.numerator


@dataclass(frozen=True)
class Lattice:
    """Integer row span of `basis` inside `frame`."""

    frame: AmbientFrame
    basis: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.basis)


def make_lattice(frame: AmbientFrame, basis: list[list[int]]) -> Lattice:
    return Lattice(frame, tuple(tuple(int(x) for x in row) for row in basis))


@lru_cache(maxsize=None)
def _gram_cached(lat: Lattice) -> tuple[tuple, ...]:
    num, denom = frame_scaled_gram(lat.frame)
    b = lat.basis
    k = len(b)
    rows = []
    for i in range(k):
        gi = [sum(b[i][t] * num[t][j] for t in range(len(num)) if b[i][t]) for j in range(len(num))]
        row = []
        for j in range(k):
            s = sum(gi[t] * b[j][t] for t in range(len(gi)) if b[j][t])
            row.append(Fraction(s, denom))
        rows.append(tuple(row))
    if all(x.denominator == 1 for row in rows for x in row):
        return tuple(tuple(x.numerator for x in row) for row in rows)
    return tuple(rows)


def gram(lat: Lattice) -> list[list]:
    """Gram matrix of the basis rows.  Entries are ints when the
    lattice is integral, Fractions otherwise."""
    return [list(row) for row in _gram_cached(lat)]


def gram_det(lat: Lattice):
    return det(gram(lat))


def is_integral(lat: Lattice) -> bool:
    return all(isinstance(x, int) for row in gram(lat) for x in row)


def is_even(lat: Lattice) -> bool:
    g = gram(lat)
    return is_integral(lat) and all(g[i][i] % 2 == 0 for i in range(len(g)))


def is_unimodular(lat: Lattice) -> bool:
    return is_integral(lat) and abs(gram_det(lat)) == 1


def dual_basis(lat: Lattice) -> list[list[Fraction]]:
    """Rows spanning the dual lattice, as frame coordinates (rational)."""
    ginv = inverse(gram(lat))
    return [
        [sum(ginv[i][k] * Fraction(lat.basis[k][j]) for k in range(lat.rank)) for j in range(len(lat.basis[0]))]
        for i in range(lat.rank)
    ]


def lattice_sum(a: Lattice, b: Lattice) -> Lattice:
    """Smallest lattice containing both (same frame required)."""
    if a.frame is not b.frame and a.frame != b.frame:
        raise ValueError("lattices live in different frames")
    stacked = [list(r) for r in a.basis] + [list(r) for r in b.basis]
    return make_lattice(a.frame, hnf_basis(stacked))


def lattices_equal(a: Lattice, b: Lattice) -> bool:
    if a.frame != b.frame:
        return False
    return hnf_basis([list(r) for r in a.basis]) == hnf_basis(
        [list(r) for r in b.basis]
    )


@lru_cache(maxsize=None)
def _basis_inverse(lat: Lattice) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(row) for row in inverse([list(r) for r in lat.basis]))


def coordinates_in(lat: Lattice, vec: list[int]) -> list[Fraction] | None:
    """Coefficients expressing vec over the basis, or None when vec is
    outside the rational span.  Requires a square basis."""
    if len(lat.basis) != len(lat.basis[0]):
        raise ValueError("coordinates need a square basis")
    binv = _basis_inverse(lat)
    return vec_mat([Fraction(x) for x in vec], [list(r) for r in binv])


def contains(lat: Lattice, vec: list[int]) -> bool:
    if len(lat.basis) == len(lat.basis[0]):
        return all(c.denominator == 1 for c in coordinates_in(lat, vec))
    rows = [list(r) for r in lat.basis]
    return hnf_basis(rows) == hnf_basis(rows + [list(vec)])


def is_sublattice(a: Lattice, b: Lattice) -> bool:
    """True when every generator of a lies in b (same frame)."""
    if a.frame != b.frame:
        return False
    return all(contains(b, list(row)) for row in a.basis)


def index_in(a: Lattice, b: Lattice) -> int:
    """Index [b : a] for full-rank a inside b."""
    if not is_sublattice(a, b):
        raise ValueError("not a sublattice")
    coeff = [[x for x in coordinates_in(b, list(row))] for row in a.basis]
    d = det([[int(x) for x in row] for row in coeff])
    if d == 0:
        raise ValueError("sublattice has lower rank")
    return abs(d)


def extremal_min_bound(n: int) -> int:
    """Largest possible minimum of an even unimodular lattice of rank n."""
    return 2 + 2 * (n // 24)


_FRAMES = {"o40": E_FRAME}


def write_lattice_text(lat: Lattice) -> str:
    lines = ["lattice v1"]
    if lat.frame.name in _FRAMES and _FRAMES[lat.frame.name] == lat.frame:
        lines.append(f"frame: {lat.frame.name}")
    else:
        lines.append("frame: inline")
        lines.append("gram:")
        lines.append(write_matrix_text([list(r) for r in lat.frame.gram]).rstrip("\n"))
    lines.append("basis:")
    lines.append(write_matrix_text([list(r) for r in lat.basis]).rstrip("\n"))
    return "\n".join(lines) + "\n"


def read_lattice_text(text: str) -> Lattice:
    lines = text.splitlines()
    if not lines or lines[0].strip() != "lattice v1":
        raise ValueError("not a lattice file")
    idx = 1
    frame_line = lines[idx].strip()
    if not frame_line.startswith("frame:"):
        raise ValueError("missing frame line")
    frame_id = frame_line.split(":", 1)[1].strip()
    idx += 1
    if frame_id == "inline":
        if lines[idx].strip() != "gram:":
            raise ValueError("missing gram block")
        idx += 1
        start = idx
        while lines[idx].strip() != "basis:":
            idx += 1
        gm = read_matrix_text("\n".join(lines[start:idx]))
        frame = AmbientFrame(
            "inline", tuple(tuple(Fraction(x) for x in row) for row in gm)
        )
    else:
        if frame_id not in _FRAMES:
            raise ValueError(f"unknown frame {frame_id!r}")
        frame = _FRAMES[frame_id]
    if lines[idx].strip() != "basis:":
        raise ValueError("missing basis block")
    idx += 1
    basis = read_matrix_text("\n".join(lines[idx:]))
    if any(not isinstance(x, int) for row in basis for x in row):
        raise ValueError("basis entries must be integers")
    return make_lattice(frame, basis)


def write_lattice(path, lat: Lattice) -> None:
    Path(path).write_text(write_lattice_text(lat))


def read_lattice(path) -> Lattice:
    return read_lattice_text(Path(path).read_text())
