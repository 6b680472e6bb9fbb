"""Assembly of the concrete lattices: the rank-2 block R, the orthogonal
sum L of twenty copies, the glued 40-dimensional lattice, and variants
of the same pipeline for other rank-2 blocks.

The distinguished frame is derived from R = [[6, 3], [3, 12]] through
its Smith decomposition: per block the frame holds one dual vector of
order 3 and one of order 21 in the discriminant group, which is what
makes the glue construction a pair of codes mod 3 and mod 21.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib.resources import files

from .lattice import (
    AmbientFrame,
    E_FRAME,
    Lattice,
    gram,
    is_even,
    is_unimodular,
    lattices_equal,
    make_lattice,
)
from .matrices import (
    det,
    inverse,
    matmul,
    read_matrix_text,
    snf_with_transforms,
    transpose,
)
from .qrcodes import (
    C3_SPEC,
    C21_SPEC,
    CodeSpec,
    glue_basis,
    gqr_generators,
    index_check,
    isotropy_check,
)

R_GRAM = [[6, 3], [3, 12]]

_FIXTURE_NAMES = ("b1", "b3", "gram_o40", "aut_g1", "aut_g2", "basis_change")


class ConstructionError(ValueError):
    """Pipeline failure carrying the name of the failed stage."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"{stage}: {message}")
        self.stage = stage


@dataclass(frozen=True)
class Fixtures:
    """Transcribed reference matrices: the two basis blocks, the target
    Gram matrix, two reference generators of the automorphism group,
    and the recorded basis change carrying the built Gram onto the
    reference Gram (all integer, checksum-verified on load)."""

    b1: tuple[tuple[int, ...], ...]
    b3: tuple[tuple[int, ...], ...]
    gram_o40: tuple[tuple[int, ...], ...]
    aut_g1: tuple[tuple[int, ...], ...]
    aut_g2: tuple[tuple[int, ...], ...]
    basis_change: tuple[tuple[int, ...], ...]


def _fixture_dir():
    return files("lat40") / "fixtures"


@lru_cache(maxsize=1)
def load_fixtures() -> Fixtures:
    root = _fixture_dir()
    manifest = {}
    for line in (root / "manifest.sha256").read_text().splitlines():
        digest, name = line.split()
        manifest[name] = digest
    mats = {}
    for name in _FIXTURE_NAMES:
        fname = f"{name}.txt"
        raw = (root / fname).read_bytes()
        digest = hashlib.sha256(raw).hexdigest()
        if fname not in manifest or manifest[fname] != digest:
            raise ConstructionError(
                "fixtures", f"checksum mismatch for {fname}"
            )
        mat = read_matrix_text(raw.decode())
        if any(not isinstance(x, int) for row in mat for x in row):
            raise ConstructionError("fixtures", f"{fname} is not integral")
        mats[name] = tuple(tuple(row) for row in mat)
    return Fixtures(**mats)


def transcribed_basis(fx: Fixtures | None = None) -> list[list[int]]:
    """The reference 40x40 basis [[I, B1], [0, B2]] with
    B2 = [[3I, B3], [0, 21I]]."""
    if fx is None:
        fx = load_fixtures()
    b = [[0] * 40 for _ in range(40)]
    for i in range(20):
        b[i][i] = 1
        for j in range(20):
            b[i][20 + j] = fx.b1[i][j]
    for i in range(10):
        b[20 + i][20 + i] = 3
        for j in range(10):
            b[20 + i][30 + j] = fx.b3[i][j]
    for i in range(10):
        b[30 + i][30 + i] = 21
    return b


def _block_frame(r_gram: list[list[int]]):
    """Frame data for twenty orthogonal copies of a rank-2 block:
    (frame, block basis rows in frame coordinates, smith divisors)."""
    if r_gram[0][1] != r_gram[1][0]:
        raise ConstructionError("positive-definite", "block is not symmetric")
    if r_gram[0][0] <= 0 or det(r_gram) <= 0:
        raise ConstructionError(
            "positive-definite", "block is not positive definite"
        )
    if r_gram[0][0] % 2 or r_gram[1][1] % 2:
        raise ConstructionError("even", "block has an odd diagonal entry")
    _, d, v = snf_with_transforms(r_gram)
    d1, d2 = d[0][0], d[1][1]
    if r_gram == R_GRAM:
        # The Smith transform is not unique and code parameters are only
        # meaningful relative to a fixed choice of dual frame.  Pin the
        # distinguished block to the transform whose adapted dual basis
        # is the documented frame with Gram (1/21)[[28, 7], [7, 2]].
        v = [[1, -4], [0, 1]]
    block_rows = matmul(r_gram, v)
    e_rows = inverse(block_rows)
    g_pair = matmul(matmul(e_rows, [list(r) for r in r_gram]), transpose(e_rows))
    rows = []
    for i in range(40):
        row = [Fraction(0)] * 40
        p, q = (i, 0) if i < 20 else (i - 20, 1)
        row[p] = Fraction(g_pair[q][0])
        row[20 + p] = Fraction(g_pair[q][1])
        rows.append(tuple(row))
    frame = AmbientFrame(f"block-{d1}-{d2}", tuple(rows))
    if frame.gram == E_FRAME.gram:
        frame = E_FRAME
    return frame, block_rows, (d1, d2)


def build_L() -> Lattice:
    """Orthogonal sum of twenty copies of R in the distinguished frame.
    The basis rows are the R-blocks themselves, so the Gram matrix is
    [[6I, 3I], [3I, 12I]]; the row span equals diag(3I, 21I)."""
    frame, block_rows, _ = _block_frame(R_GRAM)
    basis = [[0] * 40 for _ in range(40)]
    for i in range(20):
        basis[i][i] = block_rows[0][0]
        basis[i][20 + i] = block_rows[0][1]
        basis[20 + i][i] = block_rows[1][0]
        basis[20 + i][20 + i] = block_rows[1][1]
    return make_lattice(frame, basis)


@lru_cache(maxsize=1)
def build_O40() -> Lattice:
    """The glued lattice of the distinguished code pair.  Raises when
    the pipeline output differs from the transcribed reference basis,
    which would signal a transcription or normal-form bug."""
    u = gqr_generators(C3_SPEC)
    w = gqr_generators(C21_SPEC)
    if not isotropy_check(u, w):
        raise ConstructionError("isotropy", "distinguished codes fail isotropy")
    basis = glue_basis(u, w)
    if not index_check(basis):
        raise ConstructionError("index", "glue basis has wrong determinant")
    lat = make_lattice(E_FRAME, basis)
    ref = make_lattice(E_FRAME, transcribed_basis())
    if not lattices_equal(lat, ref):
        raise ConstructionError(
            "reference", "construction does not reproduce the transcribed basis"
        )
    return lat


def build_variant(
    r_gram: list[list[int]], spec_a: CodeSpec, spec_b: CodeSpec
) -> Lattice:
    """Run the glue pipeline for an arbitrary even positive definite
    rank-2 block.  The code moduli must match the Smith divisors of the
    block.  Raises ConstructionError naming the first failed stage."""
    frame, _, (d1, d2) = _block_frame(r_gram)
    if (spec_a.modulus, spec_b.modulus) != (d1, d2):
        raise ConstructionError(
            "moduli",
            f"code moduli {(spec_a.modulus, spec_b.modulus)} do not match "
            f"smith divisors {(d1, d2)}",
        )
    u = gqr_generators(spec_a)
    w = gqr_generators(spec_b)
    if not isotropy_check(u, w, frame):
        raise ConstructionError("isotropy", "codes are not isotropic")
    basis = glue_basis(u, w, (d1, d2))
    if not index_check(basis, det(r_gram) ** 10):
        raise ConstructionError("index", "glue basis has wrong determinant")
    lat = make_lattice(frame, basis)
    if not is_even(lat) or not is_unimodular(lat):
        raise ConstructionError("parity", "glued lattice is not even unimodular")
    return lat


def gram_O40() -> list[list[int]]:
    return gram(build_O40())
