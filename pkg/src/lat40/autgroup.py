"""Automorphism group of the glued lattice.

A basis of norm-4 vectors is found by LLL seeding plus completion and
exchange inside the minimal vectors.  All isometries onto that basis
are then enumerated by a backtracking search in which every image row
must come from the same irreducible block as the basis vector it
replaces, and one position inside the distinguished size-1368 block is
limited to orbit representatives of the coordinate symmetry group,
which quotients the search by that group.  The solutions extend the
coordinate symmetries to the full automorphism group, whose semidirect
structure is verified element by element.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .construction import load_fixtures
from .enumeration import VectorSet, fold_modulo_sign
from .frames import SymmetryGroup, close_group, orbits
from .lattice import Lattice, frame_scaled_gram, gram as lattice_gram
from .matrices import det as exact_det
from .matrices import inverse as exact_inverse
from .reduction import lll_gram
from .vectortypes import Partition, TypeSig, product_matrix, refine_to_irreducible

Matrix = tuple[tuple[int, ...], ...]

# local type of the anchor block: the unique size-1368 block with this
# stable signature, whose orbit space under the symmetry group has
# exactly 4 classes
_ANCHOR_SIG = TypeSig(850, 252, 6, 1)

# block membership of the rows of the bundled reference Gram, given as
# (level-1 block, stable local type); sub-numbering inside a level-1
# block is not canonical, so the local type identifies the block up to
# siblings of equal type and candidate pools take their union
_REFERENCE_BLOCKS: tuple[tuple[int, tuple[int, int, int, int]], ...] = tuple(
    {
        1: (1, (2, 0, 0, 1)),
        2: (7, (850, 252, 6, 1)),
        3: (15, (38, 0, 18, 1)),
        4: (15, (38, 0, 18, 1)),
        5: (2, (162, 32, 0, 1)),
        18: (10, (422, 128, 2, 1)),
        28: (6, (422, 128, 2, 1)),
        31: (10, (362, 154, 6, 1)),
        34: (8, (446, 114, 4, 1)),
        35: (10, (398, 136, 6, 1)),
        39: (9, (386, 144, 4, 1)),
        40: (7, (374, 152, 2, 1)),
    }.get(
        i,
        (16, (614, 0, 34, 1))
        if i in {6, 8, 13, 14, 17, 23, 25, 26, 27, 29, 30, 33, 37, 38}
        else (9, (470, 98, 8, 1)),
    )
    for i in range(1, 41)
)


@dataclass(frozen=True)
class BasisSelection:
    """A basis of norm-4 vectors with block annotations.

    vectors may be None for a target given only by its Gram matrix and
    block pattern (the bundled reference Gram has no published
    vectors)."""

    vectors: tuple[tuple[int, ...], ...] | None
    labels: tuple[str, ...]
    gram: Matrix


@dataclass(frozen=True)
class AutGroup:
    """Finite group of integer matrices in lattice-basis coordinates."""

    generators: tuple[Matrix, ...]
    elements: tuple[Matrix, ...]

    @property
    def order(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class SemidirectReport:
    """Witnesses for the semidirect-product structure."""

    g1: Matrix
    g2: Matrix
    g1_order: int
    g2_order: int
    relation_exponent: int
    normal: bool
    trivial_intersection: bool
    product_is_group: bool
    order_census: tuple[tuple[int, int], ...]


def _ambient_gram(frame, rows: np.ndarray) -> np.ndarray:
    num, den = frame_scaled_gram(frame)
    n = np.array(num, dtype=np.int64)
    prod = rows @ n @ rows.T
    q, r = np.divmod(prod, den)
    if r.any():
        raise ArithmeticError("inner products are not integral")
    return q


def _exact_coords(rows: np.ndarray, basis) -> np.ndarray:
    """Integer coordinates of ambient rows with respect to the basis,
    solved in floating point and re-verified exactly."""
    b = np.array(basis, dtype=np.int64)
    y = np.rint(rows @ np.linalg.inv(b.astype(float))).astype(np.int64)
    if not (y @ b == rows).all():
        raise ArithmeticError("vectors do not lie in the lattice")
    return y


def _fold_key(v) -> tuple[int, ...]:
    t = tuple(int(x) for x in v)
    return max(t, tuple(-x for x in t))


def _norm4_folded(s: VectorSet) -> VectorSet:
    keep = tuple(v for v, m in zip(s.vectors, s.norms) if m == 4)
    sub = VectorSet(s.frame, keep, (4,) * len(keep), modulo_sign=s.modulo_sign)
    return fold_modulo_sign(sub)


def four_vector_basis(
    lat: Lattice,
    s: VectorSet,
    partition: Partition | None = None,
    require_block: str | None = None,
) -> BasisSelection:
    """Basis of lat consisting of norm-4 vectors from s.

    Seeds with the norm-4 rows of an LLL-reduced basis, completes to
    full rank from the folded norm-4 vectors, then exchanges vectors to
    shrink the sublattice index to 1.  With require_block given, one
    basis position is moved into that block by a unimodular exchange.
    Every basis vector is annotated with its irreducible-block label."""
    n = lat.rank
    folded = _norm4_folded(s)
    if len(folded) == 0:
        raise ValueError("no norm-4 basis: the set has no norm-4 vectors")
    rows = np.array(folded.vectors, dtype=np.int64)
    coords = _exact_coords(rows, lat.basis)

    gram = [[int(x) for x in row] for row in lattice_gram(lat)]
    reduced, u = lll_gram(gram)
    seeds = [list(map(int, u[i])) for i in range(n) if int(reduced[i][i]) == 4]

    sel: list[list[int]] = []
    q = np.zeros((0, n))

    def try_add(row) -> bool:
        nonlocal q
        v = np.array(row, dtype=float)
        r = v - (v @ q.T) @ q if len(q) else v
        nr = np.linalg.norm(r)
        if nr > 1e-7 * max(1.0, np.linalg.norm(v)):
            q = np.vstack([q, r / nr])
            sel.append([int(x) for x in row])
            return True
        return False

    for row in seeds:
        try_add(row)
    if len(sel) < n:
        for row in coords:
            if try_add(row) and len(sel) == n:
                break
    if len(sel) < n:
        raise ValueError("no norm-4 basis: the norm-4 vectors do not span")

    c = [row[:] for row in sel]
    d = int(exact_det(c))
    for _ in range(200):
        if abs(d) == 1:
            break
        ad = abs(d)
        inv = exact_inverse(c)
        adj = [[inv[i][j] * d for j in range(n)] for i in range(n)]
        if any(x.denominator != 1 for row in adj for x in row):
            raise ArithmeticError("adjugate is not integral")
        adj_np = np.array([[int(x) for x in row] for row in adj], dtype=np.int64)
        y = coords @ adj_np
        absy = np.abs(y)
        cand = (y % ad != 0) & (absy < ad)
        if not cand.any():
            raise ValueError("no norm-4 basis found after exhaustive completion")
        score = np.where(cand, absy, ad)
        i, pos = np.unravel_index(np.argmin(score), score.shape)
        c[pos] = [int(x) for x in coords[i]]
        d = int(exact_det(c))
    if abs(d) != 1:
        raise ValueError("no norm-4 basis found after exhaustive completion")

    part = partition if partition is not None else refine_to_irreducible(s)
    findex = {v: i for i, v in enumerate(part.vecset.vectors)}
    member = part.membership()

    def labels_of(ambient) -> list[str]:
        out = []
        for row in ambient:
            j = findex[_fold_key(row)]
            out.append(part.blocks[member[j]].name)
        return out

    b_np = np.array(lat.basis, dtype=np.int64)
    ambient = np.array(c, dtype=np.int64) @ b_np
    labels = labels_of(ambient)

    if require_block is not None and require_block not in labels:
        blk = part.block_named(require_block)
        brows = np.array([part.vecset.vectors[i] for i in blk.indices], dtype=np.int64)
        bco = _exact_coords(brows, lat.basis)
        inv = exact_inverse(c)
        cinv = np.array([[int(x) for x in row] for row in inv], dtype=np.int64)
        yb = bco @ cinv
        hits = np.argwhere(np.abs(yb) == 1)
        if len(hits) == 0:
            raise ValueError(f"cannot place a basis vector in {require_block}")
        i, pos = hits[0]
        # coefficient +-1 keeps the change of basis unimodular
        c[pos] = [int(x) for x in bco[i]]
        ambient = np.array(c, dtype=np.int64) @ b_np
        labels = labels_of(ambient)
        assert abs(int(exact_det(c))) == 1

    g = _ambient_gram(s.frame, ambient)
    if (np.diag(g) != 4).any():
        raise AssertionError("basis vectors must have norm 4")
    return BasisSelection(
        tuple(tuple(int(x) for x in row) for row in ambient),
        tuple(labels),
        tuple(tuple(int(x) for x in row) for row in g),
    )


def reference_target(partition: Partition) -> BasisSelection:
    """Search target built from the bundled reference Gram matrix and
    its block membership pattern."""
    labels = []
    for parent, sig in _REFERENCE_BLOCKS:
        want = TypeSig(*sig)
        match = [
            b for b in partition.blocks if b.label[0] == parent and b.sig == want
        ]
        if not match:
            raise ValueError("no block matches the reference membership pattern")
        labels.append(match[0].name)
    return BasisSelection(None, tuple(labels), load_fixtures().gram_o40)


def isometry_search(
    target: BasisSelection,
    s_blocks: Partition,
    anchor_reps,
    node_cap: int = 10**8,
) -> list[Matrix]:
    """All matrices X whose rows realize the target Gram exactly, with
    row i drawn from the irreducible block of target position i and the
    anchor position drawn only from anchor_reps.

    Positions are filled in ascending candidate-pool order; each
    placement filters every remaining pool by the required exact inner
    product (forward checking), so a wrong partial assignment dies as
    soon as any pool empties."""
    part = s_blocks
    fs = part.vecset
    n = len(target.labels)
    p = product_matrix(fs)
    findex = {v: i for i, v in enumerate(fs.vectors)}

    def pool_for(name: str) -> np.ndarray:
        blk = part.block_named(name)
        key = (blk.label[:-1], blk.sig)
        out = []
        for b in part.blocks:
            if (b.label[:-1], b.sig) == key:
                out.extend(b.indices)
        return np.array(sorted(out), dtype=np.int64)

    pools_idx: list[np.ndarray] = []
    pools_sgn: list[np.ndarray] = []
    for name in target.labels:
        pi = pool_for(name)
        pools_idx.append(np.concatenate([pi, pi]))
        pools_sgn.append(
            np.concatenate([np.ones(len(pi), np.int8), -np.ones(len(pi), np.int8)])
        )

    reps = []
    for r in anchor_reps:
        t = tuple(int(x) for x in r)
        key = max(t, tuple(-x for x in t))
        if key not in findex:
            raise ValueError("anchor representative is not in the vector set")
        reps.append((findex[key], 1 if key == t else -1))
    anchor_pos = None
    for i in range(n):
        members = set(pools_idx[i].tolist())
        if all(fi in members for fi, _ in reps):
            anchor_pos = i
            break
    if anchor_pos is None:
        raise ValueError("no target position matches the anchor block")
    pools_idx[anchor_pos] = np.array([fi for fi, _ in reps], dtype=np.int64)
    pools_sgn[anchor_pos] = np.array([sg for _, sg in reps], dtype=np.int8)

    w = np.array(target.gram, dtype=np.int16)
    order = sorted(range(n), key=lambda i: (len(pools_idx[i]), i))
    solutions: list[Matrix] = []
    nodes = 0

    def rec(k: int, idxs: list[np.ndarray], sgns: list[np.ndarray]) -> None:
        nonlocal nodes
        if k == n:
            rows = []
            for i in range(n):
                v = np.array(fs.vectors[int(idxs[i][0])], dtype=np.int64)
                rows.append(int(sgns[i][0]) * v)
            solutions.append(tuple(tuple(int(x) for x in row) for row in rows))
            return
        pos = order[k]
        for fi, sg in zip(idxs[pos].tolist(), sgns[pos].tolist()):
            nodes += 1
            if nodes > node_cap:
                raise RuntimeError("isometry search exceeded the node cap")
            nidx = list(idxs)
            nsgn = list(sgns)
            nidx[pos] = np.array([fi], dtype=np.int64)
            nsgn[pos] = np.array([sg], dtype=np.int8)
            ok = True
            for j in order[k + 1 :]:
                prods = nsgn[j].astype(np.int16) * p[nidx[j], fi] * sg
                keep = prods == w[j, pos]
                if not keep.any():
                    ok = False
                    break
                nidx[j] = nidx[j][keep]
                nsgn[j] = nsgn[j][keep]
            if ok:
                rec(k + 1, nidx, nsgn)

    rec(0, pools_idx, pools_sgn)

    w64 = np.array(target.gram, dtype=np.int64)
    for x in solutions:
        got = _ambient_gram(fs.frame, np.array(x, dtype=np.int64))
        if not (got == w64).all():
            raise AssertionError("solution fails the exact Gram check")
    return solutions


def _anchor_transversal(partition: Partition, gamma: SymmetryGroup):
    blk = partition.find_block(sig=_ANCHOR_SIG.as_tuple())
    sub = VectorSet(
        partition.vecset.frame,
        tuple(partition.vecset.vectors[i] for i in blk.indices),
        (4,) * len(blk.indices),
        modulo_sign=True,
    )
    return blk, orbits(sub, gamma).reps()


@lru_cache(maxsize=2)
def full_aut(
    lat: Lattice,
    s: VectorSet,
    gamma: SymmetryGroup,
    target: BasisSelection | None = None,
    partition: Partition | None = None,
) -> AutGroup:
    """The full automorphism group in lattice-basis coordinates.

    Runs the isometry search against a norm-4 basis, converts each
    solution X into the basis-coordinate automorphism C'^-1 X_B (C' the
    coordinates of the target basis, X_B those of the solution rows),
    adjoins them to the coordinate symmetries, and closes under
    multiplication."""
    part = partition if partition is not None else refine_to_irreducible(s)
    anchor_block, anchor_reps = _anchor_transversal(part, gamma)
    if target is None:
        target = four_vector_basis(lat, s, partition=part, require_block=anchor_block.name)
    sols = isometry_search(target, part, anchor_reps)
    if not sols:
        raise ValueError("the isometry search found no solutions")

    if target.vectors is not None:
        cp = _exact_coords(np.array(target.vectors, dtype=np.int64), lat.basis)
    else:
        # a gram-only target: any solution serves as the reference basis
        cp = _exact_coords(np.array(sols[0], dtype=np.int64), lat.basis)
    inv = exact_inverse([[int(x) for x in row] for row in cp])
    if any(x.denominator != 1 for row in inv for x in row):
        raise ArithmeticError("target basis is not unimodular")
    cpi = np.array([[int(x) for x in row] for row in inv], dtype=np.int64)

    new_gens = []
    for x in sols:
        cx = _exact_coords(np.array(x, dtype=np.int64), lat.basis)
        a = cpi @ cx
        new_gens.append(tuple(tuple(int(v) for v in row) for row in a))

    b = np.array(lat.basis, dtype=np.int64)
    binv = np.linalg.inv(b.astype(float))
    gamma_b = []
    for g in gamma.generators:
        gm = np.array(g, dtype=np.int64)
        ab = np.rint(b @ gm @ binv).astype(np.int64)
        if not (ab @ b == b @ gm).all():
            raise ArithmeticError("symmetry does not normalize the basis")
        gamma_b.append(tuple(tuple(int(v) for v in row) for row in ab))

    gens = tuple(gamma_b) + tuple(dict.fromkeys(new_gens))
    elements = close_group(gens, cap=10**6)
    return AutGroup(gens, elements)


def _np_order(m: np.ndarray, ident: np.ndarray, cap: int = 100) -> int:
    power = m
    for k in range(1, cap + 1):
        if (power == ident).all():
            return k
        power = power @ m
    raise ValueError(f"matrix order exceeds {cap}")


def preserves_blocks(a: Matrix, partition: Partition, lat: Lattice) -> bool:
    """Whether the basis-coordinate automorphism maps every irreducible
    block onto itself."""
    fs = partition.vecset
    rows = np.array(fs.vectors, dtype=np.int64)
    y = _exact_coords(rows, lat.basis)
    img = (y @ np.array(a, dtype=np.int64)) @ np.array(lat.basis, dtype=np.int64)
    findex = {v: i for i, v in enumerate(fs.vectors)}
    member = partition.membership()
    for i, row in enumerate(img):
        j = findex.get(_fold_key(row))
        if j is None or member[j] != member[i]:
            return False
    return True


def verify_semidirect(group: AutGroup) -> SemidirectReport:
    """Witnesses g1 (order 36) and g2 (order 19) with
    g1 g2 g1^-1 = g2^3, <g2> normal, trivial intersection, and
    <g2><g1> equal to the whole group."""
    elems = [np.array(e, dtype=np.int64) for e in group.elements]
    n = elems[0].shape[0]
    ident = np.eye(n, dtype=np.int64)
    orders = [_np_order(e, ident) for e in elems]
    census = tuple(sorted(Counter(orders).items()))
    g2s = [e for e, o in zip(elems, orders) if o == 19]
    g1s = [e for e, o in zip(elems, orders) if o == 36]

    all_bytes = {e.tobytes() for e in elems}
    for g2 in g2s:
        g2_pows = [np.linalg.matrix_power(g2, k) for k in range(19)]
        h_bytes = {m.tobytes() for m in g2_pows}
        g23 = g2_pows[3]
        for g1 in g1s:
            g1_inv = np.linalg.matrix_power(g1, 35)
            if not (g1 @ g2 @ g1_inv == g23).all():
                continue
            g1_pows = [np.linalg.matrix_power(g1, k) for k in range(36)]
            k_bytes = {m.tobytes() for m in g1_pows}
            trivial = (h_bytes & k_bytes) == {ident.tobytes()}
            normal = True
            for gen in group.generators:
                gm = np.array(gen, dtype=np.int64)
                inv = exact_inverse([[int(x) for x in row] for row in gen])
                gi = np.array([[int(x) for x in row] for row in inv], dtype=np.int64)
                # conjugating the generator of <g2> decides conjugation
                # of the whole cyclic subgroup
                if (gm @ g2 @ gi).tobytes() not in h_bytes:
                    normal = False
                    break
            product = {(a @ b).tobytes() for a in g2_pows for b in g1_pows}
            product_is_group = product == all_bytes
            if trivial and normal and product_is_group:
                return SemidirectReport(
                    tuple(tuple(int(x) for x in row) for row in g1),
                    tuple(tuple(int(x) for x in row) for row in g2),
                    36,
                    19,
                    3,
                    normal,
                    trivial,
                    product_is_group,
                    census,
                )
    raise ValueError("structure mismatch")
