"""Recovery of the orthogonally decomposable sublattice spanned by two
irreducible blocks, and the gluing identity.

The size-4 block {a, -a, b, -b} together with the unique size-76 block
whose vectors are all orthogonal to a and b spans a rank-40 sublattice
M.  The norm-4 vectors of M split under the orthogonality graph into
two antipodal pairs and two copies of a scaled A19 root system;
ordering the indecomposable positive roots of each copy along their
adjacency path produces a canonical basis whose Gram matrix is exactly
diag([4], [4], A19(2), A19(2)).  Adding M to the block-diagonal
starting lattice recovers the glued lattice.

A literal search for the two 19-chains among the size-76 block vectors
alone is also provided; it reports how many such configurations exist
(none: the block's 38 folded classes form two complete product-2
components of 19 classes each, in which no two distinct classes are
orthogonal, so no induced path of length 3 or more fits).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .enumeration import VectorSet, fold_modulo_sign, vectors_of_norm_at_most
from .lattice import (
    Lattice,
    frame_scaled_gram,
    gram as lattice_gram,
    lattice_sum,
    lattices_equal,
    make_lattice,
)
from .matrices import det as exact_det, hnf_basis
from .reduction import lll_gram
from .vectortypes import Partition, product_matrix

Matrix = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class RootChain:
    """Ordered norm-4 vectors with consecutive products -2 and all
    other pairs orthogonal."""

    vectors: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.vectors)


def chain_gram(n: int) -> Matrix:
    """Gram matrix of the doubled A_n root lattice in its simple-root
    basis: 4 on the diagonal, -2 between neighbours."""
    return tuple(
        tuple(4 if i == j else -2 if abs(i - j) == 1 else 0 for j in range(n))
        for i in range(n)
    )


def _gram_rows(frame, rows: np.ndarray) -> np.ndarray:
    num, den = frame_scaled_gram(frame)
    prod = rows @ np.array(num, dtype=np.int64) @ rows.T
    q, r = np.divmod(prod, den)
    if r.any():
        raise ArithmeticError("inner products are not integral")
    return q


def root_chain(frame, vectors) -> RootChain:
    """Validate that the ordered vectors form a scaled A-type chain."""
    rows = np.array(vectors, dtype=np.int64)
    want = np.array(chain_gram(len(vectors)), dtype=np.int64)
    if not (_gram_rows(frame, rows) == want).all():
        raise ValueError("vectors do not form a -2-linked chain of norm 4")
    return RootChain(tuple(tuple(int(x) for x in row) for row in rows))


def _orient_chain(frame, vectors) -> list[tuple[int, ...]]:
    """Flip signs along the chain so every consecutive product is -2."""
    rows = [np.array(v, dtype=np.int64) for v in vectors]
    for i in range(1, len(rows)):
        p = int(_gram_rows(frame, np.array([rows[i - 1], rows[i]]))[0, 1])
        if p == 2:
            rows[i] = -rows[i]
    return [tuple(int(x) for x in r) for r in rows]


def _component_chain(frame, component: list[tuple[int, ...]]) -> RootChain:
    """Canonical chain basis of one scaled A-type root component.

    The folded vectors are a positive system (each is the
    lexicographically larger of its antipodal pair); a positive root is
    simple when it is not the sum of two others, and the simple roots
    of an A-type system line up along their product != 0 adjacency
    path."""
    pos = set(component)
    simple = []
    for alpha in component:
        av = np.array(alpha, dtype=np.int64)
        if not any(
            tuple(int(x) for x in (av - np.array(beta, dtype=np.int64))) in pos
            for beta in component
            if beta != alpha
        ):
            simple.append(alpha)
    simple.sort()
    rows = np.array(simple, dtype=np.int64)
    g = _gram_rows(frame, rows)
    adj = [
        [j for j in range(len(simple)) if j != i and g[i, j] != 0]
        for i in range(len(simple))
    ]
    degrees = sorted(len(a) for a in adj)
    if degrees != [1, 1] + [2] * (len(simple) - 2):
        raise ValueError("simple roots do not form a single path")
    start = min(i for i in range(len(simple)) if len(adj[i]) == 1)
    path = [start]
    while len(path) < len(simple):
        nxt = [j for j in adj[path[-1]] if j not in path[-2:]]
        path.append(nxt[0])
    ordered = _orient_chain(frame, [simple[i] for i in path])
    return root_chain(frame, ordered)


def glue_target_gram() -> Matrix:
    """Block-diagonal Gram diag([4], [4], A19(2), A19(2))."""
    a19 = chain_gram(19)
    out = [[0] * 40 for _ in range(40)]
    out[0][0] = out[1][1] = 4
    for i in range(19):
        for j in range(19):
            out[2 + i][2 + j] = a19[i][j]
            out[21 + i][21 + j] = a19[i][j]
    return tuple(tuple(row) for row in out)


def _m_blocks(part: Partition):
    """The size-4 block and the unique size-76 block of signature
    (38, 0, 18, 1) that is orthogonal to it."""
    fs = part.vecset
    first = part.find_block(size=4)
    pair = np.array([fs.vectors[i] for i in first.indices], dtype=np.int64)
    hits = []
    for b in part.blocks:
        if b.sig.as_tuple() != (38, 0, 18, 1):
            continue
        rows = np.array([fs.vectors[i] for i in b.indices], dtype=np.int64)
        num, den = frame_scaled_gram(fs.frame)
        cross = rows @ np.array(num, dtype=np.int64) @ pair.T
        if not cross.any():
            hits.append(b)
    if len(hits) != 1:
        raise ValueError(
            "expected exactly one size-76 block orthogonal to the size-4 block"
        )
    return first, hits[0]


def find_sublattice_M(s_blocks: Partition) -> tuple[Lattice, tuple[tuple[int, ...], ...]]:
    """The orthogonally decomposable sublattice spanned by the size-4
    block together with the last block, in a canonical basis whose Gram
    is exactly diag([4], [4], A19(2), A19(2)), plus the 40 folded block
    vectors that already form a basis of it."""
    part = s_blocks
    fs = part.vecset
    frame = fs.frame
    first, last = _m_blocks(part)
    span_vecs = [fs.vectors[i] for i in first.indices + last.indices]

    pair = np.array([fs.vectors[i] for i in first.indices], dtype=np.int64)
    g_pair = _gram_rows(frame, pair)
    if not (g_pair == np.diag(np.diag(g_pair))).all() or (np.diag(g_pair) != 4).any():
        raise ValueError("the size-4 block is not two orthogonal antipodal pairs")

    span = make_lattice(frame, hnf_basis([list(v) for v in span_vecs]))
    if span.rank != frame.dim:
        raise ValueError("no configuration found: the blocks do not span full rank")

    g = [[int(x) for x in row] for row in lattice_gram(span)]
    _, u = lll_gram(g)
    reduced = np.array(u, dtype=np.int64) @ np.array(span.basis, dtype=np.int64)
    roots = vectors_of_norm_at_most(
        make_lattice(frame, [[int(x) for x in row] for row in reduced]), 4
    )
    folded = fold_modulo_sign(roots)
    p = product_matrix(folded)

    # connected components of the product != 0 graph on folded classes
    n = len(folded)
    comp = [-1] * n
    sizes = []
    for seed in range(n):
        if comp[seed] >= 0:
            continue
        cid = len(sizes)
        queue = [seed]
        comp[seed] = cid
        count = 0
        while queue:
            i = queue.pop()
            count += 1
            for j in np.nonzero(p[i])[0]:
                if comp[j] < 0:
                    comp[j] = int(cid)
                    queue.append(int(j))
        sizes.append(count)
    groups: list[list[tuple[int, ...]]] = [[] for _ in sizes]
    for i, c in enumerate(comp):
        groups[c].append(folded.vectors[i])
    groups.sort(key=lambda grp: (len(grp), grp[0]))
    if [len(grp) for grp in groups] != [1, 1, 190, 190]:
        raise ValueError(
            "no configuration found: root components are not [1, 1, 190, 190]"
        )

    chains = [_component_chain(frame, grp) for grp in groups[2:]]
    rows = [groups[0][0], groups[1][0]] + list(chains[0].vectors) + list(chains[1].vectors)
    m = make_lattice(frame, [list(v) for v in rows])

    got = _gram_rows(frame, np.array(rows, dtype=np.int64))
    if not (got == np.array(glue_target_gram(), dtype=np.int64)).all():
        raise ValueError("no configuration found: Gram does not match the target")
    if not lattices_equal(m, span):
        raise ValueError("no configuration found: roots do not regenerate the span")

    chosen = np.array(span_vecs, dtype=np.int64)
    coords = np.rint(
        chosen @ np.linalg.inv(np.array(m.basis, dtype=float))
    ).astype(np.int64)
    if not (coords @ np.array(m.basis, dtype=np.int64) == chosen).all():
        raise ArithmeticError("block vectors do not lie in the sublattice")
    if abs(int(exact_det([[int(x) for x in row] for row in coords]))) != 1:
        raise ValueError("no configuration found: block vectors are not a basis")
    return m, tuple(tuple(int(x) for x in row) for row in chosen)


def count_chain_configurations(s_blocks: Partition) -> int:
    """Number of ways to pick two vertex-disjoint induced 19-paths of
    product-magnitude-2 edges inside the size-76 block, orthogonal to
    each other and to the size-4 block (ordered pairs of oriented
    paths).

    Exhausts the search space; the count is zero because the block's
    product-2 graph is two complete components of 19 folded classes
    with no orthogonal pair inside either, so an induced path stalls at
    length 2."""
    part = s_blocks
    fs = part.vecset
    first, last = _m_blocks(part)
    idx = list(last.indices)
    rows = np.array([fs.vectors[i] for i in idx], dtype=np.int64)
    pair = np.array([fs.vectors[i] for i in first.indices], dtype=np.int64)
    frame = fs.frame
    n = len(idx)
    g = _gram_rows(frame, np.vstack([rows, pair]))
    cross_ok = [bool((g[i, n:] == 0).all()) for i in range(n)]
    two = [set(np.nonzero(np.abs(g[i, :n]) == 2)[0].tolist()) for i in range(n)]
    zero = [set(np.nonzero(g[i, :n] == 0)[0].tolist()) for i in range(n)]

    def extend(path: list[int], banned: set[int], length: int, out: list[list[int]]):
        if len(path) == length:
            out.append(path[:])
            return
        seen = set(path)
        for j in sorted(two[path[-1]] - banned - seen):
            if cross_ok[j] and all(j in zero[k] for k in path[:-1]):
                extend(path + [j], banned, length, out)

    count = 0
    first_paths: list[list[int]] = []
    for start in range(n):
        if cross_ok[start]:
            extend([start], set(), 19, first_paths)
    for path_a in first_paths:
        used = set(path_a)
        compatible = {
            j
            for j in range(n)
            if j not in used and cross_ok[j] and all(j in zero[k] for k in path_a)
        }
        blocked = set(range(n)) - compatible
        second: list[list[int]] = []
        for start in sorted(compatible):
            extend([start], blocked, 19, second)
        count += len(second)
    return count


def verify_theorem3(l: Lattice, m: Lattice, target: Lattice) -> bool:
    """Whether the sum of the two lattices equals the target exactly."""
    return lattices_equal(lattice_sum(l, m), target)
