"""Inner-product type signatures of minimal vectors and the iterative
refinement of the norm-4 set into irreducible subsets.

The type of v against a reference set R counts how many u in R have
u.v = 0, 1, 2, 4 (negative products belong to the negated partners and
are not counted).  Refinement retypes every vector against its own
block and splits blocks until the partition is stable.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .enumeration import VectorSet, fold_modulo_sign
from .lattice import frame_scaled_gram

_ALLOWED = (0, 1, 2, 4)


@dataclass(frozen=True)
class TypeSig:
    """Counts [t0, t1, t2, t4] of reference vectors at each product value."""

    t0: int
    t1: int
    t2: int
    t4: int

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.t0, self.t1, self.t2, self.t4)

    def __str__(self) -> str:
        return f"[{self.t0}, {self.t1}, {self.t2}, {self.t4}]"


@dataclass(frozen=True)
class Block:
    """One partition cell: positions into the sign-folded vector set."""

    label: tuple[int, ...]
    indices: tuple[int, ...]
    sig: TypeSig

    @property
    def size(self) -> int:
        # counts both signs of every folded representative
        return 2 * len(self.indices)

    @property
    def name(self) -> str:
        return "S" + ",".join(str(i) for i in self.label)


@dataclass(frozen=True)
class Partition:
    """Ordered disjoint blocks covering a sign-folded vector set."""

    vecset: VectorSet
    blocks: tuple[Block, ...]

    @property
    def level(self) -> int:
        return max((len(b.label) for b in self.blocks), default=0)

    def sizes(self) -> list[int]:
        return [b.size for b in self.blocks]

    def block_named(self, name: str) -> Block:
        for b in self.blocks:
            if b.name == name:
                return b
        raise KeyError(f"no block named {name}")

    def find_block(self, *, sig=None, size=None, parent=None) -> Block:
        """The unique block matching every given filter."""
        hits = []
        for b in self.blocks:
            if sig is not None and b.sig.as_tuple() != tuple(sig):
                continue
            if size is not None and b.size != size:
                continue
            if parent is not None and b.label[:-1] != tuple(parent):
                continue
            hits.append(b)
        if len(hits) != 1:
            raise KeyError(
                f"expected exactly one block for sig={sig} size={size} "
                f"parent={parent}, found {len(hits)}"
            )
        return hits[0]

    def membership(self) -> np.ndarray:
        """Array mapping folded vector position to block position."""
        out = np.full(len(self.vecset), -1, dtype=np.intp)
        for bi, b in enumerate(self.blocks):
            out[list(b.indices)] = bi
        return out


def _product_error(value) -> ArithmeticError:
    return ArithmeticError(
        f"inner product {value} outside {{0, +-1, +-2, +-4}}; "
        "the reference set is not a minimal-vector set of an even "
        "unimodular lattice with minimum 4"
    )


@lru_cache(maxsize=2)
def product_matrix(vs: VectorSet) -> np.ndarray:
    """Pairwise inner products of a sign-folded vector set as int8.

    Entries are the exact products of the stored representatives and
    always lie in {0, +-1, +-2, +-4}.  The float64 matrix products are
    exact because every partial sum is proved below 2**53 before use;
    coordinate growth beyond that falls back to big-integer arithmetic.
    """
    if not vs.modulo_sign:
        raise ValueError("product_matrix expects a sign-folded set")
    num, denom = frame_scaled_gram(vs.frame)
    f = len(vs.vectors)
    if f == 0:
        return np.zeros((0, 0), dtype=np.int8)
    n = vs.frame.dim
    u = np.array(vs.vectors, dtype=np.int64)
    a = np.array(num, dtype=np.int64)
    cmax = int(np.abs(u).max())
    amax = int(np.abs(a).max()) if a.size else 0
    ua_bound = n * cmax * amax
    if n * cmax * ua_bound >= 2**53:
        rows = [
            [_checked_product(vs, i, j, num, denom) for j in range(f)]
            for i in range(f)
        ]
        return np.array(rows, dtype=np.int8)
    uf = u.astype(np.float64)
    ua = uf @ a.astype(np.float64)
    out = np.empty((f, f), dtype=np.int8)
    step = max(1, (1 << 24) // f)
    for lo in range(0, f, step):
        part = ua[lo : lo + step] @ uf.T
        q = np.rint(part / denom)
        if not (q * denom == part).all():
            raise _product_error(f"{part.min()}/{denom}")
        if not np.isin(np.abs(q), _ALLOWED).all():
            bad = q[~np.isin(np.abs(q), _ALLOWED)][0]
            raise _product_error(int(bad))
        out[lo : lo + step] = q.astype(np.int8)
    return out


def _checked_product(vs, i, j, num, denom) -> int:
    x, y = vs.vectors[i], vs.vectors[j]
    s = 0
    for k, xk in enumerate(x):
        if xk:
            row = num[k]
            s += xk * sum(yl * row[l] for l, yl in enumerate(y) if yl)
    q, r = divmod(s, denom)
    if r or abs(q) not in _ALLOWED:
        raise _product_error(f"{s}/{denom}")
    return q


def type_of(v, refset: VectorSet) -> TypeSig:
    """Exact type signature of coordinate row v against a reference set."""
    num, denom = frame_scaled_gram(refset.frame)
    va = [
        sum(int(v[i]) * num[i][j] for i in range(len(v)) if v[i])
        for j in range(refset.frame.dim)
    ]
    counts = {0: 0, 1: 0, 2: 0, 4: 0}
    for u in refset.vectors:
        s = sum(x * y for x, y in zip(u, va))
        q, r = divmod(s, denom)
        if r:
            raise _product_error(f"{s}/{denom}")
        if abs(q) not in _ALLOWED:
            raise _product_error(q)
        if refset.modulo_sign:
            if q == 0:
                counts[0] += 2
            else:
                counts[abs(q)] += 1
        elif q >= 0:
            counts[q] += 1
    return TypeSig(counts[0], counts[1], counts[2], counts[4])


def _sigs_for(p: np.ndarray, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    """Type rows (t0, t1, t2, t4) of each folded row against folded cols."""
    sub = np.abs(p[np.ix_(rows, cols)])
    out = np.empty((len(rows), 4), dtype=np.int64)
    out[:, 0] = 2 * (sub == 0).sum(axis=1)
    out[:, 1] = (sub == 1).sum(axis=1)
    out[:, 2] = (sub == 2).sum(axis=1)
    out[:, 3] = (sub == 4).sum(axis=1)
    return out


def _group_rows(sig_rows: np.ndarray) -> list[tuple[tuple, np.ndarray]]:
    """Distinct signature rows with their row positions, sorted by row."""
    uniq, inverse = np.unique(sig_rows, axis=0, return_inverse=True)
    return [
        (tuple(int(x) for x in uniq[g]), np.nonzero(inverse == g)[0])
        for g in range(len(uniq))
    ]


@lru_cache(maxsize=4)
def partition_by_type(s: VectorSet) -> Partition:
    """Split a norm-4 set into blocks of equal type against the whole
    set, ordered by t2 ascending."""
    folded = fold_modulo_sign(s)
    if len(folded) == 0:
        return Partition(folded, ())
    p = product_matrix(folded)
    everything = np.arange(len(folded), dtype=np.intp)
    sig_rows = _sigs_for(p, everything, everything)
    groups = _group_rows(sig_rows)
    groups.sort(key=lambda g: (g[0][2], g[0]))
    blocks = tuple(
        Block((i + 1,), tuple(int(x) for x in idx), TypeSig(*sig))
        for i, (sig, idx) in enumerate(groups)
    )
    return Partition(folded, blocks)


@lru_cache(maxsize=4)
def refine_to_irreducible(s: VectorSet, initial: Partition | None = None) -> Partition:
    """Refine a partition by block-local types until it is stable.

    Each pass retypes every vector against its own block; blocks whose
    members disagree are split, with sub-labels assigned by ascending
    local type.  The loop exits only after a pass that splits nothing,
    so the result is verified irreducible, with each block carrying its
    own-block local type.
    """
    folded = fold_modulo_sign(s)
    if initial is None:
        initial = partition_by_type(folded)
    if initial.vecset is not folded and initial.vecset.vectors != folded.vectors:
        raise ValueError("partition does not cover the given vector set")
    if len(folded) == 0:
        return initial
    p = product_matrix(folded)
    blocks = list(initial.blocks)
    while True:
        local = []
        changed = False
        for b in blocks:
            idx = np.array(b.indices, dtype=np.intp)
            groups = _group_rows(_sigs_for(p, idx, idx))
            if len(groups) > 1:
                changed = True
            local.append(groups)
        if not changed:
            stable = tuple(
                Block(b.label, b.indices, TypeSig(*groups[0][0]))
                for b, groups in zip(blocks, local)
            )
            return Partition(folded, stable)
        refined = []
        for b, groups in zip(blocks, local):
            idx = np.array(b.indices, dtype=np.intp)
            for j, (sig, pos) in enumerate(groups, start=1):
                refined.append(
                    Block(
                        b.label + (j,),
                        tuple(int(x) for x in idx[pos]),
                        TypeSig(*sig),
                    )
                )
        blocks = refined


def frame_signature_present(partition: Partition) -> bool:
    """Whether some block has the 4-frame local type [78, 0, 0, 1]."""
    return any(b.sig.as_tuple() == (78, 0, 0, 1) for b in partition.blocks)
