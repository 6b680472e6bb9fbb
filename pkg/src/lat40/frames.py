"""Coordinate symmetries of the glued lattice, orbit reduction of its
minimal vectors, and maximal orthogonal sets of norm-4 vectors.

The symmetry group is generated by the shift t -> t+1 and the
multiplier t -> 4t of the underlying prime field, acting simultaneously
on both 20-coordinate halves, together with global negation.  Maximal
orthogonal sets follow the greedy intersection procedure; an exact
branch-and-bound completion bounds what the greedy step cannot see.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .construction import build_O40
from .enumeration import VectorSet, fold_modulo_sign, vectors_of_norm_at_most
from .lattice import Lattice, frame_scaled_gram, lattices_equal, make_lattice
from .matrices import matmul, transpose
from .qrcodes import field_permutation
from .vectortypes import product_matrix

Matrix = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class SymmetryGroup:
    """Finite group of integer matrices acting on coordinate rows from
    the right."""

    generators: tuple[Matrix, ...]
    elements: tuple[Matrix, ...]

    @property
    def order(self) -> int:
        return len(self.elements)


def _laminated_permutation(fn) -> Matrix:
    """Block-diagonal 40x40 matrix applying the same field permutation
    to both 20-coordinate halves."""
    p = field_permutation(fn)
    m = [[0] * 40 for _ in range(40)]
    for i in range(20):
        # new[i] = old[p[i]] means row p[i] carries a 1 in column i
        m[p[i]][i] = 1
        m[20 + p[i]][20 + i] = 1
    return tuple(tuple(row) for row in m)


def matrix_order(m: Matrix, cap: int = 1000) -> int:
    n = len(m)
    ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    power = m
    for k in range(1, cap + 1):
        if power == ident:
            return k
        power = tuple(tuple(r) for r in matmul(power, m))
    raise ValueError(f"matrix order exceeds {cap}")


def close_group(generators, cap: int = 10**6) -> tuple[Matrix, ...]:
    """All products of the generators, by breadth-first closure."""
    gens = [np.array(g, dtype=np.int64) for g in generators]
    n = gens[0].shape[0] if gens else 0
    ident = np.eye(n, dtype=np.int64)
    seen = {ident.tobytes(): ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                prod = m @ g
                key = prod.tobytes()
                if key not in seen:
                    seen[key] = prod
                    nxt.append(prod)
                    if len(seen) > cap:
                        raise ValueError(f"group closure exceeds {cap} elements")
        frontier = nxt
    elems = sorted(seen.values(), key=lambda m: m.tobytes())
    return tuple(tuple(tuple(int(x) for x in row) for row in m) for m in elems)


def _preserves_gram(g: Matrix, frame) -> bool:
    num, _ = frame_scaled_gram(frame)
    lhs = matmul(matmul([list(r) for r in g], [list(r) for r in num]), transpose(g))
    return [list(r) for r in lhs] == [list(r) for r in num]


def _stabilizes(g: Matrix, lat: Lattice) -> bool:
    image = matmul([list(r) for r in lat.basis], [list(r) for r in g])
    return lattices_equal(make_lattice(lat.frame, image), lat)


@lru_cache(maxsize=1)
def gamma_group() -> SymmetryGroup:
    """The order-342 coordinate symmetry group of the glued lattice:
    the field shift (order 19), the multiplier by 4 (order 9), and
    negation."""
    p_c = _laminated_permutation(lambda f: f + 1)
    p_s = _laminated_permutation(lambda f: 4 * f)
    neg = tuple(tuple(-int(i == j) for j in range(40)) for i in range(40))
    o40 = build_O40()
    for name, g, want in (("shift", p_c, 19), ("multiplier", p_s, 9), ("negation", neg, 2)):
        if matrix_order(g) != want:
            raise ValueError(f"{name} generator has wrong order")
        if not _preserves_gram(g, o40.frame):
            raise ValueError(f"{name} generator does not preserve the ambient gram")
        if not _stabilizes(g, o40):
            raise ValueError(f"{name} generator does not stabilize the lattice")
    elements = close_group((p_c, p_s, neg), cap=10**4)
    if len(elements) != 342:
        raise ValueError(f"symmetry group has order {len(elements)}, expected 342")
    return SymmetryGroup((p_c, p_s, neg), elements)


def sign_only_group(n: int) -> SymmetryGroup:
    ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    neg = tuple(tuple(-x for x in row) for row in ident)
    return SymmetryGroup((neg,), (ident, neg))


@dataclass(frozen=True)
class Orbits:
    """Orbit decomposition of a sign-folded vector set.

    Representatives are the lexicographically smallest stored vectors
    of their orbits.  Sizes count both signs of every folded class, so
    they sum to the unfolded set size (the groups used here always
    contain negation).  parent_class/parent_gen record the breadth
    first search forest used to transport representatives."""

    vecset: VectorSet
    group: SymmetryGroup
    rep_indices: tuple[int, ...]
    sizes: tuple[int, ...]
    orbit_of: np.ndarray
    parent_class: np.ndarray
    parent_gen: np.ndarray

    def __len__(self) -> int:
        return len(self.rep_indices)

    def reps(self) -> list[tuple[int, ...]]:
        return [self.vecset.vectors[i] for i in self.rep_indices]

    def rep_of(self, i: int) -> int:
        return self.rep_indices[self.orbit_of[i]]

    def transport(self, i: int) -> np.ndarray:
        """Group element g with fold(rep_vector . g) equal to vector i."""
        path = []
        j = i
        while self.parent_class[j] >= 0:
            path.append(self.parent_gen[j])
            j = self.parent_class[j]
        m = np.eye(self.vecset.frame.dim, dtype=np.int64)
        for gi in reversed(path):
            m = m @ np.array(self.group.generators[gi], dtype=np.int64)
        return m


def _fold_rows(w: np.ndarray) -> np.ndarray:
    """Replace each row by the lexicographically larger of itself and
    its negation (the stored folded representative)."""
    idx = np.argmax(w != 0, axis=1)
    lead = w[np.arange(len(w)), idx]
    out = w.copy()
    out[lead < 0] *= -1
    return out


@lru_cache(maxsize=8)
def orbits(s: VectorSet, group: SymmetryGroup) -> Orbits:
    """Orbit decomposition of the folded classes of s under the group.

    Breadth-first search from the smallest unvisited class; the stored
    vectors are sorted, so every representative is the
    lexicographically minimal stored vector of its orbit."""
    folded = fold_modulo_sign(s)
    f = len(folded)
    index = {v: i for i, v in enumerate(folded.vectors)}
    rows = np.array(folded.vectors, dtype=np.int64) if f else np.zeros((0, 0))
    gens = [np.array(g, dtype=np.int64) for g in group.generators]
    images = []
    for g in gens:
        img = _fold_rows(rows @ g)
        cols = []
        for i in range(f):
            j = index.get(tuple(int(x) for x in img[i]))
            if j is None:
                raise ValueError("orbit escaped the vector set")
            cols.append(j)
        images.append(cols)
    orbit_of = np.full(f, -1, dtype=np.intp)
    parent_class = np.full(f, -1, dtype=np.intp)
    parent_gen = np.full(f, -1, dtype=np.intp)
    rep_indices = []
    sizes = []
    for seed in range(f):
        if orbit_of[seed] >= 0:
            continue
        oid = len(rep_indices)
        rep_indices.append(seed)
        orbit_of[seed] = oid
        queue = [seed]
        count = 0
        while queue:
            i = queue.pop()
            count += 1
            for gi, img in enumerate(images):
                j = img[i]
                if orbit_of[j] < 0:
                    orbit_of[j] = oid
                    parent_class[j] = i
                    parent_gen[j] = gi
                    queue.append(j)
        sizes.append(2 * count)
    return Orbits(
        folded,
        group,
        tuple(rep_indices),
        tuple(sizes),
        orbit_of,
        parent_class,
        parent_gen,
    )


def _norm4_subset(vs: VectorSet) -> VectorSet:
    keep = [(v, m) for v, m in zip(vs.vectors, vs.norms) if m == 4]
    return VectorSet(
        vs.frame,
        tuple(v for v, _ in keep),
        tuple(m for _, m in keep),
        modulo_sign=vs.modulo_sign,
    )


@lru_cache(maxsize=2)
def _perp_bitsets(folded: VectorSet) -> tuple[int, ...]:
    """Per-vector bitset of the folded classes orthogonal to it."""
    p = product_matrix(folded)
    zero = p == 0
    bits = np.packbits(zero, axis=1, bitorder="little")
    return tuple(
        int.from_bytes(bits[i].tobytes(), "little") for i in range(len(folded))
    )


def _iter_bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def _fold_key(v) -> tuple[int, ...]:
    vt = tuple(int(x) for x in v)
    return max(vt, tuple(-x for x in vt))


def _greedy_chain(start: int, perp, vectors) -> tuple[list[int], int]:
    """Greedy chain of folded indices from start, with the number of
    steps where the maximizer was not unique."""
    chain = [start]
    pool = perp[start]
    tie_steps = 0
    while pool:
        best = None
        best_score = -1
        tied = 0
        for u in _iter_bits(pool):
            score = (pool & perp[u]).bit_count()
            if score > best_score:
                best, best_score, tied = u, score, 1
            elif score == best_score:
                tied += 1
                if vectors[u] < vectors[best]:
                    best = u
        if tied > 1:
            tie_steps += 1
        chain.append(best)
        pool &= perp[best]
    return chain, tie_steps


def max_orthogonal_set(v, s: VectorSet, group: SymmetryGroup | None = None) -> VectorSet:
    """Greedy maximal orthogonal set through v.

    Starts from v and the pool of norm-4 classes orthogonal to it; at
    each step keeps the pool vector whose perpendicular set meets the
    pool in the most classes (ties to the lexicographically smallest),
    then intersects the pool with that perpendicular set.  Stops when
    the pool is empty.

    With a group given, the greedy walk runs at the canonical orbit
    representative of v and the result is transported back, making the
    outcome constant on orbits."""
    folded = fold_modulo_sign(_norm4_subset(s))
    index = {w: i for i, w in enumerate(folded.vectors)}
    start = index.get(_fold_key(v))
    if start is None:
        raise ValueError("v is not a norm-4 vector of the set")
    perp = _perp_bitsets(folded)
    transport = None
    if group is not None:
        orb = orbits(folded, group)
        rep = orb.rep_of(start)
        if rep != start:
            transport = orb.transport(start)
            start = rep
    chain, _ = _greedy_chain(start, perp, folded.vectors)
    rows = np.array([folded.vectors[i] for i in chain], dtype=np.int64)
    if transport is not None:
        rows = _fold_rows(rows @ transport)
    p = product_matrix(folded)
    chain_now = [index[tuple(int(x) for x in r)] for r in rows]
    sub = p[np.ix_(chain_now, chain_now)]
    if not ((np.diag(sub) == 4).all() and np.abs(sub).sum() == 4 * len(chain_now)):
        raise AssertionError("greedy chain is not orthogonal")
    vecs = sorted(tuple(int(x) for x in r) for r in rows)
    return VectorSet(folded.frame, tuple(vecs), (4,) * len(vecs), modulo_sign=True)


@dataclass(frozen=True)
class CensusRow:
    """Greedy result for one orbit representative."""

    vector: tuple[int, ...]
    size: int
    tie_steps: int


def orthogonal_census(s: VectorSet, group: SymmetryGroup) -> list[CensusRow]:
    """Greedy maximal-orthogonal-set size for one representative per
    orbit, recording how many greedy steps had tied maximizers."""
    folded = fold_modulo_sign(_norm4_subset(s))
    if len(folded) == 0:
        return []
    orb = orbits(folded, group)
    perp = _perp_bitsets(folded)
    out = []
    for i in orb.rep_indices:
        chain, ties = _greedy_chain(i, perp, folded.vectors)
        out.append(CensusRow(folded.vectors[i], len(chain), ties))
    return out


def n_max(lat: Lattice, s: VectorSet | None = None, group: SymmetryGroup | None = None) -> int:
    """Largest greedy maximal-orthogonal-set size over orbit
    representatives of the norm-4 vectors."""
    if s is None:
        s = vectors_of_norm_at_most(lat, 4)
    s4 = _norm4_subset(s)
    if len(s4) == 0:
        return 0
    if group is None:
        group = sign_only_group(s4.frame.dim)
    return max(row.size for row in orthogonal_census(s4, group))


def has_4frame(lat: Lattice, s: VectorSet | None = None, group: SymmetryGroup | None = None) -> bool:
    """Whether the norm-4 vectors contain rank(lat) pairwise orthogonal
    ones."""
    return n_max(lat, s, group) == lat.rank


@dataclass(frozen=True)
class CompletionResult:
    """Outcome of the exact orthogonal-set completion search."""

    largest: int
    target: int
    nodes: int
    exhausted: bool
    found_target: bool


def complete_orthogonal_search(
    v, s: VectorSet, target: int = 40, node_budget: int = 10**7
) -> CompletionResult:
    """Branch-and-bound over all orthogonal sets through v, pruning
    states that cannot reach the target size.

    Explores each orthogonal set once (candidates in ascending class
    order) and prunes when chain size plus pool size falls short of the
    target.  Stops early when the target is reached or the node budget
    is exhausted; `exhausted` reports whether the search space was
    fully traversed, which is what turns "not found" into a proof."""
    folded = fold_modulo_sign(_norm4_subset(s))
    index = {w: i for i, w in enumerate(folded.vectors)}
    start = index.get(_fold_key(v))
    if start is None:
        raise ValueError("v is not a norm-4 vector of the set")
    perp = _perp_bitsets(folded)
    nodes = 0
    largest = 1
    found = False
    budget_hit = False

    def dfs(k: int, pool: int) -> None:
        nonlocal nodes, largest, found, budget_hit
        if k > largest:
            largest = k
        if k >= target:
            found = True
            return
        while pool:
            if found or budget_hit or k + pool.bit_count() < target:
                return
            low = pool & -pool
            u = low.bit_length() - 1
            pool ^= low
            nodes += 1
            if nodes > node_budget:
                budget_hit = True
                return
            dfs(k + 1, pool & perp[u])

    dfs(1, perp[start])
    # exhausted means the whole space was traversed; an early success
    # answers the target question without traversing everything
    return CompletionResult(
        largest, target, nodes, not budget_hit and not found, found
    )
