"""Tests for the norm-4 basis, isometry search, and automorphism group."""

import numpy as np
import pytest

from lat40.autgroup import (
    AutGroup,
    BasisSelection,
    _anchor_transversal,
    _exact_coords,
    four_vector_basis,
    full_aut,
    isometry_search,
    preserves_blocks,
    reference_target,
    verify_semidirect,
)
from lat40.construction import build_L, gram_O40, load_fixtures
from lat40.enumeration import vectors_of_norm_at_most
from lat40.frames import close_group, sign_only_group
from lat40.lattice import AmbientFrame, make_lattice
from lat40.matrices import det
from lat40.vectortypes import refine_to_irreducible


def plain_frame(n):
    one = [[0] * n for _ in range(n)]
    for i in range(n):
        one[i][i] = 1
    return AmbientFrame(f"plain{n}", tuple(tuple(r) for r in one))


def scaled_cube(n):
    basis = [[0] * n for _ in range(n)]
    for i in range(n):
        basis[i][i] = 2
    return make_lattice(plain_frame(n), basis)


def square_setup():
    lat = scaled_cube(2)
    s = vectors_of_norm_at_most(lat, 4)
    part = refine_to_irreducible(s)
    return lat, s, part


def test_four_vector_basis_square():
    lat, s, part = square_setup()
    sel = four_vector_basis(lat, s, partition=part)
    assert sel.vectors == ((2, 0), (0, 2))
    assert sel.gram == ((4, 0), (0, 4))
    assert len(set(sel.labels)) == 1


def test_four_vector_basis_no_norm4():
    lat = build_L()
    s = vectors_of_norm_at_most(lat, 4)
    with pytest.raises(ValueError, match="no norm-4 basis"):
        four_vector_basis(lat, s)


def test_four_vector_basis_o40(o40, s40, irreducible):
    anchor = irreducible.find_block(sig=(850, 252, 6, 1))
    sel = four_vector_basis(o40, s40, partition=irreducible, require_block=anchor.name)
    assert len(sel.vectors) == 40
    g = np.array(sel.gram)
    assert (np.diag(g) == 4).all()
    assert (g == g.T).all()
    assert anchor.name in sel.labels
    coords = _exact_coords(np.array(sel.vectors, dtype=np.int64), o40.basis)
    assert abs(det([[int(x) for x in row] for row in coords])) == 1


def test_isometry_search_square_vs_brute_force():
    lat, s, part = square_setup()
    sel = four_vector_basis(lat, s, partition=part)
    reps = [(0, 2), (2, 0)]
    sols = isometry_search(sel, part, reps)
    # brute force over all signed candidate pairs with the same anchor
    # restriction: 8 signed permutations, halved by the anchor
    cands = [(0, 2), (0, -2), (2, 0), (-2, 0)]
    want = set()
    for x0 in reps:
        for x1 in cands:
            rows = np.array([x0, x1])
            if (rows @ rows.T == np.array(sel.gram)).all():
                want.add((x0, x1))
    assert len(sols) == 4
    assert {tuple(map(tuple, x)) for x in sols} == want


def test_isometry_search_perturbed_gram():
    lat, s, part = square_setup()
    sel = four_vector_basis(lat, s, partition=part)
    bad = BasisSelection(sel.vectors, sel.labels, ((4, 1), (1, 4)))
    assert isometry_search(bad, part, [(0, 2), (2, 0)]) == []


def test_isometry_search_bad_anchor():
    lat, s, part = square_setup()
    sel = four_vector_basis(lat, s, partition=part)
    with pytest.raises(ValueError, match="anchor representative"):
        isometry_search(sel, part, [(1, 1)])


def test_isometry_search_o40(o40, s40, gamma, irreducible):
    anchor_block, anchor_reps = _anchor_transversal(irreducible, gamma)
    assert len(anchor_reps) == 4
    sel = four_vector_basis(
        o40, s40, partition=irreducible, require_block=anchor_block.name
    )
    sols = isometry_search(sel, irreducible, anchor_reps)
    assert len(sols) == 2


def test_reference_target_search(o40, s40, gamma, irreducible):
    target = reference_target(irreducible)
    assert target.vectors is None
    assert len(target.labels) == 40
    _, anchor_reps = _anchor_transversal(irreducible, gamma)
    sols = isometry_search(target, irreducible, anchor_reps)
    assert len(sols) == 2
    w = np.array(load_fixtures().gram_o40, dtype=np.int64)
    g = np.array(gram_O40(), dtype=np.int64)
    for x in sols:
        t = _exact_coords(np.array(x, dtype=np.int64), o40.basis)
        assert abs(det([[int(v) for v in row] for row in t])) == 1
        assert (t @ g @ t.T == w).all()


def test_full_aut_order(aut):
    assert aut.order == 684


def test_full_aut_preserves_gram(aut):
    g = np.array(gram_O40(), dtype=np.int64)
    for e in aut.elements[::37]:
        m = np.array(e, dtype=np.int64)
        assert (m @ g @ m.T == g).all()
        assert round(abs(np.linalg.det(m.astype(float)))) == 1


def test_full_aut_contains_gamma(aut):
    # the three symmetry generators close to the index-2 subgroup
    sub = close_group(aut.generators[:3], cap=10**4)
    assert len(sub) == 342
    assert set(sub) <= set(aut.elements)


def test_full_aut_coset_partition(aut):
    sub = close_group(aut.generators[:3], cap=10**4)
    h = np.array(aut.generators[3], dtype=np.int64)
    lower = {np.array(x, dtype=np.int64).tobytes() for x in sub}
    upper = {(np.array(x, dtype=np.int64) @ h).tobytes() for x in sub}
    whole = {np.array(x, dtype=np.int64).tobytes() for x in aut.elements}
    assert lower.isdisjoint(upper)
    assert lower | upper == whole


def test_full_aut_preserves_blocks(aut, irreducible, o40):
    for e in (aut.elements[1], aut.elements[340], aut.elements[683]):
        assert preserves_blocks(e, irreducible, o40)


def test_verify_semidirect(aut):
    rep = verify_semidirect(aut)
    assert (rep.g1_order, rep.g2_order) == (36, 19)
    assert rep.relation_exponent == 3
    assert rep.normal and rep.trivial_intersection and rep.product_is_group
    census = dict(rep.order_census)
    assert census[19] == 18
    assert census[36] == 228
    assert sum(census.values()) == 684
    g1 = np.array(rep.g1, dtype=np.int64)
    g2 = np.array(rep.g2, dtype=np.int64)
    g1_inv = np.linalg.matrix_power(g1, 35)
    assert (g1 @ g2 @ g1_inv == np.linalg.matrix_power(g2, 3)).all()


def test_verify_semidirect_mismatch():
    ident = tuple(tuple(int(i == j) for j in range(2)) for i in range(2))
    trivial = AutGroup((ident,), (ident,))
    with pytest.raises(ValueError, match="structure mismatch"):
        verify_semidirect(trivial)


def test_power_residue_consistency():
    # 3 has multiplicative order 18 mod 19, so conjugation by powers of
    # an order-36 element is well defined on the order-19 subgroup
    assert pow(3, 36, 19) == 1
    order = next(k for k in range(1, 19) if pow(3, k, 19) == 1)
    assert order == 18


def test_fixture_generators():
    fx = load_fixtures()
    w = np.array(fx.gram_o40, dtype=np.int64)
    g1 = np.array(fx.aut_g1, dtype=np.int64)
    g2 = np.array(fx.aut_g2, dtype=np.int64)
    assert (w == w.T).all()
    assert (np.diag(w) % 2 == 0).all()
    assert (g1 @ w @ g1.T == w).all()
    assert (g2 @ w @ g2.T == w).all()
    ident = np.eye(40, dtype=np.int64)
    assert (np.linalg.matrix_power(g1, 36) == ident).all()
    assert (np.linalg.matrix_power(g2, 19) == ident).all()
    g1_inv = np.linalg.matrix_power(g1, 35)
    assert (g1 @ g2 @ g1_inv == np.linalg.matrix_power(g2, 3)).all()
