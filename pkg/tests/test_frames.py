"""Tests for coordinate symmetries, orbits, and orthogonal-set search."""

import numpy as np
import pytest

from lat40.construction import build_L
from lat40.enumeration import VectorSet, fold_modulo_sign, vectors_of_norm_at_most
from lat40.frames import (
    CompletionResult,
    SymmetryGroup,
    close_group,
    complete_orthogonal_search,
    has_4frame,
    matrix_order,
    max_orthogonal_set,
    n_max,
    orbits,
    orthogonal_census,
    sign_only_group,
)
from lat40.lattice import AmbientFrame, make_lattice
from lat40.vectortypes import product_matrix


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


def rotation_group():
    rot = ((0, 1), (-1, 0))
    return SymmetryGroup((rot,), close_group((rot,)))


def test_matrix_order():
    assert matrix_order(((1, 0), (0, 1))) == 1
    assert matrix_order(((-1, 0), (0, -1))) == 2
    assert matrix_order(((0, 1), (-1, 0))) == 4
    with pytest.raises(ValueError, match="order exceeds"):
        matrix_order(((1, 1), (0, 1)), cap=10)


def test_close_group():
    flips = (((-1, 0), (0, 1)), ((1, 0), (0, -1)))
    elems = close_group(flips)
    assert len(elems) == 4
    assert ((1, 0), (0, 1)) in elems
    assert ((-1, 0), (0, -1)) in elems
    with pytest.raises(ValueError, match="exceeds"):
        close_group(flips, cap=2)


def test_sign_only_group():
    g = sign_only_group(3)
    assert g.order == 2
    assert matrix_order(g.generators[0]) == 2


def test_gamma_group(gamma):
    assert gamma.order == 342
    assert sorted(matrix_order(g) for g in gamma.generators) == [2, 9, 19]


def test_orbits_sign_pair():
    # {v, -v} under the sign group is a single orbit of size 2
    s = VectorSet(plain_frame(2), ((-1, 2), (1, -2)), (5, 5))
    orb = orbits(s, sign_only_group(2))
    assert len(orb) == 1
    assert orb.sizes == (2,)
    assert orb.reps() == [(1, -2)]


def test_orbits_rotation():
    s = VectorSet(plain_frame(2), ((0, 1), (1, 0)), (1, 1), modulo_sign=True)
    orb = orbits(s, rotation_group())
    assert len(orb) == 1
    assert orb.sizes == (4,)


def test_orbits_escape():
    skew = VectorSet(plain_frame(2), ((1, 0),), (1,), modulo_sign=True)
    with pytest.raises(ValueError, match="escaped"):
        orbits(skew, rotation_group())


def test_orbits_transport():
    s = VectorSet(plain_frame(2), ((0, 1), (1, 0)), (1, 1), modulo_sign=True)
    orb = orbits(s, rotation_group())
    for i in range(2):
        r = orb.rep_of(i)
        img = np.array(s.vectors[r]) @ orb.transport(i)
        t = tuple(int(x) for x in img)
        assert max(t, tuple(-x for x in t)) == s.vectors[i]


def test_orbits_o40(s40, gamma):
    orb = orbits(fold_modulo_sign(s40), gamma)
    assert len(orb) == 132
    assert sum(orb.sizes) == 39600
    assert all(342 % z == 0 for z in orb.sizes)


def test_max_orthogonal_set_square():
    lat = scaled_cube(2)
    s = vectors_of_norm_at_most(lat, 4)
    ms = max_orthogonal_set((2, 0), s)
    assert ms.vectors == ((0, 2), (2, 0))
    assert ms.modulo_sign


def test_max_orthogonal_set_missing_vector():
    lat = scaled_cube(2)
    s = vectors_of_norm_at_most(lat, 4)
    with pytest.raises(ValueError, match="not a norm-4 vector"):
        max_orthogonal_set((1, 1), s)


def test_max_orthogonal_set_equivariant(s40, gamma):
    # the result through any vector of an orbit matches the
    # representative's result up to the group action
    folded = fold_modulo_sign(s40)
    orb = orbits(folded, gamma)
    for i in (17, 5012, 19799):
        v = folded.vectors[i]
        ms = max_orthogonal_set(v, s40, group=gamma)
        rep = folded.vectors[orb.rep_of(i)]
        ms_rep = max_orthogonal_set(rep, s40, group=gamma)
        assert len(ms) == len(ms_rep)
        assert v in ms.vectors
        sub = product_matrix(ms)
        assert (np.diag(sub) == 4).all()
        assert np.abs(sub).sum() == 4 * len(ms)


def test_orthogonal_census_small():
    lat = scaled_cube(4)
    s = vectors_of_norm_at_most(lat, 4)
    rows = orthogonal_census(s, sign_only_group(4))
    assert [r.size for r in rows] == [4, 4, 4, 4]
    # every pool member scores equally in the cube, so ties are expected
    assert all(r.tie_steps == 2 for r in rows)


def test_census_o40(census):
    assert len(census) == 132
    assert max(r.size for r in census) == 32
    assert sum(1 for r in census if r.size >= 28) >= 20


def test_n_max_small():
    assert n_max(scaled_cube(4)) == 4
    assert has_4frame(scaled_cube(4))


def test_n_max_no_norm4():
    lat = build_L()
    assert n_max(lat) == 0
    assert not has_4frame(lat)


def test_n_max_o40(o40, s40, gamma):
    assert n_max(o40, s40, gamma) == 32
    assert not has_4frame(o40, s40, gamma)


def test_complete_search_finds_frame():
    lat = scaled_cube(4)
    s = vectors_of_norm_at_most(lat, 4)
    res = complete_orthogonal_search((2, 0, 0, 0), s, target=4)
    assert isinstance(res, CompletionResult)
    assert res.found_target
    assert res.largest == 4
    assert not res.exhausted


def test_complete_search_exhausts():
    # norm-4 vectors e1, e2, e3 with e2.e3 = 1: no orthogonal triple
    gram = ((4, 0, 0), (0, 4, 1), (0, 1, 4))
    lat = make_lattice(AmbientFrame("mixed3", gram), ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    s = vectors_of_norm_at_most(lat, 4)
    res = complete_orthogonal_search((1, 0, 0), s, target=3)
    assert not res.found_target
    assert res.exhausted
    assert res.largest == 2
    assert res.nodes >= 1


def test_complete_search_root_prune():
    # a pool too small for the target is refuted without any expansion
    lat = scaled_cube(4)
    s = vectors_of_norm_at_most(lat, 4)
    res = complete_orthogonal_search((2, 0, 0, 0), s, target=5)
    assert not res.found_target
    assert res.exhausted
    assert res.nodes == 0
    assert res.largest == 1


def test_complete_search_budget(s40):
    folded = fold_modulo_sign(s40)
    res = complete_orthogonal_search(folded.vectors[0], s40, node_budget=2000)
    assert not res.found_target
    assert not res.exhausted
    assert res.nodes > 2000
