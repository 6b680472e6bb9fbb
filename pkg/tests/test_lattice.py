from fractions import Fraction

import pytest

from lat40.lattice import (
    AmbientFrame,
    E_FRAME,
    contains,
    coordinates_in,
    dual_basis,
    extremal_min_bound,
    frame_inner,
    frame_inner_int,
    frame_scaled_gram,
    gram,
    gram_det,
    index_in,
    is_even,
    is_integral,
    is_sublattice,
    is_unimodular,
    lattice_sum,
    lattices_equal,
    make_lattice,
    read_lattice_text,
    write_lattice_text,
)


def plain_frame(n):
    rows = tuple(
        tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n)
    )
    return AmbientFrame(f"plain{n}", rows)


def test_distinguished_frame_shape():
    assert E_FRAME.dim == 40
    assert E_FRAME.gram[0][0] == Fraction(28, 21)
    assert E_FRAME.gram[0][20] == Fraction(7, 21)
    assert E_FRAME.gram[20][0] == Fraction(7, 21)
    assert E_FRAME.gram[20][20] == Fraction(2, 21)
    assert E_FRAME.gram[0][1] == 0
    num, denom = frame_scaled_gram(E_FRAME)
    assert denom == 21
    assert num[0][0] == 28 and num[20][20] == 2
    assert all(num[i][j] == num[j][i] for i in range(40) for j in range(40))


def test_frame_inner_values():
    e0 = [1 if i == 0 else 0 for i in range(40)]
    e20 = [1 if i == 20 else 0 for i in range(40)]
    assert frame_inner(E_FRAME, e0, e0) == Fraction(28, 21)
    assert frame_inner(E_FRAME, e0, e20) == Fraction(7, 21)
    with pytest.raises(ValueError):
        frame_inner_int(E_FRAME, e0, e0)
    # the block basis rows (6, -21) and (3, 0) have integer products
    v1 = [0] * 40
    v1[0], v1[20] = 6, -21
    v2 = [0] * 40
    v2[0], v2[20] = 3, 0
    assert frame_inner_int(E_FRAME, v1, v1) == 6
    assert frame_inner_int(E_FRAME, v2, v2) == 12
    assert frame_inner_int(E_FRAME, v1, v2) == 3


def test_gram_and_predicates():
    fr = plain_frame(2)
    z2 = make_lattice(fr, [[1, 0], [0, 1]])
    assert gram(z2) == [[1, 0], [0, 1]]
    assert is_integral(z2)
    assert not is_even(z2)
    assert is_unimodular(z2)
    doubled = make_lattice(fr, [[2, 0], [0, 2]])
    assert gram(doubled) == [[4, 0], [0, 4]]
    assert is_even(doubled)
    assert not is_unimodular(doubled)
    assert gram_det(doubled) == 16
    half = AmbientFrame("half2", ((Fraction(1, 2), Fraction(0)), (Fraction(0), Fraction(1))))
    odd = make_lattice(half, [[1, 0], [0, 1]])
    assert not is_integral(odd)
    assert not is_even(odd)


def test_dual_basis():
    fr = plain_frame(2)
    lat = make_lattice(fr, [[2, 0], [0, 3]])
    dual = dual_basis(lat)
    assert dual == [[Fraction(1, 2), 0], [0, Fraction(1, 3)]]
    uni = make_lattice(fr, [[1, 1], [0, 1]])
    assert all(
        all(c.denominator == 1 for c in coordinates_in(uni, [int(x) for x in row]))
        for row in dual_basis(uni)
    )


def test_sum_equality_membership():
    fr = plain_frame(2)
    a = make_lattice(fr, [[2, 0], [0, 2]])
    b = make_lattice(fr, [[3, 0], [0, 3]])
    total = lattice_sum(a, b)
    assert lattices_equal(total, make_lattice(fr, [[1, 0], [0, 1]]))
    assert lattices_equal(
        make_lattice(fr, [[1, 2], [0, 5]]), make_lattice(fr, [[1, 2], [5, 10]])
    ) is False
    assert lattices_equal(
        make_lattice(fr, [[1, 0], [0, 1]]), make_lattice(fr, [[1, 7], [0, 1]])
    )
    assert contains(a, [4, -2])
    assert not contains(a, [1, 0])
    assert is_sublattice(a, total)
    assert not is_sublattice(total, a)


def test_index():
    fr = plain_frame(2)
    z2 = make_lattice(fr, [[1, 0], [0, 1]])
    a = make_lattice(fr, [[2, 0], [0, 2]])
    assert index_in(a, z2) == 4
    with pytest.raises(ValueError):
        index_in(z2, a)


def test_extremal_min_bound():
    assert extremal_min_bound(23) == 2
    assert extremal_min_bound(24) == 4
    assert extremal_min_bound(40) == 4
    assert extremal_min_bound(48) == 6


def test_text_round_trip_named_frame():
    basis = [[0] * 40 for _ in range(2)]
    basis[0][0] = 3
    basis[1][20] = 21
    lat = make_lattice(E_FRAME, basis)
    text = write_lattice_text(lat)
    back = read_lattice_text(text)
    assert back.frame is E_FRAME
    assert back == lat


def test_text_round_trip_inline_frame():
    fr = AmbientFrame(
        "inline", ((Fraction(3, 7), Fraction(1)), (Fraction(1), Fraction(2)))
    )
    lat = make_lattice(fr, [[1, 2], [0, 5]])
    back = read_lattice_text(write_lattice_text(lat))
    assert back.frame.gram == fr.gram
    assert back.basis == lat.basis


def test_text_errors():
    with pytest.raises(ValueError):
        read_lattice_text("not a lattice\n")
    with pytest.raises(ValueError):
        read_lattice_text("lattice v1\nframe: mystery\nbasis:\n1 1\n1 0\n")
    with pytest.raises(ValueError):
        read_lattice_text("lattice v1\nframe: o40\nbasis:\n1 2\n1/2 0\n")
