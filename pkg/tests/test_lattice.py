import numpy as np
import pytest
from fractions import Fraction
from hypothesis import given, settings
from hypothesis import strategies as st

from latticedt.lattice import (
    LatticeError,
    adjugate,
    bcc_lattice,
    cramer_coefficients,
    cubic_lattice,
    custom_lattice,
    fcc_lattice,
    int_det,
    lattice_by_name,
    signed_permutation_orbit,
    square_lattice,
)

ints = st.integers(-9, 9)


def test_int_det_small():
    assert int_det(((1, 0), (0, 1))) == 1
    assert int_det(((2, 0, 0), (0, 2, 0), (1, 1, 1))) == 4
    assert int_det(((1, 1, 0), (1, 0, 1), (0, 1, 1))) == -2
    assert int_det(((1, 2), (2, 4))) == 0


@given(st.lists(st.tuples(ints, ints, ints), min_size=3, max_size=3))
@settings(max_examples=100)
def test_adjugate_inverts(cols):
    cols = [tuple(c) for c in cols]
    d = int_det(cols)
    adj = adjugate(cols)
    # adj @ M = det * I (columns of M are the input vectors)
    for i in range(3):
        for j in range(3):
            got = sum(adj[i][k] * cols[j][k] for k in range(3))
            assert got == (d if i == j else 0)


@given(st.tuples(ints, ints, ints))
@settings(max_examples=100)
def test_cramer_reconstructs(p):
    basis = ((2, 0, 0), (0, 2, 0), (1, 1, 1))
    co = cramer_coefficients(basis, p)
    for i in range(3):
        assert sum(c * b[i] for c, b in zip(co, basis)) == Fraction(p[i])


def test_cramer_singular():
    with pytest.raises(LatticeError):
        cramer_coefficients(((1, 0), (2, 0)), (1, 1))


def test_covolumes():
    assert square_lattice().covolume == 1
    assert cubic_lattice().covolume == 1
    assert bcc_lattice().covolume == 4
    assert fcc_lattice().covolume == 2


@given(st.tuples(ints, ints, ints))
@settings(max_examples=200)
def test_bcc_membership_is_equal_parity(p):
    x, y, z = p
    expected = (x % 2 == y % 2 == z % 2)
    assert bcc_lattice().member(p) == expected


@given(st.tuples(ints, ints, ints))
@settings(max_examples=200)
def test_fcc_membership_is_even_sum(p):
    assert fcc_lattice().member(p) == (sum(p) % 2 == 0)


@given(st.tuples(ints, ints, ints))
@settings(max_examples=100)
def test_decompose_round_trip(p):
    lat = fcc_lattice()
    co = lat.decompose(p)
    if co is None:
        assert not lat.member(p)
    else:
        assert lat.member(p)
        for i in range(3):
            assert sum(c * g[i] for c, g in zip(co, lat.generators)) == p[i]


def test_member_grid_matches_member():
    for lat in (bcc_lattice(), fcc_lattice()):
        grid = lat.member_grid((-3, -2, -1), (6, 5, 4))
        for i in range(6):
            for j in range(5):
                for k in range(4):
                    assert grid[i, j, k] == lat.member((i - 3, j - 2, k - 1))


def test_is_basis():
    bcc = bcc_lattice()
    assert bcc.is_basis(((1, 1, 1), (1, 1, -1), (2, 0, 0)))
    assert not bcc.is_basis(((1, 1, 1), (1, 1, -1), (2, 2, 0)))  # det 8
    assert not bcc.is_basis(((1, 0, 0), (0, 1, 0), (0, 0, 1)))  # not members
    fcc = fcc_lattice()
    assert fcc.is_basis(((1, 1, 0), (1, 0, 1), (1, -1, 0)))
    assert fcc.is_basis(((1, 1, 0), (1, 0, 1), (2, 0, 0)))


def test_custom_lattice_membership():
    lat = custom_lattice("hex-ish", ((2, 1), (0, 3)))
    assert lat.covolume == 6
    assert lat.member((2, 1))
    assert lat.member((2, 4))
    assert not lat.member((1, 0))
    assert lat.decompose((2, 4)) == (1, 1)


def test_lattice_by_name():
    assert lattice_by_name("bcc").name == "BCC"
    assert lattice_by_name("Z2", (2.0, 0.5)).spacing == (2.0, 0.5)
    with pytest.raises(LatticeError):
        lattice_by_name("hexagonal")


def test_singular_generators_rejected():
    with pytest.raises(LatticeError):
        custom_lattice("bad", ((1, 2), (2, 4)))


def test_signed_permutation_orbit():
    assert signed_permutation_orbit((1, 0)) == [(-1, 0), (0, -1), (0, 1), (1, 0)]
    assert len(signed_permutation_orbit((1, 1, 1))) == 8
    assert len(signed_permutation_orbit((2, 1, 1))) == 24
    assert len(signed_permutation_orbit((3, 2, 1))) == 48


def test_euclidean_norm_uses_spacing():
    lat = cubic_lattice((1.0, 2.0, 3.0))
    assert lat.euclidean_norm((1, 1, 1)) == pytest.approx(np.sqrt(14))
