import os

import pytest

from latticedt.chamfer_mask import ChamferMask
from latticedt.lattice import (
    bcc_lattice,
    cubic_lattice,
    fcc_lattice,
    signed_permutation_orbit,
    square_lattice,
)

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def fixture_path(name):
    return os.path.join(FIXTURES, name)


def orbit_mask(lattice, reps_weights):
    """Mask from (representative, weight) pairs, expanded to full
    signed-permutation orbits."""
    entries = [(v, w) for rep, w in reps_weights
               for v in signed_permutation_orbit(rep)]
    return ChamferMask.build(lattice, entries)


@pytest.fixture
def z2_mask():
    return orbit_mask(square_lattice(), [((1, 0), 3), ((1, 1), 4)])


@pytest.fixture
def z3_mask():
    return orbit_mask(cubic_lattice(),
                      [((1, 0, 0), 3), ((1, 1, 0), 4), ((1, 1, 1), 5)])


@pytest.fixture
def diagonal_mask():
    """2D unit-weight mask whose wedges are split by the x axis normal."""
    return ChamferMask.build(square_lattice(),
                             [((-1, 0), 1), ((-1, 1), 1)])
