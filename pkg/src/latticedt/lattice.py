"""Point lattices in 2 and 3 dimensions with exact integer arithmetic.

A lattice is the set of integer combinations of a generator basis, stored
as integer column vectors relative to the ambient grid.  All membership and
decomposition tests are exact (integer / rational), never floating point.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction


class LatticeError(ValueError):
    """Raised for degenerate bases or points outside the lattice."""


def int_det(columns) -> int:
    """Exact determinant of a small square integer matrix given by columns."""
    n = len(columns)
    if any(len(c) != n for c in columns):
        raise LatticeError("determinant needs a square matrix")
    if n == 1:
        return columns[0][0]
    if n == 2:
        (a, c), (b, d) = columns
        return a * d - b * c
    if n == 3:
        (a, d, g), (b, e, h), (c, f, i) = columns
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    # Cofactor expansion along the first row for larger sizes.
    total = 0
    for j in range(n):
        minor = [
            tuple(columns[k][i] for i in range(1, n))
            for k in range(n)
            if k != j
        ]
        total += (-1) ** j * columns[j][0] * int_det(minor)
    return total


def cramer_coefficients(basis, point):
    """Coordinates of ``point`` in ``basis`` as exact Fractions.

    ``basis`` is a sequence of n integer n-vectors (columns).  Raises
    LatticeError if the basis is singular.
    """
    d0 = int_det(basis)
    if d0 == 0:
        raise LatticeError("singular basis")
    coeffs = []
    for k in range(len(basis)):
        replaced = list(basis)
        replaced[k] = tuple(point)
        coeffs.append(Fraction(int_det(replaced), d0))
    return tuple(coeffs)


def adjugate(columns):
    """Adjugate (transposed cofactor matrix) of a small integer matrix.

    Returned as rows, so that ``adjugate(M) @ p = det(M) * M^-1 @ p``.
    """
    n = len(columns)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            # adj[i][j] is the (j, i) cofactor: minor deletes row j, col i.
            minor = [
                tuple(columns[c][r] for r in range(n) if r != j)
                for c in range(n)
                if c != i
            ]
            row.append((-1) ** (i + j) * (int_det(minor) if minor else 1))
        rows.append(tuple(row))
    return tuple(rows)


@dataclass(frozen=True)
class Lattice:
    """An integer point lattice with per-axis grid spacing.

    ``generators`` are integer column vectors; a point belongs to the
    lattice iff it is an integer combination of them.  ``spacing`` gives
    the physical length of one grid step along each ambient axis and only
    affects Euclidean measurements, never membership.
    """

    name: str
    generators: tuple
    spacing: tuple

    def __post_init__(self):
        n = self.dim
        if len(self.spacing) != n:
            raise LatticeError("spacing length must match dimension")
        if int_det(self.generators) == 0:
            raise LatticeError("lattice generators are linearly dependent")

    @property
    def dim(self) -> int:
        return len(self.generators[0])

    @property
    def covolume(self) -> int:
        """Index of the lattice in the ambient integer grid (|det| of basis)."""
        return abs(int_det(self.generators))

    @property
    def _adjugate(self):
        return adjugate(self.generators)

    def member(self, point) -> bool:
        """Exact membership test via divisibility of Cramer numerators."""
        d0 = int_det(self.generators)
        adj = self._adjugate
        for row in adj:
            if sum(a * p for a, p in zip(row, point)) % d0 != 0:
                return False
        return True

    def member_grid(self, origin, dims):
        """Boolean membership array for the axis-aligned box of shape ``dims``
        anchored at integer ``origin`` (vectorized, exact)."""
        import numpy as np

        n = self.dim
        d0 = int_det(self.generators)
        adj = np.array(self._adjugate, dtype=np.int64)
        axes = [np.arange(origin[i], origin[i] + dims[i], dtype=np.int64)
                for i in range(n)]
        grids = np.meshgrid(*axes, indexing="ij")
        ok = np.ones(tuple(dims), dtype=bool)
        for row in adj:
            acc = np.zeros(tuple(dims), dtype=np.int64)
            for coef, g in zip(row, grids):
                acc += int(coef) * g
            ok &= (acc % abs(d0)) == 0
        return ok

    def decompose(self, point):
        """Integer coordinates of ``point`` in the generator basis,
        or None if the point is not a lattice member."""
        coeffs = cramer_coefficients(self.generators, point)
        if any(c.denominator != 1 for c in coeffs):
            return None
        return tuple(int(c) for c in coeffs)

    def is_basis(self, family) -> bool:
        """True iff ``family`` (n lattice vectors) generates the full lattice,
        i.e. |det(family)| equals the covolume."""
        if len(family) != self.dim:
            return False
        if any(not self.member(v) for v in family):
            return False
        return abs(int_det(family)) == self.covolume

    def euclidean_norm(self, v) -> float:
        return math.sqrt(sum((s * c) ** 2 for s, c in zip(self.spacing, v)))


def square_lattice(spacing=(1.0, 1.0)) -> Lattice:
    """Z^2: every integer grid point."""
    return Lattice("Z2", ((1, 0), (0, 1)), tuple(float(s) for s in spacing))


def cubic_lattice(spacing=(1.0, 1.0, 1.0)) -> Lattice:
    """Z^3: every integer grid point."""
    return Lattice("Z3", ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
                   tuple(float(s) for s in spacing))


def bcc_lattice(spacing=(1.0, 1.0, 1.0)) -> Lattice:
    """Body-centered cubic: points with x = y = z (mod 2). Covolume 4."""
    return Lattice("BCC", ((2, 0, 0), (0, 2, 0), (1, 1, 1)),
                   tuple(float(s) for s in spacing))


def fcc_lattice(spacing=(1.0, 1.0, 1.0)) -> Lattice:
    """Face-centered cubic: points with even coordinate sum. Covolume 2."""
    return Lattice("FCC", ((1, 1, 0), (1, 0, 1), (0, 1, 1)),
                   tuple(float(s) for s in spacing))


def custom_lattice(name, generators, spacing=None) -> Lattice:
    gens = tuple(tuple(int(c) for c in g) for g in generators)
    if spacing is None:
        spacing = (1.0,) * len(gens[0])
    return Lattice(name, gens, tuple(float(s) for s in spacing))


_BUILTINS = {
    "Z2": square_lattice,
    "Z3": cubic_lattice,
    "BCC": bcc_lattice,
    "FCC": fcc_lattice,
}


def lattice_by_name(name, spacing=None) -> Lattice:
    key = name.upper()
    if key not in _BUILTINS:
        raise LatticeError(f"unknown lattice {name!r}; expected one of "
                           f"{sorted(_BUILTINS)}")
    factory = _BUILTINS[key]
    return factory(spacing) if spacing is not None else factory()


def signed_permutation_orbit(v):
    """All distinct images of ``v`` under coordinate permutations and sign
    flips, sorted.  Convenience for authoring symmetric masks."""
    out = set()
    for perm in itertools.permutations(v):
        for signs in itertools.product((1, -1), repeat=len(v)):
            out.add(tuple(s * c for s, c in zip(signs, perm)))
    return sorted(out)
