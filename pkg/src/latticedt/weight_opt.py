"""Approximation error of chamfer masks and weight optimization.

The quality measure is the spread of the ratio d(p) / |p| between the
chamfer distance and the Euclidean distance.  Over a wedge the distance is
the linear form l with l . v_k = w_k, so the ratio extremes are

  rho_min = min over mask vectors of  w / |v|        (attained at a vertex)
  rho_max = max over wedges of  max_{p in cone} (l . p) / |p|

and after rescaling by the optimal factor eps = 2 / (rho_min + rho_max)
the worst relative deviation from Euclidean distance is

  error = (rho_max - rho_min) / (rho_max + rho_min).

All lengths are physical: grid coordinates scaled per-axis by the lattice
spacing.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .chamfer_mask import ChamferMask, Wedge, WedgeDecomposition, build_wedges
from .lattice import Lattice


def euclidean_norm(v, spacing) -> float:
    return math.sqrt(sum((s * c) ** 2 for s, c in zip(spacing, v)))


def vertex_ratio(v, weight, spacing) -> float:
    """Ratio between mask weight and Euclidean length of the vector."""
    return weight / euclidean_norm(v, spacing)


def _cone_projection_max(l_phys, gens_phys, eps=1e-12):
    """Maximum of (l . p) / |p| over the cone spanned by ``gens_phys``.

    Equals the norm of the projection of l onto the cone: enumerate faces
    (generator subsets), project l onto each span, keep projections whose
    cone coordinates are nonnegative.
    """
    n = len(gens_phys)
    best = 0.0
    for r in range(1, n + 1):
        for subset in itertools.combinations(range(n), r):
            U = np.array([gens_phys[k] for k in subset], dtype=float)
            G = U @ U.T
            b = U @ np.asarray(l_phys, dtype=float)
            try:
                t = np.linalg.solve(G, b)
            except np.linalg.LinAlgError:
                continue
            if np.all(t >= -eps):
                val2 = float(t @ b)
                if val2 > best:
                    best = val2
    return math.sqrt(max(best, 0.0))


def wedge_ratio_max(wedge: Wedge, spacing) -> float:
    """Maximum chamfer/Euclidean ratio over one wedge's cone."""
    l = wedge.linear_form(spacing)
    gens = [tuple(s * c for s, c in zip(spacing, v)) for v in wedge.vectors]
    return _cone_projection_max(l, gens)


@dataclass(frozen=True)
class ErrorStats:
    rho_min: float
    rho_max: float

    @property
    def error(self) -> float:
        """Worst relative deviation from Euclidean distance after optimal
        rescaling (as a fraction, not percent)."""
        return (self.rho_max - self.rho_min) / (self.rho_max + self.rho_min)

    @property
    def scale(self) -> float:
        """Optimal multiplicative factor applied to distance values so the
        ratio band is centered on 1."""
        return 2.0 / (self.rho_max + self.rho_min)


def max_relative_error(decomp: WedgeDecomposition, spacing=None) -> ErrorStats:
    mask = decomp.mask
    sp = spacing if spacing is not None else mask.lattice.spacing
    rho_min = min(vertex_ratio(v, w, sp)
                  for v, w in zip(mask.vectors, mask.weights))
    rho_max = max(wedge_ratio_max(w, sp) for w in decomp.wedges)
    return ErrorStats(rho_min, rho_max)


def optimal_scale_factor(decomp: WedgeDecomposition, spacing=None) -> float:
    return max_relative_error(decomp, spacing).scale


# ---------------------------------------------------------------------------
# Mask geometries: the vector layout of a mask with weights still open,
# grouped into symmetry classes that share one weight.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MaskGeometry:
    """Mask vectors grouped into weight classes (full symmetric orbits).

    ``classes`` is a tuple of vector tuples; all vectors in one class get
    the same weight.  Class order matters for the integer search: classes
    are expected in construction order (shortest first).
    """

    lattice: Lattice
    classes: tuple

    @property
    def dim(self) -> int:
        return self.lattice.dim

    @property
    def num_classes(self) -> int:
        return len(self.classes)

    def class_of(self):
        return {v: c for c, orbit in enumerate(self.classes) for v in orbit}

    def mask_with(self, weights) -> ChamferMask:
        entries = [(v, w) for orbit, w in zip(self.classes, weights)
                   for v in orbit]
        return ChamferMask.build(self.lattice, entries)

    def reference_decomposition(self) -> WedgeDecomposition:
        """Wedge fan of the geometry (independent of the weights used)."""
        return build_wedges(self.mask_with(tuple(range(1, len(self.classes) + 1))))

    def class_norms(self, spacing=None):
        sp = spacing if spacing is not None else self.lattice.spacing
        return tuple(euclidean_norm(orbit[0], sp) for orbit in self.classes)


@dataclass(frozen=True)
class RealWeightOptimum:
    weights: tuple
    rho_star: float

    @property
    def error(self) -> float:
        return (self.rho_star - 1.0) / (self.rho_star + 1.0)

    @property
    def scale(self) -> float:
        return 1.0


def optimize_real_weights(geometry: MaskGeometry, spacing=None) -> RealWeightOptimum:
    """Best real weights for a mask geometry.

    With weights equal to the Euclidean vector lengths every vertex ratio
    is exactly 1 and the worst wedge ratio rho* >= 1 is the only excess;
    scaling all weights by 2 / (1 + rho*) centers the ratio band on 1,
    which is optimal for this geometry.  Returns one weight per class.
    """
    sp = spacing if spacing is not None else geometry.lattice.spacing
    norms = geometry.class_norms(sp)
    mask = geometry.mask_with(norms)
    decomp = build_wedges(mask)
    rho_star = max(wedge_ratio_max(w, sp) for w in decomp.wedges)
    factor = 2.0 / (1.0 + rho_star)
    return RealWeightOptimum(tuple(factor * n for n in norms), rho_star)


# ---------------------------------------------------------------------------
# Integer weight search.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeightRow:
    weights: tuple
    scale: float
    error: float

    @property
    def max_weight(self) -> int:
        return max(self.weights)


def _class_intervals(geometry: MaskGeometry, decomp: WedgeDecomposition):
    """Per-class weight bounds from the mediant split relations.

    A vector created as a mediant of earlier-class vectors must cost at
    least as much as each summand and no more than their total, otherwise
    it is either useless or breaks monotonicity of the induced distance.
    Only relations whose parents all come from strictly earlier classes
    are kept.  Returns, per class c >= 1, a list of (lower_classes,
    upper_terms) constraints with class indices.
    """
    cls = geometry.class_of()
    constraints = {c: [] for c in range(1, geometry.num_classes)}
    for child, parents in decomp.splits:
        c = cls.get(child)
        if c is None or c == 0:
            continue
        pcls = [(cls.get(pv), coeff) for pv, coeff in parents]
        if any(pc is None or pc >= c for pc, _ in pcls):
            continue
        constraints[c].append(tuple(pcls))
    return constraints


def _wedge_quadratics(geometry: MaskGeometry, decomp: WedgeDecomposition,
                      spacing):
    """Precompute, per (wedge, generator subset), the matrices that turn a
    class-weight vector w into the squared cone-face ratio w^T Q w and the
    face coordinates R w (valid iff R w >= 0)."""
    cls = geometry.class_of()
    n = geometry.dim
    C = geometry.num_classes
    sp = np.asarray(spacing, dtype=float)
    pairs = []
    seen = set()
    for wd in decomp.wedges:
        M = np.array(wd.vectors, dtype=float).T  # grid columns
        P = np.zeros((n, C))
        for k, v in enumerate(wd.vectors):
            P[k, cls[v]] = 1.0
        # l_phys = diag(1/s) M^-T P w
        L = (np.linalg.solve(M.T, P).T / sp).T
        U_all = (M * sp[:, None]).T  # rows are physical generators
        for r in range(1, n + 1):
            for subset in itertools.combinations(range(n), r):
                U = U_all[list(subset)]
                G = U @ U.T
                B = U @ L
                try:
                    R = np.linalg.solve(G, B)
                except np.linalg.LinAlgError:
                    continue
                Q = B.T @ R
                key = (np.round(Q, 10).tobytes(),
                       np.round(np.sort(np.round(R, 10), axis=0), 10).tobytes())
                if key in seen:
                    continue
                seen.add(key)
                pairs.append((Q, R))
    return pairs


def search_integer_weights(geometry: MaskGeometry, max_weight: int,
                           spacing=None, primitive_only: bool = True):
    """Enumerate integer weight assignments up to ``max_weight`` and score
    each by optimal scale and relative error.

    Candidate tuples are constrained by the mediant relations of the wedge
    fan (each derived vector costs between the max and the sum of its
    summands) and, by default, reduced to primitive tuples (gcd 1) since
    scalar multiples have identical error.  Returns WeightRow objects
    sorted by (max weight, error, weights).
    """
    sp = spacing if spacing is not None else geometry.lattice.spacing
    decomp = geometry.reference_decomposition()
    C = geometry.num_classes

    # Enumerate feasible weight tuples, class by class.
    W = np.arange(1, max_weight + 1, dtype=np.int64)[:, None]
    constraints = _class_intervals(geometry, decomp)
    for c in range(1, C):
        lo = np.ones(len(W), dtype=np.int64)
        hi = np.full(len(W), max_weight, dtype=np.int64)
        for rel in constraints.get(c, ()):
            lo = np.maximum(lo, np.max(
                np.stack([W[:, pc] for pc, _ in rel], axis=1), axis=1))
            hi = np.minimum(hi, sum(coeff * W[:, pc] for pc, coeff in rel))
        hi = np.minimum(hi, max_weight)
        counts = np.maximum(hi - lo + 1, 0)
        rows = np.repeat(np.arange(len(W)), counts)
        offsets = np.concatenate([np.arange(k) for k in counts if k > 0]) \
            if counts.sum() else np.zeros(0, dtype=np.int64)
        newcol = lo[rows] + offsets
        W = np.column_stack([W[rows], newcol])
    if primitive_only and C > 1:
        W = W[np.gcd.reduce(W, axis=1) == 1]
    if len(W) == 0:
        return []

    Wf = W.astype(float)
    # Smallest vertex ratio per tuple: within a class the ratio is smallest
    # on the longest orbit member (they differ under anisotropic spacing).
    max_norms = np.array([max(euclidean_norm(v, sp) for v in orbit)
                          for orbit in geometry.classes])
    rho_min = np.min(Wf / max_norms, axis=1)

    pairs = _wedge_quadratics(geometry, decomp, sp)
    rho2_max = np.zeros(len(W))
    for Q, R in pairs:
        valid = np.all(Wf @ R.T >= -1e-9, axis=1)
        if not valid.any():
            continue
        vals = np.einsum("mc,cd,md->m", Wf, Q, Wf)
        np.maximum(rho2_max, np.where(valid, vals, 0.0), out=rho2_max)
    rho_max = np.sqrt(rho2_max)

    error = (rho_max - rho_min) / (rho_max + rho_min)
    scale = 2.0 / (rho_max + rho_min)
    rows = [WeightRow(tuple(int(x) for x in W[i]), float(scale[i]),
                      float(error[i]))
            for i in range(len(W))]
    rows.sort(key=lambda r: (r.max_weight, r.error, r.weights))
    return rows


def pareto_front(rows):
    """Rows whose error strictly improves on every cheaper (smaller max
    weight) row.  Input must be sorted as returned by search_integer_weights."""
    front = []
    best = math.inf
    for r in rows:
        if r.error < best - 1e-12:
            front.append(r)
            best = r.error
    return front
