from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import orbit_mask
from latticedt.chamfer_mask import (
    ChamferMask,
    MaskError,
    build_wedges,
    central_closure,
    convexity_report,
    farey_split,
    is_polytope_convex,
    normalized_polytope,
)
from latticedt.lattice import int_det, square_lattice
from latticedt.presets import preset_geometry, preset_mask


def test_central_closure_adds_negations():
    table = central_closure([((1, 0), 3), ((1, 1), 4)])
    assert table == {(-1, -1): 4, (-1, 0): 3, (1, 0): 3, (1, 1): 4}


def test_central_closure_conflicts():
    with pytest.raises(MaskError):
        central_closure([((1, 0), 3), ((-1, 0), 4)])
    with pytest.raises(MaskError):
        central_closure([((0, 0), 1)])


def test_mask_requires_lattice_membership():
    from latticedt.lattice import fcc_lattice
    with pytest.raises(MaskError):
        ChamferMask.build(fcc_lattice(), [((1, 0, 0), 1)])


def test_mask_rejects_nonpositive_weights():
    with pytest.raises(MaskError):
        ChamferMask.build(square_lattice(), [((1, 0), 0)])


WEDGE_COUNTS = {
    "bcc1": 12, "bcc2": 24, "bcc3": 48, "bcc4": 96,
    "fcc1": 20, "fcc2": 32, "fcc3": 80, "fcc4": 96,
    "z2-1": 4, "z2-2": 8, "z3-3": 48,
}


@pytest.mark.parametrize("name,count", sorted(WEDGE_COUNTS.items()))
def test_wedge_counts(name, count):
    decomp = preset_geometry(name).reference_decomposition()
    assert len(decomp.wedges) == count


@pytest.mark.parametrize("name", ["bcc2", "fcc2", "fcc4", "z3-2"])
def test_wedges_are_lattice_bases(name):
    geom = preset_geometry(name)
    decomp = geom.reference_decomposition()
    covol = geom.lattice.covolume
    for w in decomp.wedges:
        assert abs(int_det(w.vectors)) == covol
    # No wedge strictly contains another mask vector.
    for w in decomp.wedges:
        for v in decomp.mask.vectors:
            if v in w.vectors:
                continue
            co = w.coefficients(v)
            assert not (all(c >= 0 for c in co)
                        and sum(1 for c in co if c > 0) >= 2)


def test_locate_and_closed_form_bcc():
    mask = preset_mask("bcc2", (13, 15))
    decomp = build_wedges(mask)
    idx, wedge, co = decomp.locate((2, 2, 0))
    # (2,2,0) = (1,1,1) + (1,1,-1): two corner steps.
    assert decomp.closed_form_distance((2, 2, 0)) == 26
    assert decomp.closed_form_distance((2, 0, 0)) == 15
    assert decomp.closed_form_distance((4, 2, 2)) == 41  # 2 corners + 1 axis
    assert decomp.closed_form_distance((0, 0, 0)) == 0
    assert decomp.closed_form_distance((-2, -2, 0)) == 26  # symmetry


def test_closed_form_z2():
    mask = orbit_mask(square_lattice(), [((1, 0), 3), ((1, 1), 4)])
    decomp = build_wedges(mask)
    assert decomp.closed_form_distance((5, 0)) == 15
    assert decomp.closed_form_distance((5, 3)) == 3 * 4 + 2 * 3
    assert decomp.closed_form_distance((-5, 3)) == 3 * 4 + 2 * 3


def test_linear_form_interpolates_weights():
    mask = preset_mask("bcc2", (13, 15))
    decomp = build_wedges(mask)
    for wedge in decomp.wedges:
        form = wedge.linear_form()
        for v, w in zip(wedge.vectors, wedge.weights):
            assert sum(f * c for f, c in zip(form, v)) == pytest.approx(w)


def test_farey_split():
    mask = orbit_mask(square_lattice(), [((1, 0), 3), ((1, 1), 4)])
    decomp = build_wedges(mask)
    wedge = next(w for w in decomp.wedges
                 if set(w.vectors) == {(1, 0), (1, 1)})
    a, b = farey_split(wedge, 0, 1)
    mediant = (2, 1)
    assert mediant in a.vectors and mediant in b.vectors
    assert a.weights[a.vectors.index(mediant)] == 7
    assert abs(a.det) == abs(b.det) == 1


def test_collinear_mask_rejected():
    with pytest.raises(MaskError):
        build_wedges(ChamferMask.build(square_lattice(),
                                       [((1, 0), 1), ((2, 0), 3)]))


def test_non_basis_neighbors_rejected_2d():
    # Adjacent directions (1, 1) and (1, -1) span determinant -2 on Z2.
    with pytest.raises(MaskError):
        build_wedges(ChamferMask.build(square_lattice(),
                                       [((1, 1), 1), ((1, -1), 1)]))


@pytest.mark.parametrize("name,weights", [
    ("z2-2", (3, 4)),
    ("z3-3", (3, 4, 5)),
    ("bcc2", (13, 15)),
    ("bcc3", (13, 15, 22)),
    ("bcc4", (15, 17, 24, 29)),
    ("fcc2", (2, 3)),
    ("fcc4", (12, 17, 21, 30)),
])
def test_convex_masks_pass_strict_check(name, weights):
    decomp = build_wedges(preset_mask(name, weights))
    verdict, offenders = convexity_report(decomp)
    assert verdict == "strict"
    assert offenders == []
    ok, _ = is_polytope_convex(decomp)
    assert ok


def test_vertex_beyond_facet_detected():
    # On FCC with three weight classes, weight 19 on the (2,1,1) class
    # costs more than the two-step path (1,1,0)+(1,0,1) of cost 22 allows
    # it to be a polytope vertex only if 19 < 22 -- here the vertex
    # (2,1,1)/19 pokes outside facets spanned by shorter vectors.
    decomp = build_wedges(preset_mask("fcc3", (11, 16, 19)))
    verdict, offenders = convexity_report(decomp)
    assert verdict == "nonconvex"
    assert any(tuple(sorted(abs(c) for c in v)) == (1, 1, 2)
               for v, *_ in offenders)


def test_degenerate_coplanar_vertex_flagged():
    # Weight 2 on (1,1) makes its vertex land exactly on the segment
    # between (1,0)/1 and (0,1)/1.
    decomp = build_wedges(orbit_mask(square_lattice(),
                                     [((1, 0), 1), ((1, 1), 2)]))
    verdict, _ = convexity_report(decomp)
    assert verdict == "degenerate"
    ok, offenders = is_polytope_convex(decomp)
    assert not ok
    assert offenders


def test_normalized_polytope_vertices():
    decomp = build_wedges(preset_mask("bcc2", (13, 15)))
    verts = normalized_polytope(decomp)
    assert verts[(1, 1, 1)] == (Fraction(1, 13),) * 3
    assert verts[(2, 0, 0)] == (Fraction(2, 15), 0, 0)


@given(st.tuples(st.integers(-30, 30), st.integers(-30, 30),
                 st.integers(-30, 30)))
@settings(max_examples=150)
def test_closed_form_symmetric_and_homogeneous(p):
    decomp = build_wedges(preset_mask("bcc3", (13, 15, 22)))
    if not decomp.mask.lattice.member(p):
        return
    d = decomp.closed_form_distance(p)
    assert decomp.closed_form_distance(tuple(-c for c in p)) == d
    assert decomp.closed_form_distance(tuple(3 * c for c in p)) == 3 * d
