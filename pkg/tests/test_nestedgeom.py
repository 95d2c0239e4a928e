from fractions import Fraction

import pytest

from exactnum import SQRT2, sign
from nestedgeom import (MORE_THAN_THREE, THREE_VERTICES, THRESHOLD, ConvexPolygon, HalfPlane, InnerNotInsideError,
                        Point2, PoleError, PolygonError, StartNotOnBoundaryError, TangencyDegenerateError,
                        exclude_types_2_3, find_infeasibility_certificate, inner_triangle, is_supporting_segment,
                        lemma41_closed_form, lemma41_elimination, lemma41_threshold_check, lemma42_closed_form,
                        lemma42_elimination, lemma42_threshold_check, nested_between, orient, perturbed_q2_witness,
                        plane_polygon, project, supporting_polygon, sweep_thresholds, tangent_vertex,
                        triangle_cover_region, verify_type1_uniqueness)
from paperdata import paper_constants

F = Fraction


def P(x, y):
    return Point2(F(x), F(y))


def qstar(k, plane):
    return project(paper_constants().qstar[k - 1], plane)


def test_face_polygons():
    assert set(plane_polygon("xy")) == {P(0, 0), P(1, 0), P(1, F(1, 2)), P(0, 1)}
    assert set(plane_polygon("xz")) == {P(0, 0), P(1, 0), P(F(9, 4), F(1, 2)), P(0, F(8, 7))}


def test_inner_triangles():
    assert list(inner_triangle("xy")) == [P(F(3, 4), F(1, 8)), P(F(3, 4), F(1, 2)), P(F(3, 11), F(17, 22))]
    assert list(inner_triangle("xz")) == [P(2, F(1, 2)), P(F(1, 2), F(3, 4)), P(F(1, 6), F(7, 12))]
    for plane in ("xy", "xz"):
        outer = plane_polygon(plane)
        assert all(outer.contains(p, strict=True) for p in inner_triangle(plane))


def test_unknown_plane():
    with pytest.raises(ValueError):
        plane_polygon("yz")


def test_polygon_validation():
    with pytest.raises(PolygonError):
        ConvexPolygon([P(0, 0), P(1, 0)])
    with pytest.raises(PolygonError):
        ConvexPolygon([P(0, 0), P(0, 1), P(1, 0)])
    with pytest.raises(PolygonError):
        ConvexPolygon([P(0, 0), P(1, 0), P(2, 0), P(0, 1)])


def test_polygon_predicates():
    square = ConvexPolygon([P(0, 0), P(1, 0), P(1, 1), P(0, 1)])
    assert square.contains(P(F(1, 2), F(1, 2)), strict=True)
    assert square.on_boundary(P(1, F(1, 3)))
    assert not square.on_boundary(P(F(1, 2), F(1, 2)))
    assert not square.contains(P(2, 0))
    assert all(h.contains(P(F(1, 2), F(1, 2))) for h in square.halfplanes())
    assert set(ConvexPolygon.from_halfplanes(square.halfplanes())) == set(square)
    assert orient(P(0, 0), P(1, 0), P(0, 1)) == 1


def test_supporting_triangle_at_threshold_xy():
    res = supporting_polygon(inner_triangle("xy"), plane_polygon("xy"), Point2(THRESHOLD, F(0)))
    assert res.closed
    assert res.vertices == [qstar(1, "xy"), qstar(3, "xy"), qstar(2, "xy")]
    assert res.vertices[1] == Point2(F(1), (3 + SQRT2) / 14)
    assert res.vertices[2] == Point2((3 - SQRT2) / 7, (11 + SQRT2) / 14)
    assert res.verdict == THREE_VERTICES


def test_supporting_triangle_at_threshold_xz():
    res = supporting_polygon(inner_triangle("xz"), plane_polygon("xz"), Point2(THRESHOLD, F(0)))
    assert res.closed
    assert res.vertices == [qstar(1, "xz"), qstar(5, "xz"), qstar(4, "xz")]
    assert res.verdict == THREE_VERTICES


@pytest.mark.parametrize("plane,u", [("xy", F(1, 8)), ("xz", F(7, 8))])
def test_quadrilaterals(plane, u):
    res = supporting_polygon(inner_triangle(plane), plane_polygon(plane), Point2(u, F(0)))
    assert res.vertex_count == 4
    assert res.verdict == MORE_THAN_THREE


@pytest.mark.parametrize("plane", ["xy", "xz"])
@pytest.mark.parametrize("u", [F(k, 16) for k in range(17)])
def test_consecutive_segments_support_inner(plane, u):
    inner, outer = inner_triangle(plane), plane_polygon(plane)
    res = supporting_polygon(inner, outer, Point2(u, F(0)))
    vs = res.vertices
    for a, b in zip(vs, vs[1:]):
        assert is_supporting_segment(a, b, inner, outer)
    if res.closed:
        assert nested_between(inner, vs, outer)


def test_grid_threshold_property():
    for k in range(65):
        u = F(k, 64)
        xy = sweep_thresholds("xy", u, u, 1)[0][1]
        xz = sweep_thresholds("xz", u, u, 1)[0][1]
        if u < THRESHOLD:
            assert xy.vertex_count > 3, u
        else:
            assert xz.vertex_count > 3, u


def test_sweep_endpoints():
    out = sweep_thresholds("xy", F(0), F(1), 5)
    assert [u for u, _ in out] == [F(0), F(1, 4), F(1, 2), F(3, 4), F(1)]
    with pytest.raises(ValueError):
        sweep_thresholds("xy", F(0), F(1), 0)


@pytest.mark.parametrize("u", [F(k, 23) for k in range(20)])
def test_lemma_identities(u):
    assert lemma41_elimination(u).inequality == lemma41_closed_form(u)
    assert lemma42_elimination(u).inequality == lemma42_closed_form(u)


def test_elimination_values():
    e = lemma41_elimination(F(0))
    assert (e.v, e.w, e.inequality) == (F(1, 3), F(2, 5), F(-3, 11))
    e = lemma42_elimination(F(1))
    assert (e.v, e.w, e.inequality) == (F(7, 99), F(23, 80), F(-2, 21))


def test_threshold_checks_at_threshold():
    for check in (lemma41_threshold_check(THRESHOLD), lemma42_threshold_check(THRESHOLD)):
        assert check.verdict == THREE_VERTICES
        assert check.elimination.inequality == 0
        assert check.identity_holds
        assert check.consistent
        assert check.in_lemma_range


def test_threshold_checks_off_threshold():
    small = lemma41_threshold_check(F(1, 8))
    assert small.verdict == MORE_THAN_THREE
    assert sign(small.elimination.inequality) < 0
    assert small.consistent
    large = lemma42_threshold_check(F(7, 8))
    assert large.verdict == MORE_THAN_THREE
    assert sign(large.elimination.inequality) < 0
    assert large.consistent
    assert large.to_json()["verdict"] == MORE_THAN_THREE


def test_threshold_check_range():
    with pytest.raises(ValueError):
        lemma41_threshold_check(F(3, 2))
    with pytest.raises(ValueError):
        lemma42_threshold_check(F(-1, 2))


def test_closed_form_poles():
    with pytest.raises(PoleError):
        lemma41_closed_form(F(5, 8))
    with pytest.raises(PoleError):
        lemma42_closed_form(F(7, 2))


def test_start_must_be_on_boundary():
    with pytest.raises(StartNotOnBoundaryError):
        supporting_polygon(inner_triangle("xy"), plane_polygon("xy"), P(F(1, 2), F(1, 4)))


def test_inner_must_be_inside():
    inner = ConvexPolygon([P(F(1, 2), F(1, 8)), P(2, F(1, 4)), P(F(1, 2), F(1, 2))])
    with pytest.raises(InnerNotInsideError):
        supporting_polygon(inner, plane_polygon("xy"), P(0, 0))


def test_tangent_from_inside_is_degenerate():
    with pytest.raises(TangencyDegenerateError):
        tangent_vertex(P(F(3, 4), F(1, 4)), inner_triangle("xy"))


def test_tangent_prefers_farthest_collinear_vertex():
    inner = ConvexPolygon([P(1, 1), P(2, 1), P(2, 2)])
    # from (0, 1) the edge (1,1)-(2,1) lies on the supporting line
    assert tangent_vertex(P(0, 1), inner) == P(2, 1)


def test_types_2_and_3_excluded():
    report = exclude_types_2_3()
    assert report.excluded
    for inst in report.instances:
        assert not inst.feasible
        cert = inst.certificate
        assert cert.verify()
        assert len(cert.halfplanes) <= 3
        assert all(sign(m) >= 0 for m in cert.multipliers)
        assert sign(cert.combined_constant) < 0


def test_single_target_cover_is_feasible():
    r1 = project(paper_constants().r[0], "xy")
    inst = triangle_cover_region(plane_polygon("xy"), {"r1": r1}, "r1 only")
    assert inst.feasible
    q = inst.witness
    assert plane_polygon("xy").contains(q)
    for a, b in ((P(0, 0), P(1, 0)), (P(1, 0), q), (q, P(0, 0))):
        assert orient(a, b, r1) >= 0


def test_infeasibility_certificate_for_parallel_pair():
    hs = [HalfPlane(F(1), F(0), F(-2), "x >= 2"), HalfPlane(F(-1), F(0), F(1), "x <= 1")]
    cert = find_infeasibility_certificate(hs)
    assert cert is not None and cert.verify()
    assert find_infeasibility_certificate([HalfPlane(F(1), F(0), F(0)), HalfPlane(F(0), F(1), F(0))]) is None


def test_type1_uniqueness():
    report = verify_type1_uniqueness()
    assert report.triangles_match == {"xy": True, "xz": True}
    assert report.samples == 162
    assert report.missing_witnesses == []
    assert report.unique


def test_perturbed_q2_has_witness():
    witness = perturbed_q2_witness()
    assert witness is not None
    assert witness.point in {"r1", "r2", "r3"}
    assert sign(witness.value) < 0
    assert "right of" in witness.describe()
