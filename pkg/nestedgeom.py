#!/usr/bin/env python3
"""
nestedgeom.py

Exact planar geometry over Q(sqrt 2): orientation tests, convex polygons,
supporting polygons nested between an inner and an outer convex polygon, and
the geometric exclusion checks on the two faces of P:

    xy  the face z = 0 of P, with the inner triangle r1 r2 r3
    xz  the face y = 0 of P, with the inner triangle r4 r5 r6

Points on the xz face are written (x, z).

Usage:
    from nestedgeom import plane_polygon, inner_triangle, supporting_polygon, Point2
    res = supporting_polygon(inner_triangle("xy"), plane_polygon("xy"), Point2(Fraction(1, 8), 0))
    res.vertex_count    # 4
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key, lru_cache
from itertools import combinations
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from exactnum import QuadExt, SQRT2, format_entry, sign
from linalg import ExactMatrix, det
from paperdata import FACET_LABELS, PaperConstants, paper_constants

log = logging.getLogger(__name__)

PLANES = ("xy", "xz")
THRESHOLD = 2 - SQRT2

THREE_VERTICES = "three_vertices"
MORE_THAN_THREE = "more_than_three"


class StartNotOnBoundaryError(ValueError):
    pass


class InnerNotInsideError(ValueError):
    pass


class TangencyDegenerateError(ValueError):
    pass


class PoleError(ValueError):
    pass


class PolygonError(ValueError):
    pass


# ────────────────────────── points and predicates

@dataclass(frozen=True)
class Point2:
    x: Any
    y: Any

    def __sub__(self, other: Point2) -> Point2:
        return Point2(self.x - other.x, self.y - other.y)

    def __add__(self, other: Point2) -> Point2:
        return Point2(self.x + other.x, self.y + other.y)

    def scale(self, t: Any) -> Point2:
        return Point2(self.x * t, self.y * t)

    def cross(self, other: Point2) -> Any:
        return self.x * other.y - self.y * other.x

    def dot(self, other: Point2) -> Any:
        return self.x * other.x + self.y * other.y

    def format(self) -> str:
        return f"({format_entry(self.x)}, {format_entry(self.y)})"

    def to_json(self) -> Dict[str, Any]:
        return {"x": format_entry(self.x), "y": format_entry(self.y),
                "approx": [float(self.x), float(self.y)]}


def orient_value(v1: Point2, v2: Point2, v3: Point2) -> Any:
    """det [[x1, y1, 1], [x2, y2, 1], [x3, y3, 1]]; positive for a ccw triple."""
    return (v2 - v1).cross(v3 - v1)


def orient(v1: Point2, v2: Point2, v3: Point2) -> int:
    return sign(orient_value(v1, v2, v3))


@dataclass(frozen=True)
class HalfPlane:
    """a*x + b*y + c >= 0"""
    a: Any
    b: Any
    c: Any
    label: str = ""

    def value(self, p: Point2) -> Any:
        return self.a * p.x + self.b * p.y + self.c

    def contains(self, p: Point2) -> bool:
        return sign(self.value(p)) >= 0

    def is_trivial(self) -> bool:
        return sign(self.a) == 0 and sign(self.b) == 0

    def intersect(self, other: HalfPlane) -> Optional[Point2]:
        dt = self.a * other.b - self.b * other.a
        if sign(dt) == 0:
            return None
        return Point2((self.b * other.c - self.c * other.b) / dt,
                      (self.c * other.a - self.a * other.c) / dt)


def _ccw_sort(points: Sequence[Point2]) -> List[Point2]:
    n = len(points)
    cx = sum((p.x for p in points), Fraction(0)) / n
    cy = sum((p.y for p in points), Fraction(0)) / n
    c = Point2(cx, cy)

    def half(p: Point2) -> int:
        d = p - c
        return 0 if sign(d.y) > 0 or (sign(d.y) == 0 and sign(d.x) > 0) else 1

    def cmp(p: Point2, q: Point2) -> int:
        hp, hq = half(p), half(q)
        if hp != hq:
            return hp - hq
        return -sign((p - c).cross(q - c))

    return sorted(points, key=cmp_to_key(cmp))


class ConvexPolygon:
    """Strictly convex polygon, vertices counter-clockwise."""

    def __init__(self, vertices: Sequence[Point2]) -> None:
        vs = list(vertices)
        if len(vs) < 3:
            raise PolygonError(f"a polygon needs at least 3 vertices, got {len(vs)}")
        n = len(vs)
        for i in range(n):
            if orient(vs[i], vs[(i + 1) % n], vs[(i + 2) % n]) <= 0:
                raise PolygonError(
                    f"vertices {i + 1}, {(i + 1) % n + 1}, {(i + 2) % n + 1} are not strictly counter-clockwise")
        self.vertices: Tuple[Point2, ...] = tuple(vs)

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def __repr__(self) -> str:
        return f"ConvexPolygon([{', '.join(v.format() for v in self.vertices)}])"

    def edges(self) -> List[Tuple[Point2, Point2]]:
        n = len(self.vertices)
        return [(self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n)]

    def edge_values(self, p: Point2) -> List[Any]:
        return [orient_value(a, b, p) for a, b in self.edges()]

    def contains(self, p: Point2, strict: bool = False) -> bool:
        signs = [sign(v) for v in self.edge_values(p)]
        return all(s > 0 for s in signs) if strict else all(s >= 0 for s in signs)

    def on_boundary(self, p: Point2) -> bool:
        signs = [sign(v) for v in self.edge_values(p)]
        return all(s >= 0 for s in signs) and any(s == 0 for s in signs)

    def halfplanes(self) -> List[HalfPlane]:
        out = []
        for k, (a, b) in enumerate(self.edges()):
            # orient(a, b, p) = (b-a) x (p-a), linear in p
            d = b - a
            out.append(HalfPlane(-d.y, d.x, d.y * a.x - d.x * a.y, f"edge {k + 1}"))
        return out

    @classmethod
    def from_halfplanes(cls, halfplanes: Sequence[HalfPlane]) -> ConvexPolygon:
        """Bounded intersection of half-planes by pairwise line intersection."""
        hps = [h for h in halfplanes if not h.is_trivial()]
        for h in halfplanes:
            if h.is_trivial() and sign(h.c) < 0:
                raise PolygonError(f"half-plane {h.label or h} is empty")
        pts: List[Point2] = []
        for h1, h2 in combinations(hps, 2):
            p = h1.intersect(h2)
            if p is not None and all(h.contains(p) for h in hps) and p not in pts:
                pts.append(p)
        if len(pts) < 3:
            raise PolygonError("half-plane intersection is not a proper polygon")
        ordered = _ccw_sort(pts)
        # drop points interior to an edge
        changed = True
        while changed and len(ordered) > 3:
            changed = False
            n = len(ordered)
            for i in range(n):
                if orient(ordered[i - 1], ordered[i], ordered[(i + 1) % n]) == 0:
                    del ordered[i]
                    changed = True
                    break
        return cls(ordered)


def nested_between(inner: ConvexPolygon, vertices: Sequence[Point2], outer: ConvexPolygon) -> bool:
    """inner within the polygon `vertices` (weakly) and that polygon within outer."""
    if not all(outer.contains(v) for v in vertices):
        return False
    n = len(vertices)
    return all(orient(vertices[i], vertices[(i + 1) % n], p) >= 0
               for i in range(n) for p in inner)


# ────────────────────────── faces of P

def _coords(plane: str) -> Tuple[int, int]:
    if plane not in PLANES:
        raise ValueError(f"plane must be one of {PLANES}, got {plane!r}")
    return (0, 1) if plane == "xy" else (0, 2)


def plane_halfplanes(plane: str, constants: Optional[PaperConstants] = None) -> List[HalfPlane]:
    pc = constants or paper_constants()
    i, j = _coords(plane)
    return [HalfPlane(pc.C[k, i], pc.C[k, j], pc.dvec[k, 0], FACET_LABELS[k]) for k in range(6)]


@lru_cache(maxsize=None)
def plane_polygon(plane: str) -> ConvexPolygon:
    poly = ConvexPolygon.from_halfplanes(plane_halfplanes(plane))
    log.debug(f"face {plane}: {poly}")
    return poly


def project(point: Sequence[Any], plane: str) -> Point2:
    i, j = _coords(plane)
    return Point2(point[i], point[j])


@lru_cache(maxsize=None)
def inner_triangle(plane: str) -> ConvexPolygon:
    pc = paper_constants()
    pts = pc.r[:3] if plane == "xy" else pc.r[3:]
    return ConvexPolygon([project(p, plane) for p in pts])


# ────────────────────────── supporting polygons

@dataclass
class SupportResult:
    vertices: List[Point2]
    closed: bool
    touches: List[Point2] = field(default_factory=list)

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @property
    def verdict(self) -> str:
        return THREE_VERTICES if self.closed and self.vertex_count <= 3 else MORE_THAN_THREE

    def to_json(self) -> Dict[str, Any]:
        return {"vertices": [v.to_json() for v in self.vertices], "closed": self.closed,
                "vertex_count": self.vertex_count, "verdict": self.verdict}


def tangent_vertex(cur: Point2, inner: ConvexPolygon) -> Point2:
    """Inner vertex t with every inner vertex weakly left of cur -> t; farthest on ties."""
    if inner.contains(cur):
        raise TangencyDegenerateError(f"point {cur.format()} lies in the inner polygon")
    best: Optional[Point2] = None
    for t in inner:
        if all(orient(cur, t, p) >= 0 for p in inner):
            if best is None:
                best = t
            elif orient(cur, best, t) == 0 and sign((t - cur).dot(t - cur) - (best - cur).dot(best - cur)) > 0:
                best = t
    if best is None:
        raise TangencyDegenerateError(f"no supporting direction from {cur.format()}")
    return best


def _exit_point(cur: Point2, direction: Point2, outer: ConvexPolygon) -> Point2:
    # largest lam with cur + lam*direction inside outer
    lam = None
    for (a, b), h in zip(outer.edges(), outer.edge_values(cur)):
        c = (b - a).cross(direction)
        if sign(c) < 0:
            cand = h / (-c)
            if lam is None or cand < lam:
                lam = cand
    if lam is None:
        raise PolygonError("outer polygon is unbounded along the supporting direction")
    return cur + direction.scale(lam)


def supporting_polygon(inner: ConvexPolygon, outer: ConvexPolygon, start: Point2) -> SupportResult:
    if not outer.on_boundary(start):
        raise StartNotOnBoundaryError(f"start {start.format()} is not on the boundary of the outer polygon")
    for p in inner:
        if not outer.contains(p):
            raise InnerNotInsideError(f"inner vertex {p.format()} lies outside the outer polygon")
    budget = len(outer) + len(inner) + 3
    vertices = [start]
    touches: List[Point2] = []
    cur = start
    while True:
        t = tangent_vertex(cur, inner)
        nxt = _exit_point(cur, t - cur, outer)
        touches.append(t)
        vertices.append(nxt)
        if all(orient(nxt, start, p) >= 0 for p in inner):
            log.debug(f"supporting polygon from {start.format()} closed with {len(vertices)} vertices")
            return SupportResult(vertices, True, touches)
        if len(vertices) >= budget:
            log.debug(f"supporting polygon from {start.format()} hit the budget of {budget}")
            return SupportResult(vertices, False, touches)
        cur = nxt


def is_supporting_segment(u: Point2, v: Point2, inner: ConvexPolygon, outer: ConvexPolygon) -> bool:
    values = [orient(u, v, p) for p in inner]
    return (outer.on_boundary(u) and outer.on_boundary(v)
            and all(s >= 0 for s in values) and any(s == 0 for s in values))


# ────────────────────────── threshold lemmas

def _affine_root(fn: Callable[[Any], Any], what: str) -> Any:
    """Root of an affine function of one variable."""
    f0, f1 = fn(Fraction(0)), fn(Fraction(1))
    slope = f1 - f0
    if sign(slope) == 0:
        raise PoleError(f"{what}: the collinearity condition does not determine it")
    return -f0 / slope


def _inner_pairs(plane: str) -> List[Tuple[Any, Any]]:
    return [(p.x, p.y) for p in inner_triangle(plane)]


def _det3(p: Tuple[Any, Any], q: Tuple[Any, Any], r: Tuple[Any, Any]) -> Any:
    return det(ExactMatrix.from_rows([[p[0], p[1], 1], [q[0], q[1], 1], [r[0], r[1], 1]]))


@dataclass
class Elimination:
    u: Any
    v: Any
    w: Any
    inequality: Any


def lemma41_elimination(u: Any) -> Elimination:
    """xy face: q3 = (1, v/2) on the right edge, q2 = (1-w, 1/2+w/2) on the upper edge."""
    r1, r2, r3 = _inner_pairs("xy")
    q1 = (u, Fraction(0))
    v = _affine_root(lambda v: _det3(q1, (1, v / 2), r1), "v")
    q3 = (Fraction(1), v / 2)
    w = _affine_root(lambda w: _det3(q3, (1 - w, Fraction(1, 2) + w / 2), r2), "w")
    q2 = (1 - w, Fraction(1, 2) + w / 2)
    return Elimination(u, v, w, _det3(q2, q1, r3))


def lemma41_closed_form(u: Any) -> Any:
    den = 22 * (8 * u - 5)
    if sign(den) == 0:
        raise PoleError("8u - 5 = 0")
    return 15 * (u * u - 4 * u + 2) / den


def lemma42_elimination(u: Any) -> Elimination:
    """xz face: q5 = ((9-9v)/4, (7+9v)/14) on the upper edge, q4 = (0, (8-8w)/7) on the left edge."""
    r4, r5, r6 = _inner_pairs("xz")
    q1 = (u, Fraction(0))

    def q5_of(v: Any) -> Tuple[Any, Any]:
        return ((9 - 9 * v) / 4, (7 + 9 * v) / 14)

    def q4_of(w: Any) -> Tuple[Any, Any]:
        return (Fraction(0), (8 - 8 * w) / 7)

    v = _affine_root(lambda v: _det3(q1, q5_of(v), r4), "v")
    q5 = q5_of(v)
    w = _affine_root(lambda w: _det3(q5, q4_of(w), r5), "w")
    return Elimination(u, v, w, _det3(q4_of(w), q1, r6))


def lemma42_closed_form(u: Any) -> Any:
    den = 21 * (2 * u - 7)
    if sign(den) == 0:
        raise PoleError("2u - 7 = 0")
    return -10 * (u * u - 4 * u + 2) / den


@dataclass
class ThresholdCheck:
    plane: str
    u: Any
    elimination: Elimination
    closed_form: Any
    support: SupportResult
    in_lemma_range: bool

    @property
    def verdict(self) -> str:
        return self.support.verdict

    @property
    def identity_holds(self) -> bool:
        return self.elimination.inequality == self.closed_form

    @property
    def consistent(self) -> bool:
        """Inside the lemma's range, a triangle occurs exactly when the inequality holds."""
        if not self.in_lemma_range:
            return True
        return (sign(self.elimination.inequality) >= 0) == (self.verdict == THREE_VERTICES)

    def to_json(self) -> Dict[str, Any]:
        def num(x: Any) -> Dict[str, Any]:
            return {"exact": format_entry(x), "approx": float(x)}
        return {
            "plane": self.plane, "u": num(self.u), "v": num(self.elimination.v),
            "w": num(self.elimination.w), "inequality": num(self.elimination.inequality),
            "closed_form": num(self.closed_form), "verdict": self.verdict,
            "in_lemma_range": self.in_lemma_range, "identity_holds": self.identity_holds,
            "consistent": self.consistent, "support": self.support.to_json(),
        }


def _threshold_check(plane: str, u: Any, elim: Callable[[Any], Elimination],
                     closed: Callable[[Any], Any], in_range: bool) -> ThresholdCheck:
    if not (0 <= u <= 1):
        raise ValueError(f"u must lie in [0, 1], got {format_entry(u)}")
    e = elim(u)
    support = supporting_polygon(inner_triangle(plane), plane_polygon(plane), Point2(u, Fraction(0)))
    return ThresholdCheck(plane, u, e, closed(u), support, in_range)


def lemma41_threshold_check(u: Any) -> ThresholdCheck:
    return _threshold_check("xy", u, lemma41_elimination, lemma41_closed_form, u <= THRESHOLD)


def lemma42_threshold_check(u: Any) -> ThresholdCheck:
    return _threshold_check("xz", u, lemma42_elimination, lemma42_closed_form, u >= THRESHOLD)


def sweep_thresholds(plane: str, a: Any, b: Any, n: int) -> List[Tuple[Any, SupportResult]]:
    if n < 1:
        raise ValueError("sweep needs at least one sample")
    inner, outer = inner_triangle(plane), plane_polygon(plane)
    steps = [a] if n == 1 else [a + (b - a) * Fraction(k, n - 1) for k in range(n)]
    return [(u, supporting_polygon(inner, outer, Point2(u, Fraction(0)))) for u in steps]


# ────────────────────────── types 2 and 3

@dataclass
class FarkasCertificate:
    """Nonnegative multipliers combining the half-planes into 0 >= negative constant."""
    halfplanes: List[HalfPlane]
    multipliers: List[Any]

    @property
    def combined_constant(self) -> Any:
        return sum((l * h.c for l, h in zip(self.multipliers, self.halfplanes)), Fraction(0))

    def verify(self) -> bool:
        a = sum((l * h.a for l, h in zip(self.multipliers, self.halfplanes)), Fraction(0))
        b = sum((l * h.b for l, h in zip(self.multipliers, self.halfplanes)), Fraction(0))
        return (all(sign(l) >= 0 for l in self.multipliers) and sign(a) == 0 and sign(b) == 0
                and sign(self.combined_constant) < 0)

    def to_json(self) -> Dict[str, Any]:
        return {"halfplanes": [h.label for h in self.halfplanes],
                "multipliers": [format_entry(l) for l in self.multipliers],
                "combined_constant": format_entry(self.combined_constant)}


def find_infeasibility_certificate(halfplanes: Sequence[HalfPlane]) -> Optional[FarkasCertificate]:
    for h in halfplanes:
        if h.is_trivial() and sign(h.c) < 0:
            return FarkasCertificate([h], [Fraction(1)])
    hps = [h for h in halfplanes if not h.is_trivial()]
    for h1, h2 in combinations(hps, 2):
        cr = h1.a * h2.b - h1.b * h2.a
        dt = h1.a * h2.a + h1.b * h2.b
        if sign(cr) == 0 and sign(dt) < 0:
            t = -dt / (h2.a * h2.a + h2.b * h2.b)
            cert = FarkasCertificate([h1, h2], [Fraction(1), t])
            if cert.verify():
                return cert
    for h1, h2, h3 in combinations(hps, 3):
        lam = [h2.a * h3.b - h2.b * h3.a, h3.a * h1.b - h3.b * h1.a, h1.a * h2.b - h1.b * h2.a]
        if all(sign(l) <= 0 for l in lam):
            lam = [-l for l in lam]
        cert = FarkasCertificate([h1, h2, h3], lam)
        if any(sign(l) != 0 for l in lam) and cert.verify():
            return cert
    return None


def clip_polygon(vertices: Sequence[Point2], h: HalfPlane) -> List[Point2]:
    """Sutherland-Hodgman clip of a convex vertex cycle by one half-plane."""
    out: List[Point2] = []
    n = len(vertices)
    for i in range(n):
        p, q = vertices[i], vertices[(i + 1) % n]
        vp, vq = h.value(p), h.value(q)
        if sign(vp) >= 0:
            out.append(p)
        if sign(vp) * sign(vq) < 0:
            out.append(p + (q - p).scale(vp / (vp - vq)))
    deduped: List[Point2] = []
    for p in out:
        if p not in deduped:
            deduped.append(p)
    return deduped


def containment_halfplanes(p: Point2, label: str) -> List[HalfPlane]:
    """Conditions on Q = (x, y) for p to lie in the triangle (0,0), (1,0), Q."""
    return [
        HalfPlane(Fraction(0), Fraction(0), p.y, f"{label} above the base"),
        # orient((1,0), Q, p) = (x-1)*p.y - y*(p.x-1)
        HalfPlane(p.y, 1 - p.x, -p.y, f"{label} left of (1,0)->Q"),
        # orient(Q, (0,0), p) = y*p.x - x*p.y
        HalfPlane(-p.y, p.x, Fraction(0), f"{label} left of Q->(0,0)"),
    ]


@dataclass
class CoverInstance:
    name: str
    feasible: bool
    witness: Optional[Point2] = None
    certificate: Optional[FarkasCertificate] = None

    def to_json(self) -> Dict[str, Any]:
        return {"name": self.name, "feasible": self.feasible,
                "witness": self.witness.to_json() if self.witness else None,
                "certificate": self.certificate.to_json() if self.certificate else None}


def triangle_cover_region(outer: ConvexPolygon, targets: Dict[str, Point2], name: str = "") -> CoverInstance:
    """Is there Q in outer with every target inside the triangle (0,0), (1,0), Q?"""
    constraints = list(outer.halfplanes())
    for label, p in targets.items():
        constraints += containment_halfplanes(p, label)
    region: List[Point2] = list(outer.vertices)
    for h in constraints[len(outer):]:
        if h.is_trivial():
            if sign(h.c) < 0:
                region = []
            continue
        region = clip_polygon(region, h)
        if not region:
            break
    if region:
        n = len(region)
        witness = Point2(sum((p.x for p in region), Fraction(0)) / n,
                         sum((p.y for p in region), Fraction(0)) / n)
        if not all(h.contains(witness) for h in constraints):
            raise AssertionError(f"witness {witness.format()} violates a constraint")
        return CoverInstance(name, True, witness=witness)
    cert = find_infeasibility_certificate(constraints)
    if cert is None:
        raise AssertionError(f"{name}: empty region without a certificate")
    return CoverInstance(name, False, certificate=cert)


@dataclass
class ExclusionReport:
    instances: List[CoverInstance]

    @property
    def excluded(self) -> bool:
        return all(not inst.feasible and inst.certificate is not None and inst.certificate.verify()
                   for inst in self.instances)


def exclude_types_2_3() -> ExclusionReport:
    pc = paper_constants()
    xy = {"r2": project(pc.r[1], "xy"), "r3": project(pc.r[2], "xy")}
    xz = {"r4": project(pc.r[3], "xz"), "r6": project(pc.r[5], "xz")}
    return ExclusionReport([
        triangle_cover_region(plane_polygon("xy"), xy, "type 2 (xy face: r2, r3)"),
        triangle_cover_region(plane_polygon("xz"), xz, "type 3 (xz face: r4, r6)"),
    ])


# ────────────────────────── type 1 uniqueness

@dataclass
class OrientationWitness:
    edge: Tuple[Point2, Point2]
    point: str
    value: Any

    def describe(self) -> str:
        a, b = self.edge
        return f"{self.point} right of {a.format()} -> {b.format()} (orientation {format_entry(self.value)})"


def nesting_witness(triangle: Sequence[Point2], inner: Dict[str, Point2]) -> Optional[OrientationWitness]:
    """First inner point strictly right of a directed triangle edge, if any."""
    n = len(triangle)
    for i in range(n):
        a, b = triangle[i], triangle[(i + 1) % n]
        for label, p in inner.items():
            val = orient_value(a, b, p)
            if sign(val) < 0:
                return OrientationWitness((a, b), label, val)
    return None


@dataclass
class UniquenessReport:
    triangles_match: Dict[str, bool]
    samples: int
    missing_witnesses: List[str]

    @property
    def unique(self) -> bool:
        return all(self.triangles_match.values()) and not self.missing_witnesses


def _grid(n: int) -> List[Fraction]:
    return [Fraction(k, n) for k in range(n + 1)]


def verify_type1_uniqueness(grid: int = 8) -> UniquenessReport:
    pc = paper_constants()
    qs = {k + 1: q for k, q in enumerate(pc.qstar)}
    match: Dict[str, bool] = {}
    missing: List[str] = []
    samples = 0

    for plane, order in (("xy", (1, 3, 2)), ("xz", (1, 5, 4))):
        res = supporting_polygon(inner_triangle(plane), plane_polygon(plane), project(qs[1], plane))
        expected = [project(qs[k], plane) for k in order]
        match[plane] = res.closed and res.vertices == expected

    q1 = project(qs[1], "xy")
    inner_xy = {f"r{k + 1}": project(pc.r[k], "xy") for k in range(3)}
    for t in _grid(grid):
        for w in _grid(grid):
            q3 = Point2(Fraction(1), t / 2)
            q2 = Point2(1 - w, Fraction(1, 2) + w / 2)
            samples += 1
            if nesting_witness([q1, q3, q2], inner_xy) is None:
                missing.append(f"xy: q3={q3.format()} q2={q2.format()}")

    q1 = project(qs[1], "xz")
    inner_xz = {f"r{k + 4}": project(pc.r[k + 3], "xz") for k in range(3)}
    for v in _grid(grid):
        for w in _grid(grid):
            q5 = Point2((9 - 9 * v) / 4, (7 + 9 * v) / 14)
            q4 = Point2(Fraction(0), (8 - 8 * w) / 7)
            samples += 1
            if nesting_witness([q1, q5, q4], inner_xz) is None:
                missing.append(f"xz: q5={q5.format()} q4={q4.format()}")

    log.info(f"type-1 uniqueness: {samples} sampled triangles, {len(missing)} without witness")
    return UniquenessReport(match, samples, missing)


def perturbed_q2_witness(delta: Tuple[Any, Any] = (Fraction(-1, 100), Fraction(1, 200))) -> Optional[OrientationWitness]:
    """Move q2* along the upper edge and report which r_i leaves the triangle q1* q3* q2."""
    pc = paper_constants()
    q1, q2, q3 = (project(pc.qstar[k], "xy") for k in (0, 1, 2))
    q2 = q2 + Point2(*delta)
    inner = {f"r{k + 1}": project(pc.r[k], "xy") for k in range(3)}
    return nesting_witness([q1, q3, q2], inner)
