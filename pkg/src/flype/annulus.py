"""Positive-slope annuli on the torus and their exact PL geometry.

An annulus is the closed region between two disjoint strictly-increasing
piecewise linear closed curves of equal winding (p, q).  The boundary
component whose small push-off in the (1,-1) direction leaves the region is
b1 (the lower-right boundary); the other is b2.  Validity against a diagram:

1. every boundary segment has strictly positive finite slope (structural);
2. the boundary misses all crossings of the diagram;
3. two distinct boundary points on one meridian whose heights are both used
   longitudes must form a vertical edge of the diagram, and symmetrically
   with meridians and longitudes swapped.

Curves are stored as one period of their lift: strictly increasing rational
breakpoints, the closing step to ``first + (p*C, q*C)`` implicit.  A monotone
curve is a graph over theta in the universal cover, which makes every
predicate here a one-dimensional exact computation: a meridian meets the
curve p times per period, disjointness of two curves says a certain periodic
PL function avoids all multiples of C, and membership (``locate``) casts the
ray in direction (1,-1), which leaves the annulus through b1 and enters it
through b2, so the first boundary hit decides the side.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    AnnulusInvalid,
    BoundaryHitsCrossing,
    CannotPerturb,
    CurveError,
    ForbiddenPair,
    GridSyntaxError,
    InternalInvariantBroken,
    NotContained,
    NotInterior,
    Outside,
    SlopeViolation,
)
from .torus_core import (
    GridDiagram,
    Point,
    Rectangle,
    SignedPointMap,
    characteristic,
    cyc_dist,
    in_cyclic,
    pt,
    reduce_mod,
)

INTERIOR = "interior"
ON_B1 = "on_b1"
ON_B2 = "on_b2"
OUTSIDE = "outside"


@dataclass(frozen=True)
class MonotoneCurve:
    """Closed strictly-increasing PL curve on the torus, one lifted period."""

    breakpoints: tuple
    winding: tuple
    circumference: Fraction

    def __post_init__(self):
        p, q = self.winding
        c = Fraction(self.circumference)
        if p < 1 or q < 1:
            raise SlopeViolation(f"winding {self.winding} is not positive")
        pts = tuple((Fraction(x), Fraction(y)) for x, y in self.breakpoints)
        if not pts:
            raise CurveError("no breakpoints")
        closed = list(pts) + [(pts[0][0] + p * c, pts[0][1] + q * c)]
        for (x1, y1), (x2, y2) in zip(closed, closed[1:]):
            if not (x2 > x1 and y2 > y1):
                raise SlopeViolation(
                    f"segment ({x1},{y1})->({x2},{y2}) is not strictly increasing")
        object.__setattr__(self, "breakpoints", pts)
        object.__setattr__(self, "circumference", c)

    # -- lifted graph structure ------------------------------------------

    def period(self):
        p, q = self.winding
        return (p * self.circumference, q * self.circumference)

    def segments(self):
        px, py = self.period()
        pts = list(self.breakpoints)
        pts.append((pts[0][0] + px, pts[0][1] + py))
        return list(zip(pts, pts[1:]))

    def y_at(self, x) -> Fraction:
        """Graph evaluation in the lift: y(x + pC) = y(x) + qC."""
        x = Fraction(x)
        px, py = self.period()
        k = (x - self.breakpoints[0][0]) // px
        xr = x - k * px
        for (x1, y1), (x2, y2) in self.segments():
            if x1 <= xr <= x2:
                return y1 + (xr - x1) * (y2 - y1) / (x2 - x1) + k * py
        raise InternalInvariantBroken("graph evaluation outside the period")

    def x_lifts_of(self, theta):
        """The p lifted parameters over the meridian m_theta, one period."""
        px, _ = self.period()
        c = self.circumference
        x0 = self.breakpoints[0][0]
        base = Fraction(theta) + ((x0 - Fraction(theta)) / c).__ceil__() * c
        out = []
        x = base
        while x < x0 + px:
            out.append(x)
            x += c
        return out

    def kinks_between(self, x_lo, x_hi):
        """Lifted x of all breakpoint copies in [x_lo, x_hi]."""
        px, _ = self.period()
        out = set()
        for x, _y in self.breakpoints:
            k = (Fraction(x_lo) - x) // px
            xx = x + k * px
            while xx <= x_hi:
                if xx >= x_lo:
                    out.add(xx)
                xx += px
        return sorted(out)

    # -- torus-level queries ----------------------------------------------

    def contains_point(self, point) -> bool:
        p = Point(Fraction(point[0]), Fraction(point[1])).reduced(self.circumference)
        return any(reduce_mod(self.y_at(x) - p.phi, self.circumference) == 0
                   for x in self.x_lifts_of(p.theta))

    def meridian_crossings(self, theta):
        """Reduced heights of the p crossings with the meridian m_theta."""
        c = self.circumference
        return [reduce_mod(self.y_at(x), c) for x in self.x_lifts_of(theta)]

    def longitude_crossings(self, phi):
        """Reduced theta of the q crossings with the longitude l_phi."""
        c = self.circumference
        phi = reduce_mod(phi, c)
        out = []
        for (x1, y1), (x2, y2) in self.segments():
            b = ((y1 - phi) / c).__ceil__()
            y = phi + b * c
            while y < y2:  # half-open in y: each crossing counted once
                if y >= y1:
                    out.append(reduce_mod(x1 + (y - y1) * (x2 - x1) / (y2 - y1), c))
                y += c
        return out

    def normalized(self) -> "MonotoneCurve":
        c = self.circumference
        px, py = self.period()
        best = None
        k = len(self.breakpoints)
        for i in range(k):
            run = list(self.breakpoints[i:]) + [(x + px, y + py)
                                                for x, y in self.breakpoints[:i]]
            x0, y0 = run[0]
            dx, dy = (x0 // c) * c, (y0 // c) * c
            cand = tuple((x - dx, y - dy) for x, y in run)
            if best is None or cand < best:
                best = cand
        return MonotoneCurve(best, self.winding, c)


def transpose_curve(curve: MonotoneCurve) -> MonotoneCurve:
    p, q = curve.winding
    return MonotoneCurve(tuple((y, x) for x, y in curve.breakpoints),
                         (q, p), curve.circumference)


def negate_curve(curve: MonotoneCurve) -> MonotoneCurve:
    """Image under (theta, phi) -> (-theta, -phi), reparametrized increasing."""
    pts = tuple((-x, -y) for x, y in reversed(curve.breakpoints))
    return MonotoneCurve(pts, curve.winding, curve.circumference)


def translate_curve(curve: MonotoneCurve, dtheta, dphi) -> MonotoneCurve:
    pts = tuple((x + Fraction(dtheta), y + Fraction(dphi))
                for x, y in curve.breakpoints)
    return MonotoneCurve(pts, curve.winding, curve.circumference)


def _graphs_avoid_lattice(low: MonotoneCurve, high: MonotoneCurve, skip_zero_shift):
    """True iff no lattice copy of ``high`` meets ``low``.

    Both curves must have equal winding (p, q).  The torus point sets meet
    iff for some shift a in 0..p-1 the periodic PL function
    d(x) = high(x + aC) - low(x) takes a value in C*Z.
    """
    if low.winding != high.winding or low.circumference != high.circumference:
        return False
    c = low.circumference
    p, _q = low.winding
    px, _py = low.period()
    x_lo = low.breakpoints[0][0]
    x_hi = x_lo + px
    for a in range(p):
        if skip_zero_shift and a == 0:
            continue
        shift = a * c
        xs = set(low.kinks_between(x_lo, x_hi))
        xs.update(x - shift for x in high.kinks_between(x_lo + shift, x_hi + shift))
        xs = sorted(xs)
        vals = [high.y_at(x + shift) - low.y_at(x) for x in xs]
        for (x1, d1), (x2, d2) in zip(zip(xs, vals), zip(xs[1:], vals[1:])):
            lo, hi = (d1, d2) if d1 <= d2 else (d2, d1)
            if (lo / c).__ceil__() * c <= hi:
                return False
        # the closing piece wraps around to the first kink
        d_end = high.y_at(x_hi + shift) - low.y_at(x_hi)
        lo, hi = (vals[-1], d_end) if vals[-1] <= d_end else (d_end, vals[-1])
        if (lo / c).__ceil__() * c <= hi:
            return False
    return True


def curve_embedded(curve: MonotoneCurve) -> bool:
    return _graphs_avoid_lattice(curve, curve, skip_zero_shift=True)


def curves_disjoint(c1: MonotoneCurve, c2: MonotoneCurve) -> bool:
    return _graphs_avoid_lattice(c1, c2, skip_zero_shift=False)


# ---------------------------------------------------------------------------
# Annuli
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Annulus:
    """Region between b1 (lower-right boundary) and b2 (upper-left boundary)."""

    b1: MonotoneCurve
    b2: MonotoneCurve
    circumference: Fraction

    def __post_init__(self):
        c = Fraction(self.circumference)
        object.__setattr__(self, "circumference", c)
        if self.b1.circumference != c or self.b2.circumference != c:
            raise AnnulusInvalid("curve circumference mismatch")
        if self.b1.winding != self.b2.winding:
            raise AnnulusInvalid(
                f"windings differ: {self.b1.winding} vs {self.b2.winding}")
        if not curve_embedded(self.b1) or not curve_embedded(self.b2):
            raise AnnulusInvalid("boundary curve is not embedded")
        if not curves_disjoint(self.b1, self.b2):
            raise AnnulusInvalid("boundary curves intersect")

    @property
    def winding(self):
        return self.b1.winding

    def curves(self):
        return ((ON_B1, self.b1), (ON_B2, self.b2))


def transpose_annulus(annulus: Annulus) -> Annulus:
    """Image under (theta, phi) -> (phi, theta); the boundary roles swap."""
    return Annulus(transpose_curve(annulus.b2), transpose_curve(annulus.b1),
                   annulus.circumference)


def negate_annulus(annulus: Annulus) -> Annulus:
    """Image under the point reflection; the boundary roles swap."""
    return Annulus(negate_curve(annulus.b2), negate_curve(annulus.b1),
                   annulus.circumference)


def locate(annulus: Annulus, point) -> str:
    """Exact membership via the first boundary hit of the (1,-1)-ray."""
    c = annulus.circumference
    x = Point(Fraction(point[0]), Fraction(point[1])).reduced(c)
    if annulus.b1.contains_point(x):
        return ON_B1
    if annulus.b2.contains_point(x):
        return ON_B2
    tag, _pt, _t = _antidiag_first_hit(annulus, x)
    return INTERIOR if tag == ON_B1 else OUTSIDE


def _antidiag_first_hit(annulus: Annulus, x: Point):
    """First boundary point on {x + t*(1,-1) : t > 0}; t ranges in (0, C)."""
    c = annulus.circumference
    target = x.theta + x.phi
    best = None
    for tag, curve in annulus.curves():
        for (x1, y1), (x2, y2) in curve.segments():
            g1, g2 = x1 + y1, x2 + y2
            m = ((g1 - target) / c).__ceil__()
            val = target + m * c
            while val < g2:  # half-open [g1, g2)
                if val >= g1:
                    s = (val - g1) / (g2 - g1)
                    hx = x1 + s * (x2 - x1)
                    hy = y1 + s * (y2 - y1)
                    t = reduce_mod(hx - x.theta, c)
                    if t != 0:
                        if best is None or t < best[2]:
                            best = (tag, Point(reduce_mod(hx, c), reduce_mod(hy, c)), t)
                val += c
    if best is None:
        raise InternalInvariantBroken("the (1,-1) ray missed the boundary")
    return best


_DIRS = {"+theta": (1, 0), "-theta": (-1, 0), "+phi": (0, 1), "-phi": (0, -1)}


def _axis_first_hit(annulus: Annulus, x: Point, direction: str):
    """First boundary point hit by the axis ray from x, as (tag, point, t > 0)."""
    c = annulus.circumference
    best = None
    for tag, curve in annulus.curves():
        if direction in ("+theta", "-theta"):
            hits = [(Point(h, reduce_mod(x.phi, c)), h)
                    for h in curve.longitude_crossings(x.phi)]
            for p, h in hits:
                t = cyc_dist(x.theta, h, c) if direction == "+theta" else cyc_dist(h, x.theta, c)
                if t != 0 and (best is None or t < best[2]):
                    best = (tag, p, t)
        else:
            for h in curve.meridian_crossings(x.theta):
                p = Point(reduce_mod(x.theta, c), h)
                t = cyc_dist(x.phi, h, c) if direction == "+phi" else cyc_dist(h, x.phi, c)
                if t != 0 and (best is None or t < best[2]):
                    best = (tag, p, t)
    if best is None:
        raise InternalInvariantBroken(f"axis ray {direction} missed the boundary")
    return best


def _expect_hit(annulus: Annulus, x: Point, direction: str, tag: str) -> Point:
    got, p, _t = _axis_first_hit(annulus, x, direction)
    if got != tag:
        raise InternalInvariantBroken(
            f"{direction} ray from {x} met {got} before {tag}")
    return p


def rect_rv(annulus: Annulus, v) -> Rectangle:
    """The rectangle r_v: v at its start corner, the forward longitude ray
    ending on b1 and the upward meridian ray ending on b2."""
    c = annulus.circumference
    v = Point(Fraction(v[0]), Fraction(v[1])).reduced(c)
    if locate(annulus, v) != INTERIOR:
        raise NotInterior(f"{v} is not interior to the annulus")
    right = _expect_hit(annulus, v, "+theta", ON_B1)
    top = _expect_hit(annulus, v, "+phi", ON_B2)
    return Rectangle.of(v.theta, right.theta, v.phi, top.phi)


def co_rect(annulus: Annulus, v) -> Rectangle:
    """The rectangle r^v = r_u with bar(u) = v, via backward rays."""
    c = annulus.circumference
    v = Point(Fraction(v[0]), Fraction(v[1])).reduced(c)
    if locate(annulus, v) != INTERIOR:
        raise NotInterior(f"{v} is not interior to the annulus")
    left = _expect_hit(annulus, v, "-theta", ON_B2)
    bottom = _expect_hit(annulus, v, "-phi", ON_B1)
    return Rectangle.of(left.theta, v.theta, bottom.phi, v.phi)


def bar(annulus: Annulus, v) -> Point:
    """v -> opposite corner of r_v, extended to the boundary by continuity."""
    c = annulus.circumference
    v = Point(Fraction(v[0]), Fraction(v[1])).reduced(c)
    side = locate(annulus, v)
    if side == OUTSIDE:
        raise Outside(f"{v} is outside the annulus")
    if side == ON_B1:
        return _expect_hit(annulus, v, "+phi", ON_B2)
    if side == ON_B2:
        return _expect_hit(annulus, v, "+theta", ON_B1)
    r = rect_rv(annulus, v)
    return Point(r.theta2, r.phi2)


def bar_inverse(annulus: Annulus, v) -> Point:
    """The interior point u with bar(u) = v (start corner of r^v)."""
    r = co_rect(annulus, v)
    return Point(r.theta1, r.phi1)


# ---------------------------------------------------------------------------
# Validation against a diagram
# ---------------------------------------------------------------------------

def _diagram_map(diagram) -> SignedPointMap:
    if isinstance(diagram, GridDiagram):
        return characteristic(diagram)
    if isinstance(diagram, SignedPointMap):
        return diagram
    raise TypeError(f"expected a diagram, got {type(diagram)!r}")


def validate_annulus(annulus: Annulus, diagram) -> None:
    """Check conditions 1-3 exactly; raises an AnnulusInvalid subclass.

    Accepts a GridDiagram or a diagram-valued SignedPointMap (the latter is
    what the decomposition recursion works with, where vertex coordinates are
    rational).  Vertices may lie on the boundary; crossings may not.
    """
    m = _diagram_map(diagram)
    if m.circumference != annulus.circumference:
        raise AnnulusInvalid("circumference mismatch with the diagram")
    if not m.is_diagram():
        raise AnnulusInvalid("the supplied map is not a diagram characteristic")
    used_theta = sorted({p.theta for p in m.entries})
    used_phi = sorted({p.phi for p in m.entries})
    is_vertex = lambda p: m[p] != 0

    # condition 2 plus the meridian half of condition 3
    on_used_meridians = {}
    for theta in used_theta:
        points = []
        for _tag, curve in annulus.curves():
            points.extend(Point(reduce_mod(theta, m.circumference), h)
                          for h in curve.meridian_crossings(theta))
        for p in points:
            if p.phi in used_phi and not is_vertex(p):
                raise BoundaryHitsCrossing(p)
        at_used = sorted({p for p in points if p.phi in used_phi})
        if len(at_used) > 2:
            raise ForbiddenPair(at_used[0], at_used[1], "meridian")
        if len(at_used) == 2 and not (is_vertex(at_used[0]) and is_vertex(at_used[1])):
            raise ForbiddenPair(at_used[0], at_used[1], "meridian")
        on_used_meridians[theta] = points

    # longitude half of condition 3: group boundary points on used meridians
    # by their (arbitrary) height; two on one longitude must be a horizontal
    # edge, which forces both to be vertices.
    by_phi = {}
    for theta, points in on_used_meridians.items():
        for p in points:
            by_phi.setdefault(p.phi, []).append(p)
    for phi, group in by_phi.items():
        group = sorted(set(group))
        if len(group) < 2:
            continue
        if len(group) > 2:
            raise ForbiddenPair(group[0], group[1], "longitude")
        if not (is_vertex(group[0]) and is_vertex(group[1])):
            raise ForbiddenPair(group[0], group[1], "longitude")

    # meridian half applied to boundary points on used longitudes
    by_theta = {}
    for phi in used_phi:
        points = []
        for _tag, curve in annulus.curves():
            points.extend(Point(h, reduce_mod(phi, m.circumference))
                          for h in curve.longitude_crossings(phi))
        for p in points:
            if p.theta in used_theta and not is_vertex(p):
                raise BoundaryHitsCrossing(p)
        for p in points:
            by_theta.setdefault(p.theta, []).append(p)
    for theta, group in by_theta.items():
        group = sorted(set(group))
        if len(group) < 2:
            continue
        if len(group) > 2:
            raise ForbiddenPair(group[0], group[1], "meridian")
        if not (is_vertex(group[0]) and is_vertex(group[1])):
            raise ForbiddenPair(group[0], group[1], "meridian")


# ---------------------------------------------------------------------------
# Containment of rectangles and points of interest
# ---------------------------------------------------------------------------

def rect_in_annulus(annulus: Annulus, rect: Rectangle) -> bool:
    """Closed containment r <= A: the open rectangle meets no boundary and
    the center is interior."""
    c = annulus.circumference
    t1 = reduce_mod(rect.theta1, c)
    w = cyc_dist(rect.theta1, rect.theta2, c)
    f1 = reduce_mod(rect.phi1, c)
    h = cyc_dist(rect.phi1, rect.phi2, c)
    for _tag, curve in annulus.curves():
        if _segment_family_meets_open_box(curve, t1, t1 + w, f1, f1 + h, c):
            return False
    center = Point(reduce_mod(t1 + w / 2, c), reduce_mod(f1 + h / 2, c))
    return locate(annulus, center) == INTERIOR


def _segment_family_meets_open_box(curve, bx1, bx2, by1, by2, c):
    for (x1, y1), (x2, y2) in curve.segments():
        for a in range(((bx1 - x2) / c).__ceil__(), ((bx2 - x1) / c).__floor__() + 1):
            for b in range(((by1 - y2) / c).__ceil__(), ((by2 - y1) / c).__floor__() + 1):
                sx1, sy1 = x1 + a * c, y1 + b * c
                sx2, sy2 = x2 + a * c, y2 + b * c
                # s-interval with x strictly inside the box
                if sx2 <= bx1 or sx1 >= bx2 or sy2 <= by1 or sy1 >= by2:
                    continue
                dx, dy = sx2 - sx1, sy2 - sy1
                s_lo = max((bx1 - sx1) / dx, (by1 - sy1) / dy, Fraction(0))
                s_hi = min((bx2 - sx1) / dx, (by2 - sy1) / dy, Fraction(1))
                if s_lo < s_hi:
                    return True
    return False


# ---------------------------------------------------------------------------
# The swept region Omega_v and its active boundary
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SubPolyline:
    """A forward piece of a boundary curve, as lifted points, with evaluation."""

    points: tuple  # lifted, strictly increasing

    def x_span(self):
        return self.points[0][0], self.points[-1][0]

    def y_at(self, x) -> Fraction:
        for (x1, y1), (x2, y2) in zip(self.points, self.points[1:]):
            if x1 <= x <= x2:
                return y1 + (x - x1) * (y2 - y1) / (x2 - x1)
        raise InternalInvariantBroken("evaluation outside the sub-polyline")


def sub_polyline(curve: MonotoneCurve, start, end) -> SubPolyline:
    """The forward piece of the curve from start to end (both on the curve)."""
    c = curve.circumference
    start = Point(Fraction(start[0]), Fraction(start[1])).reduced(c)
    end = Point(Fraction(end[0]), Fraction(end[1])).reduced(c)
    xs = [x for x in curve.x_lifts_of(start.theta)
          if reduce_mod(curve.y_at(x) - start.phi, c) == 0]
    if not xs:
        raise InternalInvariantBroken(f"{start} is not on the curve")
    x_s = xs[0]
    px, _ = curve.period()
    xe = [x for x in curve.x_lifts_of(end.theta)
          if reduce_mod(curve.y_at(x) - end.phi, c) == 0]
    if not xe:
        raise InternalInvariantBroken(f"{end} is not on the curve")
    x_e = xe[0]
    k = ((x_s - x_e) / px).__ceil__()
    x_e = x_e + k * px
    if x_e == x_s:
        x_e += px
    pts = [(x_s, curve.y_at(x_s))]
    for x in curve.kinks_between(x_s, x_e):
        if x_s < x < x_e:
            pts.append((x, curve.y_at(x)))
    pts.append((x_e, curve.y_at(x_e)))
    return SubPolyline(tuple(pts))


@dataclass(frozen=True)
class OmegaRegions:
    """Omega_v = Delta+ u Delta- u r_v for an interior point v, with exact
    membership tests and the active boundary d*Omega_v on r^v."""

    annulus: Annulus
    v: Point
    v_bar: Point
    rv: Rectangle        # r_v, from v forward
    co: Rectangle        # r^v, ending at v
    roof: SubPolyline    # b2 between (theta_x, phi0) and (theta0, phi1)
    floor: SubPolyline   # b1 between (theta0, phi_y) and (theta1, phi0)

    @property
    def circumference(self):
        return self.annulus.circumference

    def in_rv(self, x) -> bool:
        return self.rv.contains(Point(Fraction(x[0]), Fraction(x[1])), self.circumference)

    def in_delta_plus(self, x) -> bool:
        c = self.circumference
        x = Point(Fraction(x[0]), Fraction(x[1])).reduced(c)
        tx, t0 = self.co.theta1, self.co.theta2
        if not in_cyclic(tx, t0, x.theta, c):
            return False
        x_lift = self.roof.points[0][0] + cyc_dist(tx, x.theta, c)
        if not (self.roof.points[0][0] <= x_lift <= self.roof.points[-1][0]):
            return False
        base = self.roof.points[0][1]  # lifted height of phi0 at the left pinch
        return cyc_dist(self.v.phi, x.phi, c) <= self.roof.y_at(x_lift) - base

    def in_delta_minus(self, x) -> bool:
        c = self.circumference
        x = Point(Fraction(x[0]), Fraction(x[1])).reduced(c)
        t0, t1 = self.rv.theta1, self.rv.theta2
        if not in_cyclic(t0, t1, x.theta, c):
            return False
        x_lift = self.floor.points[0][0] + cyc_dist(t0, x.theta, c)
        if not (self.floor.points[0][0] <= x_lift <= self.floor.points[-1][0]):
            return False
        top = self.floor.points[-1][1]  # lifted height of phi0 at the right pinch
        return cyc_dist(x.phi, self.v.phi, c) <= top - self.floor.y_at(x_lift)

    def in_omega(self, x) -> bool:
        return self.in_rv(x) or self.in_delta_plus(x) or self.in_delta_minus(x)

    def boundary_star_segments(self):
        """The two arms of d*Omega_v: top and right edges of r^v adjacent to v."""
        top = (Point(self.co.theta1, self.co.phi2), self.v)
        right = (Point(self.co.theta2, self.co.phi1), self.v)
        return top, right

    def on_boundary_star(self, x) -> bool:
        c = self.circumference
        x = Point(Fraction(x[0]), Fraction(x[1])).reduced(c)
        (tstart, _), (rstart, _) = self.boundary_star_segments()
        on_top = x.phi == self.v.phi and in_cyclic(tstart.theta, self.v.theta, x.theta, c)
        on_right = x.theta == self.v.theta and in_cyclic(rstart.phi, self.v.phi, x.phi, c)
        return on_top or on_right


def omega_regions(annulus: Annulus, v) -> OmegaRegions:
    c = annulus.circumference
    v = Point(Fraction(v[0]), Fraction(v[1])).reduced(c)
    rv = rect_rv(annulus, v)
    co = co_rect(annulus, v)
    roof = sub_polyline(annulus.b2, Point(co.theta1, co.phi2), Point(rv.theta1, rv.phi2))
    floor = sub_polyline(annulus.b1, Point(co.theta2, co.phi1), Point(rv.theta2, rv.phi1))
    return OmegaRegions(annulus, v, Point(rv.theta2, rv.phi2), rv, co, roof, floor)


# ---------------------------------------------------------------------------
# Boundary perturbation (Case 2 of the decomposition)
# ---------------------------------------------------------------------------

def _detour_curve(curve: MonotoneCurve, x_cross, delta, dy) -> MonotoneCurve:
    """Reroute the curve inside (x_cross - delta, x_cross + delta) through the
    single point (x_cross, y(x_cross) + dy); the rest is untouched."""
    px, _ = curve.period()
    p_minus = (x_cross - delta, curve.y_at(x_cross - delta))
    mid = (x_cross, curve.y_at(x_cross) + dy)
    p_plus = (x_cross + delta, curve.y_at(x_cross + delta))
    pts = [p_minus, mid, p_plus]
    for x in curve.kinks_between(x_cross + delta, x_cross - delta + px):
        if x_cross + delta < x < x_cross - delta + px:
            pts.append((x, curve.y_at(x)))
    return MonotoneCurve(tuple(pts), curve.winding, curve.circumference)


def perturb_boundary(annulus: Annulus, meridian_level, keep, diagram=None,
                     stable_points=()) -> Annulus:
    """Move every boundary crossing of the meridian, except the kept points,
    slightly off its height, expanding the annulus locally (b1 crossings move
    down, b2 crossings move up).  The bar map of every vertex of ``diagram``
    and of every extra point in ``stable_points`` is left unchanged; the
    modification stays within an epsilon-neighborhood of the perturbed
    crossings.
    """
    c = annulus.circumference
    theta = reduce_mod(meridian_level, c)
    keep = {Point(Fraction(p[0]), Fraction(p[1])).reduced(c) for p in keep}
    for p in keep:
        if p.theta != theta:
            raise CannotPerturb(f"kept point {p} is not on the meridian {theta}")
        if not (annulus.b1.contains_point(p) or annulus.b2.contains_point(p)):
            raise CannotPerturb(f"kept point {p} is not on the boundary")

    interest_t = {theta}
    interest_f = set()
    m = _diagram_map(diagram) if diagram is not None else None
    if m is not None:
        interest_t.update(p.theta for p in m.entries)
        interest_f.update(p.phi for p in m.entries)
    for _tag, curve in annulus.curves():
        for x, y in curve.breakpoints:
            interest_t.add(reduce_mod(x, c))
            interest_f.add(reduce_mod(y, c))
        interest_f.update(curve.meridian_crossings(theta))
    eps0 = min(_min_gap(interest_t, c), _min_gap(interest_f, c)) / 2

    watched = list(stable_points)
    if m is not None:
        watched.extend(m.entries)
    before = {}
    for raw in watched:
        p = Point(Fraction(raw[0]), Fraction(raw[1])).reduced(c)
        side = locate(annulus, p)
        before[p] = (side, rect_rv(annulus, p) if side == INTERIOR else None)

    eps = eps0
    for _attempt in range(60):
        try:
            new_b = {}
            for tag, curve in annulus.curves():
                for h in sorted(curve.meridian_crossings(theta)):
                    if Point(theta, h) in keep:
                        continue
                    xs = [x for x in curve.x_lifts_of(theta)
                          if reduce_mod(curve.y_at(x) - h, c) == 0]
                    x = xs[0]
                    y = curve.y_at(x)
                    rise = min(y - curve.y_at(x - eps), curve.y_at(x + eps) - y)
                    dy = -rise / 2 if tag == ON_B1 else rise / 2
                    curve = _detour_curve(curve, x, eps, dy)
                new_b[tag] = curve
            candidate = Annulus(new_b[ON_B1], new_b[ON_B2], c)
        except (AnnulusInvalid, SlopeViolation, CurveError):
            eps = eps / 2
            continue
        if not _bars_unchanged(candidate, before):
            eps = eps / 2
            continue
        return candidate
    raise CannotPerturb(f"no valid perturbation near meridian {theta}")


def _bars_unchanged(candidate: Annulus, before) -> bool:
    for p, data in before.items():
        side = locate(candidate, p)
        if side != data[0]:
            return False
        if side == INTERIOR and rect_rv(candidate, p) != data[1]:
            return False
    return True


def _min_gap(values, c) -> Fraction:
    vals = sorted(reduce_mod(v, c) for v in values)
    if not vals:
        return Fraction(c)
    if len(vals) == 1:
        return Fraction(c)
    gaps = [b - a for a, b in zip(vals, vals[1:]) if b > a]
    wrap = vals[0] + c - vals[-1]
    if wrap > 0:
        gaps.append(wrap)
    return min(gaps)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def serialize_annulus(annulus: Annulus) -> str:
    p, q = annulus.winding

    def fmt(curve):
        return " ".join(f"({x},{y})" for x, y in curve.breakpoints)

    return ("annulus {} winding {} {}\nB1: {}\nB2: {}\n".format(
        annulus.circumference, p, q, fmt(annulus.b1), fmt(annulus.b2)))


def parse_annulus(text: str) -> Annulus:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if len(lines) != 3:
        raise GridSyntaxError(f"expected 3 content lines, got {len(lines)}")
    head = lines[0].split()
    if len(head) != 5 or head[0] != "annulus" or head[2] != "winding":
        raise GridSyntaxError(f"bad header {lines[0]!r}")
    try:
        c = Fraction(head[1])
        p, q = int(head[3]), int(head[4])
    except (ValueError, ZeroDivisionError):
        raise GridSyntaxError(f"bad header {lines[0]!r}") from None

    def parse_curve(line, tag):
        if not line.startswith(tag + ":"):
            raise GridSyntaxError(f"expected {tag}: line")
        pts = []
        for tok in line[len(tag) + 1:].split():
            if not (tok.startswith("(") and tok.endswith(")")):
                raise GridSyntaxError(f"bad point {tok!r}")
            try:
                x, y = tok[1:-1].split(",")
                pts.append((Fraction(x), Fraction(y)))
            except (ValueError, ZeroDivisionError):
                raise GridSyntaxError(f"bad point {tok!r}") from None
        try:
            return MonotoneCurve(tuple(pts), (p, q), c)
        except (SlopeViolation, CurveError) as err:
            raise GridSyntaxError(str(err)) from None
    b1 = parse_curve(lines[1], "B1")
    b2 = parse_curve(lines[2], "B2")
    return Annulus(b1, b2, c)
