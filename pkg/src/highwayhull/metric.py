"""Scalar geometry of Lp travel with a speed-v highway on the x-axis.

Walking speed is 1 everywhere in the plane; the x-axis additionally carries a
lane of speed v > 1.  Travel time between two points is the cheaper of walking
straight and walking to the axis, riding it, and walking off.  Everything in
this module is a pure function of immutable inputs.

Conventions: the metric exponent p lies in [1, inf] and the speed v in
(1, inf]; both infinities are math.inf and every infinite case takes an exact
isinf branch.  Discriminating curves are computed in the upper half-plane;
generator height enters through |y|, callers working below the axis mirror.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

from scipy.optimize import brentq

SOLVER_XTOL = 1e-12
SOLVER_MAXITER = 200
FD_STEP = 1e-6
_MAX_DOUBLINGS = 200

INF = math.inf


class InvalidInputError(ValueError):
    """Parameters or coordinates outside the model's domain."""


class NumericError(ArithmeticError):
    """An iterative solve failed to bracket or converge."""


class Point(NamedTuple):
    x: float
    y: float


def _require_finite(pt: Point) -> None:
    if not (math.isfinite(pt.x) and math.isfinite(pt.y)):
        raise InvalidInputError(f"non-finite point {pt!r}")


def alpha(p: float, v: float) -> float:
    """Incidence angle of shortest paths entering the highway, in radians."""
    _check_params(p, v)
    if math.isinf(p):
        return math.pi / 4
    if p == 1 or math.isinf(v):
        return 0.0
    num = v ** (1.0 / (1.0 - p))
    den = math.sqrt(v ** (2.0 / (1.0 - p)) + (1.0 - v ** (p / (1.0 - p))) ** (2.0 / p))
    return math.asin(num / den)


def _tan_alpha(p: float, v: float) -> float:
    if math.isinf(p):
        return 1.0
    if p == 1 or math.isinf(v):
        return 0.0
    return v ** (1.0 / (1.0 - p)) / (1.0 - v ** (p / (1.0 - p))) ** (1.0 / p)


def _check_params(p: float, v: float) -> None:
    if not (p >= 1.0):
        raise InvalidInputError(f"p must be >= 1, got {p}")
    if not (v > 1.0):
        raise InvalidInputError(f"v must be > 1, got {v}")


@dataclass(frozen=True)
class MetricParams:
    p: float
    v: float
    alpha: float
    tan_alpha: float
    descent_cost: float

    @classmethod
    def make(cls, p: float, v: float) -> "MetricParams":
        _check_params(p, v)
        a = alpha(p, v)
        t = _tan_alpha(p, v)
        if math.isinf(p):
            c = 1.0
        else:
            c = (1.0 + t**p) ** (1.0 / p)
        return cls(p=p, v=v, alpha=a, tan_alpha=t, descent_cost=c)

    @property
    def inv_v(self) -> float:
        return 0.0 if math.isinf(self.v) else 1.0 / self.v


def reach_coefficient(m: MetricParams) -> float:
    """K with: a, b in one walking region implies |ax - bx| <= K (|ay| + |by|).

    From direct <= highway (or the gap being negative): |dx| (1 - 1/v) <=
    (|ay| + |by|) (c - tan(alpha)/v).  Used only for pruning, never for
    membership decisions.
    """
    if math.isinf(m.v):
        return m.descent_cost
    return (m.descent_cost - m.tan_alpha / m.v) / (1.0 - 1.0 / m.v)


def lp_distance(a: Point, b: Point, p: float) -> float:
    if not (p >= 1.0):
        raise InvalidInputError(f"p must be >= 1, got {p}")
    _require_finite(a)
    _require_finite(b)
    dx = abs(a.x - b.x)
    dy = abs(a.y - b.y)
    if math.isinf(p):
        return max(dx, dy)
    if p == 1.0:
        return dx + dy
    if p == 2.0:
        return math.hypot(dx, dy)
    if dx == 0.0 or dy == 0.0:
        return dx + dy
    # factor out the larger term so the pow never overflows
    hi, lo = (dx, dy) if dx >= dy else (dy, dx)
    return hi * (1.0 + (lo / hi) ** p) ** (1.0 / p)


def entry_points(q: Point, m: MetricParams) -> tuple[Point, Point]:
    """Left and right highway entry points of q (coincide when alpha = 0)."""
    off = abs(q.y) * m.tan_alpha
    return Point(q.x - off, 0.0), Point(q.x + off, 0.0)


def highway_time(a: Point, b: Point, m: MetricParams) -> Optional[float]:
    """Time of the best path that rides the highway from a to b.

    None when the right entry of the leftward point lies beyond the left
    entry of the rightward one: no along-highway traversal exists.
    """
    _require_finite(a)
    _require_finite(b)
    if (a.x, abs(a.y)) > (b.x, abs(b.y)):
        a, b = b, a
    gap = (b.x - abs(b.y) * m.tan_alpha) - (a.x + abs(a.y) * m.tan_alpha)
    if gap < 0.0:
        return None
    ride = 0.0 if math.isinf(m.v) else gap / m.v
    return (abs(a.y) + abs(b.y)) * m.descent_cost + ride


def _direct_time(a: Point, b: Point, m: MetricParams) -> float:
    # a straight path lying on the highway moves at speed v
    if a.y == 0.0 and b.y == 0.0:
        return 0.0 if math.isinf(m.v) else abs(a.x - b.x) / m.v
    return lp_distance(a, b, m.p)


def time_distance(a: Point, b: Point, m: MetricParams) -> float:
    hw = highway_time(a, b, m)
    direct = lp_distance(a, b, m.p)
    return direct if hw is None else min(direct, hw)


def in_walking_region(q: Point, u: Point, m: MetricParams) -> bool:
    """True iff walking straight is no slower than any highway route, ties in.

    Walking means moving at unit speed, so two distinct points on the
    highway are not in each other's region: riding beats walking there.
    """
    hw = highway_time(q, u, m)
    if hw is None:
        return True
    return lp_distance(q, u, m.p) <= hw


def shortest_path(a: Point, b: Point, m: MetricParams) -> list[Point]:
    """A representative shortest time-path as a polyline."""
    hw = highway_time(a, b, m)
    if hw is None or lp_distance(a, b, m.p) <= hw:
        return [a] if a == b else [a, b]
    if (a.x, abs(a.y)) > (b.x, abs(b.y)):
        a, b = b, a
    enter = entry_points(a, m)[1]
    leave = entry_points(b, m)[0]
    path = [a, enter, leave, b]
    return [pt for i, pt in enumerate(path) if i == 0 or pt != path[i - 1]]


def polyline_time(path: list[Point], m: MetricParams) -> float:
    """Traversal time of a polyline; segments lying on the axis ride at v."""
    total = 0.0
    for a, b in zip(path, path[1:]):
        total += _direct_time(a, b, m)
    return total


# -- pairwise closures --------------------------------------------------------

@dataclass(frozen=True)
class PairClosure:
    kind: str  # segment | rectangle | diamond
    corners: tuple[Point, ...]


def pair_closure(a: Point, b: Point, p: float) -> PairClosure:
    """Smallest metric-convex set containing a and b (highway unused)."""
    _require_finite(a)
    _require_finite(b)
    if not (p >= 1.0):
        raise InvalidInputError(f"p must be >= 1, got {p}")
    if p == 1.0:
        x0, x1 = min(a.x, b.x), max(a.x, b.x)
        y0, y1 = min(a.y, b.y), max(a.y, b.y)
        corners = [Point(x0, y0), Point(x1, y0), Point(x1, y1), Point(x0, y1)]
        return PairClosure("rectangle", _dedupe_cycle(corners))
    if math.isinf(p):
        # box in rotated coordinates u = x + y, w = y - x (sides of slope +-1)
        ua, wa = a.x + a.y, a.y - a.x
        ub, wb = b.x + b.y, b.y - b.x
        u0, u1 = min(ua, ub), max(ua, ub)
        w0, w1 = min(wa, wb), max(wa, wb)
        corners = [
            Point((u0 - w1) / 2.0, (u0 + w1) / 2.0),
            Point((u1 - w1) / 2.0, (u1 + w1) / 2.0),
            Point((u1 - w0) / 2.0, (u1 + w0) / 2.0),
            Point((u0 - w0) / 2.0, (u0 + w0) / 2.0),
        ]
        return PairClosure("diamond", _dedupe_cycle(corners))
    corners = [a] if a == b else [a, b]
    return PairClosure("segment", tuple(corners))


def _dedupe_cycle(pts: list[Point]) -> tuple[Point, ...]:
    out: list[Point] = []
    for pt in pts:
        if not out or pt != out[-1]:
            out.append(pt)
    if len(out) > 1 and out[0] == out[-1]:
        out.pop()
    return tuple(out)


# -- wavefronts ---------------------------------------------------------------

@dataclass(frozen=True)
class WavefrontShape:
    fan_left: Point
    fan_right: Point
    highway_left: Point
    highway_right: Point
    radius: float


def wavefront(q: Point, t: float, m: MetricParams) -> WavefrontShape:
    """Shape of the time-t wavefront from a point on the highway.

    The upper boundary is the p-circle arc between fan_left and fan_right
    plus the tangent segments down to the highway endpoints (+-v t, 0).  For
    v = inf the tangent segments degenerate to the horizontal line y = t,
    recorded as infinite highway abscissae.
    """
    if q.y != 0.0:
        raise InvalidInputError("wavefront source must lie on the highway")
    if t < 0.0:
        raise InvalidInputError("negative radius")
    if math.isinf(m.p):
        fx = t
    elif math.isinf(m.v):
        fx = 0.0
    else:
        fx = t * m.v ** (1.0 / (1.0 - m.p))
    fy = _p_circle_y(fx, t, m.p)
    hx = INF if math.isinf(m.v) else m.v * t
    return WavefrontShape(
        fan_left=Point(q.x - fx, fy),
        fan_right=Point(q.x + fx, fy),
        highway_left=Point(-hx if math.isinf(hx) else q.x - hx, 0.0),
        highway_right=Point(hx if math.isinf(hx) else q.x + hx, 0.0),
        radius=t,
    )


def _p_circle_y(x: float, t: float, p: float) -> float:
    if math.isinf(p):
        return t
    if t == 0.0:
        return 0.0
    r = abs(x) / t
    return t * (max(0.0, 1.0 - r**p)) ** (1.0 / p)


# -- discriminating curves ----------------------------------------------------

@dataclass(frozen=True)
class DiscriminatingCurve:
    """Boundary of a generator's walking region on one side, y as f(x).

    On the curve the direct travel time equals the highway travel time; above
    it (toward the generator) direct wins.  Defined for x beyond the entry
    offset; for p = 1 the curve ends at the vertical wall of the L1 region.
    """

    generator: Point
    side: str  # left | right
    params: MetricParams

    def __post_init__(self) -> None:
        if self.side not in ("left", "right"):
            raise InvalidInputError(f"side must be left or right, got {self.side!r}")
        _require_finite(self.generator)


def disc_curve_y(c: DiscriminatingCurve, x: float, method: str = "auto") -> Optional[float]:
    """Ordinate of the curve at abscissa x; None inside the entry offset.

    method="auto" uses closed forms for p in {1, 2, inf}; method="generic"
    always solves the defining equality by bracketed root finding.
    """
    if method not in ("auto", "generic"):
        raise InvalidInputError(f"unknown method {method!r}")
    m = c.params
    xq, yq = c.generator.x, abs(c.generator.y)
    dx = x - xq if c.side == "right" else xq - x
    if dx < 0.0:
        raise InvalidInputError("abscissa on the wrong side of the generator")
    if method == "auto":
        if m.p == 1.0:
            return _curve_p1(dx, yq, m)
        if math.isinf(m.p):
            return _curve_pinf(dx, yq)
        if m.p == 2.0:
            return _curve_p2(dx, yq, m)
    return _curve_generic(dx, yq, m)


def _curve_p1(dx: float, yq: float, m: MetricParams) -> Optional[float]:
    beta = (1.0 - m.inv_v) / 2.0
    wall = yq / beta
    if dx > wall:
        return None
    return beta * dx


def _curve_pinf(dx: float, yq: float) -> Optional[float]:
    if dx < yq:
        return None
    return dx - yq


def _curve_p2(dx: float, yq: float, m: MetricParams) -> Optional[float]:
    if math.isinf(m.v):
        if yq == 0.0:
            return 0.0 if dx == 0.0 else None
        return dx * dx / (4.0 * yq)
    if yq == 0.0 and dx == 0.0:
        return 0.0
    off = yq * m.tan_alpha
    if dx < off:
        return None
    sa, ca = math.sin(m.alpha), math.cos(m.alpha)
    a2 = sa * sa
    b2 = -2.0 * (yq * (1.0 + ca * ca) + dx * sa * ca)
    c2 = dx * dx + yq * yq - (yq * ca + dx * sa) ** 2
    disc = max(0.0, b2 * b2 - 4.0 * a2 * c2)
    # smaller root in the cancellation-safe form (product of roots = c2/a2)
    return 2.0 * c2 / (-b2 + math.sqrt(disc))


def _region_gap(dx: float, yq: float, y: float, m: MetricParams) -> float:
    return dx - (yq + y) * m.tan_alpha


def _curve_equality(dx: float, yq: float, y: float, m: MetricParams) -> float:
    """direct minus highway for probe (dx, y) against generator (0, yq)."""
    direct = lp_distance(Point(0.0, yq), Point(dx, y), m.p)
    hw = (yq + y) * m.descent_cost + _region_gap(dx, yq, y, m) * m.inv_v
    return direct - hw


def _curve_generic(dx: float, yq: float, m: MetricParams) -> Optional[float]:
    t = m.tan_alpha
    off = yq * t
    if dx < off:
        return None
    if dx == off:
        return 0.0
    if yq == 0.0:
        # degenerate generator on the axis: the boundary is the ascent ray
        # (tangency, not a sign change), or a vertical ray when alpha = 0
        return dx / t if t > 0.0 else None

    def g(y: float) -> float:
        return _curve_equality(dx, yq, y, m)

    if t > 0.0:
        yhi = (dx - off) / t  # height where the along-highway gap closes
        if g(0.0) <= 0.0:
            return 0.0
        ghi = g(yhi)
        if ghi >= 0.0:
            # tangent or roundoff-degenerate at the gap-zero height (exact
            # for p = inf, whose curve is the gap-zero line itself)
            return yhi
        return float(brentq(g, 0.0, yhi, xtol=SOLVER_XTOL, maxiter=SOLVER_MAXITER))

    # alpha = 0: either p = 1 (kinked linear equality) or v = inf
    if m.p == 1.0:
        gq = g(yq)
        if gq > 0.0:
            return None  # beyond the vertical wall of the L1 region
        if gq == 0.0:
            return yq  # exactly at the wall: lowest boundary point
        if g(0.0) <= 0.0:
            return 0.0
        return float(brentq(g, 0.0, yq, xtol=SOLVER_XTOL, maxiter=SOLVER_MAXITER))
    # v = inf: g decreases strictly to -2 yq; a mean-value bound on
    # (y + yq)^p - (y - yq)^p >= dx^p gives a guaranteed upper bracket
    yhi = yq + (dx**m.p / (2.0 * yq * m.p)) ** (1.0 / (m.p - 1.0))
    if not math.isfinite(yhi):
        yhi = max(1.0, 2.0 * yq, dx)
    for _ in range(_MAX_DOUBLINGS):
        if g(yhi) < 0.0:
            break
        yhi *= 2.0
    else:
        raise NumericError("failed to bracket the curve ordinate")
    if g(0.0) <= 0.0:
        return 0.0
    return float(brentq(g, 0.0, yhi, xtol=SOLVER_XTOL, maxiter=SOLVER_MAXITER))


def disc_curve_slope(c: DiscriminatingCurve, x: float) -> float:
    """dy/dx of the curve at abscissa x, from the defining equality.

    Implicit differentiation of direct(x, y) = highway(x, y) is exact for
    every p; the finite-difference route survives as a test cross-check.
    """
    m = c.params
    xq, yq = c.generator.x, abs(c.generator.y)
    dx = x - xq if c.side == "right" else xq - x
    sgn = 1.0 if c.side == "right" else -1.0
    if dx < 0.0:
        raise InvalidInputError("abscissa on the wrong side of the generator")
    if math.isinf(m.p):
        if dx < yq:
            raise InvalidInputError("abscissa inside the entry offset")
        return sgn
    if m.p == 1.0:
        beta = (1.0 - m.inv_v) / 2.0
        if dx >= yq / beta:
            raise InvalidInputError("abscissa at or beyond the L1 wall")
        return sgn * beta
    if yq == 0.0:
        if m.tan_alpha == 0.0:
            if dx == 0.0:
                return INF
            raise InvalidInputError("abscissa outside the degenerate vertical ray")
        return sgn / m.tan_alpha
    y = disc_curve_y(c, x)
    if y is None:
        raise InvalidInputError("abscissa inside the entry offset")
    return sgn * _implicit_slope(dx, y, yq, m)


def _implicit_slope(dx: float, y: float, yq: float, m: MetricParams) -> float:
    """Unsigned curve slope -Fx/Fy at known offset dx and ordinate y (1<p<inf)."""
    d = lp_distance(Point(0.0, yq), Point(dx, y), m.p)
    if d == 0.0:
        return INF
    fx = _lp_partial(dx, d, m.p) - m.inv_v
    fy = math.copysign(_lp_partial(abs(y - yq), d, m.p), y - yq) - (
        m.descent_cost - m.tan_alpha * m.inv_v
    )
    if fy == 0.0:
        return INF
    return -fx / fy


def _lp_partial(u: float, d: float, p: float) -> float:
    # d/du of (u^p + w^p)^(1/p) at distance d, u >= 0
    if u == 0.0:
        return 0.0
    return (u / d) ** (p - 1.0)


# -- lower-bound instance height ----------------------------------------------

def y0_solver(p: float, eps: float) -> float:
    """Height where two points with x-gap eps sit exactly on each other's
    walking-region boundary under v = inf."""
    if not eps > 0.0:
        raise InvalidInputError(f"eps must be positive, got {eps}")
    m = MetricParams.make(p, INF)

    def g(y: float) -> float:
        c = DiscriminatingCurve(Point(0.0, y), "right", m)
        try:
            val = disc_curve_y(c, eps)
        except NumericError:
            return 1.0  # ordinate beyond float range: y is far too small
        if val is None:
            return 1.0  # region does not reach eps yet: y is too small
        return val - y

    lo = eps * 1e-6
    hi = eps
    if g(hi) >= 0.0:
        raise NumericError("failed to bracket the gap height")
    return float(brentq(g, lo, hi, xtol=SOLVER_XTOL * max(1.0, eps), maxiter=SOLVER_MAXITER))
