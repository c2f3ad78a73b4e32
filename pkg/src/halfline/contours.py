"""Contour systems for the half-line solution representation.

The inversion contour has a component on the real line (indented above the
origin by a small semicircle) plus one component per decay sector

    { arg lam in (0, pi) : Re(a lam^n) < 0 },

each traversed with negative orientation as the boundary of
{ Im lam > 0, Re(a lam^n) < 0, |lam| > R }: in along the lower-angle ray,
anticlockwise along the arc |lam| = R, back out along the upper-angle ray.
For an admissible problem the number of sectors always equals the
boundary-condition count.

``deform_for_time`` prepares a system for t > 0 quadrature: every ray is
rotated, about its finite endpoint, into the adjacent sector where the
evolution factor exp(-a lam^n t) decays.  Rays on the real axis must move
off it (their angle-0 neighborhood is neutral or growing for the
exponential); rays already on sector boundaries are rotated outward so the
quadrature gains the exp(-c r^n t) envelope instead of relying on the
marginal exp(i lam x) factor.  Arc endpoints at |lam| = R are preserved.
The integral values are unchanged by Cauchy's theorem: the swept sectors
contain no singularities of the integrands and the evolution factor decays
in their interior.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

from .errors import NoComponents, NoDecaySector
from .problems import HalfLineProblem, classify, validate
from .quadrature import PathSegment

__all__ = ["ContourSystem", "decay_sectors", "build_contours", "deform_for_time"]

_ANGLE_SNAP = 1e-12


def _sign_edges(n: int, a: complex):
    """Angles where Re(a e^{i n theta}) changes sign: an arithmetic
    progression with step pi/n."""
    phi = cmath.phase(a)
    first = (math.pi / 2.0 - phi) / n
    step = math.pi / n
    return first, step


def _edge_below(angle: float, n: int, a: complex) -> float:
    first, step = _sign_edges(n, a)
    k = math.floor((angle - first) / step - 1e-9)
    return first + k * step


def _edge_above(angle: float, n: int, a: complex) -> float:
    first, step = _sign_edges(n, a)
    k = math.ceil((angle - first) / step + 1e-9)
    return first + k * step


def _evo_decays(theta: float, n: int, a: complex) -> bool:
    """True where exp(-a lam^n t) decays, i.e. Re(a e^{i n theta}) > 0."""
    return (a * cmath.exp(1j * n * theta)).real > 0.0


def decay_sectors(n: int, a: complex) -> list:
    """Sectors of (0, pi) where Re(a lam^n) < 0, ascending, endpoints
    snapped to 0 and pi."""
    first, step = _sign_edges(n, a)
    k_lo = math.floor((0.0 - first) / step) - 1
    k_hi = math.ceil((math.pi - first) / step) + 1
    edges = [first + k * step for k in range(k_lo, k_hi + 1)]
    cuts = sorted({0.0, math.pi, *(e for e in edges if _ANGLE_SNAP < e < math.pi - _ANGLE_SNAP)})
    out = []
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        if hi - lo < 1e-9:
            continue
        mid = 0.5 * (lo + hi)
        if not _evo_decays(mid, n, a):
            out.append((lo, hi))
    return out


@dataclass(frozen=True)
class ContourSystem:
    """Real-line component plus one negatively oriented sector component
    per boundary condition."""

    n: int
    a: complex
    R: float
    delta: float
    sectors: tuple
    gamma0: tuple            # segments of the indented real contour
    gammas: tuple            # gammas[k-1] = segments of the k-th component
    deformed: bool = False

    @property
    def count(self) -> int:
        return len(self.gammas)

    def all_segments(self):
        yield from self.gamma0
        for g in self.gammas:
            yield from g


def build_contours(problem: HalfLineProblem, R: float, delta: float | None = None) -> ContourSystem:
    """Undeformed contour system for a validated problem."""
    validate(problem)
    n, a = problem.order, problem.a
    if delta is None:
        delta = min(0.1, R / 10.0)
    sectors = decay_sectors(n, a)
    expected = classify(n, a).count
    if not sectors:
        raise NoComponents(f"no decay sectors in the upper half plane for (n={n}, a={a})")
    if len(sectors) != expected:
        raise NoComponents(
            f"found {len(sectors)} sectors, expected {expected} for (n={n}, a={a})")
    gamma0 = (
        PathSegment.ray(-delta, math.pi, 0.0, math.inf, orientation=-1),
        PathSegment.arc(0.0, delta, math.pi, 0.0, orientation=1),
        PathSegment.ray(delta, 0.0, 0.0, math.inf, orientation=1),
    )
    gammas = []
    for lo, hi in sectors:
        gammas.append((
            PathSegment.ray(0.0, lo, R, math.inf, orientation=-1),
            PathSegment.arc(0.0, R, lo, hi, orientation=1),
            PathSegment.ray(0.0, hi, R, math.inf, orientation=1),
        ))
    return ContourSystem(n=n, a=a, R=R, delta=delta, sectors=tuple(sectors),
                         gamma0=gamma0, gammas=tuple(gammas))


def _rotation_target(angle: float, n: int, a: complex, frac: float,
                     side: str) -> float:
    """Rotated direction for a ray currently pointing along ``angle``.

    ``side`` picks the preferred rotation sense when both neighbors decay:
    "up" favors increasing angle, "down" decreasing.  Raises
    :class:`NoDecaySector` if neither neighboring sector decays.
    """
    eps = 1e-7 * math.pi / n
    up_ok = _evo_decays(angle + eps, n, a)
    down_ok = _evo_decays(angle - eps, n, a)
    if not up_ok and not down_ok:
        raise NoDecaySector(
            f"no adjacent decay sector at angle {angle:.6f} for (n={n}, a={a})")
    go_up = up_ok if (up_ok != down_ok) else (side == "up")
    if go_up:
        width = _edge_above(angle, n, a) - angle
        return angle + frac * width
    width = angle - _edge_below(angle, n, a)
    return angle - frac * width


def deform_for_time(cs: ContourSystem, theta_fraction: float = 0.5) -> ContourSystem:
    """Rotate every ray into an adjacent evolution-decay sector.

    Rays pivot about their finite endpoint (the indentation endpoints
    +-delta for the real-line component, the arc junctions |lam| = R for
    the sector components), so arcs and junction points are unchanged.
    """
    if not (0.0 < theta_fraction < 1.0):
        raise ValueError("theta_fraction must be in (0, 1)")
    n, a = cs.n, cs.a

    def rotate(seg: PathSegment, side: str) -> PathSegment:
        target = _rotation_target(seg.angle, n, a, theta_fraction, side)
        pivot = seg.point(seg.r0)
        return PathSegment.ray(complex(pivot), target, 0.0, math.inf,
                               orientation=seg.orientation)

    left, semi, right = cs.gamma0
    # prefer rotating toward the upper half plane when both sides decay
    gamma0 = (rotate(left, "down"), semi, rotate(right, "up"))
    gammas = []
    for segs in cs.gammas:
        inward, arc, outward = segs
        gammas.append((rotate(inward, "down"), arc, rotate(outward, "up")))
    return replace(cs, gamma0=gamma0, gammas=tuple(gammas), deformed=True)
