"""Spectral structure of the transform family.

Three families of checks:

* remainder extraction: F_k[Sf] - lam^n F_k[f] is a polynomial in lam of
  degree < n whose coefficients come from the complementary boundary forms;
  the fit is compared against that closed form, exactly for k = 0 and in
  magnitude for the sector transforms (whose sign pattern depends on the
  branch ordering);
* diagonalization defects: integrating exp(i lam x) times the remainder
  over a component tests whether the family diagonalizes the spatial
  operator directly (type I, remainder integral vanishes) or only after
  division by lam^n (type II).  Components with a ray on the real axis
  carry a polynomially growing oscillatory integrand there, so the type I
  integral diverges; the check detects that by a truncation scan.
* representation identity: inverting lam^(-n) F_k[Sf] over the components,
  with the real-line contour genuinely indented above the origin, must
  reproduce the same values as inverting F_k[f].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import FitResidualTooLarge, NonpositiveX
from .quadrature import (ExpDecay, PathSegment, gamma0_monomial_integral,
                         ray_monomial_tail, segment_nodes)

__all__ = [
    "RemainderReport",
    "TypeIReport",
    "TypeIIReport",
    "RepresentationReport",
    "remainder_samples",
    "remainder_polynomial",
    "remainder_closed_form",
    "remainder_report",
    "check_type_I",
    "check_type_II",
    "expected_type_I",
    "spectral_representation_check",
]


# ---------------------------------------------------------------------------
# polynomial remainders


def remainder_samples(pair, datum, k: int, lams=None):
    """(lams, F_k[Sf](lams) - lams^n F_k[f](lams)) off the singular circle."""
    if lams is None:
        r = pair.R + 1.5
        phis = np.linspace(0.0, 2.0 * np.pi, 4 * pair.n + 7, endpoint=False)
        lams = r * np.exp(1j * phis)
    lams = np.atleast_1d(np.asarray(lams, dtype=complex))
    vals = (pair.forward(datum, k, lams, applied=True)
            - lams ** pair.n * pair.forward(datum, k, lams))
    return lams, vals


def remainder_polynomial(pair, datum, k: int, *, rel_tol: float = 1e-7,
                         degree: int | None = None) -> np.ndarray:
    """Coefficients (ascending) of the polynomial remainder.

    ``degree`` defaults to n - 1 (the claimed bound); fitting with a larger
    basis exposes spurious high-order coefficients, which callers can then
    bound directly.
    """
    deg = pair.n - 1 if degree is None else int(degree)
    lams, vals = remainder_samples(pair, datum, k)
    V = np.vander(lams, deg + 1, increasing=True)
    coeffs, *_ = np.linalg.lstsq(V, vals, rcond=None)
    resid = float(np.abs(V @ coeffs - vals).max())
    scale = max(float(np.abs(vals).max()), 1e-300)
    if resid > rel_tol * scale + 1e-12:
        raise FitResidualTooLarge(
            f"transform {k} remainder is not polynomial of degree <= {deg}: "
            f"fit residual {resid:.3e} against scale {scale:.3e}")
    return coeffs


def remainder_closed_form(pair, datum) -> np.ndarray:
    """Remainder coefficients from the complementary forms: the remainder
    equals sum_r (B_c u)_r M[1,r](lam) / (2 pi) with u the boundary jet."""
    u = datum.boundary_derivatives(pair.n)
    bc = pair.forms.B_c @ u
    out = np.zeros(pair.n, dtype=complex)
    for r in range(pair.m):
        out += bc[r] * pair.cm.coeffs[0, r]
    return out / (2.0 * np.pi)


@dataclass(frozen=True)
class RemainderReport:
    coeffs: np.ndarray
    closed_form: np.ndarray
    zero_dev: float
    magnitude_dev: float
    passed: bool


def remainder_report(pair, datum, *, tol: float = 1e-8) -> RemainderReport:
    """Fit the remainder for every component and compare with the closed
    form: equality at k = 0, coefficient magnitudes for the sectors."""
    closed = remainder_closed_form(pair, datum)
    scale = max(float(np.abs(closed).max()), 1e-6)
    coeffs = np.array([remainder_polynomial(pair, datum, k)
                       for k in range(pair.N + 1)])
    zero_dev = float(np.abs(coeffs[0] - closed).max()) / scale
    mag_devs = [float(np.abs(np.abs(coeffs[k]) - np.abs(closed)).max()) / scale
                for k in range(1, pair.N + 1)]
    magnitude_dev = max(mag_devs, default=0.0)
    return RemainderReport(coeffs=coeffs, closed_form=closed,
                           zero_dev=zero_dev, magnitude_dev=magnitude_dev,
                           passed=bool(zero_dev <= tol and magnitude_dev <= tol))


# ---------------------------------------------------------------------------
# remainder contour integrals


def _poly_eval(beta: np.ndarray, lam: np.ndarray) -> np.ndarray:
    out = np.zeros(lam.shape, dtype=complex)
    for b in beta[::-1]:
        out = out * lam + b
    return out


def _poly_ray_decay(x_min: float, s: float, beta: np.ndarray, r0: float,
                    inv_power: int, tol: float) -> ExpDecay:
    """Envelope for exp(i lam x) lam^(-inv_power) P(lam) on an off-axis ray.

    The polynomial growth is folded into the log scale at the eventual
    truncation radius, iterating until the radius stabilizes."""
    mag = sum(abs(b) * r0 ** max(j - inv_power, 0) for j, b in enumerate(beta))
    log_scale = math.log(max(mag, 1e-300))
    target = math.log(tol / 10.0)
    for _ in range(6):
        d = ExpDecay.linear(x_min * s, r0, log_scale)
        r1 = d.radius(target)
        mag1 = sum(abs(b) * max(r1, r0) ** max(j - inv_power, 0)
                   for j, b in enumerate(beta))
        new = math.log(max(mag1, 1e-300))
        if new <= log_scale + 1e-9:
            break
        log_scale = new
    return ExpDecay.linear(x_min * s, r0, log_scale)


def _poly_component_integral(pair, k: int, xs: np.ndarray, beta: np.ndarray,
                             inv_power: int, truncate: float | None = None):
    """Integral over component k of exp(i lam x) lam^(-inv_power) P(lam).

    Real-axis rays use exact exponential-integral tails when inv_power > 0
    and finite truncation when ``truncate`` is given; off-axis rays use
    decay models sized for the polynomial growth."""
    n = pair.n
    params = pair.params
    x_min, x_max = float(xs.min()), float(xs.max())
    out = np.zeros(xs.size, dtype=complex)

    def add_nodes(lam, w):
        nonlocal out
        vals = w * _poly_eval(beta, lam)
        if inv_power:
            vals = vals * lam ** (-float(inv_power))
        out += np.exp(1j * np.multiply.outer(xs, lam)) @ vals

    for seg in pair.contours.gammas[k - 1]:
        if seg.kind == "arc":
            lam, w = segment_nodes(seg, params,
                                   osc=lambda u: seg.radius * (x_max + 1.0) + n)
            add_nodes(lam, w)
            continue
        s = math.sin(seg.angle)
        if abs(s) < 1e-12:
            if truncate is not None:
                fin = PathSegment.ray(seg.base, seg.angle, seg.r0, truncate,
                                      seg.orientation)
                lam, w = segment_nodes(fin, params, osc=lambda u: x_max + 1.0)
                add_nodes(lam, w)
            else:
                if inv_power <= 0:
                    raise ValueError("real-axis ray with growing integrand "
                                     "needs a truncation radius")
                for i, x in enumerate(xs):
                    acc = 0.0 + 0.0j
                    for j, b in enumerate(beta):
                        if b != 0.0:
                            acc += b * ray_monomial_tail(seg.angle, seg.r0,
                                                         float(x), inv_power - j)
                    out[i] += seg.orientation * acc
            continue
        seg_eff = seg
        if truncate is not None and not seg.finite:
            seg_eff = PathSegment.ray(seg.base, seg.angle, seg.r0, truncate,
                                      seg.orientation)
        if seg_eff.finite:
            lam, w = segment_nodes(seg_eff, params, osc=lambda u: x_max + 1.0)
        else:
            decay = _poly_ray_decay(x_min, s, beta, seg.r0, inv_power,
                                    params.abs_tol)
            lam, w = segment_nodes(seg_eff, params, osc=lambda u: x_max + 1.0,
                                   decay=decay)
        add_nodes(lam, w)
    return out


def expected_type_I(problem) -> bool:
    """Whether the sector integrals of the remainder should vanish: true
    exactly when no component ray lies on the real axis."""
    n, a = problem.order, problem.a
    if n % 2 == 1:
        return bool(abs(a + 1j) < 1e-12)
    return bool(a.real > 1e-12)


@dataclass(frozen=True)
class TypeIReport:
    k: int
    expected: bool
    divergent: bool
    values: np.ndarray | None
    scan: tuple
    passed: bool


def check_type_I(pair, datum, k: int, xs, *, tol: float = 1e-6) -> TypeIReport:
    """Integral of exp(i lam x) times the remainder over component k.

    Vanishes when both rays leave the real axis; with a ray on the axis the
    polynomially growing oscillation diverges, which a truncation scan at
    doubling radii detects."""
    if not 1 <= k <= pair.N:
        raise ValueError(f"component index must be in 1..{pair.N}, got {k}")
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if xs.min() <= 0.0:
        raise NonpositiveX("type I check requires x > 0")
    beta = remainder_polynomial(pair, datum, k)
    expected = expected_type_I(pair.problem)
    has_real_ray = any(seg.kind == "ray" and abs(math.sin(seg.angle)) < 1e-12
                       for seg in pair.contours.gammas[k - 1])
    if has_real_ray:
        base = max(8.0 * pair.R, 40.0)
        scan = tuple(
            float(np.abs(_poly_component_integral(
                pair, k, xs, beta, 0, truncate=base * 2.0 ** i)).max())
            for i in range(3))
        drift = max(abs(scan[1] - scan[0]), abs(scan[2] - scan[1]))
        divergent = bool(drift > 10.0 * tol)
        return TypeIReport(k=k, expected=expected, divergent=divergent,
                           values=None, scan=scan,
                           passed=bool(divergent == (not expected)))
    values = np.abs(_poly_component_integral(pair, k, xs, beta, 0))
    ok = bool(values.max() < tol)
    return TypeIReport(k=k, expected=expected, divergent=False,
                       values=values, scan=(), passed=bool(ok == expected))


@dataclass(frozen=True)
class TypeIIReport:
    k: int
    xs: np.ndarray
    residuals: np.ndarray
    passed: bool


def check_type_II(pair, datum, k: int, xs, *, tol: float = 1e-6) -> TypeIIReport:
    """Integral of exp(i lam x) lam^(-n) times the remainder over component
    k; expected to vanish for every component and x > 0.

    For k = 0 the integrand's only pole sits below the indented contour and
    each monomial integral is exactly zero; for sectors the real-axis rays
    are summed exactly with exponential integrals and the rest by
    quadrature."""
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if xs.min() <= 0.0:
        raise NonpositiveX("type II check requires x > 0")
    n = pair.n
    if k == 0:
        beta = remainder_closed_form(pair, datum)
        vals = np.array([
            sum(b * gamma0_monomial_integral(n - j, float(x), pair.contours.delta)
                for j, b in enumerate(beta))
            for x in xs])
    else:
        beta = remainder_polynomial(pair, datum, k)
        vals = _poly_component_integral(pair, k, xs, beta, n)
    res = np.abs(vals)
    return TypeIIReport(k=k, xs=xs, residuals=res, passed=bool(res.max() < tol))


# ---------------------------------------------------------------------------
# representation identity


@dataclass(frozen=True)
class RepresentationReport:
    xs: np.ndarray
    lhs: np.ndarray
    rhs: np.ndarray
    max_diff: float
    passed: bool


def spectral_representation_check(pair, datum, xs, *,
                                  tol: float = 1e-6) -> RepresentationReport:
    """Invert lam^(-n) F_k[Sf] over all components (real line indented above
    the origin) and compare with the inversion of F_k[f]."""
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if xs.min() <= 0.0:
        raise NonpositiveX("representation check requires x > 0")
    n = pair.n
    rhs = pair.reconstruct(datum, xs)

    rate = float(xs.max()) + datum.support
    lam, w = pair.indented_central_nodes(rate)
    vals = w * pair.forward(datum, 0, lam, applied=True) * lam ** (-float(n))
    lhs = np.exp(1j * np.multiply.outer(xs, lam)) @ vals

    def tail_integrand(lam):
        return pair.forward(datum, 0, lam, applied=True) * lam ** (-float(n))

    # for real data the integrand keeps the conjugate-reflection symmetry:
    # the lam^(-n) parity cancels against that of the transform of Sf
    sym = 1 if getattr(datum, "is_real", False) else None
    lhs += pair.gamma0_tail_scan(tail_integrand, xs, rate, symmetry=sym)
    for k in range(1, pair.N + 1):
        lhs += pair.sector_component(datum, k, xs, applied=True, inv_power=n)

    diff = float(np.abs(lhs - rhs).max())
    return RepresentationReport(xs=xs, lhs=lhs, rhs=rhs, max_diff=diff,
                                passed=bool(diff < tol))
