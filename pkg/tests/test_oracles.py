"""Independent reference rules: heat solutions, adaptive Simpson, stencils."""

import math

import mpmath
import numpy as np
import pytest

from halfline.datum import InitialDatum, make_datum
from halfline.oracles import (
    OracleResult,
    adaptive_reference,
    fd_residual,
    heat_dirichlet_solution,
    heat_neumann_solution,
    stencil_coefficients,
)

mpmath.mp.dps = 25


def _images_reference(datum, x: float, t: float, sign: float) -> float:
    """Method-of-images heat solution: Gaussian kernel with a reflected
    source, - for an absorbing wall (Dirichlet), + for a reflecting one."""
    G = lambda z: mpmath.e ** (-z * z / (4 * t)) / mpmath.sqrt(4 * mpmath.pi * t)
    f = lambda y: (G(x - y) + sign * G(x + y)) * datum.value(float(y))
    return float(mpmath.quad(f, [0.0, datum.support / 2, datum.support]))


def test_heat_oracles_match_method_of_images(catalog):
    """Sine and cosine spectral oracles agree with the image construction."""
    pd = catalog["heat-dirichlet"]
    datum_d = make_datum(pd, pd.datum_kernel, seed=0)
    pn = catalog["heat-neumann"]
    datum_n = make_datum(pn, pn.datum_kernel, seed=0)
    for x, t in ((0.7, 0.05), (0.5, 0.2)):
        got = heat_dirichlet_solution(datum_d, x, t)
        want = _images_reference(datum_d, x, t, -1.0)
        assert got.est_error < 1e-8
        assert abs(got.value - want) < 1e-9, ("dirichlet", x, t)

        got = heat_neumann_solution(datum_n, x, t)
        want = _images_reference(datum_n, x, t, +1.0)
        assert abs(got.value - want) < 1e-9, ("neumann", x, t)


def test_heat_oracles_reject_incompatible_data():
    """The sine form needs f(0) = 0, the cosine form f'(0) = 0, and both
    need t >= 0."""
    flat = InitialDatum((1.0, 0.5), seed=None)
    with pytest.raises(ValueError):
        heat_dirichlet_solution(flat, 0.5, 0.1)  # f(0) = 1
    with pytest.raises(ValueError):
        heat_neumann_solution(flat, 0.5, 0.1)  # f'(0) = 0.5
    ok = InitialDatum((0.0, 0.0, 1.0), seed=None)
    with pytest.raises(ValueError):
        heat_dirichlet_solution(ok, 0.5, -0.1)
    with pytest.raises(ValueError):
        heat_neumann_solution(ok, 0.5, -0.1)


def test_adaptive_reference_entire_function():
    """int e^z along a segment and along a bent polyline both give
    e^(1+i) - 1."""
    want = np.exp(1.0 + 1.0j) - 1.0
    res = adaptive_reference(np.exp, [0.0, 1.0 + 1.0j])
    assert abs(res.value - want) < 1e-12
    assert res.est_error < 1e-10
    bent = adaptive_reference(np.exp, [0.0, 1.0, 1.0 + 1.0j])
    assert abs(bent.value - want) < 1e-12
    assert bent.meta["segments"] == 2


def test_adaptive_reference_node_log_and_guards():
    """node_log records every evaluation point; degenerate paths raise."""
    log = []
    adaptive_reference(lambda z: z ** 2, [0.0, 2.0], node_log=log)
    assert len(log) >= 3
    assert all(isinstance(z, complex) for z in log)
    with pytest.raises(ValueError):
        adaptive_reference(np.exp, [1.0])


def test_oracle_result_rejects_negative_error():
    with pytest.raises(ValueError):
        OracleResult(value=1.0, est_error=-1e-3, method="x")


def test_stencil_coefficients_classic():
    """Second-derivative and first-derivative central weights."""
    np.testing.assert_allclose(stencil_coefficients(2, (-1, 0, 1)),
                               [1.0, -2.0, 1.0], atol=1e-12)
    np.testing.assert_allclose(stencil_coefficients(1, (-1, 0, 1)),
                               [-0.5, 0.0, 0.5], atol=1e-12)


def test_stencil_coefficients_polynomial_exactness():
    """Weights recover h^k g^(k) exactly on polynomials of degree < p."""
    rng = np.random.default_rng(8)
    for _ in range(10):
        offs = np.sort(rng.choice(np.arange(-4, 5), size=6, replace=False))
        k = int(rng.integers(1, 5))
        c = stencil_coefficients(k, offs)
        coeffs = rng.standard_normal(6)  # degree 5 polynomial
        p = np.polynomial.Polynomial(coeffs)
        got = sum(ci * p(oi) for ci, oi in zip(c, offs))
        want = p.deriv(k)(0.0)
        assert abs(got - want) < 1e-8 * max(1.0, abs(want))
    with pytest.raises(ValueError):
        stencil_coefficients(3, (-1, 0, 1))


def _plane_wave_grid(lam0: float, n: int, a: complex):
    def q_grid(xs, ts):
        xs = np.asarray(xs, dtype=float)
        ts = np.asarray(ts, dtype=float)
        return (np.exp(-a * lam0 ** n * ts)[:, None]
                * np.exp(1j * lam0 * xs)[None, :])
    return q_grid


def test_fd_residual_vanishes_on_exact_solution():
    """Plane waves solve the evolution equation exactly; the residual is
    pure truncation noise."""
    n, a = 3, -1j
    res = fd_residual(_plane_wave_grid(0.3, n, a), n, a, x=1.0, t=0.5, h=0.01)
    assert res.value < 1e-6
    assert res.method == "fd_residual"
    assert res.meta["h"] == 0.01


def test_fd_residual_second_order_convergence():
    """Halving the step divides the residual by about four."""
    n, a = 3, -1j
    res = fd_residual(_plane_wave_grid(1.2, n, a), n, a, x=1.0, t=0.5, h=0.02)
    ratio = res.meta["coarse"] / res.value
    assert 3.5 < ratio < 4.5
    assert res.est_error == pytest.approx(
        abs(res.meta["coarse"] - res.value) / 3.0, rel=1e-6)


def test_fd_residual_one_sided_at_time_zero():
    """t smaller than the time step falls back to one-sided differences."""
    n, a = 2, 1.0
    res = fd_residual(_plane_wave_grid(0.7, n, a), n, a, x=0.8, t=0.0, h=5e-3)
    assert res.value < 1e-6


def test_fd_residual_guards():
    """Stencils crossing x = 0 and misshapen grids are refused."""
    n, a = 4, 1.0
    with pytest.raises(ValueError):
        fd_residual(_plane_wave_grid(0.5, n, a), n, a, x=0.001, t=0.1, h=0.01)
    bad_grid = lambda xs, ts: np.zeros((1, 1))
    with pytest.raises(ValueError):
        fd_residual(bad_grid, n, a, x=1.0, t=0.1, h=0.01)
