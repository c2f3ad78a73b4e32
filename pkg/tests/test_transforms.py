"""Forward transforms, inverse kernels, and reconstruction round trips."""

import numpy as np
import pytest

from halfline.errors import NonpositiveX
from halfline.oracles import adaptive_reference


def _random_lams(rng, count, rmin=0.5, rmax=3.0):
    r = rng.uniform(rmin, rmax, size=count)
    phi = rng.uniform(0.0, 2.0 * np.pi, size=count)
    return r * np.exp(1j * phi)


def test_third_order_single_form_kernel(get_pair):
    """For the order-3 problem with one Dirichlet form and a = -i, the first
    sector kernel collapses to -(1/2pi)(alpha e^{-i alpha lam x}
    + alpha^2 e^{-i alpha^2 lam x})."""
    pair = get_pair("lkdv-dirichlet")
    alpha = np.exp(2j * np.pi / 3)
    rng = np.random.default_rng(50)
    lams = _random_lams(rng, 50)
    xs = rng.uniform(0.1, 2.0, size=50)
    got = pair.kernel(1, lams, xs)
    want = -(alpha * np.exp(-1j * alpha * lams * xs)
             + alpha ** 2 * np.exp(-1j * alpha ** 2 * lams * xs)) / (2.0 * np.pi)
    np.testing.assert_allclose(got, want, atol=1e-12)


def test_third_order_two_form_kernels(get_pair):
    """For the reversed order-3 problem (a = +i, two forms) the sector
    kernels are single exponentials (1/2pi) e^{-i alpha^2 lam x} and
    (1/2pi) e^{-i alpha lam x}."""
    pair = get_pair("reverse-lkdv")
    alpha = np.exp(2j * np.pi / 3)
    rng = np.random.default_rng(51)
    lams = _random_lams(rng, 50)
    xs = rng.uniform(0.1, 2.0, size=50)
    np.testing.assert_allclose(pair.kernel(1, lams, xs),
                               np.exp(-1j * alpha ** 2 * lams * xs) / (2.0 * np.pi),
                               atol=1e-12)
    np.testing.assert_allclose(pair.kernel(2, lams, xs),
                               np.exp(-1j * alpha * lams * xs) / (2.0 * np.pi),
                               atol=1e-12)


def test_heat_kernels(get_pair):
    """Heat sector kernels are +-(1/2pi) e^{+i lam x}: the argument
    multiplier is alpha = -1 and the weight is M(lam)/Delta(-lam), which is
    +1 for the Dirichlet form (M = 1) and -1 for the Neumann form
    (M = -i lam, Delta(-lam) = i lam)."""
    rng = np.random.default_rng(52)
    lams = _random_lams(rng, 50)
    xs = rng.uniform(0.1, 2.0, size=50)
    want = np.exp(1j * lams * xs) / (2.0 * np.pi)
    np.testing.assert_allclose(get_pair("heat-dirichlet").kernel(1, lams, xs),
                               want, atol=1e-12)
    np.testing.assert_allclose(get_pair("heat-neumann").kernel(1, lams, xs),
                               -want, atol=1e-12)


def test_zero_component_kernel(get_pair):
    """kernel(0) is the plain Fourier kernel e^{-i lam x} / 2 pi."""
    pair = get_pair("robin-4")
    lams = np.array([0.7 + 0.2j, -1.5 + 1.0j])
    xs = np.array([0.3, 1.1])
    np.testing.assert_allclose(pair.kernel(0, lams, xs),
                               np.exp(-1j * lams * xs) / (2.0 * np.pi), atol=0)


def test_fhat_matches_adaptive_reference(get_pair, get_datum):
    """The cached support transform equals int_0^L e^{-i mu y} f(y) dy
    computed by the independent adaptive rule."""
    pair = get_pair("heat-dirichlet")
    datum = get_datum("heat-dirichlet")
    for mu in (0.0, 3.7, -2.2 + 1.1j, 14.0 - 0.5j):
        got = pair.fhat(datum, np.array([mu]))[0]
        ref = adaptive_reference(
            lambda z: np.exp(-1j * mu * z) * datum.value(float(np.real(z))),
            [0.0, datum.support], tol=1e-13)
        assert ref.est_error < 1e-10
        assert abs(got - ref.value) < 1e-9, mu


def test_fhat_derivative_streams(get_pair, get_datum):
    """fhat(deriv=k) transforms the k-th derivative; fhat_applied adds the
    operator factor (-i)^n."""
    pair = get_pair("heat-dirichlet")
    datum = get_datum("heat-dirichlet")
    mu = 2.4 - 0.7j
    got = pair.fhat(datum, np.array([mu]), deriv=1)[0]
    ref = adaptive_reference(
        lambda z: np.exp(-1j * mu * z) * datum.derivative(1, float(np.real(z))),
        [0.0, datum.support], tol=1e-13)
    assert abs(got - ref.value) < 1e-9

    mun = np.array([1.3 + 0.4j])
    np.testing.assert_allclose(pair.fhat_applied(datum, mun),
                               (-1j) ** 2 * pair.fhat(datum, mun, deriv=2),
                               atol=0)


def test_fhat_reflection_symmetry(get_pair, get_datum):
    """Real data give fhat(-lam) = conj(fhat(lam)) on the real axis."""
    pair = get_pair("lkdv-dirichlet")
    datum = get_datum("lkdv-dirichlet")
    lam = np.array([0.9, 4.2, 17.0])
    plus = pair.fhat(datum, lam.astype(complex))
    minus = pair.fhat(datum, -lam.astype(complex))
    np.testing.assert_allclose(minus, np.conj(plus), rtol=0, atol=1e-13)


def test_forward_zero_component_is_scaled_fhat(get_pair, get_datum):
    pair = get_pair("heat-neumann")
    datum = get_datum("heat-neumann")
    lam = np.array([0.5 + 0.1j, -3.0 + 2.0j])
    np.testing.assert_allclose(pair.forward(datum, 0, lam),
                               pair.fhat(datum, lam) / (2.0 * np.pi), atol=0)


def test_forward_sector_integrates_kernel(get_pair, get_datum):
    """F_k[f](lam) equals int_0^L kernel(k, lam, y) f(y) dy, tying the
    weighted-transform evaluation to the kernel definition."""
    pair = get_pair("lkdv-dirichlet")
    datum = get_datum("lkdv-dirichlet")
    for lam in (1.7 + 0.3j, -0.8 + 0.9j):
        got = pair.forward(datum, 1, np.array([lam]))[0]
        ref = adaptive_reference(
            lambda z: pair.kernel(1, lam, float(np.real(z)))
            * datum.value(float(np.real(z))),
            [0.0, datum.support], tol=1e-13)
        assert abs(got - ref.value) < 1e-9, lam


def test_forward_amplitude_linearity(get_pair, get_datum, catalog):
    """Transforms scale linearly with the datum amplitude."""
    from halfline.datum import make_datum
    prob = catalog["robin-4"]
    pair = get_pair("robin-4")
    base = get_datum("robin-4")
    small = make_datum(prob, prob.datum_kernel, seed=0, amplitude=1e-3)
    lam = np.array([2.1 + 0.5j, -1.2 + 2.2j])
    for k in (0, 1, 2):
        np.testing.assert_allclose(pair.forward(small, k, lam),
                                   1e-3 * pair.forward(base, k, lam),
                                   rtol=1e-12, atol=1e-18)


def test_kernel_component_bounds(get_pair):
    """Sector indices outside 1..N are refused by kernel_weights."""
    pair = get_pair("heat-dirichlet")
    with pytest.raises(ValueError):
        pair.kernel_weights(2, np.array([1.0 + 0.5j]))
    with pytest.raises(ValueError):
        pair.kernel_weights(0, np.array([1.0 + 0.5j]))


def test_reconstruct_round_trip_and_support(get_pair, get_datum):
    """Inversion of the forward transforms reproduces the datum inside the
    support and vanishes beyond it."""
    pair = get_pair("heat-dirichlet")
    datum = get_datum("heat-dirichlet")
    xs = np.array([0.25, 0.6, 0.9, 1.3, 1.8])
    got = pair.reconstruct(datum, xs)
    want = datum.value(xs)
    np.testing.assert_allclose(got.real, want, atol=2e-7)
    np.testing.assert_allclose(got.imag, 0.0, atol=2e-7)
    assert np.abs(got[3:]).max() < 2e-7  # beyond the support

    with pytest.raises(NonpositiveX):
        pair.reconstruct(datum, np.array([0.0, 0.5]))


def test_sector_component_vanishes_for_positive_x(get_pair, get_datum):
    """The sector integral of F_k[f] carries no mass for x > 0."""
    pair = get_pair("heat-dirichlet")
    datum = get_datum("heat-dirichlet")
    vals = pair.gamma_k_vanishing(datum, 1, np.array([0.3, 0.9]))
    assert vals.max() < 1e-6


def test_generic_inverse_matches_reconstruct(get_pair, get_datum):
    """Caller-supplied transform callables run through the slow generic
    inversion and still reproduce the datum."""
    pair = get_pair("heat-dirichlet")
    datum = get_datum("heat-dirichlet")
    F = {
        0: lambda lam: pair.fhat(datum, lam) / (2.0 * np.pi),
        1: lambda lam: -pair.fhat(datum, -lam) / (2.0 * np.pi),
    }
    xs = np.array([0.4, 0.8])
    got = pair.inverse(F, xs)
    np.testing.assert_allclose(got.real, datum.value(xs), atol=5e-6)
    with pytest.raises(NonpositiveX):
        pair.inverse(F, np.array([-0.1]))
