"""Polynomial remainders of the transform pair and their contour integrals."""

import numpy as np
import pytest

from halfline.errors import FitResidualTooLarge, NonpositiveX
from halfline.spectral import (
    check_type_I,
    check_type_II,
    expected_type_I,
    remainder_closed_form,
    remainder_polynomial,
    remainder_report,
    spectral_representation_check,
)

XS = np.array([0.3, 0.7, 1.2])


def test_remainder_is_low_degree_polynomial(get_pair, get_datum):
    """F_k[Sf] - lam^n F_k[f] fits a polynomial of degree <= n-1 for every
    component of every catalog problem."""
    for name in ("lkdv-dirichlet", "reverse-lkdv", "heat-dirichlet",
                 "heat-neumann", "robin-4"):
        pair = get_pair(name)
        datum = get_datum(name)
        for k in range(pair.N + 1):
            beta = remainder_polynomial(pair, datum, k)
            assert beta.size == pair.n


def test_remainder_closed_form_on_real_line(get_pair, get_datum):
    """The k = 0 remainder equals the boundary-jet closed form."""
    for name in ("lkdv-dirichlet", "robin-4"):
        pair = get_pair(name)
        datum = get_datum(name)
        report = remainder_report(pair, datum)
        assert report.passed, name
        assert report.zero_dev < 1e-8
        assert report.magnitude_dev < 1e-8


def test_reverse_problem_remainder_is_constant(get_pair, get_datum):
    """With f(0) = f'(0) = 0 and f''(0) = 1, the remainder reduces to the
    single constant of magnitude |f''(0)| / 2 pi."""
    pair = get_pair("reverse-lkdv")
    datum = get_datum("reverse-lkdv")
    closed = remainder_closed_form(pair, datum)
    f2 = datum.boundary_derivatives(3)[2]
    assert abs(closed[0]) == pytest.approx(abs(f2) / (2.0 * np.pi), rel=1e-12)
    np.testing.assert_allclose(closed[1:], 0.0, atol=1e-14)
    beta0 = remainder_polynomial(pair, datum, 0)
    assert abs(beta0[0]) == pytest.approx(abs(f2) / (2.0 * np.pi), rel=1e-6)
    np.testing.assert_allclose(np.abs(beta0[1:]), 0.0, atol=1e-9)


def test_bump_datum_has_zero_remainder(get_pair, catalog):
    """A datum vanishing to all orders at the origin leaves no remainder."""
    from halfline.datum import bump_datum
    pair = get_pair("heat-dirichlet")
    datum = bump_datum(catalog["heat-dirichlet"], seed=4)
    closed = remainder_closed_form(pair, datum)
    np.testing.assert_allclose(closed, 0.0, atol=1e-14)
    beta = remainder_polynomial(pair, datum, 0, rel_tol=np.inf)
    np.testing.assert_allclose(np.abs(beta), 0.0, atol=1e-9)


def test_underfitting_the_remainder_raises(get_pair, get_datum):
    """Forcing a too-small basis on a genuine degree-2 remainder fails."""
    pair = get_pair("lkdv-dirichlet")
    datum = get_datum("lkdv-dirichlet")
    with pytest.raises(FitResidualTooLarge):
        remainder_polynomial(pair, datum, 0, degree=0)


def test_sine_combination_is_degenerate_for_dirichlet(get_pair, get_datum):
    """With f(0) = 0 the odd (sine) combination of the order-2 transform
    turns the applied operator into exact multiplication by lam^2: the
    f'(0) boundary term cancels between +lam and -lam, so the sine kernel
    is a genuine generalized eigenfunction with zero remainder.  The even
    (cosine) combination keeps the boundary term, exposing f'(0)."""
    pair = get_pair("heat-dirichlet")
    datum = get_datum("heat-dirichlet")
    lam = np.linspace(0.37, 9.1, 7)
    plus = pair.fhat(datum, lam)
    minus = pair.fhat(datum, -lam)
    ap = pair.fhat_applied(datum, lam)
    am = pair.fhat_applied(datum, -lam)

    sine = (minus - plus) / 2j
    sine_applied = (am - ap) / 2j
    scale = float(np.abs(sine_applied).max())
    np.testing.assert_allclose(sine_applied, lam ** 2 * sine,
                               atol=1e-10 * scale)

    cosine_gap = (ap + am) / 2 - lam ** 2 * (plus + minus) / 2
    np.testing.assert_allclose(cosine_gap, datum.derivative(1, 0.0),
                               atol=1e-10 * scale)


def test_expected_type_I_table(catalog):
    """Sector integrals of the remainder vanish exactly when no ray lies on
    the real axis: false only for the reversed third-order problem."""
    want = {"lkdv-dirichlet": True, "reverse-lkdv": False,
            "heat-dirichlet": True, "heat-neumann": True, "robin-4": True}
    for name, expected in want.items():
        assert expected_type_I(catalog[name]) == expected, name


def test_type_I_vanishing_components(get_pair, get_datum):
    """Off-axis components integrate the remainder to zero."""
    for name, ks in (("lkdv-dirichlet", (1,)), ("heat-dirichlet", (1,)),
                     ("heat-neumann", (1,)), ("robin-4", (1, 2))):
        pair = get_pair(name)
        datum = get_datum(name)
        for k in ks:
            rep = check_type_I(pair, datum, k, XS)
            assert rep.passed and rep.expected and not rep.divergent, (name, k)
            assert rep.values.max() < 1e-6


def test_type_I_divergent_components(get_pair, get_datum):
    """Real-axis rays make the remainder integral diverge, and the
    truncation scan detects it."""
    pair = get_pair("reverse-lkdv")
    datum = get_datum("reverse-lkdv")
    for k in (1, 2):
        rep = check_type_I(pair, datum, k, XS)
        assert rep.passed and rep.divergent and not rep.expected
        assert rep.values is None
        assert len(rep.scan) == 3


def test_type_I_guards(get_pair, get_datum):
    pair = get_pair("heat-dirichlet")
    datum = get_datum("heat-dirichlet")
    with pytest.raises(ValueError):
        check_type_I(pair, datum, 2, XS)
    with pytest.raises(NonpositiveX):
        check_type_I(pair, datum, 1, np.array([0.0, 0.5]))


def test_type_II_vanishes_everywhere(get_pair, get_datum):
    """Dividing by lam^n tames the growth: every component integrates the
    remainder to zero, including those with real-axis rays."""
    for name in ("lkdv-dirichlet", "reverse-lkdv", "heat-neumann"):
        pair = get_pair(name)
        datum = get_datum(name)
        for k in range(pair.N + 1):
            rep = check_type_II(pair, datum, k, XS)
            assert rep.passed, (name, k)
            assert rep.residuals.max() < 1e-6


def test_representation_identity(get_pair, get_datum):
    """Inverting lam^(-n) F[Sf] over all components reproduces the
    inversion of F[f]."""
    pair = get_pair("heat-dirichlet")
    datum = get_datum("heat-dirichlet")
    rep = spectral_representation_check(pair, datum, np.array([0.4, 0.9]))
    assert rep.passed
    assert rep.max_diff < 1e-6
