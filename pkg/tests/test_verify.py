import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gentransform import bounds, series, verify, weights
from gentransform._fixed import FixedSeries
from gentransform.params import ClassParams, HohlovParams, standard_grid
from gentransform.series import PowerSeries

LN2 = math.log(2.0)
GRID = list(standard_grid())
ORDER = verify.series_order_for()


def extremal(p, beta, order=ORDER):
    return series.extremal_series(beta, p.delta, p.mu, p.nu, order)


# half-plane margin -----------------------------------------------------------

def test_margin_of_a_disk():
    # disk of radius 0.5 about 2: best half-plane faces the origin, margin 1.5
    w = 2 + 0.5 * np.exp(2j * np.pi * np.arange(400) / 400)
    margin, phi = verify.half_plane_margin(w)
    assert margin == pytest.approx(1.5, abs=1e-4) and phi == pytest.approx(0.0, abs=1e-6)


@given(st.floats(-3.1, 3.1), st.integers(0, 1000))
def test_margin_is_rotation_equivariant(psi, seed):
    rng = np.random.default_rng(seed)
    w = 1.0 + 0.4 * (rng.normal(size=60) + 1j * rng.normal(size=60))
    m0, phi0 = verify.half_plane_margin(w)
    m1, phi1 = verify.half_plane_margin(np.exp(1j * psi) * w)
    assert m1 == pytest.approx(m0, abs=1e-8)
    if m0 > 1e-3:
        assert np.exp(1j * phi1) == pytest.approx(np.exp(1j * (phi0 - psi)), abs=1e-5)


def test_margin_collinear_points():
    margin, _ = verify.half_plane_margin(np.array([1.0, 2.0, 3.0]) + 0j)
    assert margin == pytest.approx(1.0, abs=1e-12)


# membership -------------------------------------------------------------------

def test_identity_is_member():
    for beta in (-2.0, 0.0, 0.7):
        r = verify.membership_test(PowerSeries.identity(32), ClassParams(2, 0.3, 1.5, beta))
        assert r.is_member and r.margin == pytest.approx(1 - beta, abs=1e-12)
        assert r.best_phi == 0.0 and -np.pi < r.best_phi <= np.pi


def test_extremal_saturates_the_class():
    p = ClassParams(2, 0.2, 1.0, -0.4)
    f = extremal(p, p.beta)
    margins = [verify.membership_test(f, p, radii=np.linspace(0.1, r, 10)).margin for r in (0.9, 0.99, 0.995)]
    assert all(m > 0 for m in margins)
    assert margins[0] > margins[1] > margins[2]
    assert margins[2] < 0.02
    assert not verify.membership_test(f, p.with_beta(p.beta + 0.1)).is_member


def test_rotated_coefficients_keep_the_margin():
    p = ClassParams(1, 0, 1, 0.1)
    f = extremal(p, 0.3)
    theta = 2 * np.pi * 37 / verify.DEFAULT_THETA
    n = np.arange(f.coeffs.size)
    rotated = PowerSeries(f.coeffs * np.exp(1j * (n - 1) * theta))
    a = verify.membership_test(f, p)
    b = verify.membership_test(rotated, p)
    assert b.margin == pytest.approx(a.margin, abs=1e-8)


def test_low_order_warns_and_excludes():
    p = ClassParams(1, 0, 1, 0.0)
    f = extremal(p, 0.2, order=64)
    with pytest.warns(RuntimeWarning):
        r = verify.membership_test(f, p)
    assert r.excluded_points > 0 and r.grid["r_max"] < 0.995


def test_membership_needs_beta():
    with pytest.raises(ValueError):
        verify.membership_test(PowerSeries.identity(8), ClassParams(1, 0, 1))


def test_series_order_for():
    n = verify.series_order_for(0.9, 1e-12, 10)
    assert 10 * 0.9 ** n / 0.1 <= 1e-12 < 10 * 0.9 ** (n - 1) / 0.1


def test_transformed_extremal_membership_subset():
    # every 27th grid point; the full sweep runs in the acceptance module
    for p, c, xi in GRID[::27]:
        w = weights.Bernardi(c)
        beta = bounds.beta_thm1(p, w, xi).beta
        Q = verify.transformed_extremal_power(p, beta, w, ORDER)
        assert verify.membership_from_power(Q, ClassParams(1, 0, p.delta, xi)).is_member
        assert not verify.membership_from_power(Q, ClassParams(1, 0, p.delta, xi + 0.05)).is_member


# transform identity -------------------------------------------------------------

def random_poly(rng, degree=32, order=64):
    c = np.zeros(order + 1)
    c[1] = 1.0
    c[2:degree + 1] = rng.uniform(-1, 1, degree - 1) / np.arange(2, degree + 1) ** 2
    return PowerSeries(c)


def test_identity_examples(rng):
    assert verify.transform_identity_check(PowerSeries.identity(20), weights.Bernardi(2), 1.0) == 0.0
    f = PowerSeries.from_coeffs(np.r_[0, 1, rng.uniform(-0.1, 0.1, 9)], 40)
    assert verify.transform_identity_check(f, weights.Bernardi(2), 1.3) <= 1e-10
    g = series.extremal_series(0.2, 1.0, 0.0, 1.0, 64)
    assert verify.transform_identity_check(g, weights.Hohlov(1, 1, 2), 1.0) <= 1e-10


@pytest.mark.parametrize("w", [weights.Bernardi(0.5), weights.Hohlov(0.7, 0.4, 2.0),
                               weights.CarlsonShaffer(0.5, 2.7)], ids=["bernardi", "hohlov", "carlson-shaffer"])
def test_identity_random(w, rng):
    for _ in range(20):
        assert verify.transform_identity_check(random_poly(rng), w, rng.uniform(0.3, 2.5)) <= 1e-10


def test_identity_file_weight(weight_file, rng):
    w = weights.load_weight_file(weight_file)
    for _ in range(10):
        assert verify.transform_identity_check(random_poly(rng), w, rng.uniform(0.3, 2.5)) <= 1e-10


def test_identity_detects_a_wrong_transform(monkeypatch, rng):
    real = series.apply_transform
    monkeypatch.setattr(verify, "apply_transform",
                        lambda f, tau, d: real(f, np.r_[tau[:3], 1.01 * np.asarray(tau[3:])], d))
    assert verify.transform_identity_check(random_poly(rng), weights.Bernardi(1), 1.0) > 1e-4


# sharpness -----------------------------------------------------------------------

@pytest.mark.parametrize("p,c,xi,tol", [
    (ClassParams(1, 0, 1), 0, 0.0, 1e-6),
    (ClassParams(3, 1, 1), 0, 0.0, 1e-4),
    (ClassParams(1, 0, 2), 1, 0.5, 1e-4),
])
def test_sharpness_first_examples(p, c, xi, tol):
    r = verify.sharpness_thm1(p, weights.Bernardi(c), xi)
    assert r.achieved == pytest.approx(xi, abs=tol) and r.verdict


def test_sharpness_first_closed_series():
    # 1 + 2(1-beta) sum_{n>=1} (-1)^n (1+n/d) d^2 tau_n / ((d+n mu)(d+n nu)), summed to 1e6 terms
    p, w = ClassParams(2, 0.3, 0.7), weights.Bernardi(1)
    beta = bounds.beta_thm1(p, w, 0.2).beta
    n = np.arange(1, 1_000_001, dtype=float)
    d = p.delta
    terms = (-1) ** n * (1 + n / d) * d * d * 2 / (n + 2) / ((d + n * p.mu) * (d + n * p.nu))
    direct = 1 + 2 * (1 - beta) * (math.fsum(terms[:-1]) + 0.5 * terms[-1])
    assert verify.sharpness_thm1(p, w, 0.2).achieved == pytest.approx(direct, abs=1e-7)


def test_sharpness_fixed_point_route():
    # delta = 2 with a zero of (f/z)^delta inside the disk
    p, w = ClassParams(3, 0.0, 2.0), weights.Bernardi(2)
    r = verify.sharpness_thm1(p, w, -0.5)
    assert r.diagnostics["arithmetic"].startswith("fixed-point")
    assert r.diagnostics["growth"] > verify.GROWTH_LIMIT
    assert r.achieved == pytest.approx(-0.5, abs=1e-8)


@pytest.mark.parametrize("c,xi,want", [
    (0, 0.0, 0.0),
    (0, 2 * LN2 - 1, 2 * LN2 - 1),
    (1, 0.0, 0.0),
])
def test_sharpness_second_examples(c, xi, want):
    r = verify.sharpness_thm2(weights.Bernardi(c), xi)
    assert r.achieved == pytest.approx(want, abs=1e-6) and r.verdict


def test_sharpness_second_full_chain():
    r = verify.sharpness_thm2(weights.Bernardi(1), 0.3, p=ClassParams(2, 0.2, 1.2))
    assert r.achieved == pytest.approx(0.3, abs=1e-4) and r.diagnostics["pipeline"]


def test_sharpness_subset_of_grid():
    for p, c, xi in GRID[::11]:
        assert verify.sharpness_thm1(p, weights.Bernardi(c), xi).verdict, (p, c, xi)


def test_sharpness_verdict_rule():
    ok = verify.SharpnessReport(0.0, 5e-5, 0.0)
    loose = verify.SharpnessReport(0.0, 5e-4, 1e-4)
    bad = verify.SharpnessReport(0.0, 5e-4, 1e-6)
    assert ok.verdict and loose.verdict and not bad.verdict


# fixed-point arithmetic ---------------------------------------------------------

def test_fixed_series_matches_float():
    rng = np.random.default_rng(3)
    c = np.r_[1.0, 0.3 * rng.uniform(-1, 1, 30) / np.arange(1, 31)]
    a = FixedSeries.from_float(c, 120)
    assert np.allclose(a.power(0.37).to_float(), series.principal_power(PowerSeries(c), 0.37).coeffs.real,
                       atol=1e-14)
    assert np.allclose((a * a).to_float(), np.convolve(c, c)[:31], atol=1e-14)
    assert np.allclose(a.zderiv().to_float(), c * np.arange(31), atol=1e-14)
    with pytest.raises(ValueError):
        FixedSeries.from_float(np.array([1.0, 1j]), 60)
    with pytest.raises(ValueError):
        FixedSeries.from_float(np.array([2.0, 1.0]), 60).power(0.5)


# Hohlov kernel ---------------------------------------------------------------------

def test_hohlov_kernel_worked_example():
    r = verify.hohlov_kernel_check(HohlovParams(1, 0.5, 2.7), ClassParams(0.5, 0, 1))
    assert r.passed and r.excluded_points == 0
    assert r.n3_at_zero == pytest.approx(1.0, abs=1e-14)
    assert r.n3_at_minus_one < 1 and r.min_real > r.n3_at_minus_one - 1e-8
    assert r.beta == pytest.approx(2 * r.n3_at_minus_one - 1, abs=1e-15) and r.combiner_ok
    assert r.reduction_deviation < 1e-12


def test_hohlov_kernel_general_parameters():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        r = verify.hohlov_kernel_check(HohlovParams(0.6, 0.2, 2.1, beta1=0.3), ClassParams(1.0, 0.05, 1.5))
    assert r.reduction_deviation < 1e-12
    assert r.beta == pytest.approx(1 - 2 * 0.7 * (1 - r.n3_at_minus_one), abs=1e-15)
