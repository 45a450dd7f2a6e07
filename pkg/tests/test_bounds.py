import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from gentransform import bounds, weights
from gentransform.exceptions import DegenerateBoundError, ParameterError
from gentransform.params import (ClassParams, HohlovParams, TargetParams, derive_mu_nu,
                                 max_admissible_gamma, standard_grid)

LN2 = math.log(2.0)
PI2_12 = math.pi ** 2 / 12
GRID = list(standard_grid())


# parameters ------------------------------------------------------------------

def test_mu_nu_examples():
    assert derive_mu_nu(2.5, 0.0) == (0.0, 2.5)
    mu, nu = derive_mu_nu(3.0, 1.0)
    assert mu == pytest.approx(1.0) and nu == pytest.approx(1.0)
    with pytest.raises(ParameterError):
        derive_mu_nu(1.0, 1.0)
    with pytest.raises(ParameterError):
        derive_mu_nu(0.5, 0.7)


@given(st.floats(0.0, 10.0), st.floats(0.0, 1.0))
def test_mu_nu_relations(alpha, frac):
    gamma = frac * max_admissible_gamma(alpha)
    mu, nu = derive_mu_nu(alpha, gamma)
    assert 0 <= mu <= nu
    assert mu * nu == pytest.approx(gamma, abs=1e-12)
    assert mu + nu == pytest.approx(alpha - gamma, abs=1e-12)
    assert (mu > 0) == (gamma > 0)


def test_param_containers():
    with pytest.raises(ParameterError):
        ClassParams(1, 0, 0)
    with pytest.raises(ParameterError):
        ClassParams(1, 0, 1, beta=1.0)
    with pytest.raises(ParameterError):
        TargetParams(1.0)
    with pytest.raises(ParameterError):
        HohlovParams(1, 0.5, 2.7, beta1=1.5)
    assert ClassParams(1, 0, 1).with_beta(0.2).beta == 0.2


def test_grid_shape():
    assert len(GRID) == 324
    assert {round(p.gamma, 12) for p, _, _ in GRID if p.alpha == 3.0} == {0.0, 0.5, 1.0}


# first bound -------------------------------------------------------------------

def test_thm1_examples():
    b0 = weights.Bernardi(0)
    assert bounds.beta_thm1(ClassParams(1, 0, 1), b0, 0.0).beta == pytest.approx(1 - 0.5 / (1 - LN2), abs=1e-9)
    r = bounds.beta_thm1(ClassParams(3, 1, 1), b0, TargetParams(0.0))
    assert r.beta == pytest.approx(1 - 0.5 / (1 - PI2_12), abs=1e-8)
    assert r.diagnostics["I"] == pytest.approx(PI2_12, abs=1e-9)


def test_thm1_linear_in_xi():
    p, w = ClassParams(2, 0.1, 0.7), weights.Bernardi(1)
    gaps = [1 - bounds.beta_thm1(p, w, xi).beta for xi in (0.0, 0.5, 0.9, 0.99)]
    assert np.allclose(np.array(gaps) / gaps[0], [1, 0.5, 0.1, 0.01], rtol=1e-12)


def test_thm1_closed_examples():
    r = bounds.beta_thm1_bernardi_closed(ClassParams(1, 0, 1), 0, 0.0)
    assert r.beta == pytest.approx(1 - 1 / (2 * (1 - LN2)), abs=1e-10)
    p = ClassParams(3, 1, 1)
    assert bounds.beta_thm1_bernardi_closed(p, 0, 0.0).beta == pytest.approx(
        bounds.beta_thm1(p, weights.Bernardi(0), 0.0).beta, abs=1e-6)
    half = 1 - bounds.beta_thm1_bernardi_closed(p, 1, 0.5).beta
    full = 1 - bounds.beta_thm1_bernardi_closed(p, 1, 0.0).beta
    assert half == pytest.approx(full / 2, rel=1e-12)


def test_thm1_cross_method_on_grid():
    for p, c, xi in GRID:
        q = bounds.beta_thm1(p, weights.Bernardi(c), xi).beta
        closed = bounds.beta_thm1_bernardi_closed(p, c, xi).beta
        assert abs(q - closed) <= 1e-6, (p, c, xi)
        assert q < 1


def test_thm1_bracket_against_mpmath():
    # gamma > 0 bracket for Bernardi c = 1, expanded termwise in t and summed by mpmath
    p = ClassParams(2, 0.2, 0.8)
    m, n, nu = p.mu / p.delta, p.nu / p.delta, p.nu

    def term(k):
        k2 = 1 / (1 + k * m)
        return (-1) ** k * 2 / (k + 2) * (k2 / nu + (1 - 1 / nu) * k2 / (1 + k * n))

    with mpmath.workdps(30):
        I = float(mpmath.nsum(term, [0, mpmath.inf]))
    got = bounds.beta_thm1(p, weights.Bernardi(1), 0.0).diagnostics["I"]
    assert got == pytest.approx(I, abs=1e-9)


def test_thm1_reports_swapped_roots():
    r = bounds.beta_thm1(ClassParams(2, 0.2, 1), weights.Bernardi(0), 0.0)
    assert "I_swapped" in r.diagnostics and r.diagnostics["swap_deviation"] >= 0


def test_thm1_degenerate_bracket():
    with pytest.raises(DegenerateBoundError):
        bounds._thm1_from_bracket(1.0, 0.0, 0.0)


# second bound ----------------------------------------------------------------

R1 = 4 * LN2 - 3


@pytest.mark.parametrize("c,xi,beta", [
    (0, 0.0, 1 - 1 / (2 * (1 - LN2))),
    (1, 0.0, R1 / (1 + R1)),
    (0, 2 * LN2 - 1, 0.0),
])
def test_thm2_examples(c, xi, beta):
    q = bounds.beta_thm2(weights.Bernardi(c), TargetParams(xi)).beta
    closed = bounds.beta_thm2_bernardi_closed(c, xi).beta
    assert q == pytest.approx(beta, abs=1e-8)
    assert closed == pytest.approx(beta, abs=1e-8)
    assert abs(q - closed) <= 1e-8


def test_thm2_quoted_decimals():
    # the quoted six-decimal figures; the c = 1 one is rounded loosely (-0.2943497...)
    assert R1 / (1 + R1) == pytest.approx(-0.294348, abs=2e-6)
    assert 1 - 1 / (2 * (1 - LN2)) == pytest.approx(-0.629445, abs=1e-6)


def test_thm2_cross_method_on_grid():
    for c in (0, 0.5, 1, 2, 5):
        for xi in (-0.5, 0.0, 0.3, 0.5, 0.9):
            q = bounds.beta_thm2(weights.Bernardi(c), xi).beta
            assert q == pytest.approx(bounds.beta_thm2_bernardi_closed(c, xi).beta, abs=1e-8)


def test_thm2_other_weights():
    # Hohlov(1,1,2) is the uniform weight: same as Bernardi c = 0
    assert bounds.beta_thm2(weights.Hohlov(1, 1, 2), 0.2).beta == pytest.approx(
        bounds.beta_thm2(weights.Bernardi(0), 0.2).beta, abs=1e-10)


def test_monotone_in_xi():
    xis = (-0.5, 0.0, 0.5)
    for p, c, _ in GRID[::9]:
        w = weights.Bernardi(c)
        b1 = [bounds.beta_thm1(p, w, xi).beta for xi in xis]
        b2 = [bounds.beta_thm2(w, xi).beta for xi in xis]
        assert b1[0] < b1[1] < b1[2] < 1
        assert b2[0] < b2[1] < b2[2] < 1


def test_first_and_second_bounds_coincide_for_unit_alpha():
    for delta in (0.5, 1.0, 2.0):
        p = ClassParams(1, 0, delta)
        for c in (0, 1, 2):
            for xi in (-0.5, 0.0, 0.5):
                b1 = bounds.beta_thm1(p, weights.Bernardi(c), xi).beta
                b2 = bounds.beta_thm2(weights.Bernardi(c), xi).beta
                assert b1 == pytest.approx(b2, abs=1e-8)


# Hohlov bound ----------------------------------------------------------------

WORKED_H, WORKED_P = HohlovParams(1, 0.5, 2.7), ClassParams(0.5, 0, 1)


def test_beta2_worked_example():
    want = 0.5 * float(mpmath.hyp2f1(1, 0.5, 2.7, -1)) + 0.5 * float(mpmath.hyp2f1(2, 0.5, 2.7, -1))
    assert bounds.beta2_hohlov(WORKED_H, WORKED_P) == pytest.approx(want, abs=1e-10)


def test_hohlov_weight_sum(rng):
    for _ in range(200):
        h = HohlovParams(rng.uniform(0.05, 1), rng.uniform(-0.9, 0.9), 2.0)
        alpha = rng.uniform(0, 5)
        p = ClassParams(alpha, rng.uniform(0, 1) * max_admissible_gamma(alpha), rng.uniform(0.1, 3))
        assert sum(bounds.hohlov_weights(h, p)) == pytest.approx(1.0, abs=1e-12)


def test_carlson_shaffer_formula_matches_general():
    for b, c in ((0.5, 2.7), (0.2, 2.1), (-0.3, 1.5)):
        for alpha, frac, delta in ((0.5, 0, 1), (2.0, 0.5, 0.7), (3.0, 1.0, 2.0)):
            p = ClassParams(alpha, frac * max_admissible_gamma(alpha), delta)
            assert bounds.beta2_hohlov(HohlovParams(1, b, c), p) == pytest.approx(
                bounds.beta2_carlson_shaffer(b, c, p), abs=1e-13)


def test_validate_examples():
    r = bounds.validate_hohlov(WORKED_H, WORKED_P)
    assert r.valid and r.ranges_ok and r.e3_nonnegative and r.e3.size == 201
    bad = bounds.validate_hohlov(HohlovParams(0.5, 0.5, 3.0), WORKED_P)
    assert not bad.valid and bad.first_violation == "c-a < 2"
    # alpha <= gamma (1 + (2a+1)/delta)
    hyp = bounds.validate_hohlov(HohlovParams(0.1, 0.2, 1.5), ClassParams(19.0, 12.0, 2.0))
    assert hyp.first_violation == "alpha > gamma(1+(2a+1)/delta)"


def test_n4_expansion_matches_direct():
    h, p = HohlovParams(0.7, 0.3, 2.2), ClassParams(1.0, 0.05, 1.5)
    t = np.linspace(0.05, 0.95, 19)
    assert np.allclose(bounds.n4_expansion(h, p, t), bounds.n4_direct(h, p, t), atol=1e-9)


def test_thm3_combines():
    r = bounds.beta_thm3(HohlovParams(1, 0.5, 2.7, beta1=0.3), WORKED_P)
    assert r.beta == pytest.approx(1 - 2 * 0.7 * (1 - r.diagnostics["beta2"]), abs=1e-15)
    assert r.diagnostics["hypotheses_hold"]


def test_combine_duality():
    assert bounds.combine_duality(0.5, 0.5) == 0.5
    assert bounds.combine_duality(0.0, 0.0) == -1.0
    eps = 1e-9
    assert bounds.combine_duality(1 - eps, 0.3) == pytest.approx(1 - 2 * eps * 0.7, abs=1e-15)
    with pytest.raises(ParameterError):
        bounds.combine_duality(1.0, 0.0)
