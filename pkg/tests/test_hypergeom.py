import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from gentransform import hypergeom as hg
from gentransform.exceptions import ParameterError

LN2 = math.log(2.0)
mpmath.mp.dps = 40


# specs and evaluation --------------------------------------------------------

def test_spec_validation():
    with pytest.raises(ParameterError):
        hg.HypergeomSpec((1.0,), (-2.0,), 0.5)
    with pytest.raises(ParameterError):
        hg.HypergeomSpec((1.0, 1.0, 1.0), (2.0,), 0.5)
    with pytest.raises(ParameterError):
        hg.HypergeomSpec((1.0, 1.0), (2.0,), 1.0)
    assert hg.HypergeomSpec((-3.0, 1.0), (2.0,), 0.5).terminating


def test_argument_zero_is_one():
    assert hg.hyper((1.3, 2.2, 0.1), (0.7, 5.0), 0.0) == 1.0


def test_examples():
    assert hg.hyper((1, 2), (3,), -1.0) == pytest.approx(2 * (1 - LN2), abs=1e-10)
    assert hg.hyper((1, 1), (2,), 0.5) == pytest.approx(2 * LN2, abs=1e-12)


def test_full_output_reports_error():
    value, err = hg.hyper((1, 2), (3,), -1.0, full_output=True)
    assert err < 1e-10 and abs(value - 2 * (1 - LN2)) < 1e-10


@pytest.mark.parametrize("upper,lower,z", [
    ((0.5, 1.5), (2.5,), -0.3),
    ((1.0, 0.25, 0.5), (1.25, 1.5), -1.0),
    ((2.0, 0.7, 1.1), (3.2, 1.7), -0.8),
    ((0.3,), (1.9,), -1.0),
    ((1.0, 1.0), (2.0,), 0.9),
])
def test_against_mpmath(upper, lower, z):
    want = float(mpmath.hyper(list(upper), list(lower), z))
    assert hg.hyper(upper, lower, z) == pytest.approx(want, rel=1e-10, abs=1e-12)


@pytest.mark.parametrize("upper,lower", [
    ((1.0, 2.0), (3.0,)),
    ((1.0, 0.5, 1.0), (1.5, 2.0)),
    ((2.0, 1.0, 1.0), (3.0, 2.5)),
])
def test_minus_one_agrees_with_direct_partial_sums(upper, lower):
    # a million terms; average of the last two partial sums for an alternating series
    c = hg.pfq_coefficients(upper, lower, 1_000_001)
    signs = np.where(np.arange(c.size) % 2, -1.0, 1.0)
    partial = math.fsum(c[:-1] * signs[:-1])
    direct = partial + 0.5 * c[-1] * signs[-1]
    assert hg.hyper(upper, lower, -1.0) == pytest.approx(direct, abs=1e-7)


def test_pfq_coefficients_offset_start():
    full = hg.pfq_coefficients((0.5, 1.5), (2.5,), 40)
    part = hg.pfq_coefficients((0.5, 1.5), (2.5,), 10, start=30, first=full[30])
    assert np.allclose(part, full[30:], rtol=1e-14)


@given(st.floats(0.1, 3), st.floats(0.1, 3), st.floats(0.5, 5), st.floats(-0.99, 0.99))
def test_hyp2f1_against_scipy(a, b, c, x):
    from scipy import special
    assert hg.hyp2f1(a, b, c, x) == pytest.approx(special.hyp2f1(a, b, c, x), rel=1e-9, abs=1e-12)


def test_hyp2f1_vectorised():
    x = np.array([-0.9, -0.2, 0.0, 0.4, 0.8])
    got = hg.hyp2f1(0.5, 1.5, 2.5, x)
    want = [float(mpmath.hyp2f1(0.5, 1.5, 2.5, v)) for v in x]
    assert np.allclose(got, want, rtol=1e-12)


# logarithmic connection case ------------------------------------------------

@pytest.mark.parametrize("A,B,m", [(1.0, 0.5, 0), (1.7, 0.5, 2), (0.3, 1.2, 1), (1.5, 2.5, -1), (2.2, 1.4, -2)])
def test_log_case_against_mpmath(A, B, m):
    t = np.array([1e-6, 1e-3, 0.05, 0.2, 0.45])
    got = hg.hyp2f1_log_case(A, B, m, t)
    want = [float(mpmath.hyp2f1(A, B, A + B + m, 1 - mpmath.mpf(v))) for v in t]
    assert np.allclose(got, want, rtol=1e-11)


def test_log_case_range():
    with pytest.raises(ParameterError):
        hg.hyp2f1_log_case(1.0, 1.0, 0, 0.7)


# kernel integrals -----------------------------------------------------------

def test_kernel_2f1_examples():
    assert hg.kernel_2f1_integral(1.7, 0.0) == pytest.approx(1.0, abs=1e-14)
    assert hg.kernel_2f1_integral(1.0, -1.0) == pytest.approx(LN2, abs=1e-10)
    assert hg.kernel_2f1_integral(1.0, 0.5) == pytest.approx(2 * LN2, abs=1e-10)


def test_kernel_3f2_examples():
    assert hg.kernel_3f2_integral(0.7, 2.0, 0.0) == pytest.approx(1.0, abs=1e-12)
    assert hg.kernel_3f2_integral(1.0, 1.0, -1.0) == pytest.approx(math.pi ** 2 / 12, abs=1e-8)


GRID = [0.25, 0.5, 1.0, 2.0, 4.0]
XS = [-1.0, -0.5, 0.0, 0.5]


@pytest.mark.parametrize("m", GRID)
def test_kernel_2f1_integral_matches_series(m):
    got = hg.kernel_2f1_integral(m, np.array(XS))
    want = [hg.kernel_2f1_series(m, x) for x in XS]
    assert np.allclose(got, want, atol=1e-8, rtol=0)


@pytest.mark.parametrize("n", GRID)
def test_kernel_3f2_integral_matches_series(n):
    for m in GRID:
        got = hg.kernel_3f2_integral(n, m, np.array(XS))
        want = [hg.kernel_3f2_series(n, m, x) for x in XS]
        assert np.allclose(got, want, atol=1e-8, rtol=0), (n, m)


def test_kernel_3f2_random_against_mpmath(rng):
    for _ in range(5):
        n, m, x = rng.uniform(0.2, 4), rng.uniform(0.2, 4), rng.uniform(-1, 0.6)
        want = float(mpmath.hyp3f2(1, 1 / n, 1 / m, 1 + 1 / n, 1 + 1 / m, x))
        assert hg.kernel_3f2_integral(n, m, x) == pytest.approx(want, abs=1e-8)


def test_kernel_rejects_bad_arguments():
    with pytest.raises(ParameterError):
        hg.kernel_2f1_integral(-1.0, 0.2)
    with pytest.raises(ParameterError):
        hg.kernel_3f2_integral(1.0, 1.0, 1.0)


# contiguous relations --------------------------------------------------------

@pytest.mark.parametrize("a,b,c,d,z", [
    (1.0, 1.0, 3.0, 2.0, 0.0),
    (1.0, 1.0, 3.0, 2.0, -1.0),
    (0.5, 2.0, 2.5, 1.5, -0.5),
])
def test_contiguous_reduce(a, b, c, d, z):
    lhs, rhs = hg.contiguous_reduce_3f2(a, b, c, d, z)
    assert lhs == pytest.approx(rhs, abs=1e-10)
    if z == 0.0:
        assert lhs == 1.0 and rhs == pytest.approx(1.0, abs=1e-15)


def test_gauss_contiguous_random(rng):
    for _ in range(100):
        a, b = rng.uniform(0.1, 3.0, 2)
        c = rng.uniform(a + b + 0.2, a + b + 4.0)    # keeps every series convergent at -1
        z = rng.uniform(-1.0, 0.0)
        lhs, rhs = hg.gauss_contiguous(a, b, c, z)
        assert lhs == pytest.approx(rhs, abs=1e-10)
