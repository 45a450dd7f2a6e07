"""Generalized hypergeometric series pFq with real parameters.

Only real arguments in [-1, 1) are supported.  Arguments below -1/2 go
through the Euler transformation (at -1 this yields the value of the
conditionally convergent, or Abel-summed, alternating series); the rest are
summed directly until the terms drop below double precision.

The module also carries the Euler-type integral representations

    2F1(1, 1/m; 1 + 1/m; x)             = int_0^1 ds / (1 - x s^m)
    3F2(1, 1/n, 1/m; 1+1/n, 1+1/m; x)   = int_0^1 int_0^1 dr ds / (1 - x r^n s^m)

and the two contiguous relations used by the bound formulas.
"""

from dataclasses import dataclass
import math
from typing import Sequence

import numpy as np
from scipy import special

from . import _accel
from .exceptions import ConvergenceError, ParameterError
from .quadrature import integrate_1d, integrate_2d

# Euler transform order at z = -1 and tail tolerance
EULER_ORDER = 20
TAIL_TOL = 1e-10
_MAX_TERMS = 1_000_000


def _is_nonpositive_int(x) -> bool:
    return x <= 0 and float(x).is_integer()


@dataclass(frozen=True)
class HypergeomSpec:
    upper: tuple
    lower: tuple
    argument: float

    def __post_init__(self):
        object.__setattr__(self, "upper", tuple(float(c) for c in self.upper))
        object.__setattr__(self, "lower", tuple(float(d) for d in self.lower))
        object.__setattr__(self, "argument", float(self.argument))
        for d in self.lower:
            if _is_nonpositive_int(d):
                raise ParameterError(f"lower parameter {d} is a nonpositive integer")
        p, q = len(self.upper), len(self.lower)
        if p > q + 1:
            raise ParameterError(f"{p}F{q} diverges for every nonzero argument (p > q + 1)")
        z = self.argument
        if not -1.0 <= z < 1.0:
            raise ParameterError(f"argument {z} outside [-1, 1)")

    @property
    def terminating(self) -> bool:
        return any(_is_nonpositive_int(c) for c in self.upper)


def pfq_coefficients(upper: Sequence[float], lower: Sequence[float], n: int,
                     start: int = 0, first: float = None) -> np.ndarray:
    """Series coefficients ``prod (c)_k / (prod (d)_k k!)`` for ``k = start .. start+n-1``.

    ``first`` is the coefficient at ``start`` (computed from scratch if omitted).
    """
    k = np.arange(start, start + n, dtype=float)
    ratio = np.ones(n)
    for c in upper:
        ratio = ratio * (c + k)
    for d in lower:
        ratio = ratio / (d + k)
    ratio = ratio / (k + 1.0)
    if first is None:
        first = 1.0
        if start:
            first = float(np.prod(pfq_coefficients(upper, lower, start + 1)[-1:]))
    out = np.empty(n)
    out[0] = first
    if n > 1:
        out[1:] = first * np.cumprod(ratio[:-1])
    return out


def _sum_euler(spec: HypergeomSpec, tol: float):
    z = spec.argument
    m = 40
    coeffs = pfq_coefficients(spec.upper, spec.lower, 4 * m + EULER_ORDER + 1)
    prev = None
    while True:
        need = 2 * m + EULER_ORDER + 1
        if coeffs.size < need:
            coeffs = pfq_coefficients(spec.upper, spec.lower, need)
        value, last = _accel.euler_split_sum(coeffs, z, m, EULER_ORDER)
        if prev is not None:
            err = abs(value - prev) + last
            if err <= tol * max(1.0, abs(value)):
                return value, err
        prev = value
        m *= 2
        if m > 1 << 16:
            raise ConvergenceError(
                f"Euler transform of {len(spec.upper)}F{len(spec.lower)} at {z} did not settle",
                value=value, error=abs(value - prev) + last)


def _sum_direct(spec: HypergeomSpec):
    z = spec.argument
    total = 0.0
    start, first = 0, 1.0
    chunk = 256
    while start < _MAX_TERMS:
        c = pfq_coefficients(spec.upper, spec.lower, chunk + 1, start, first)
        terms = c[:chunk] * z ** np.arange(start, start + chunk)
        total += float(np.sum(terms))
        last = abs(terms[-1])
        nxt = abs(c[chunk] * z ** (start + chunk))
        start += chunk
        first = c[chunk]
        if nxt == 0.0:
            return total, 0.0
        ratio = nxt / last if last else 0.0
        tail = nxt / (1.0 - ratio) if ratio < 1 else math.inf
        if tail <= 1e-16 * max(abs(total), 1e-300):
            return total, tail
        chunk = min(2 * chunk, 65536)
    raise ConvergenceError(f"direct summation did not converge at argument {z}",
                           value=total, error=math.inf)


def pfq_eval(spec: HypergeomSpec, full_output: bool = False, tol: float = TAIL_TOL):
    """Value of the series described by ``spec``.

    With ``full_output`` returns ``(value, error_estimate)``.  Raises
    ConvergenceError when the Euler tail estimate does not fall below
    ``tol`` (relative to ``max(1, |value|)``).
    """
    z = spec.argument
    if z == 0.0:
        value, err = 1.0, 0.0
    elif z < -0.5:
        value, err = _sum_euler(spec, tol)
    else:
        value, err = _sum_direct(spec)
    value = float(value)
    return (value, float(err)) if full_output else value


def hyper(upper: Sequence[float], lower: Sequence[float], z: float, **kw):
    """Shorthand for ``pfq_eval(HypergeomSpec(upper, lower, z))``."""
    return pfq_eval(HypergeomSpec(tuple(upper), tuple(lower), z), **kw)


def hyp2f1(a: float, b: float, c: float, x):
    """Gauss 2F1 for real ``x`` in (-1, 1), vectorised over ``x``.

    Arguments above 0.75 are delegated to :func:`scipy.special.hyp2f1`,
    which applies the connection formulas around z = 1.
    """
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    out = np.empty_like(x)
    high = x > 0.75
    if high.any():
        out[high] = special.hyp2f1(a, b, c, x[high])
    low = ~high
    if low.any():
        xl = x[low]
        near = xl >= -0.5
        if near.any():
            xm = float(np.max(np.abs(xl[near])))
            n = 64
            while True:
                co = pfq_coefficients((a, b), (c,), n)
                if (np.abs(co[-4:]) * xm ** (n - 4)).max() < 1e-17 * max(1.0, np.abs(co).max()) \
                        or n >= 1 << 14 or xm == 0.0:
                    break
                n *= 2
            sub = np.polynomial.polynomial.polyval(xl[near], co)
            tmp = out[low]
            tmp[near] = sub
            out[low] = tmp
        far = ~near
        if far.any():
            tmp = out[low]
            tmp[far] = [hyper((a, b), (c,), v) for v in xl[far]]
            out[low] = tmp
    return out[0] if scalar else out


_LOG_TERMS = 90


def _finite_part(a, b, k):
    # (a)_n (b)_n / (n! (1-k)_n) for n < k
    n = np.arange(k - 1, dtype=float)
    ratio = (a + n) * (b + n) / ((n + 1.0) * (1.0 - k + n))
    return np.concatenate([[1.0], np.cumprod(ratio)])


def hyp2f1_log_case(A: float, B: float, m: int, t):
    """``2F1(A, B; A + B + m; 1 - t)`` for integer ``m`` and small ``t`` in (0, 1/2].

    The logarithmic re-expansion around argument 1 (the degenerate case of
    the usual connection formula); the series in ``t`` converge like ``t^n``.
    ``A`` and ``B`` must not be nonpositive integers (the polynomial case).
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t <= 0) or np.any(t > 0.5):
        raise ParameterError("hyp2f1_log_case needs 0 < t <= 1/2")
    n = np.arange(_LOG_TERMS, dtype=float)
    k = abs(int(m))
    lo_a, lo_b = (A + k, B + k) if m >= 0 else (A, B)
    # c_n = (lo_a)_n (lo_b)_n / (n! (n+k)!)
    ratio = (lo_a + n[:-1]) * (lo_b + n[:-1]) / ((n[:-1] + 1) * (n[:-1] + k + 1))
    coef = np.concatenate([[1.0], np.cumprod(ratio)]) / math.factorial(k)
    psi = special.psi(n + 1) + special.psi(n + k + 1) - special.psi(lo_a + n) - special.psi(lo_b + n)
    log_t = np.log(t)
    series = (np.polynomial.polynomial.polyval(t, coef) * log_t
              - np.polynomial.polynomial.polyval(t, coef * psi))
    C = A + B + m
    if m >= 0:
        lead = -((-t) ** k) * special.gamma(C) * special.rgamma(A) * special.rgamma(B)
        finite = 0.0
        if k:
            finite = (special.gamma(k) * special.gamma(C) * special.rgamma(A + k) * special.rgamma(B + k)
                      * np.polynomial.polynomial.polyval(t, _finite_part(A, B, k)))
    else:
        lead = -((-1.0) ** k) * special.gamma(C) * special.rgamma(A - k) * special.rgamma(B - k)
        fc = _finite_part(A - k, B - k, k)
        finite = (special.gamma(k) * special.gamma(C) * special.rgamma(A) * special.rgamma(B)
                  * t ** (-k) * np.polynomial.polynomial.polyval(t, fc))
    return finite + lead * series


def _kernel_variable(e):
    """Map ``y -> (s, ds/dy)`` for the substitution ``s = y^k``.

    ``s^e`` is not smooth at the origin unless ``e`` is an integer.  With
    integer ``k >= 2/e`` it becomes ``y^(k e)``, whose singularity is of
    order at least 2, while the Jacobian ``k y^(k-1)`` is a polynomial.
    """
    if e >= 2 or float(e).is_integer():
        return lambda y: (y, 1.0)
    k = math.ceil(2.0 / e)
    return lambda y: (y ** k, k * y ** (k - 1))


def kernel_2f1_integral(m: float, x, tol: float = 1e-10):
    """``int_0^1 ds / (1 - x s^m)`` by adaptive quadrature, vectorised over ``x``."""
    if not m > 0:
        raise ParameterError(f"kernel exponent must be positive (got {m})")
    x = np.asarray(x, dtype=float)
    if np.any(x >= 1) or np.any(x < -1):
        raise ParameterError("kernel argument must lie in [-1, 1)")
    xs = x[..., None]
    var = _kernel_variable(m)

    def f(y):
        s, jac = var(y)
        return jac / (1.0 - xs * s ** m)

    return integrate_1d(f, tol).value


def kernel_2f1_series(m: float, x: float) -> float:
    """The same quantity as 2F1(1, 1/m; 1 + 1/m; x)."""
    return hyper((1.0, 1.0 / m), (1.0 + 1.0 / m,), x)


def kernel_3f2_integral(n: float, m: float, x, tol: float = 1e-9):
    """``int_0^1 int_0^1 dr ds / (1 - x r^n s^m)``, vectorised over ``x``."""
    if not (n > 0 and m > 0):
        raise ParameterError(f"kernel exponents must be positive (got {n}, {m})")
    x = np.asarray(x, dtype=float)
    if np.any(x >= 1) or np.any(x < -1):
        raise ParameterError("kernel argument must lie in [-1, 1)")
    xs = x[..., None, None]
    var_r, var_s = _kernel_variable(n), _kernel_variable(m)

    def f(u, v):
        r, jr = var_r(u)
        s, js = var_s(v)
        return jr * js / (1.0 - xs * r ** n * s ** m)

    return integrate_2d(f, tol).value


def kernel_3f2_series(n: float, m: float, x: float) -> float:
    """The same quantity as 3F2(1, 1/n, 1/m; 1 + 1/n, 1 + 1/m; x)."""
    return hyper((1.0, 1.0 / n, 1.0 / m), (1.0 + 1.0 / n, 1.0 + 1.0 / m), x)


def contiguous_reduce_3f2(a: float, b: float, c: float, d: float, z: float):
    """Both sides of 3F2(2,a,b;c,d;z) = (c-1) 3F2(1,a,b;c-1,d;z) - (c-2) 3F2(1,a,b;c,d;z)."""
    lhs = hyper((2.0, a, b), (c, d), z)
    rhs = (c - 1.0) * hyper((1.0, a, b), (c - 1.0, d), z) - (c - 2.0) * hyper((1.0, a, b), (c, d), z)
    return lhs, rhs


def gauss_contiguous(a: float, b: float, c: float, z: float):
    """Both sides of b z 2F1(a+1,b+1;c+1;z) = c (2F1(a+1,b;c;z) - 2F1(a,b;c;z))."""
    lhs = b * z * hyper((a + 1.0, b + 1.0), (c + 1.0,), z)
    rhs = c * (hyper((a + 1.0, b), (c,), z) - hyper((a, b), (c,), z))
    return lhs, rhs
