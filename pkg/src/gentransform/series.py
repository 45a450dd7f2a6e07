"""Truncated power series and the differential functionals built on them.

A :class:`PowerSeries` holds the Taylor coefficients ``c_0 .. c_N`` of a
function analytic at the origin.  Every operation is exact in the truncated
algebra: coefficient ``n`` of a result depends only on input coefficients
``0 .. n``, so raising the order never changes lower coefficients beyond
rounding.

Two kinds of series appear throughout:

* *unit-type* (``c_0 = 1``), e.g. ``P = (f/z)**delta`` or ``H``;
* *function-type* (``c_0 = 0``, ``c_1 = 1``), e.g. ``f = z + a_2 z^2 + ...``.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _accel
from .exceptions import ParameterError
from .params import derive_mu_nu

DEFAULT_ORDER = 256

# above this order products, inverses, logs and exps switch from O(N^2)
# recurrences to FFT products with Newton iteration
FAST_ORDER = 512


@dataclass(frozen=True, eq=False)
class PowerSeries:
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        if c.ndim != 1 or c.size < 2:
            raise ValueError("a power series needs at least two coefficients")
        if not np.all(np.isfinite(c)):
            raise ValueError("power series coefficients must be finite")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    def __len__(self):
        return self.coeffs.size

    def __getitem__(self, n):
        return self.coeffs[n]

    def __repr__(self):
        return f"PowerSeries(order={self.order}, coeffs={self.coeffs[:6]}...)"

    @classmethod
    def identity(cls, order: int = DEFAULT_ORDER) -> "PowerSeries":
        """The function f(z) = z."""
        c = np.zeros(order + 1, dtype=complex)
        c[1] = 1.0
        return cls(c)

    @classmethod
    def ones(cls, order: int = DEFAULT_ORDER) -> "PowerSeries":
        """Geometric series 1 + z + z^2 + ..., the unit for ``hadamard``."""
        return cls(np.ones(order + 1, dtype=complex))

    @classmethod
    def from_coeffs(cls, coeffs, order: int | None = None) -> "PowerSeries":
        """Pad (with zeros) or cut ``coeffs`` to the given order."""
        c = np.asarray(coeffs, dtype=complex)
        if order is None:
            order = c.size - 1
        out = np.zeros(order + 1, dtype=complex)
        n = min(order + 1, c.size)
        out[:n] = c[:n]
        return cls(out)

    def truncate(self, order: int) -> "PowerSeries":
        return PowerSeries(self.coeffs[:order + 1])

    def is_unit_type(self) -> bool:
        return self.coeffs[0] == 1

    def is_function_type(self) -> bool:
        return self.coeffs[0] == 0 and self.coeffs[1] == 1

    def __add__(self, other):
        if isinstance(other, PowerSeries):
            n = min(self.order, other.order)
            return PowerSeries(self.coeffs[:n + 1] + other.coeffs[:n + 1])
        c = self.coeffs.copy()
        c[0] += other
        return PowerSeries(c)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, PowerSeries):
            return self + (-1.0) * other
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, PowerSeries):
            n = min(self.order, other.order)
            return PowerSeries(_mul(self.coeffs, other.coeffs, n))
        return PowerSeries(self.coeffs * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, PowerSeries):
            n = min(self.order, other.order)
            return PowerSeries(_mul(self.coeffs, _inv(other.coeffs, n), n))
        return PowerSeries(self.coeffs / other)

    def zderiv(self) -> "PowerSeries":
        """The series of z * d/dz."""
        return PowerSeries(self.coeffs * np.arange(self.coeffs.size))

    def divide_by_z(self) -> "PowerSeries":
        if self.coeffs[0] != 0:
            raise ValueError("series does not vanish at the origin")
        return PowerSeries(self.coeffs[1:])

    def times_z(self) -> "PowerSeries":
        """z times the series, keeping the same order."""
        c = np.zeros_like(self.coeffs)
        c[1:] = self.coeffs[:-1]
        return PowerSeries(c)


# --------------------------------------------------------------------------
# coefficient-array kernels


def _fft_mul(a, b, n):
    size = 1
    while size < 2 * (n + 1):
        size *= 2
    fa = np.fft.fft(a[:n + 1], size)
    fb = np.fft.fft(b[:n + 1], size)
    return np.fft.ifft(fa * fb)[:n + 1]


def _mul(a, b, n):
    """Coefficients 0..n of the product of two coefficient arrays."""
    if n > FAST_ORDER:
        return _fft_mul(np.asarray(a, complex), np.asarray(b, complex), n)
    return np.convolve(a[:n + 1], b[:n + 1])[:n + 1]


def _inv(a, n):
    """Coefficients 0..n of 1/a for a[0] == 1."""
    if a[0] != 1:
        raise ValueError("series inverse needs leading coefficient 1")
    if n > FAST_ORDER:
        g = np.ones(1, dtype=complex)
        m = 1
        while m < n + 1:
            m = min(2 * m, n + 1)
            ag = _fft_mul(a, np.pad(g, (0, m - g.size)), m - 1)
            corr = -ag
            corr[0] += 2.0
            g = _fft_mul(np.pad(g, (0, m - g.size)), corr, m - 1)
            g[0] = 1.0
        return g
    out = np.zeros(n + 1, dtype=complex)
    out[0] = 1.0
    for k in range(1, n + 1):
        out[k] = -np.dot(a[1:k + 1], out[k - 1::-1])
    return out


def _log(a, n):
    """Coefficients 0..n of log a for a[0] == 1 (principal branch)."""
    if a[0] != 1:
        raise ValueError("logarithm needs leading coefficient 1")
    a = np.asarray(a[:n + 1], dtype=complex)
    out = np.zeros(n + 1, dtype=complex)
    if n == 0:
        return out
    if n > FAST_ORDER:
        da = a[1:] * np.arange(1, n + 1)
        q = _fft_mul(da, _inv(a, n - 1), n - 1)
        out[1:] = q / np.arange(1, n + 1)
        return out
    # n L_n = n a_n - sum_{k=1}^{n-1} k L_k a_{n-k}
    kl = np.zeros(n + 1, dtype=complex)
    for m in range(1, n + 1):
        s = np.dot(kl[1:m], a[m - 1:0:-1]) if m > 1 else 0.0
        out[m] = a[m] - s / m
        kl[m] = m * out[m]
    return out


def _exp(h, n):
    """Coefficients 0..n of exp h for h[0] == 0."""
    if h[0] != 0:
        raise ValueError("exponential needs a vanishing constant term")
    h = np.asarray(h[:n + 1], dtype=complex)
    if n > FAST_ORDER:
        g = np.ones(1, dtype=complex)
        m = 1
        while m < n + 1:
            m = min(2 * m, n + 1)
            gp = np.pad(g, (0, m - g.size))
            corr = h[:m] - _log(gp, m - 1)
            corr[0] += 1.0
            g = _fft_mul(gp, corr, m - 1)
            g[0] = 1.0
        return g
    # n E_n = sum_{k=1}^{n} k h_k E_{n-k}
    out = np.zeros(n + 1, dtype=complex)
    out[0] = 1.0
    kh = h * np.arange(n + 1)
    for m in range(1, n + 1):
        out[m] = np.dot(kh[1:m + 1], out[m - 1::-1]) / m
    return out


# --------------------------------------------------------------------------
# public operations


def hadamard(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    """Termwise (Hadamard) product, truncated to the smaller order."""
    n = min(a.order, b.order)
    return PowerSeries(a.coeffs[:n + 1] * b.coeffs[:n + 1])


def _require_unit(p: PowerSeries, what: str):
    if not p.is_unit_type():
        raise ValueError(f"{what} needs a series with constant term exactly 1, got {p.coeffs[0]}")


def principal_power(p: PowerSeries, delta: float) -> PowerSeries:
    """``p**delta`` on the principal branch, computed as exp(delta * log p)."""
    _require_unit(p, "principal_power")
    if not delta > 0:
        raise ParameterError(f"exponent must be positive (got {delta})")
    if delta == 1:
        return p
    n = p.order
    if float(delta).is_integer() and delta <= 64:
        # repeated squaring stays exact when p has zeros inside the disk
        k, base, acc = int(delta), p.coeffs, None
        while k:
            if k & 1:
                acc = base if acc is None else _mul(acc, base, n)
            k >>= 1
            if k:
                base = _mul(base, base, n)
        return PowerSeries(np.asarray(acc))
    return PowerSeries(_exp(delta * _log(p.coeffs, n), n))


def _require_function(f: PowerSeries):
    if not f.is_function_type():
        raise ValueError("expected a normalized function f = z + a_2 z^2 + ...")


def log_derivative_product(f: PowerSeries, delta: float) -> PowerSeries:
    """``(f/z)**delta * (z f'/f)`` computed by series algebra."""
    _require_function(f)
    g = f.divide_by_z()
    P = principal_power(g, delta)
    S = g.zderiv() / g + 1.0
    return P * S


def functional_H(f: PowerSeries, alpha: float, gamma: float, delta: float,
                 method: str = "coefficients") -> PowerSeries:
    """The class functional H of ``f`` for W^delta(alpha, gamma).

    ``method='direct'`` evaluates the defining differential expression with
    series division for ``z f''/f'``; ``'coefficients'`` scales the
    coefficients of ``P = (f/z)**delta`` by ``(delta+n mu)(delta+n nu)/delta^2``;
    ``'both'`` runs both and raises if they disagree by more than 1e-10
    relative to the largest coefficient.  The result has order ``f.order - 1``.
    """
    _require_function(f)
    derive_mu_nu(alpha, gamma)
    if not delta > 0:
        raise ParameterError(f"delta must be positive (got {delta})")
    if method not in ("coefficients", "direct", "both"):
        raise ValueError(f"unknown method {method!r}")

    g = f.divide_by_z()
    P = principal_power(g, delta)
    out = []
    if method in ("coefficients", "both"):
        out.append(functional_H_from_power(P, alpha, gamma, delta))
    if method in ("direct", "both"):
        S = g.zderiv() / g + 1.0                       # z f'/f
        fprime = PowerSeries(g.coeffs * np.arange(1, g.coeffs.size + 1))
        T = fprime.zderiv() / fprime                   # z f''/f'
        bracket = (alpha - 3 * gamma) + gamma * ((1 - 1 / delta) * S + (1 / delta) * (T + 1.0))
        out.append((1 - alpha + 2 * gamma) * P + bracket * P * S)
    if method == "both":
        a, b = out[0].coeffs, out[1].coeffs
        dev = np.max(np.abs(a - b)) / max(np.max(np.abs(a)), 1.0)
        if dev > 1e-10:
            raise ArithmeticError(f"functional_H paths disagree (relative deviation {dev:.3g})")
    return out[0] if method != "direct" else out[-1]


def functional_H_from_power(P: PowerSeries, alpha: float, gamma: float,
                            delta: float) -> PowerSeries:
    """H from ``P = (f/z)**delta`` alone: coefficient n is scaled by
    ``(delta + n mu)(delta + n nu) / delta^2``.

    Needs no ``f``, so it also applies when P vanishes inside the disk and
    ``f`` exists only as a formal series.
    """
    _require_unit(P, "functional_H_from_power")
    n = np.arange(P.coeffs.size)
    # (delta + n mu)(delta + n nu) expanded through mu+nu and mu*nu
    scale = (delta * delta + delta * n * (alpha - gamma) + gamma * n * n) / delta ** 2
    return PowerSeries(P.coeffs * scale)


def extremal_power(beta: float, delta: float, mu: float, nu: float,
                   order: int = DEFAULT_ORDER) -> PowerSeries:
    """``(f/z)**delta`` of the extremal function, to ``order - 1``.

    Coefficients ``b_n = 2(1-beta) delta^2 / ((delta+n mu)(delta+n nu))``, ``b_0 = 1``.
    """
    if not delta > 0 or mu < 0 or nu < 0:
        raise ParameterError("extremal_series needs delta > 0 and mu, nu >= 0")
    n = np.arange(order)
    b = 2.0 * (1.0 - beta) * delta ** 2 / ((delta + n * mu) * (delta + n * nu))
    b[0] = 1.0
    return PowerSeries(b)


def extremal_series(beta: float, delta: float, mu: float, nu: float,
                    order: int = DEFAULT_ORDER) -> PowerSeries:
    """The function whose H equals ``beta + (1-beta)(1+z)/(1-z)``, to the given order.

    When ``extremal_power`` has a zero inside the disk the result is only a
    formal series and its coefficients grow geometrically.
    """
    g = principal_power(extremal_power(beta, delta, mu, nu, order), 1.0 / delta)
    return PowerSeries(np.concatenate([[0.0], g.coeffs]))


def apply_transform(f: PowerSeries, tau, delta: float) -> PowerSeries:
    """The generalized integral transform F of ``f`` for moments ``tau``.

    With ``(f/z)**delta = 1 + sum b_n z^n`` the result satisfies
    ``(F/z)**delta = 1 + sum tau_n b_n z^n``.
    """
    _require_function(f)
    tau = np.asarray(getattr(tau, "tau", tau), dtype=float)
    if abs(tau[0] - 1.0) > 1e-10:
        raise ParameterError(f"moment sequence is not normalized (tau_0 = {tau[0]!r})")
    g = f.divide_by_z()
    if tau.size < g.coeffs.size:
        raise ValueError(f"need {g.coeffs.size} moments, got {tau.size}")
    P = principal_power(g, delta)
    q = P.coeffs * tau[:P.coeffs.size]
    q[0] = 1.0
    G = principal_power(PowerSeries(q), 1.0 / delta)
    return PowerSeries(np.concatenate([[0.0], G.coeffs]))


class EvalResult(NamedTuple):
    value: complex
    error: float
    converged: bool


def eval_at(p: PowerSeries, z: complex, accelerated: bool = False,
            tol: float = 1e-8) -> EvalResult:
    """Evaluate ``p`` at ``z`` with ``|z| <= 1``.

    Inside the disk this is the partial sum, with the tail bounded from the
    last coefficients as a geometric series.  On the circle (``Re z < 1/2``,
    in practice z = -1) ``accelerated`` must be set and the value is the
    Euler-transformed Abel sum.  ``converged`` is False when the error
    estimate exceeds ``tol``.
    """
    c = p.coeffs
    r = abs(z)
    if r > 1 + 1e-15:
        raise ValueError(f"|z| = {r} lies outside the closed unit disk")
    if r >= 1 - 1e-15:
        if not accelerated:
            raise ValueError("boundary evaluation requires accelerated=True")
        value, err, ok = _accel.boundary_sum(c, complex(z) if np.iscomplexobj(z) else z, tol)
        return EvalResult(complex(value), float(err), bool(ok and err <= tol))
    value = np.polynomial.polynomial.polyval(z, c)
    tail_coeff = np.max(np.abs(c[-min(8, c.size):]))
    err = tail_coeff * r ** c.size / (1.0 - r)
    return EvalResult(complex(value), float(err), bool(err <= tol))


def eval_on_circles(p: PowerSeries, radii, points: int = 720):
    """Values of ``p`` at ``r e^{2 pi i k / points}`` for every radius.

    Returns ``(values, errors)`` with ``values`` of shape
    ``(len(radii), points)`` and one tail estimate per radius, computed as in
    :func:`eval_at`.  The partial sums are folded modulo ``points`` and
    evaluated with one FFT per radius.
    """
    radii = np.atleast_1d(np.asarray(radii, dtype=float))
    if np.any(radii < 0) or np.any(radii >= 1):
        raise ValueError("circle radii must lie in [0, 1)")
    c = p.coeffs
    n = np.arange(c.size)
    scaled = c[None, :] * radii[:, None] ** n[None, :]
    pad = (-c.size) % points
    folded = np.pad(scaled, ((0, 0), (0, pad))).reshape(radii.size, -1, points).sum(axis=1)
    values = np.fft.ifft(folded, axis=1) * points
    tail_coeff = np.max(np.abs(c[-min(8, c.size):]))
    errors = tail_coeff * radii ** c.size / (1.0 - radii)
    return values, errors
