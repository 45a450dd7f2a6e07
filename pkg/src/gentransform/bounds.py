"""Sharp admissibility bounds beta for the weighted integral transform.

Three bounds are implemented:

* ``beta_thm1``: f in W_beta^delta(alpha, gamma) maps into W_xi^delta(1, 0).
  The bound is ``beta = 1 - (1 - xi) / (2 (1 - I))`` where ``I`` is the weighted
  integral of a kernel built from the Euler integrals of 2F1 and 3F2.
* ``beta_thm2``: f in W_beta^delta(alpha, gamma) maps into W_xi^delta(alpha, gamma),
  with ``beta / (1 - beta) = -int lambda(t) (1 - k t) / (1 + t) dt``.
* ``beta2_hohlov``: the second factor of the duality combiner for the
  Hohlov convolution operator.

Each quadrature formula has a closed-form counterpart for the Bernardi
weight ``(1+c) t^c`` in terms of hypergeometric values at -1.
"""

from dataclasses import dataclass, field
from functools import lru_cache
import math

import numpy as np

from . import hypergeom
from .exceptions import DegenerateBoundError, ParameterError
from .params import ClassParams, HohlovParams, TargetParams
from .quadrature import integrate_1d
from .weights import Bernardi, _hohlov_factor

THM1_TOL = 1e-9
THM2_TOL = 1e-12


@dataclass(frozen=True)
class BoundResult:
    beta: float
    method: str
    error_estimate: float
    diagnostics: dict = field(default_factory=dict)


def _target_xi(t) -> float:
    return t.xi if isinstance(t, TargetParams) else TargetParams(float(t)).xi


# ---------------------------------------------------------------- first bound


def _kernel_values(m2, n3, m3, c2, c3, x, tol):
    """``c2 * K2(m2, x) + c3 * K3(n3, m3, x)`` with zero coefficients skipped."""
    out = np.zeros_like(x)
    if c2 != 0:
        out = out + c2 * hypergeom.kernel_2f1_integral(m2, x, tol)
    if c3 != 0:
        out = out + c3 * hypergeom.kernel_3f2_integral(n3, m3, x, tol)
    return out


@lru_cache(maxsize=1024)
def _bracket_integral(mu: float, nu: float, delta: float, alpha: float, w, tol: float):
    """``(I, error)`` for the given root pair; ``mu == 0`` selects the gamma = 0 form."""
    inner = tol / 10.0
    if mu == 0.0:
        spread = abs(1.0 - 1.0 / alpha)

        def kernel(t):
            k = (1.0 / alpha) / (1.0 + t)
            if alpha != 1.0:
                k = k + (1.0 - 1.0 / alpha) * hypergeom.kernel_2f1_integral(alpha / delta, -t, inner)
            return k
    else:
        spread = abs(1.0 / nu) + abs(1.0 - 1.0 / nu)

        def kernel(t):
            return _kernel_values(mu / delta, nu / delta, mu / delta,
                                  1.0 / nu, 1.0 - 1.0 / nu, -t, inner)

    res = integrate_1d(lambda t, u: w.density(t, u) * kernel(t), tol, exponents=w.exponents,
                       complement=True)
    # inner kernel errors enter through a unit-mass weight
    return float(res.value), float(res.error) + spread * inner


def _thm1_from_bracket(I, I_err, xi):
    if not I < 1.0:
        raise DegenerateBoundError(f"bracket integral I = {I:.12g} >= 1; the bound is undefined")
    beta = 1.0 - (1.0 - xi) / (2.0 * (1.0 - I))
    err = (1.0 - xi) / (2.0 * (1.0 - I) ** 2) * I_err
    return beta, err


def beta_thm1(p: ClassParams, w, t, tol: float = THM1_TOL) -> BoundResult:
    """Bound into W_xi^delta(1, 0) by quadrature of the bracket integral ``I``.

    For gamma > 0 the bracket is ``(1/nu) K2(mu/delta, -t) + (1 - 1/nu) K3(nu/delta, mu/delta, -t)``,
    for gamma = 0 it is ``1/(alpha (1+t)) + (1 - 1/alpha) K2(alpha/delta, -t)``.
    The diagnostics also carry ``I`` with mu and nu interchanged.
    """
    xi = _target_xi(t)
    mu, nu, delta = p.mu, p.nu, p.delta
    if p.gamma == 0:
        if not p.alpha > 0:
            raise ParameterError("the gamma = 0 bound needs alpha > 0")
        I, I_err = _bracket_integral(0.0, p.alpha, delta, p.alpha, w, tol)
        swapped = None
    else:
        if not (mu > 0 and nu > 0):
            raise ParameterError("the gamma > 0 bound needs mu, nu > 0")
        I, I_err = _bracket_integral(mu, nu, delta, p.alpha, w, tol)
        swapped = _bracket_integral(nu, mu, delta, p.alpha, w, tol)[0] if mu != nu else I
    beta, err = _thm1_from_bracket(I, I_err, xi)
    diag = {"I": I, "I_error": I_err, "mu": mu, "nu": nu}
    if swapped is not None:
        diag["I_swapped"] = swapped
        diag["swap_deviation"] = abs(swapped - I)
    return BoundResult(beta, "quadrature", err, diag)


def beta_thm1_bernardi_closed(p: ClassParams, c: float, t) -> BoundResult:
    """First bound for the Bernardi weight via 3F2/4F3 (or 2F1/3F2) at -1."""
    xi = _target_xi(t)
    Bernardi(c)  # domain check
    delta, mu, nu = p.delta, p.mu, p.nu
    if p.gamma == 0:
        alpha = p.alpha
        if not alpha > 0:
            raise ParameterError("the gamma = 0 bound needs alpha > 0")
        f1, e1 = hypergeom.hyper((1.0, 2.0 + c), (3.0 + c,), -1.0, full_output=True)
        f2, e2 = hypergeom.hyper((1.0, 2.0 + c, 1.0 + delta / alpha),
                                 (3.0 + c, 2.0 + delta / alpha), -1.0, full_output=True)
        c2 = delta / (delta + alpha) * (1.0 - 1.0 / alpha)
        bracket = f1 / alpha + c2 * f2
        pref = (1.0 - xi) * (2.0 + c) / (2.0 * (1.0 + c))
        parts = {"2F1": f1, "3F2": f2}
        b_err = e1 / alpha + abs(c2) * e2
    else:
        f1, e1 = hypergeom.hyper((1.0, 2.0 + c, 1.0 + delta / mu),
                                 (3.0 + c, 2.0 + delta / mu), -1.0, full_output=True)
        f2, e2 = hypergeom.hyper((1.0, 2.0 + c, 1.0 + delta / mu, 1.0 + delta / nu),
                                 (3.0 + c, 2.0 + delta / mu, 2.0 + delta / nu), -1.0, full_output=True)
        c2 = delta / (delta + nu) * (1.0 - 1.0 / nu)
        bracket = f1 / nu + c2 * f2
        pref = (1.0 - xi) * (2.0 + c) * (delta + mu) / (2.0 * delta * (1.0 + c))
        parts = {"3F2": f1, "4F3": f2}
        b_err = e1 / nu + abs(c2) * e2
    if not bracket > 0:
        raise DegenerateBoundError(f"hypergeometric bracket {bracket:.12g} is not positive")
    beta = 1.0 - pref / bracket
    err = abs(pref) / bracket ** 2 * b_err
    return BoundResult(beta, "closed-form", err, dict(parts, bracket=bracket))


# ---------------------------------------------------------------- second bound


def beta_thm2(w, t, tol: float = THM2_TOL) -> BoundResult:
    """Bound into W_xi^delta(alpha, gamma); depends only on the weight and xi."""
    xi = _target_xi(t)
    k = (1.0 + xi) / (1.0 - xi)
    res = integrate_1d(lambda s, u: w.density(s, u) * (1.0 - k * s) / (1.0 + s), tol,
                       exponents=w.exponents, complement=True)
    r = -float(res.value)
    if not 1.0 + r > 0:
        raise DegenerateBoundError(f"beta/(1-beta) = {r:.12g} <= -1 has no solution beta < 1")
    beta = r / (1.0 + r)
    return BoundResult(beta, "quadrature", float(res.error) / (1.0 + r) ** 2, {"r": r, "k": k})


def beta_thm2_bernardi_closed(c: float, t) -> BoundResult:
    xi = _target_xi(t)
    Bernardi(c)
    F, F_err = hypergeom.hyper((1.0, 2.0 + c), (3.0 + c,), -1.0, full_output=True)
    num = 2.0 * (1.0 + c) * F - (2.0 + c) * (1.0 - xi)
    den = 2.0 * (1.0 + c) * F
    beta = num / den
    err = (2.0 + c) * (1.0 - xi) / (2.0 * (1.0 + c) * F * F) * F_err
    return BoundResult(beta, "closed-form", err, {"2F1": F})


# ---------------------------------------------------------------- Hohlov bound


def combine_duality(beta1: float, beta2: float) -> float:
    """``beta`` with ``1 - beta = 2 (1 - beta1)(1 - beta2)``."""
    if not (beta1 < 1 and beta2 < 1):
        raise ParameterError(f"duality combiner needs beta1, beta2 < 1 (got {beta1}, {beta2})")
    return 1.0 - 2.0 * (1.0 - beta1) * (1.0 - beta2)


def hohlov_weights(h: HohlovParams, p: ClassParams) -> tuple[float, float, float]:
    """The coefficients of 2F1(a,b;c;.), 2F1(a+1,b;c;.), 2F1(a+2,b;c;.); they sum to 1."""
    a, al, g, d = h.a, p.alpha, p.gamma, p.delta
    w0 = 1.0 - (a / d) * (al - g * (1.0 + a / d))
    w1 = (a / d) * (al - g * (1.0 + (2.0 * a + 1.0) / d))
    w2 = a * (a + 1.0) * g / d ** 2
    return w0, w1, w2


def _hohlov_values(h: HohlovParams):
    a, b, c = h.a, h.b, h.c
    return [hypergeom.hyper((a + j, b), (c,), -1.0) for j in range(3)]


def beta2_hohlov(h: HohlovParams, p: ClassParams) -> float:
    w = hohlov_weights(h, p)
    F = _hohlov_values(h)
    return float(w[0] * F[0] + w[1] * F[1] + w[2] * F[2])


def beta2_carlson_shaffer(b: float, c: float, p: ClassParams) -> float:
    """The a = 1 formula written out on its own."""
    al, g, d = p.alpha, p.gamma, p.delta
    return ((1.0 - (al - g * (1.0 + 1.0 / d)) / d) * hypergeom.hyper((1.0, b), (c,), -1.0)
            + (al - g * (1.0 + 3.0 / d)) / d * hypergeom.hyper((2.0, b), (c,), -1.0)
            + 2.0 * g / d ** 2 * hypergeom.hyper((3.0, b), (c,), -1.0))


def beta_thm3(h: HohlovParams, p: ClassParams) -> BoundResult:
    """Full bound ``combine_duality(beta1, beta2)`` with the hypothesis report attached."""
    report = validate_hohlov(h, p)
    beta2 = beta2_hohlov(h, p)
    beta = combine_duality(h.beta1, beta2)
    w = hohlov_weights(h, p)
    return BoundResult(beta, "closed-form", 0.0, {
        "beta2": beta2, "w0": w[0], "w1": w[1], "w2": w[2],
        "hypotheses_hold": report.valid, "first_violation": report.first_violation})


@dataclass
class HohlovValidation:
    ranges: dict
    e1: float
    e2: float
    e3: np.ndarray
    n4_min: float
    n4_argmin: float
    n4_expansion_deviation: float
    representation_ok: bool
    first_violation: str | None

    @property
    def ranges_ok(self) -> bool:
        return all(self.ranges.values())

    @property
    def e3_nonnegative(self) -> bool:
        return bool(np.all(self.e3 >= 0))

    @property
    def valid(self) -> bool:
        return self.first_violation is None


def e3_coefficients(h: HohlovParams, p: ClassParams, n) -> np.ndarray:
    """Coefficients e3(n) of the (1-t)^(n+2) expansion of N4."""
    a, b, c = h.a, h.b, h.c
    al, g, d = p.alpha, p.gamma, p.delta
    n = np.asarray(n, dtype=float)
    K = d * d - a * al * d + a * g * d + a * a * g
    L = al * d - g * (d + 2 * a + 1)
    s = c - a - b
    num = (n * n * K + n * (3 * K - a * L * (c - a - 1))
           + 2 * K - a * (c - a - 1) * (2 * L - g * (a + 1) * (c - a - 2)))
    return num / (2 * d * d * s * (s - 1))


def n4_direct(h: HohlovParams, p: ClassParams, t) -> np.ndarray:
    """N4(t) from its three 2F1 terms at argument 1 - t."""
    a, b, c = h.a, h.b, h.c
    d = p.delta
    w0, w1, _ = hohlov_weights(h, p)
    t = np.asarray(t, dtype=float)
    s = c - a - b
    x = 1.0 - t
    f0 = _hohlov_factor(a, b, c, t, x, any(hypergeom._is_nonpositive_int(v) for v in (1 - a, c - a)))
    f1 = hypergeom.hyp2f1(c - a - 1, -a, s, x)
    f2 = hypergeom.hyp2f1(c - a - 2, -(a + 1), s - 1, x)
    return (w0 * x ** 2 * f0 / (s * (s - 1)) + w1 * x * f1 / (a * (s - 1))
            + p.gamma / d ** 2 * f2)


def n4_expansion(h: HohlovParams, p: ClassParams, t, terms: int = 4000) -> np.ndarray:
    """N4(t) = e1 + e2 (1-t) + sum_n e3(n) (c-a)_n (1-a)_n / ((c-a-b+1)_n (3)_n) (1-t)^(n+2)."""
    a, b, c = h.a, h.b, h.c
    d, g = p.delta, p.gamma
    s = c - a - b
    e1 = g / d ** 2
    e2 = (p.alpha * d - g * (d + 2 * a + 1) - g * (a + 1) * (c - a - 2)) / (d * d * (s - 1))
    coef = hypergeom.pfq_coefficients((c - a, 1 - a, 1.0), (s + 1, 3.0), terms)
    series = coef * e3_coefficients(h, p, np.arange(terms))
    x = 1.0 - np.asarray(t, dtype=float)
    return e1 + e2 * x + x ** 2 * np.polynomial.polynomial.polyval(x, series)


def validate_hohlov(h: HohlovParams, p: ClassParams, n_max: int = 200,
                    grid_points: int = 1000) -> HohlovValidation:
    """Check the hypotheses of the Hohlov bound and the sign of its kernel N4.

    Report only: nothing is raised for violated hypotheses.
    """
    a, b, c = h.a, h.b, h.c
    al, g, d = p.alpha, p.gamma, p.delta
    spread = al - g
    a_cap = d / (2.0 * spread) if spread > 0 else math.inf
    threshold = g * (1.0 + (2.0 * a + 1.0) / d)
    ranges = {
        "0 < 1+b": 0 < 1 + b,
        "1+b < c-a": 1 + b < c - a,
        "c-a < 2": c - a < 2,
        "0 < a": 0 < a,
        "a <= 1": a <= 1,
        "a <= delta/(2(alpha-gamma))": a <= a_cap,
        "alpha > gamma(1+(2a+1)/delta)": al > threshold,
        "gamma(1+(2a+1)/delta) >= 0": threshold >= 0,
    }
    first = next((name for name, ok in ranges.items() if not ok), None)

    s = c - a - b
    e1 = g / d ** 2
    e2 = float("nan")
    e3 = np.full(n_max + 1, np.nan)
    n4_min, n4_arg, dev = float("nan"), float("nan"), float("nan")
    representation_ok = b > 0
    if first is None:
        e2 = (al * d - g * (d + 2 * a + 1) - g * (a + 1) * (c - a - 2)) / (d * d * (s - 1))
        e3 = e3_coefficients(h, p, np.arange(n_max + 1))
        if e1 < 0:
            first = "e1 >= 0"
        elif e2 < 0:
            first = "e2 >= 0"
        elif np.any(e3 < 0):
            first = f"e3({int(np.argmax(e3 < 0))}) >= 0"
        if representation_ok:
            t = (np.arange(grid_points) + 0.5) / grid_points
            direct = n4_direct(h, p, t)
            k = int(np.argmin(direct))
            n4_min, n4_arg = float(direct[k]), float(t[k])
            far = t > 0.01
            expansion = n4_expansion(h, p, t[far])
            dev = float(np.max(np.abs(expansion - direct[far]) / np.maximum(1.0, np.abs(direct[far]))))
            if first is None and n4_min < 0:
                first = f"N4(t) >= 0 (N4({n4_arg:.4g}) = {n4_min:.3g})"
    return HohlovValidation(ranges, e1, e2, e3, n4_min, n4_arg, dev, representation_ok, first)
