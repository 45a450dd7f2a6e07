"""Numerical checks of class membership, the transform identity and sharpness.

Membership in W_beta^delta(alpha, gamma) asks for one angle phi with
``Re e^{i phi} (H(z) - beta) > 0`` on the whole disk.  On a finite polar
grid the best angle is found by maximising, over phi, the smallest value
``Re e^{i phi} w`` across the sampled points ``w = H(z) - beta``; only the
convex hull of the samples matters for that minimum.  The verdict is
therefore grid-approximate: a positive margin is evidence, not proof.
"""

from dataclasses import dataclass, field
import math
import warnings

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from . import bounds, hypergeom
from .params import ClassParams, HohlovParams, TargetParams
from ._fixed import FixedSeries
from .series import (PowerSeries, apply_transform, eval_at, eval_on_circles, extremal_power,
                     extremal_series, functional_H, functional_H_from_power,
                     log_derivative_product, principal_power)
from .weights import moments

DEFAULT_RADII = np.linspace(0.1, 0.995, 20)
DEFAULT_THETA = 720
DEFAULT_PHI = 720
SHARPNESS_TOL = 1e-4


def series_order_for(r_max: float = DEFAULT_RADII[-1], tol: float = 1e-12,
                     scale: float = 10.0) -> int:
    """Truncation order N with ``scale * r_max^N / (1 - r_max)`` below ``tol``."""
    return int(math.ceil(math.log(tol * (1.0 - r_max) / scale) / math.log(r_max)))


# ---------------------------------------------------------------- membership


@dataclass
class MembershipReport:
    is_member: bool
    margin: float
    best_phi: float
    grid: dict
    excluded_points: int = 0

    def __post_init__(self):
        self.is_member = bool(self.margin > 0)


def _wrap(phi):
    return float(phi - 2.0 * np.pi * np.floor((phi + np.pi) / (2.0 * np.pi))) if phi != np.pi else phi


def _candidates(w):
    pts = np.unique(np.column_stack([w.real, w.imag]), axis=0)
    if len(pts) >= 3:
        try:
            return pts[ConvexHull(pts).vertices]
        except QhullError:
            pass  # collinear samples: keep all of them
    return pts


def half_plane_margin(w, n_phi: int = DEFAULT_PHI, refine_steps: int = 60):
    """``(margin, phi)`` maximising ``min Re(e^{i phi} w)`` over phi in (-pi, pi]."""
    pts = _candidates(np.asarray(w, dtype=complex).ravel())
    x, y = pts[:, 0], pts[:, 1]

    def g(phi):
        return np.min(x * np.cos(phi) - y * np.sin(phi))

    phis = 2.0 * np.pi * np.arange(n_phi) / n_phi
    phis = np.where(phis > np.pi, phis - 2.0 * np.pi, phis)
    vals = np.min(np.outer(np.cos(phis), x) - np.outer(np.sin(phis), y), axis=1)
    k = int(np.argmax(vals))
    best_phi, best = float(phis[k]), float(vals[k])
    # local ternary refinement; the objective is concave wherever it is positive
    lo, hi = best_phi - 2.0 * np.pi / n_phi, best_phi + 2.0 * np.pi / n_phi
    for _ in range(refine_steps):
        m1, m2 = lo + (hi - lo) / 3.0, hi - (hi - lo) / 3.0
        if g(m1) < g(m2):
            lo = m1
        else:
            hi = m2
    mid = 0.5 * (lo + hi)
    if g(mid) > best:
        best_phi, best = mid, float(g(mid))
    return best, _wrap(best_phi)


def membership_test(f: PowerSeries, p: ClassParams, radii=None, n_theta: int = DEFAULT_THETA,
                    n_phi: int = DEFAULT_PHI, tol: float = 1e-8) -> MembershipReport:
    """Grid test of ``f`` in W_beta^delta(alpha, gamma) with ``beta = p.beta``.

    Radii whose truncation tail exceeds ``tol`` are dropped (with a warning);
    raise the series order of ``f`` to keep them.
    """
    P = principal_power(f.divide_by_z(), p.delta)
    return membership_from_power(P, p, radii, n_theta, n_phi, tol)


def membership_from_power(P: PowerSeries, p: ClassParams, radii=None,
                          n_theta: int = DEFAULT_THETA, n_phi: int = DEFAULT_PHI,
                          tol: float = 1e-8) -> MembershipReport:
    """As :func:`membership_test`, for a function given by ``P = (f/z)**delta``."""
    if p.beta is None:
        raise ValueError("membership test needs ClassParams with beta set")
    radii = DEFAULT_RADII if radii is None else np.asarray(radii, dtype=float)
    H = functional_H_from_power(P, p.alpha, p.gamma, p.delta)
    values, errors = eval_on_circles(H, radii, n_theta)
    ok = errors <= tol
    excluded = int((~ok).sum()) * n_theta
    if excluded:
        warnings.warn(f"membership test: {excluded} grid points excluded "
                      f"(series tail above {tol:g}; order {P.order} too low)", RuntimeWarning)
    if not ok.any():
        raise ArithmeticError("no grid radius could be evaluated to tolerance")
    margin, phi = half_plane_margin(values[ok] - p.beta, n_phi)
    grid = {"radii": int(radii.size), "r_min": float(radii.min()), "r_max": float(radii[ok].max()),
            "theta_points": n_theta, "phi_points": n_phi, "order": H.order}
    return MembershipReport(margin > 0, float(margin), phi, grid, excluded)


def transformed_extremal_power(p: ClassParams, beta: float, w, order: int) -> PowerSeries:
    """``(F/z)**delta`` for F the transform of the extremal function of ``p`` at ``beta``.

    Built as ``tau_n b_n`` from the extremal coefficients, so it stays usable
    when the extremal ``f`` itself is only a formal series.
    """
    b = extremal_power(beta, p.delta, p.mu, p.nu, order + 1).coeffs
    q = b * moments(w, order).tau[:order + 1]
    q[0] = 1.0
    return PowerSeries(q)


# ---------------------------------------------------------- transform identity


def transform_identity_check(f: PowerSeries, w, delta: float) -> float:
    """Largest deviation between coefficient n of ``(F/z)^d (zF'/F)`` and
    ``tau_n`` times that of ``(f/z)^d (zf'/f)``, relative to the largest
    right-hand coefficient."""
    tau = moments(w, f.order).tau
    F = apply_transform(f, tau, delta)
    lhs = log_derivative_product(F, delta).coeffs
    rhs = log_derivative_product(f, delta).coeffs * tau[:f.order]
    scale = max(float(np.max(np.abs(rhs))), np.finfo(float).tiny)
    return float(np.max(np.abs(lhs - rhs)) / scale)


# ---------------------------------------------------------------- sharpness


@dataclass
class SharpnessReport:
    target: float
    achieved: float
    tail_estimate: float
    verdict: bool = field(init=False)
    beta: float = float("nan")
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        self.verdict = bool(abs(self.achieved - self.target)
                            <= max(SHARPNESS_TOL, 10.0 * self.tail_estimate))


# f coefficients beyond this size switch sharpness_thm1 to fixed-point arithmetic
GROWTH_LIMIT = 1e4


def _pipeline_fixed(b, tau, delta, bits):
    B = FixedSeries.from_float(b, bits)
    one = 1 << bits
    g = B.power(1.0 / delta)                    # f / z
    Q = g.power(delta).hadamard(tau)            # (F/z)^delta
    Q.c[0] = one
    G = Q.power(1.0 / delta)                    # F / z
    S = G.zderiv() * G.power(-1)                # z G'/G
    S.c[0] += one
    return (G.power(delta) * S).to_float()


def _transformed_functional_fixed(b, tau, delta, growth):
    """The f -> F -> (F/z)^d (zF'/F) chain in fixed point, doubling the
    working precision until two runs 64 bits apart agree."""
    bits = 96 + 2 * int(math.log2(max(growth, 2.0)))
    while True:
        lo = _pipeline_fixed(b, tau, delta, bits)
        hi = _pipeline_fixed(b, tau, delta, bits + 64)
        if np.max(np.abs(lo - hi)) <= 1e-14 * max(1.0, np.max(np.abs(hi))):
            return hi, bits + 64
        bits *= 2
        if bits > 1 << 16:
            raise ArithmeticError("fixed-point pipeline did not stabilise")


def sharpness_thm1(p: ClassParams, w, t, order: int = 256) -> SharpnessReport:
    """Value at z = -1 of ``(F/z)^d (zF'/F)`` for the transformed extremal function.

    The chain runs in double precision unless the extremal series grows
    (its ``(f/z)^delta`` vanishes inside the disk); then it is repeated in
    fixed-point arithmetic at a self-checked precision.
    """
    xi = bounds._target_xi(t)
    beta = bounds.beta_thm1(p, w, xi).beta
    tau = moments(w, order).tau
    with np.errstate(all="ignore"):
        try:
            f = extremal_series(beta, p.delta, p.mu, p.nu, order)
            growth = float(np.max(np.abs(f.coeffs)))
        except ValueError:
            f, growth = None, math.inf
    diagnostics = {"order": order, "growth": growth}
    if growth <= GROWTH_LIMIT:
        G = log_derivative_product(apply_transform(f, tau, p.delta), p.delta)
        diagnostics["arithmetic"] = "float64"
    else:
        b = extremal_power(beta, p.delta, p.mu, p.nu, order).coeffs
        coeffs, bits = _transformed_functional_fixed(b, tau, p.delta, min(growth, 1e300))
        G = PowerSeries(coeffs)
        diagnostics["arithmetic"] = f"fixed-point ({bits} bits)"
    val = eval_at(G, -1.0, accelerated=True)
    diagnostics["converged"] = val.converged
    return SharpnessReport(xi, float(val.value.real), val.error, beta, diagnostics)


def sharpness_thm2(w, t, p: ClassParams | None = None, order: int = 256) -> SharpnessReport:
    """``H0(-1)`` for the transformed extremal function of the second bound.

    Without ``p`` this sums ``1 + 2(1-beta) sum tau_n (-1)^n`` directly; with
    ``p`` the whole chain (extremal f, transform, functional H) is run in the
    class W^delta(alpha, gamma) described by ``p``.
    """
    xi = bounds._target_xi(t)
    beta = bounds.beta_thm2(w, xi).beta
    tau = moments(w, order).tau
    if p is None:
        c = 2.0 * (1.0 - beta) * tau
        c[0] = 1.0
        H0 = PowerSeries(c)
    else:
        f = extremal_series(beta, p.delta, p.mu, p.nu, order + 1)
        F = apply_transform(f, tau, p.delta)
        H0 = functional_H(F, p.alpha, p.gamma, p.delta)
    val = eval_at(H0, -1.0, accelerated=True)
    return SharpnessReport(xi, float(val.value.real), val.error, beta,
                           {"converged": val.converged, "order": order,
                            "pipeline": p is not None})


# ------------------------------------------------------------ Hohlov kernel


def n3_series(h: HohlovParams, p: ClassParams, order: int) -> PowerSeries:
    """The kernel N3 as ``w0 F(a) + w1 F(a+1) + w2 F(a+2)`` with ``F(x) = 2F1(x, b; c; z)``."""
    w = bounds.hohlov_weights(h, p)
    coeffs = sum(wj * hypergeom.pfq_coefficients((h.a + j, h.b), (h.c,), order + 1)
                 for j, wj in enumerate(w))
    return PowerSeries(coeffs)


def n3_series_unreduced(h: HohlovParams, p: ClassParams, order: int) -> PowerSeries:
    """N3 before the contiguous reduction, with the shifted 2F1 terms times z and z^2."""
    a, b, c = h.a, h.b, h.c
    al, g, d = p.alpha, p.gamma, p.delta
    size = order + 1
    t0 = hypergeom.pfq_coefficients((a, b), (c,), size)
    t1 = np.concatenate([[0.0], hypergeom.pfq_coefficients((a + 1, b + 1), (c + 1,), size - 1)])
    t2 = np.concatenate([[0.0, 0.0], hypergeom.pfq_coefficients((a + 2, b + 2), (c + 2,), size - 2)])
    k1 = a * b / (c * d) * (al - g + g / d)
    k2 = a * (a + 1) * b * (b + 1) * g / (c * (c + 1) * d * d)
    return PowerSeries(t0 + k1 * t1 + k2 * t2)


@dataclass
class HohlovKernelReport:
    passed: bool
    min_real: float
    argmin: complex
    n3_at_minus_one: float
    n3_at_zero: float
    beta: float
    combiner_ok: bool
    reduction_deviation: float
    excluded_points: int = 0


def hohlov_kernel_check(h: HohlovParams, p: ClassParams, radii=None,
                        n_theta: int = DEFAULT_THETA, tol: float = 1e-8,
                        order: int | None = None) -> HohlovKernelReport:
    """Sample ``Re N3`` on the polar grid and compare with ``N3(-1) = beta2``."""
    radii = DEFAULT_RADII if radii is None else np.asarray(radii, dtype=float)
    order = order or series_order_for(float(radii.max()))
    N3 = n3_series(h, p, order)
    values, errors = eval_on_circles(N3, radii, n_theta)
    ok = errors <= tol
    excluded = int((~ok).sum()) * n_theta
    if excluded:
        warnings.warn(f"hohlov_kernel_check: {excluded} grid points excluded", RuntimeWarning)
    vals = values[ok]
    k = np.unravel_index(int(np.argmin(vals.real)), vals.shape)
    r = radii[ok][k[0]]
    z_min = complex(r * np.exp(2j * np.pi * k[1] / n_theta))
    beta2 = bounds.beta2_hohlov(h, p)
    beta = bounds.combine_duality(h.beta1, beta2)
    combiner_ok = abs((1.0 - beta) - 2.0 * (1.0 - h.beta1) * (1.0 - beta2)) <= 1e-12
    unreduced = n3_series_unreduced(h, p, min(order, 512)).coeffs
    reduced = N3.coeffs[:unreduced.size]
    dev = float(np.max(np.abs(unreduced - reduced)) / max(1.0, np.max(np.abs(reduced))))
    min_real = float(vals.real[k])
    return HohlovKernelReport(bool(min_real > beta2 - tol), min_real, z_min, beta2,
                              float(N3.coeffs[0].real), beta, combiner_ok, dev, excluded)
