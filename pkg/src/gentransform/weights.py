"""Admissible weights lambda(t) on (0, 1) and their moment sequences.

Four families are supported:

* ``Bernardi(c)``        lambda(t) = (1+c) t^c,  c > -1
* ``Hohlov(a, b, c)``    a beta-type density times 2F1(c-a, 1-a; c-a-b+1; 1-t);
                         the transform built from it is the convolution with
                         2F1(a, b; c; z)
* ``CarlsonShaffer``     Hohlov with a = 1, i.e. the Beta(b, c-b) density
* ``Custom``             any callable with declared endpoint exponents

Moments ``tau_n = int_0^1 t^n lambda(t) dt`` are analytic for Bernardi and
computed by quadrature otherwise (one vectorised pass for all n).
"""

from dataclasses import dataclass, field
from functools import lru_cache
import math
import re
from typing import Callable, NamedTuple

import numpy as np
from scipy import special

from . import hypergeom
from .exceptions import ParameterError
from .quadrature import integrate_1d

MOMENT_ORDER = 256
MOMENT_TOL = 1e-12


@dataclass(frozen=True)
class Bernardi:
    c: float = 0.0

    def __post_init__(self):
        if not self.c > -1:
            raise ParameterError(f"Bernardi weight needs c > -1 (got {self.c})")

    @property
    def exponents(self):
        return (float(self.c), 0.0)

    def density(self, t, u=None):
        t = np.asarray(t, dtype=float)
        return (1.0 + self.c) * t ** self.c

    def describe(self) -> str:
        return f"bernardi:c={self.c:g}"


@dataclass(frozen=True)
class Hohlov:
    a: float
    b: float
    c: float

    def __post_init__(self):
        a, b, c = self.a, self.b, self.c
        if not (a > 0 and b > 0 and c > 0):
            raise ParameterError(f"Hohlov weight needs a, b, c > 0 (got {a}, {b}, {c})")
        # integrability of t^(b-1) (1-t)^(c-a-b)
        if not c - a - b > -1:
            raise ParameterError(f"Hohlov weight needs c - a - b > -1 (got {c - a - b:g})")

    @property
    def _polynomial_factor(self) -> bool:
        return any(hypergeom._is_nonpositive_int(x) for x in (1 - self.a, self.c - self.a))

    @property
    def exponents(self):
        a, b, c = self.a, self.b, self.c
        # near t = 0 the 2F1 factor at argument 1 - t stays bounded when a >= b,
        # otherwise it grows like t^(a-b)
        p0 = b - 1.0 if (a >= b or self._polynomial_factor) else a - 1.0
        return (float(p0), float(c - a - b))

    @property
    def log_prefactor(self) -> float:
        a, b, c = self.a, self.b, self.c
        return math.lgamma(c) - math.lgamma(a) - math.lgamma(b) - math.lgamma(c - a - b + 1)

    def density(self, t, u=None):
        """Weight at ``t``; pass ``u = 1 - t`` when it is known more accurately."""
        a, b, c = self.a, self.b, self.c
        t = np.asarray(t, dtype=float)
        u = 1.0 - t if u is None else np.asarray(u, dtype=float)
        if a == 1.0:
            factor = np.ones_like(t)
        else:
            factor = _hohlov_factor(a, b, c, t, u, self._polynomial_factor)
        return math.exp(self.log_prefactor) * t ** (b - 1) * u ** (c - a - b) * factor

    def describe(self) -> str:
        return f"hohlov:a={self.a:g},b={self.b:g},c={self.c:g}"


def _connection(a, b, c, t):
    A, B, C = c - a, 1 - a, c - a - b + 1
    g1 = special.gamma(C) * special.gamma(a - b) * special.rgamma(C - A) * special.rgamma(C - B)
    g2 = special.gamma(C) * special.gamma(b - a) * special.rgamma(A) * special.rgamma(B)
    return (g1 * hypergeom.hyp2f1(A, B, 1 + b - a, t)
            + g2 * t ** (a - b) * hypergeom.hyp2f1(1 - b, c - b, 1 + a - b, t))


def _hohlov_factor(a, b, c, t, u, polynomial):
    """2F1(c-a, 1-a; c-a-b+1; 1-t) without forming 1 - t when t is small.

    For t < 1/4 the function is re-expanded around t = 0: by the connection
    formula for argument 1 - t, or by its logarithmic limit when a - b is an
    integer.
    """
    t, u = np.atleast_1d(t), np.atleast_1d(u)
    out = np.empty_like(t)
    small = (t > 0) & (t < 0.25) & (not polynomial)
    big = ~small
    if big.any():
        out[big] = hypergeom.hyp2f1(c - a, 1 - a, c - a - b + 1, u[big])
    if small.any():
        ts = t[small]
        if float(a - b).is_integer():
            out[small] = hypergeom.hyp2f1_log_case(c - a, 1 - a, int(a - b), ts)
        else:
            out[small] = _connection(a, b, c, ts)
    return out


def CarlsonShaffer(b: float, c: float) -> Hohlov:
    """The a = 1 member of the Hohlov family."""
    return Hohlov(1.0, b, c)


@dataclass(frozen=True, eq=False)
class Custom:
    """A user supplied weight.

    ``func`` must accept an array of points in (0, 1).  ``exponents`` declares
    the algebraic endpoint behaviour for the quadrature.  ``renormalization``
    records the factor applied to make the mass 1 (1.0 if none was applied).
    """
    func: Callable
    exponents: tuple = (0.0, 0.0)
    label: str = "custom"
    renormalization: float = 1.0
    # (t, lambda) samples of a piecewise linear weight; enables exact moments
    knots: tuple | None = None

    def density(self, t, u=None):
        t = np.asarray(t, dtype=float)
        with np.errstate(all="ignore"):
            v = np.asarray(self.func(t), dtype=float)
        return np.broadcast_to(v, t.shape).copy() if v.shape != t.shape else v

    def describe(self) -> str:
        return self.label


def lambda_eval(w, t):
    """Pointwise value of the weight; ``t`` may be an array."""
    t_arr = np.asarray(t, dtype=float)
    if np.any((t_arr <= 0) | (t_arr >= 1)):
        raise ParameterError("lambda_eval needs points strictly inside (0, 1)")
    v = w.density(t_arr)
    return float(v) if np.ndim(t) == 0 else v


class MomentSequence(NamedTuple):
    tau: np.ndarray
    error: float

    @property
    def order(self) -> int:
        return self.tau.size - 1

    def check(self, tol: float = 1e-10) -> list[str]:
        """List of violated invariants (empty when normalized, positive and monotone)."""
        problems = []
        if abs(self.tau[0] - 1.0) > tol:
            problems.append(f"tau_0 = {self.tau[0]!r} is not 1")
        if np.any(self.tau <= 0):
            problems.append("nonpositive moment")
        if np.any(np.diff(self.tau) > tol):
            problems.append("moments are not nonincreasing")
        return problems


@lru_cache(maxsize=256)
def _moment_table(w, size: int) -> MomentSequence:
    n = np.arange(size, dtype=float)
    if isinstance(w, Bernardi):
        tau = (1.0 + w.c) / (n + w.c + 1.0)
        tau.flags.writeable = False
        return MomentSequence(tau, 0.0)

    if getattr(w, "knots", None) is not None:
        tau = _spline_moments(*w.knots, n)
        tau.flags.writeable = False
        return MomentSequence(tau, 0.0)

    def integrand(t, u):
        return t[None, :] ** n[:, None] * w.density(t, u)[None, :]

    res = integrate_1d(integrand, MOMENT_TOL, exponents=w.exponents,
                       max_panels=20000, complement=True)
    tau = np.array(res.value, dtype=float)
    tau.flags.writeable = False
    return MomentSequence(tau, float(res.error))


def _spline_moments(x, y, n):
    """Exact ``int_0^1 t^n s(t) dt`` for the linear interpolant s of (x, y)."""
    x0, x1 = x[:-1, None], x[1:, None]
    slope = np.diff(y)[:, None] / np.where(np.diff(x) > 0, np.diff(x), 1.0)[:, None]
    icpt = y[:-1, None] - slope * x0
    m1, m2 = n[None, :] + 1.0, n[None, :] + 2.0
    seg = icpt * (x1 ** m1 - x0 ** m1) / m1 + slope * (x1 ** m2 - x0 ** m2) / m2
    return np.sum(seg, axis=0)


def moments(w, order: int = MOMENT_ORDER) -> MomentSequence:
    """``tau_0 .. tau_order``.  Tables are cached per weight in power-of-two sizes."""
    size = MOMENT_ORDER + 1
    while size < order + 1:
        size = 2 * (size - 1) + 1
    table = _moment_table(w, size)
    return MomentSequence(table.tau[:order + 1], table.error)


def moment(w, n: int) -> float:
    if n < 0:
        raise ParameterError("moment index must be nonnegative")
    return float(moments(w, max(n, 1)).tau[n])


class NormalizationReport(NamedTuple):
    mass: float
    mass_error: float
    minimum: float
    argmin: float
    nonnegative: bool

    @property
    def normalized(self) -> bool:
        return abs(self.mass - 1.0) <= 1e-8


def normalize_check(w, points: int = 10_000) -> NormalizationReport:
    """Mass by quadrature and the minimum over an equispaced grid on [0, 1].

    Endpoint values are the limits of the formula where finite; non-finite
    values (integrable blow-ups) are skipped for the minimum.
    """
    res = integrate_1d(w.density, 1e-10, exponents=w.exponents, max_panels=20000, complement=True)
    t = np.linspace(0.0, 1.0, points)
    with np.errstate(all="ignore"):
        v = np.asarray(w.density(t), dtype=float)
    finite = np.isfinite(v)
    k = int(np.argmin(np.where(finite, v, np.inf)))
    vmin = float(v[k])
    return NormalizationReport(float(res.value), float(res.error), vmin, float(t[k]), vmin >= 0.0)


def load_weight_file(path, label: str | None = None) -> Custom:
    """Custom weight from a two-column text file ``t  lambda(t)``.

    The weight is the piecewise linear interpolant of the samples (constant
    beyond the first and last abscissa), rescaled to unit mass.
    """
    data = np.loadtxt(path, ndmin=2)
    if data.shape[1] != 2:
        raise ParameterError(f"{path}: expected two columns, found {data.shape[1]}")
    order = np.argsort(data[:, 0], kind="stable")
    t, lam = data[order, 0], data[order, 1]
    if t[0] < 0 or t[-1] > 1:
        raise ParameterError(f"{path}: abscissae must lie in [0, 1]")
    if np.any(lam < 0):
        raise ParameterError(f"{path}: negative weight values")
    # exact mass of the interpolant, including the constant extensions
    knots = np.concatenate([[0.0], t, [1.0]])
    vals = np.concatenate([[lam[0]], lam, [lam[-1]]])
    mass = float(np.sum(0.5 * (vals[1:] + vals[:-1]) * np.diff(knots)))
    if not mass > 0:
        raise ParameterError(f"{path}: weight has zero mass")
    factor = 1.0 / mass
    t_ro, lam_ro = t.copy(), lam * factor

    def func(x):
        return np.interp(x, t_ro, lam_ro)

    knots = (np.concatenate([[0.0], t_ro, [1.0]]), np.concatenate([[lam_ro[0]], lam_ro, [lam_ro[-1]]]))
    return Custom(func, (0.0, 0.0), label or f"file:{path}", factor, knots)


_DESCRIPTOR = re.compile(r"^\s*([a-z\-_]+)\s*(?::\s*(.*))?$", re.IGNORECASE)


def _keyvals(text: str) -> dict:
    out = {}
    for part in filter(None, (p.strip() for p in (text or "").split(","))):
        if "=" not in part:
            raise ParameterError(f"expected key=value, got {part!r}")
        k, v = (s.strip() for s in part.split("=", 1))
        try:
            out[k.lower()] = float(v)
        except ValueError:
            raise ParameterError(f"weight parameter {k} is not a number: {v!r}") from None
    return out


def parse_weight(descriptor: str):
    """Build a weight from text such as ``bernardi:c=0``, ``hohlov:a=1,b=0.5,c=2.7``,
    ``carlson-shaffer:b=0.5,c=2.7`` or ``file:weights.txt``."""
    m = _DESCRIPTOR.match(descriptor)
    if not m:
        raise ParameterError(f"cannot parse weight descriptor {descriptor!r}")
    kind, rest = m.group(1).lower().replace("_", "-"), m.group(2) or ""
    if kind == "file":
        return load_weight_file(rest.strip())
    kv = _keyvals(rest)

    def need(*names):
        missing = [n for n in names if n not in kv]
        extra = sorted(set(kv) - set(names))
        if missing or extra:
            raise ParameterError(
                f"weight {kind!r} takes {', '.join(names)}"
                + (f"; missing {', '.join(missing)}" if missing else "")
                + (f"; unknown {', '.join(extra)}" if extra else ""))
        return [kv[n] for n in names]

    if kind == "bernardi":
        return Bernardi(*need("c"))
    if kind == "hohlov":
        return Hohlov(*need("a", "b", "c"))
    if kind in ("carlson-shaffer", "carlsonshaffer", "cs"):
        return CarlsonShaffer(*need("b", "c"))
    raise ParameterError(f"unknown weight family {kind!r}")
