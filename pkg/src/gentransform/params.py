"""Parameter containers for the classes W_beta^delta(alpha, gamma)."""

from dataclasses import dataclass, field
import math
from typing import Optional

from .exceptions import ParameterError

# relative slack for a discriminant that is zero up to rounding (mu == nu)
_DISC_SLACK = 1e-12


def derive_mu_nu(alpha: float, gamma: float) -> tuple[float, float]:
    """Split ``(alpha, gamma)`` into ``(mu, nu)`` with ``mu*nu = gamma``,
    ``mu + nu = alpha - gamma`` and ``0 <= mu <= nu``.

    Raises ParameterError when the roots are complex or negative.
    """
    if alpha < 0 or gamma < 0:
        raise ParameterError(f"alpha and gamma must be nonnegative (alpha={alpha}, gamma={gamma})")
    s = alpha - gamma
    if s < 0:
        raise ParameterError(f"alpha - gamma must be nonnegative (got {s})")
    if gamma == 0:
        return 0.0, float(s)
    disc = s * s - 4.0 * gamma
    if disc < 0:
        if disc < -_DISC_SLACK * max(1.0, s * s):
            raise ParameterError(
                f"complex mu,nu: (alpha-gamma)^2 - 4 gamma = {disc:.6g} < 0")
        disc = 0.0
    root = math.sqrt(disc)
    nu = 0.5 * (s + root)
    # mu from the product keeps full relative accuracy when mu << nu
    mu = gamma / nu
    return mu, nu


def max_admissible_gamma(alpha: float) -> float:
    """Largest gamma with real (mu, nu) for the given alpha."""
    return alpha + 2.0 - 2.0 * math.sqrt(alpha + 1.0)


@dataclass(frozen=True)
class ClassParams:
    alpha: float
    gamma: float
    delta: float
    beta: Optional[float] = None
    mu: float = field(init=False)
    nu: float = field(init=False)

    def __post_init__(self):
        if not self.delta > 0:
            raise ParameterError(f"delta must be positive (got {self.delta})")
        if self.beta is not None and not self.beta < 1:
            raise ParameterError(f"beta must be < 1 (got {self.beta})")
        mu, nu = derive_mu_nu(self.alpha, self.gamma)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "nu", nu)

    def with_beta(self, beta: float) -> "ClassParams":
        return ClassParams(self.alpha, self.gamma, self.delta, beta)


@dataclass(frozen=True)
class TargetParams:
    xi: float

    def __post_init__(self):
        if not self.xi < 1:
            raise ParameterError(f"xi must be < 1 (got {self.xi})")


@dataclass(frozen=True)
class HohlovParams:
    a: float
    b: float
    c: float
    beta1: float = 0.0

    def __post_init__(self):
        if not self.beta1 < 1:
            raise ParameterError(f"beta1 must be < 1 (got {self.beta1})")


GRID_ALPHA = (0.5, 1.0, 2.0, 3.0)
GRID_DELTA = (0.5, 1.0, 2.0)
GRID_C = (0.0, 1.0, 2.0)
GRID_XI = (-0.5, 0.0, 0.5)


def standard_grid():
    """Yield ``(ClassParams, c, xi)`` over the reference sweep.

    gamma takes 0, half the largest admissible value and the largest
    admissible value (where mu = nu); c is a Bernardi parameter.
    """
    for alpha in GRID_ALPHA:
        top = max_admissible_gamma(alpha)
        for gamma in (0.0, top / 2.0, top):
            for delta in GRID_DELTA:
                p = ClassParams(alpha, gamma, delta)
                for c in GRID_C:
                    for xi in GRID_XI:
                        yield p, c, xi
