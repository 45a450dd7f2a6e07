"""Sharp admissibility bounds for a generalized integral transform on the
classes W_beta^delta(alpha, gamma) of analytic functions, with numerical
verification of membership and sharpness."""

__version__ = "0.1.0"

from .exceptions import ConvergenceError, DegenerateBoundError, ParameterError, QuadratureError
from .params import ClassParams, HohlovParams, TargetParams, derive_mu_nu, max_admissible_gamma
from .series import (PowerSeries, apply_transform, eval_at, extremal_power, extremal_series,
                     functional_H, hadamard, log_derivative_product, principal_power)
from .hypergeom import HypergeomSpec, hyper, pfq_eval
from .weights import Bernardi, CarlsonShaffer, Custom, Hohlov, moments, normalize_check, parse_weight
from .bounds import (BoundResult, beta2_hohlov, beta_thm1, beta_thm1_bernardi_closed, beta_thm2,
                     beta_thm2_bernardi_closed, beta_thm3, combine_duality, validate_hohlov)
from .verify import (MembershipReport, SharpnessReport, hohlov_kernel_check, membership_test,
                     sharpness_thm1, sharpness_thm2, transform_identity_check)
