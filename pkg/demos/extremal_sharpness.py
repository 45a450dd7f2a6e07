"""Why the first bound cannot be improved.

The extremal function of the class at level beta is pushed through the
transform; its target functional reaches exactly xi at z = -1, and the grid
membership margin at xi shrinks to zero as the sampled radius approaches 1.
"""

import numpy as np

from gentransform import bounds, verify, weights
from gentransform.params import ClassParams

p, w, xi = ClassParams(2.0, 0.2, 1.0), weights.Bernardi(1), 0.25
beta = bounds.beta_thm1(p, w, xi).beta
print(f"alpha={p.alpha} gamma={p.gamma} delta={p.delta} (mu={p.mu:.6f}, nu={p.nu:.6f}), xi={xi}")
print(f"sharp beta = {beta:.12f}")

rep = verify.sharpness_thm1(p, w, xi)
print(f"transformed extremal at z=-1: {rep.achieved:.12f}  (tail estimate {rep.tail_estimate:.1e})")

# the same function, checked against the target class on growing disks
order = verify.series_order_for()
Q = verify.transformed_extremal_power(p, beta, w, order)
target = ClassParams(1.0, 0.0, p.delta, xi)
for r_max in (0.5, 0.9, 0.99, 0.995):
    m = verify.membership_from_power(Q, target, radii=np.linspace(0.1, r_max, 20)).margin
    print(f"  r <= {r_max:<6} margin {m:.6f}")

# a slightly stronger target class already fails
worse = verify.membership_from_power(Q, target.with_beta(xi + 0.05))
print(f"at xi + 0.05: member={worse.is_member} margin={worse.margin:.4f}")
