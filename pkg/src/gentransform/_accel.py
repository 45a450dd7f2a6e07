"""Euler transformation for power series evaluated on or near z = -1.

For a coefficient sequence ``a`` and a point ``z`` with ``Re z < 1/2``,

    sum_{n >= m} a_n z^n = z^m * sum_k (Delta^k a)_m * z^k / (1 - z)^(k + 1)

where ``Delta`` is the forward difference.  At ``z = -1`` this is the
classical Euler transform of an alternating series; it also returns the Abel
value of series such as ``1 - 1 + 1 - ...``.  The first ``m`` terms are summed
directly, the tail is transformed.
"""

import numpy as np


def euler_split_sum(a, z, m, order):
    """Direct sum of ``a[:m]`` plus the order-``order`` Euler tail from ``m``.

    Returns ``(value, last_term)``; ``a`` must hold at least ``m + order + 1``
    coefficients.
    """
    a = np.asarray(a)
    if a.size < m + order + 1:
        raise ValueError("not enough coefficients for the requested split")
    head = a[:m]
    powers = z ** np.arange(m)
    direct = np.sum(head * powers) if m else 0.0

    diffs = np.empty(order + 1, dtype=np.result_type(a, complex if np.iscomplexobj(z) else float))
    d = a[m:m + order + 1].astype(diffs.dtype, copy=True)
    for k in range(order + 1):
        diffs[k] = d[0]
        d = d[1:] - d[:-1]
    ratio = z / (1.0 - z)
    terms = diffs * ratio ** np.arange(order + 1) / (1.0 - z)
    tail = z ** m * np.sum(terms)
    return direct + tail, abs(z ** m * terms[-1])


def boundary_sum(a, z, tol=1e-8, orders=(8, 12, 16, 20, 24, 32, 40)):
    """Accelerated value of ``sum a_n z^n`` from a finite coefficient array.

    The tail is transformed as late in the array as possible and compared
    with the value from an earlier split; the discrepancy plus the size of the
    last Euler term is the error estimate.  Returns
    ``(value, error_estimate, converged)``.
    """
    a = np.asarray(a)
    if not np.real(z) < 0.5:
        raise ValueError("Euler transformation needs Re z < 1/2")
    best = None
    for order in orders:
        late = a.size - order - 1
        early = late - max(order // 2, 4)
        if early < 0:
            break
        v_late, last = euler_split_sum(a, z, late, order)
        v_early, _ = euler_split_sum(a, z, early, order)
        err = abs(v_late - v_early) + last
        if best is None or err < best[1]:
            best = (v_late, err)
        if err <= tol:
            return v_late, err, True
    if best is None:
        # too few coefficients to transform: the series is a short polynomial
        value = np.sum(a * z ** np.arange(a.size))
        return value, 0.0, True
    return best[0], best[1], False
