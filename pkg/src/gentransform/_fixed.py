"""Fixed-point power series on Python integers.

A real coefficient x is stored as ``round(x * 2**bits)``.  Used when the
formal series of an extremal function grows geometrically (its delta-th power
vanishes inside the disk) and double precision cancels catastrophically,
although the final coefficients are of moderate size.
"""

from fractions import Fraction

import numpy as np


class FixedSeries:
    __slots__ = ("c", "bits")

    def __init__(self, coeffs, bits):
        self.c = np.asarray(coeffs, dtype=object)
        self.bits = bits

    @classmethod
    def from_float(cls, coeffs, bits):
        coeffs = np.asarray(coeffs)
        if np.iscomplexobj(coeffs):
            if np.any(coeffs.imag):
                raise ValueError("fixed-point series hold real coefficients only")
            coeffs = coeffs.real
        # Fraction keeps the float exact before scaling
        return cls([round(Fraction(float(x)) * (1 << bits)) for x in coeffs], bits)

    def to_float(self):
        scale = Fraction(1, 1 << self.bits)
        return np.array([float(v * scale) for v in self.c])

    def __len__(self):
        return len(self.c)

    def __mul__(self, other):
        n = len(self)
        a, b = self.c, other.c
        out = [sum(a[:m + 1] * b[m::-1]) >> self.bits for m in range(n)]
        return FixedSeries(out, self.bits)

    def hadamard(self, weights):
        w = FixedSeries.from_float(weights[:len(self)], self.bits).c
        return FixedSeries([(x * y) >> self.bits for x, y in zip(self.c, w)], self.bits)

    def __add__(self, other):
        return FixedSeries(self.c + other.c, self.bits)

    def zderiv(self):
        return FixedSeries([k * v for k, v in enumerate(self.c)], self.bits)

    def power(self, e):
        """``self**e`` for a unit series (constant term one) and real ``e``.

        Uses the recurrence ``m Q_m = sum_k (k (e+1) - m) a_k Q_{m-k}``.
        """
        one = 1 << self.bits
        if self.c[0] != one:
            raise ValueError("fixed-point power needs constant term one")
        e = Fraction(float(e)) if not isinstance(e, Fraction) else e
        p, q = e.numerator, e.denominator
        n = len(self)
        a = self.c
        ka = np.array([k * v for k, v in enumerate(a)], dtype=object)
        out = np.zeros(n, dtype=object)
        out[0] = one
        for m in range(1, n):
            s1 = sum(ka[1:m + 1] * out[m - 1::-1])
            s0 = sum(a[1:m + 1] * out[m - 1::-1])
            num = (p + q) * s1 - m * q * s0
            out[m] = _div_round(num, q * m * one)
        return FixedSeries(out, self.bits)


def _div_round(num, den):
    return (2 * num + den) // (2 * den)
