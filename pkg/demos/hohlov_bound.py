"""The duality combiner for the Hohlov convolution operator on a worked example."""

from gentransform import bounds, verify
from gentransform.params import ClassParams, HohlovParams

h, p = HohlovParams(a=1.0, b=0.5, c=2.7, beta1=0.0), ClassParams(0.5, 0.0, 1.0)

v = bounds.validate_hohlov(h, p)
print("hypotheses:")
for name, ok in v.ranges.items():
    print(f"  {name:32s} {'ok' if ok else 'VIOLATED'}")
print(f"  e1={v.e1:.6f} e2={v.e2:.6f} min e3(n<=200)={v.e3.min():.6f}")
print(f"  N4 minimum on (0,1): {v.n4_min:.6f} at t={v.n4_argmin:.4f}")

w = bounds.hohlov_weights(h, p)
print(f"weights w0,w1,w2 = {w[0]:.6f} {w[1]:.6f} {w[2]:.6f}  (sum {sum(w):.17g})")

beta2 = bounds.beta2_hohlov(h, p)
print(f"beta2 = {beta2:.15f}")
for beta1 in (0.0, 0.5):
    print(f"beta1 = {beta1}: beta = {bounds.combine_duality(beta1, beta2):.15f}")

k = verify.hohlov_kernel_check(h, p)
print(f"min Re N3 on the grid {k.min_real:.6f} at z={k.argmin:.4f}; N3(-1) = {k.n3_at_minus_one:.6f}; "
      f"passed={k.passed}")
