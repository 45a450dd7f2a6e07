"""Sharp beta for a few classes and weights, both computation routes side by side."""

from gentransform import bounds, weights
from gentransform.params import ClassParams, max_admissible_gamma

print("first bound: f in W_beta^delta(alpha, gamma) maps into W_xi^delta(1, 0)")
print(f"{'alpha':>6} {'gamma':>7} {'delta':>6} {'c':>3} {'xi':>5} {'quadrature':>14} {'closed form':>14}")
for alpha in (1.0, 3.0):
    for gamma in (0.0, max_admissible_gamma(alpha)):
        p = ClassParams(alpha, gamma, 1.0)
        for c in (0, 2):
            for xi in (0.0, 0.5):
                q = bounds.beta_thm1(p, weights.Bernardi(c), xi).beta
                closed = bounds.beta_thm1_bernardi_closed(p, c, xi).beta
                print(f"{alpha:6.2f} {gamma:7.4f} {1.0:6.2f} {c:3d} {xi:5.2f} {q:14.10f} {closed:14.10f}")

# the second bound depends only on the weight and xi
print("\nsecond bound: f in W_beta^delta(alpha, gamma) maps into W_xi^delta(alpha, gamma)")
for w in (weights.Bernardi(0), weights.Bernardi(1), weights.CarlsonShaffer(0.5, 2.7), weights.Hohlov(0.7, 0.4, 2.0)):
    betas = [bounds.beta_thm2(w, xi).beta for xi in (-0.5, 0.0, 0.5)]
    print(f"{w.describe():28s}", "  ".join(f"{b:+.8f}" for b in betas))
