"""Schatten-norm decay of the averaging differences, and the p = 4 boundary.

For p > 4 the weighted eigenvalue sums converge and the norms decay like
delta^(1/2 - 2/p); at p = 4 the partial sums keep growing logarithmically.
Both behaviours are shown from direct summation of the diagonal model.
"""

import numpy as np

from circleops.spectral import divergence_probe_p4, fit_decay, stabilized_norm

grid = [2.0**-k for k in range(1, 11)]
print("decay fits of the Schatten norms over delta in [2^-10, 1/2]:")
for p in (4.5, 5.0, 6.0, 8.0, np.inf):
    fit = fit_decay(p, grid, n_max=2**14)
    label = "inf" if np.isinf(p) else f"{p:3.1f}"
    print(f"  p = {label}: fitted exponent {fit.exponent:+.4f}  "
          f"(theory {fit.theory_exponent:+.4f}), constant {fit.constant:.3f}, "
          f"log-residual {fit.residual:.3f}")

print("\ntruncation doubling at delta = 0.25, p = 5 (slow polynomial tail):")
value, rel, converged = stabilized_norm(0.25, 5.0, n_start=1024, n_max=2**15)
print(f"  value {value:.6f}; doubling changes {np.array2string(rel, precision=2)}; "
      f"converged to 1e-6: {converged}")

print("\nfourth-power partial sums at the boundary exponent (delta = 0.3):")
ns = [2**k for k in range(10, 17)]
sums = divergence_probe_p4(0.3, ns)
for n, s in zip(ns, sums):
    print(f"  N = {n:6d}: {s:.4f}")
print("  steady increments per dyadic window -> logarithmic growth, "
      "consistent with no summability at p = 4")
