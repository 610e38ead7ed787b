#!/usr/bin/env python3
"""Distance field of smoothed descent around an indefinite quadratic.

Start smoothed descent from every point of a polar grid around the saddle
of f(x) = (1/2) x^T [[2, 6], [6, 4]] x, run a fixed 100 steps, and record
the final distance to the saddle.  Almost every start is pushed away; a
razor-thin angular dip survives where the accumulated linear map's
smallest singular direction lines up with the start.

The dip is far narrower than any plotting grid: each halving of the
angular step roughly halves the sampled minimum, down to the
floating-point floor.  A coarse grid therefore reports a minimum that
measures its own resolution, not the field.
"""

import numpy as np

from smoothgd import PolarGrid, RatioSigma, RunConfig, sweep
from smoothgd.saddle import QuadraticObjective

objective = QuadraticObjective(np.array([[2.0, 6.0], [6.0, 4.0]]))
config = RunConfig(eta=0.1, max_iters=100, eps_stationary=0.0,
                   escape_radius=float("inf"))
schedule = RatioSigma()

coarse = sweep(objective, PolarGrid(0.1, 1.0, 0.1, -180.0, 180.0, 0.1),
               config, schedule)
summary = coarse.summary()
print("coarse grid (0.1 deg steps, 36000 cells):")
print(f"  min distance {summary.min_distance:.6f} at "
      f"r = {summary.argmin_r:.1f}, theta = {summary.argmin_theta_deg:.1f} deg")
print(f"  max distance {summary.max_distance:.3e}")

# refine the angle around the dip; the minimum keeps collapsing
theta_star = summary.argmin_theta_deg
for step in (1e-2, 1e-3, 1e-4, 1e-5):
    grid = PolarGrid(summary.argmin_r, summary.argmin_r, 1.0,
                     theta_star - 0.05, theta_star + 0.05, step)
    refined = sweep(objective, grid, config, schedule).summary()
    print(f"  step {step:.0e} deg: min {refined.min_distance:.3e} at "
          f"theta = {refined.argmin_theta_deg:.6f}")

# why: after 100 steps the map from start to end is linear, T = prod of
# per-step updates M_k = I - eta * A(sigma_k)^-1 H.  Each factor has
# det M_k = 0.2 (sigma_k + 0.6) / (1 + 2 sigma_k) ~ 0.11, so |det T| is
# ~1e-96: one direction is annihilated below the float64 floor while the
# other expands by sigma_max.  The sampled minimum is r * sigma_max *
# (angular miss of the nearest grid point from the annihilated direction),
# which is why it tracks the grid step instead of bottoming out.
print("\nthe end point depends linearly on the start; its singular values:")
e1 = np.array([1.0, 0.0])
e2 = np.array([0.0, 1.0])
from smoothgd import RatioSigma as _Sched
from smoothgd import run

cols = []
for e in (e1, e2):
    cols.append(run(objective, e, config, schedule).final_point)
t = np.column_stack(cols)
s = np.linalg.svd(t, compute_uv=False)
log_det = sum(np.log(0.2 * (_Sched()(k) + 0.6) / (1 + 2 * _Sched()(k)))
              for k in range(100))
print(f"  sigma_max = {s[0]:.4e}; sigma_min reported as {s[1]:.1e} is the "
      f"SVD noise floor (eps * sigma_max)")
print(f"  exact |det T| = exp({log_det:.1f}) ~ 1e{log_det / np.log(10):.0f}: "
      f"the dip bottom is unresolvable in float64")
