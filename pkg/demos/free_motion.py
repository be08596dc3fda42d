"""
Free motion and boosts
======================

A free packet's centre moves at <P>/m and its position variance grows
quadratically in time. A boost by v shifts every momentum by -m v, so
the boosted packet slows down by v. The rest energy only adds a
constant to <H> and leaves every trajectory untouched.
"""
import numpy as np

from galilei_lab import PhysicalParams, SpinSpec, apply, expect, gaussian_state, heisenberg_trajectory, make_grid
from galilei_lab import group as G

grid = make_grid(1, 512, 80.0)
params = PhysicalParams(mass=1.0, e0=3.7)
psi = gaussian_state(grid, SpinSpec(0.5), params, -3.0, 2.0, 1.0)

traj = heisenberg_trajectory(psi, params, ("X1", "P1", "H"), 4.0, 16)
print(f"slope {traj.slopes['X1']:.10f}, <P>/m {traj.means['P1'][0] / params.mass:.10f}")
print(f"linear fit residual {traj.residuals['X1']:.2e}")

var_p = G.variance("P1", psi, params)
pred = traj.variances["X1"][0] + traj.times ** 2 * var_p / params.mass ** 2
print("variance law error:", np.abs(traj.variances["X1"] - pred).max())
print("mean energy (includes E0):", traj.means["H"][0])

boosted = apply(G.boost(0.5), psi, params)
print("momentum after boost:", expect("P1", boosted, params).real)
later = apply(G.time_shift(2.0), boosted, params)
print("position two time units later:", expect("X1", later, params).real)
