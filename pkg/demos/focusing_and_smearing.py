"""
Sharp and smeared localization
==============================

A sharp position measurement can squeeze all but epsilon of the
probability into any small ball. Smearing the measurement with a
kernel caps how sharp it can get: two kernel atoms further apart than
the region's diameter never see the region together, so the region's
effect has norm at most the larger atom weight.
"""
import numpy as np

from galilei_lab import PhysicalParams, Region, SmearKernel, SpinSpec, focusing_state, make_grid
from galilei_lab import povm_norm, povm_prob, pvm_prob
from galilei_lab.localization import kernel_profile

grid = make_grid(1, 512, 80.0)
spin = SpinSpec(0.5)
params = PhysicalParams()

# focusing: the Gaussian width is chosen so that 1 - eps sits inside the ball
for eps in (1e-2, 1e-4, 1e-6):
    foc = focusing_state(grid, spin, params, 1.0, eps)
    print(f"eps={eps:g}: probability inside radius 1 is {foc.probability:.10f}")

# the sharp measurement has norm one on any nonempty region
region = Region.box(grid, [-2.0], [3.0])
print("sharp norm:", povm_norm(region, SmearKernel.delta(grid)))

# two atoms of weight 1/2, well separated: the norm drops to exactly 1/2
ball = Region.ball(grid, [0.0], 1.0)
steps = int(np.ceil(ball.diameter() / grid.spacing)) + 2
two = SmearKernel.atomic(grid, [[0.0], [steps * grid.spacing]], [0.5, 0.5])
print("two-atom norm:", povm_norm(ball, two))
print("max of the smeared indicator:", kernel_profile(ball, two).max())

# and the focusing state that was sharp before is now at most half caught
foc = focusing_state(grid, spin, params, 1.0, 1e-6)
print(f"sharp {pvm_prob(foc.state, ball):.6f} vs smeared {povm_prob(foc.state, ball, two):.6f}")
