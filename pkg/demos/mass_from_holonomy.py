"""
Reading the mass off a group loop
=================================

Translate by a, boost by v, undo the translation, undo the boost. On a
projective representation with a central extension the state comes back
multiplied by a pure phase, and that phase is m v a / hbar. Dividing it
back out gives the mass without ever looking at a Hamiltonian.
"""
import numpy as np

from galilei_lab import LoopSpec, PhysicalParams, RunConfig, extract_mass, loop_phase
from galilei_lab.sampling import random_admissible_state

cfg = RunConfig()
params = PhysicalParams(hbar=1.0, mass=1.7)

# ten random, well-resolved states on the default line grid
states = [random_admissible_state(cfg, 42, k) for k in range(10)]

# one loop, one phase per state; all of them agree
loop = LoopSpec(0.1, 0.1)
phases = [loop_phase(psi, loop, params).phase for psi in states]
print("phases:", np.round(phases, 15))

est = extract_mass(states, loop, params)
print(f"mass estimate {est.mass:.15f} (configured {params.mass}), spread {est.spread:.2e}")

# the phase is bilinear in the loop sides: scaling one side by 10 scales it by 10
base = loop_phase(states[0], loop, params).phase
for a, b in [(1, 1), (10, 1), (1, 0.01), (0.001, 0.001)]:
    phi = loop_phase(states[0], loop.scaled(a, b), params).phase
    print(f"alpha={a:<6g} beta={b:<6g} phase={phi:+.6e}  alpha*beta*phi0={a * b * base:+.6e}")

# walking the loop the other way round flips the sign
flipped = extract_mass(states, LoopSpec(-0.1, 0.1), params)
print(f"reversed orientation gives {flipped.mass:+.12f}")
