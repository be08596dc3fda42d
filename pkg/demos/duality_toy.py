"""
Observables from a family of states
===================================

Take a ten-parameter family of observables on an eight-level system and
read off the tangent map from parameter directions to observables by
central differences. The commutator form of that tangent map acts on
density matrices exactly like -i[A, rho]/hbar. Gauge shifts by scalars
drop out, and a repeated observable costs one unit of rank.
"""
import numpy as np

from galilei_lab import DualityFamily, connection_omega, duality_map, injectivity_check
from galilei_lab import duality as D

fam = DualityFamily.default()
eye = np.eye(fam.n_directions)

err = max(np.abs(duality_map(fam, eye[k]) - fam.basis[k]).max() for k in range(fam.n_directions))
print(f"tangent map recovers the basis to {err:.2e}")

rng = np.random.default_rng(1)
rho = D.random_density_matrix(rng, fam.dim)
a1 = fam.basis[0]
got = D.apply_superop(connection_omega(fam, eye[0]), rho)
print("commutator action error:", np.abs(got + 1j * (a1 @ rho - rho @ a1)).max())

shifted = DualityFamily(fam.basis, D.quadratic_gauge)
w = rng.normal(size=fam.n_directions)
print("gauge shift changes the map by", np.abs(duality_map(shifted, w) - duality_map(fam, w)).max())

print("rank of the default family:", injectivity_check(fam).rank)
basis = list(fam.basis)
basis[1] = basis[0]
print("rank with a repeated observable:", injectivity_check(DualityFamily(tuple(basis))).rank)
