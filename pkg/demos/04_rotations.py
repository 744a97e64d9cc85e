"""Exchange by rotation works for special states only."""

import math

import numpy as np

from spinstat.exact_number import HalfInt
from spinstat.rotations import (
    EulerRotation,
    d_matrix,
    d_matrix_pi,
    exchange_by_rotation_opposite_spin,
    exchange_by_rotation_same_spin,
    singlet_rotation_invariance,
)

print("d^{1/2}(pi) =", d_matrix_pi(1).entries.tolist())
print("d^{3/2}(pi)^2 = -I:", np.array_equal(d_matrix_pi(3).entries @ d_matrix_pi(3).entries, -np.eye(4, dtype=int)))

for two_s in range(5):
    same = exchange_by_rotation_same_spin(two_s, HalfInt(two_s))
    opp = exchange_by_rotation_opposite_spin(two_s, HalfInt(two_s))
    print(f"s={HalfInt(two_s)}: same-spin {same:+d}, opposite-spin {opp:+d}")

# the floating path at pi lands on the exact matrix
print("max |d(pi) - exact| for j=5:", np.max(np.abs(d_matrix(10, math.pi).entries - d_matrix_pi(10).entries)))

# but the singlet never changes under rotation, so it cannot show the fermion sign
for two_s in (1, 2, 3):
    v = singlet_rotation_invariance(two_s, EulerRotation(0.3, 1.1, -2.0))
    print(f"s={HalfInt(two_s)}:", v.summary())
