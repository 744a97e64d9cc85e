"""Exchange through parity, and the sign it produces for each spin."""

from spinstat import TwoParticleState, build_table, exchange, random_state
from spinstat.exchange_ops import relabel, statistics_sign, swapped_parity, verify_spin_statistics

# spin up in orbital 1, spin down in orbital 2
up_down = TwoParticleState.basis(1, 1, -1)
print("psi      :", up_down)
print("E psi    :", exchange(up_down))

# a spin-1 pair picks up a plus sign instead
print("s=1 E psi:", exchange(TwoParticleState.basis(2, 2, 0)))

# random superpositions, compared amplitude by amplitude
for two_s in range(7):
    r = verify_spin_statistics(two_s, trials=25, seed=1)
    print(f"two_s={two_s}: sign {r.sign_observed:+d}  expected {statistics_sign(two_s):+d}")

# applying the spin swap after parity undoes the spin permutation again
psi = random_state(3, 8)
table = build_table(3)
print("E psi == (-1)^2s relabel(psi):", exchange(psi, table) == relabel(psi) * statistics_sign(3))
print("E_s P psi gives the same?    :", swapped_parity(psi, table) == relabel(psi) * statistics_sign(3))
