# Theta on Fourier-Jacobi expansions and its cycles.

from picard_theta import FqField
from picard_theta import fj

F = FqField(3, -1)
f = fj.QExpansion.from_lists(F, 4, 5, 2, [[1], [1], [1], [1], [1, 1]])

for i in range(4):
    g = fj.theta_iter(f, i)
    print(i, g.weight, [tuple((c.c0, c.c1) for c in poly) for poly in g.coeffs])

# Theta^p agrees with Theta
print(fj.theta_iter(f, 3).same_coeffs(fj.theta(f)))

# %% the Hasse element is killed by Theta and has filtration 0
h = fj.hasse_element(3, -1, 4, trunc=6)
print(fj.theta(h.expansion).is_zero(), fj.filtration(h))

# %% a theta cycle with a single drop
spec = fj.CycleSpec(p=5, omega_low=3, drop=fj.low_weight_drop(3, 5))
print(fj.theta_cycle(spec))

obs, closing = fj.cycle_observations(spec)
print(fj.cycle_validate(obs, 5, closing))

# two drops is not a cycle
print(fj.cycle_validate([(24, 0), (30, 1), (36, 1), (42, 2)], 5))
