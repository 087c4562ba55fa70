# The three strata mod p, seen through Dieudonne modules.

import random

from picard_theta import FqField
from picard_theta import deformation as dfm
from picard_theta import dieudonne as dd

field = FqField(5, -2)

models = {
    "braid3": dd.braid3(field),
    "mu-ordinary model": dd.model_mu_ordinary(field),
    "superspecial model": dd.model_superspecial(field),
}

for name, D in models.items():
    rep = dd.check_module(D)
    print(f"{name:20s} admissible={rep.ok}  hasse rank={dd.hasse(D)}  stratum={dd.stratify(D).value}")

# %% flip one sign of F in the braid module and the duality check points at it
D = models["braid3"]
F = [list(r) for r in D.F]
F[D.index("e3")][D.index("f1")] *= -1
bad = dd.UnitaryDModule(field, D.V, tuple(map(tuple, F)))
print("failing pairs:", dd.duality_failures(bad))

# %% the stratum survives symplectic changes of basis
rng = random.Random(1)
E = dd.change_basis(D, dd.random_basis_change(field, rng))
print("after a random basis change:", dd.stratify(E).value)

# %% first order deformations: the gss locus is cut out by u
fam = dfm.universal_hodge(D)
print("V(L) =", dfm.gss_obstruction(fam))
print("equation:", dfm.gss_equation(fam))

# %% superspecial points, counted on the Fermat curve
for p in (3, 5, 7):
    print(p, dfm.fermat_count(p), p**3 + 1)
