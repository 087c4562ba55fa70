# Walking around the complex ball over Q(sqrt -3).
#
# Run with:  python demos/01_ball_and_lattices.py

import random

from picard_theta import FieldCtx
from picard_theta import frame as fr
from picard_theta import sampling as sm
from picard_theta import unitary as un

ctx = FieldCtx(-3)
print("D =", ctx.D, " delta =", ctx.delta, " omega =", ctx.omega)

# %% the center of the ball and a few points on a geodesic
x0 = un.center(ctx)
print("lambda(x0) =", un.lam(x0))
for t in (1, 2, 3):
    x = un.geodesic_point(ctx.one, 0, t)
    print(f"t={t}: z={x.z}, lambda={un.lam(x)}")

# %% lambda transforms with |j|^2 under the unitary group
rng = random.Random(0)
g = sm.random_unitary(ctx, rng)
x = sm.random_point(ctx, rng)
j = un.j_factor(g, x)
print("lambda(x) =", un.lam(x), " lambda(gx)|j|^2 =", un.lam(un.act(g, x)) * j.norm())

# %% the two self-dual lattices
for name, lat in (("L0", un.lattice_l0(ctx)), ("L1", un.lattice_l1(ctx))):
    gram = un.lattice_gram(lat)
    print(name, "det =", un.int_det(gram))
    for row in gram:
        print("   ", row)

# %% the Riemann form of the moving lattice does not depend on the point
print(fr.riemann_matrix(x) == [list(r) for r in fr.J_MATRIX])

# %% width of the cusp for a few levels
for N in (2, 4, 6):
    print("N =", N, "M =", un.cusp_width(N, ctx))
