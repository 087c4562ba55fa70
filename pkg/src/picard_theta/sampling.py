"""Seeded generators of random test objects, shared by the suites and the tests."""

from fractions import Fraction

from .deformation import WLaurent
from .fj import QExpansion
from .unitary import GMat, geodesic_point, m_of, n_of, su2_embed


def random_rational(rng, bound=5, den=4):
    return Fraction(rng.randint(-bound, bound), rng.randint(1, den))


def random_kelem(ctx, rng, bound=5, integral=False):
    if integral:
        return ctx.from_coords(rng.randint(-bound, bound), rng.randint(-bound, bound))
    return ctx.elem(random_rational(rng, bound), random_rational(rng, bound))


def random_vec3(ctx, rng, bound=5):
    return tuple(random_kelem(ctx, rng, bound) for _ in range(3))


def random_point(ctx, rng):
    """A K-rational point strictly inside the ball."""
    t = Fraction(rng.randint(1, 4), rng.randint(1, 3))
    return geodesic_point(random_kelem(ctx, rng, 3), random_rational(rng, 3), t)


def units(ctx):
    """The roots of unity in O_K."""
    out = []
    for x in range(-2, 3):
        for y in range(-2, 3):
            e = ctx.from_coords(x, y)
            if e.norm() == 1:
                out.append(e)
    return out


def random_gamma0(ctx, rng, steps=3):
    """A random element of Gamma^0(D) built from elementary matrices."""
    D = abs(ctx.D)
    a, b, c, d = 1, 0, 0, 1
    for _ in range(steps):
        t = rng.randint(-2, 2)
        if rng.random() < 0.5:
            a, b, c, d = a, a * D * t + b, c, c * D * t + d
        else:
            a, b, c, d = a + b * t, b, c + d * t, d
    return ((a, b), (c, d))


def random_unitary(ctx, rng, length=3):
    """A product of n(s, r), m(1, alpha, beta) and embedded Gamma^0(D) elements."""
    us = units(ctx)
    g = GMat.identity(ctx)
    for _ in range(rng.randint(1, length)):
        kind = rng.randrange(3)
        if kind == 0:
            h = n_of(random_kelem(ctx, rng, 3), random_rational(rng, 3))
        elif kind == 1:
            h = m_of(1, rng.choice(us), rng.choice(us))
        else:
            h = su2_embed(random_gamma0(ctx, rng), ctx)
        g = g @ h
    return g


def random_poly(field, rng, degree=3):
    return tuple(field.random(rng) for _ in range(rng.randint(0, degree + 1)))


def random_expansion(field, rng, N=4, M=None, weight=None, trunc=12, degree=3):
    if M is None:
        M = rng.choice([m for m in range(1, 4 * field.p) if m % field.p])
    if weight is None:
        weight = rng.randint(0, 3 * (field.p + 1))
    coeffs = tuple(random_poly(field, rng, degree) for _ in range(trunc))
    return QExpansion(field, N, M, weight, coeffs, trunc)


def random_wlaurent(field, k, rng, terms=4, degree=3):
    """A w-Laurent polynomial with pole order at most k."""
    out = {}
    for _ in range(rng.randint(1, terms)):
        l = rng.randint(-k, -k + 3 * field.p)
        out[l] = random_poly(field, rng, degree)
    return WLaurent.from_dict(field, out)
