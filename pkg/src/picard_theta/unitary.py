"""The hermitian space V = K^3, the unitary similitude group and its action on the ball.

The form is (u, v) = conj(u)^T M v with M antidiagonal in the outer
coordinates.  A point (z, u) of the ball is the negative line spanned by
(z, u, 1), and lambda(z, u) = Im_delta(z) - u conj(u) is positive inside.
"""

from dataclasses import dataclass
from fractions import Fraction

from .qfield import FieldCtx, KElem, im_delta, parse_rational


def vec3(ctx, *coords):
    if len(coords) != 3:
        raise ValueError("vectors of V have three coordinates")
    return tuple(ctx.coerce(c) for c in coords)


def unit_vector(ctx, i):
    return tuple(ctx.one if j == i else ctx.zero for j in range(3))


def conj_vec(v):
    return tuple(c.conj() for c in v)


def scale_vec(c, v):
    return tuple(c * x for x in v)


def add_vec(v, w):
    return tuple(x + y for x, y in zip(v, w))


def herm(u, v):
    """(u, v) = conj(u1) v3 / delta + conj(u2) v2 - conj(u3) v1 / delta."""
    ctx = u[0].ctx
    dinv = ctx.delta.inverse()
    return u[0].conj() * v[2] * dinv + u[1].conj() * v[1] - u[2].conj() * v[0] * dinv


def polar(u, v):
    return im_delta(herm(u, v))


@dataclass(frozen=True)
class PointZU:
    z: KElem
    u: KElem

    def vector(self):
        return (self.z, self.u, self.z.ctx.one)

    def to_json(self):
        return {"z": self.z.to_json(), "u": self.u.to_json()}


def lam(pt):
    """lambda(z, u) = Im_delta(z) - u conj(u)."""
    return im_delta(pt.z) - (pt.u * pt.u.conj()).a


class GMat:
    """A 3x3 matrix over K."""

    __slots__ = ("ctx", "rows", "_mu")

    def __init__(self, ctx, rows):
        rows = tuple(tuple(ctx.coerce(x) for x in row) for row in rows)
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise ValueError("GMat must be 3x3")
        self.ctx = ctx
        self.rows = rows
        self._mu = None

    @classmethod
    def identity(cls, ctx):
        return cls(ctx, [[1 if i == j else 0 for j in range(3)] for i in range(3)])

    def __matmul__(self, other):
        if isinstance(other, GMat):
            cols = list(zip(*other.rows))
            return GMat(
                self.ctx,
                [[sum((a * b for a, b in zip(row, col)), self.ctx.zero) for col in cols] for row in self.rows],
            )
        return tuple(sum((a * b for a, b in zip(row, other)), self.ctx.zero) for row in self.rows)

    def __eq__(self, other):
        return isinstance(other, GMat) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def conj_transpose(self):
        return GMat(self.ctx, [[self.rows[j][i].conj() for j in range(3)] for i in range(3)])

    def det(self):
        (a, b, c), (d, e, f), (g, h, i) = self.rows
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)

    def __repr__(self):
        return f"GMat({[list(r) for r in self.rows]})"

    def to_json(self):
        return {"d": self.ctx.d, "rows": [[x.to_json() for x in row] for row in self.rows]}

    @classmethod
    def from_json(cls, obj):
        ctx = FieldCtx(int(obj["d"]))
        rows = [[ctx.elem(parse_rational(x["a"]), parse_rational(x["b"])) for x in row] for row in obj["rows"]]
        return cls(ctx, rows)


def form_matrix(ctx):
    dinv = ctx.delta.inverse()
    return GMat(ctx, [[0, 0, dinv], [0, 1, 0], [-dinv, 0, 0]])


def similitude(g):
    """The factor mu with g* M g = mu M, or None if g is not a similitude."""
    if g._mu is None:
        m = form_matrix(g.ctx)
        lhs = g.conj_transpose() @ m @ g
        mu = lhs.rows[1][1]
        ok = mu.is_rational() and mu != 0 and all(
            lhs.rows[i][j] == mu * m.rows[i][j] for i in range(3) for j in range(3)
        )
        g._mu = mu.a if ok else False
    return g._mu if g._mu is not False else None


def is_unitary(g):
    return similitude(g) == 1


def is_special_unitary(g):
    return is_unitary(g) and g.det() == 1


def j_factor(g, pt):
    a3, b3, c3 = g.rows[2]
    return a3 * pt.z + b3 * pt.u + c3


def act(g, pt):
    """The image g(z, u) on the ball."""
    z, u, j = g @ pt.vector()
    if not j:
        raise ZeroDivisionError("j(g; z, u) = 0: the point is sent to the boundary at infinity")
    return PointZU(z / j, u / j)


def lambda_transform_check(g, pt):
    if not is_unitary(g):
        raise ValueError("lambda_transform_check needs a unitary g")
    j = j_factor(g, pt)
    return lam(pt) == lam(act(g, pt)) * (j * j.conj()).a


def n_of(s, r):
    ctx = s.ctx
    r = Fraction(r)
    delta = ctx.delta
    return GMat(ctx, [[1, delta * s.conj(), r + delta * s * s.conj() / 2], [0, 1, s], [0, 0, 1]])


def n_correction(s, t):
    """The rational c with n(s, r) n(t, r') = n(s + t, r + r' + c)."""
    ctx = s.ctx
    return Fraction(ctx.D, 2) * im_delta(s.conj() * t)


def m_of(t, alpha, beta):
    ctx = alpha.ctx
    t = Fraction(t)
    return GMat(
        ctx,
        [[t * alpha, 0, 0], [0, t * beta, 0], [0, 0, t * alpha.conj().inverse()]],
    )


def _check_level(N, least):
    if not isinstance(N, int) or N % 2:
        raise ValueError(f"level N = {N} must be even")
    if N < least:
        raise ValueError(f"level N = {N} must be at least {least}")


def cusp_width(N, ctx):
    _check_level(N, 2)
    w = N * abs(ctx.D)
    return w if ctx.case_one_mod_four else w // 2


def gamma_cusp_member(s, r, N, ctx):
    """Membership of n(s, r) in the stabilizer of the cusp at infinity."""
    _check_level(N, 4)
    s = ctx.coerce(s)
    return (s / N).is_integral() and (Fraction(r) / cusp_width(N, ctx)).denominator == 1


def geodesic_point(u, r, t):
    ctx = u.ctx
    t = Fraction(t)
    if t <= 0:
        raise ValueError("geodesic parameter t must be positive")
    z = Fraction(r) + ctx.delta * (u * u.conj() + t * t) / 2
    return PointZU(z, u)


def center(ctx):
    return PointZU(ctx.delta / 2, ctx.zero)


# --- lattices -------------------------------------------------------------------


@dataclass(frozen=True)
class LatticeZBasis:
    ctx: FieldCtx
    basis: tuple

    @classmethod
    def ok_span(cls, ctx, gens):
        """Z-basis g, omega*g for O_K-generators g of a free O_K-module."""
        basis = []
        for g in gens:
            basis += [g, scale_vec(ctx.omega, g)]
        return cls(ctx, tuple(basis))


def lattice_l0(ctx):
    e1, e2, e3 = (unit_vector(ctx, i) for i in range(3))
    return LatticeZBasis.ok_span(ctx, [scale_vec(ctx.delta, e1), e2, e3])


def lattice_l1(ctx):
    e1, e2, e3 = (unit_vector(ctx, i) for i in range(3))
    half = scale_vec(ctx.delta / 2, e1)
    return LatticeZBasis.ok_span(ctx, [add_vec(half, e3), e2, add_vec(half, scale_vec(ctx.elem(-1), e3))])


def lattice_gram(lat):
    gram = []
    for x in lat.basis:
        row = []
        for y in lat.basis:
            v = polar(x, y)
            if v.denominator != 1:
                raise ValueError(f"pairing value {v} is not integral")
            row.append(int(v))
        gram.append(row)
    return gram


def int_det(m):
    """Determinant of an integer matrix by fraction-free elimination (Bareiss)."""
    a = [list(r) for r in m]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def self_dual(lat):
    return abs(int_det(lattice_gram(lat))) == 1


def _zspan_contains(lat, v):
    # solve v = sum m_i b_i over Q in the 6 real coordinates and test integrality
    rows = [[c for x in b for c in x.coords()] for b in lat.basis]
    target = [c for x in v for c in x.coords()]
    sol = _solve_rational([list(col) for col in zip(*rows)], target)
    return sol is not None and all(x.denominator == 1 for x in sol)


def _solve_rational(a, b):
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a, b)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return None
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [m[r][n] for r in range(n)]


def is_ok_stable(lat):
    return all(_zspan_contains(lat, scale_vec(lat.ctx.omega, b)) for b in lat.basis)


# --- the embedded modular curve ----------------------------------------------------


def su2_embed(m, ctx):
    (a, b), (c, d) = m
    if a * d - b * c != 1:
        raise ValueError("su2_embed needs a determinant one matrix")
    return GMat(ctx, [[a, 0, b], [0, 1, 0], [c, 0, d]])


def gamma0D_member(m, ctx):
    (a, b), (c, d) = m
    if a * d - b * c != 1:
        raise ValueError("not in SL_2(Z)")
    return b % ctx.D == 0
