"""The moving-lattice model over the ball and its de Rham data.

Everything here is an identity in K[z, u][(2 pi i)^(+-1)], so 2 pi i is kept
as a formal grade and never evaluated.  The Gauss-Manin and Kodaira-Spencer
computations only use the holomorphic basis vectors alpha_i, so no
conjugated variables appear in the symbolic ring.
"""

from dataclasses import dataclass
from fractions import Fraction

from .qfield import FracIdeal, ideal_conj, ideal_inv, ideal_member, ideal_mul
from .unitary import PointZU, lam, polar


class FormalScalar:
    """A polynomial in z, u over K times (2 pi i)^grade."""

    __slots__ = ("ctx", "terms", "grade")

    def __init__(self, ctx, terms=None, grade=0):
        clean = {}
        for mono, c in (terms or {}).items():
            c = ctx.coerce(c)
            if c:
                clean[mono] = c
        self.ctx = ctx
        self.terms = clean
        self.grade = grade

    @classmethod
    def const(cls, ctx, c, grade=0):
        return cls(ctx, {(0, 0): c}, grade)

    @classmethod
    def z(cls, ctx):
        return cls(ctx, {(1, 0): 1})

    @classmethod
    def u(cls, ctx):
        return cls(ctx, {(0, 1): 1})

    def is_zero(self):
        return not self.terms

    def _lift(self, y):
        if isinstance(y, FormalScalar):
            return y
        return FormalScalar.const(self.ctx, y)

    def __add__(self, y):
        y = self._lift(y)
        if y.is_zero():
            return self
        if self.is_zero():
            return y
        if y.grade != self.grade:
            raise ValueError(f"cannot add (2 pi i)-grades {self.grade} and {y.grade}")
        terms = dict(self.terms)
        for mono, c in y.terms.items():
            terms[mono] = terms.get(mono, self.ctx.zero) + c
        return FormalScalar(self.ctx, terms, self.grade)

    __radd__ = __add__

    def __neg__(self):
        return FormalScalar(self.ctx, {m: -c for m, c in self.terms.items()}, self.grade)

    def __sub__(self, y):
        return self + (-self._lift(y))

    def __rsub__(self, y):
        return self._lift(y) - self

    def __mul__(self, y):
        y = self._lift(y)
        terms = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in y.terms.items():
                mono = (i1 + i2, j1 + j2)
                terms[mono] = terms.get(mono, self.ctx.zero) + c1 * c2
        return FormalScalar(self.ctx, terms, self.grade + y.grade)

    __rmul__ = __mul__

    def twopii(self, n=1):
        """Multiply by (2 pi i)^n."""
        return FormalScalar(self.ctx, self.terms, self.grade + n)

    def diff(self, var):
        k = 0 if var == "z" else 1
        terms = {}
        for mono, c in self.terms.items():
            if mono[k]:
                new = list(mono)
                new[k] -= 1
                terms[tuple(new)] = c * mono[k]
        return FormalScalar(self.ctx, terms, self.grade)

    def evaluate(self, z, u):
        """Substitute K-values; the (2 pi i)-grade is untouched."""
        total = self.ctx.zero
        for (i, j), c in self.terms.items():
            total = total + c * z**i * u**j
        return total

    def is_constant(self):
        return all(m == (0, 0) for m in self.terms)

    def constant(self):
        return self.terms.get((0, 0), self.ctx.zero)

    def __eq__(self, other):
        if not isinstance(other, FormalScalar):
            other = self._lift(other)
        if self.is_zero() and other.is_zero():
            return True
        return self.grade == other.grade and self.terms == other.terms

    def __hash__(self):
        return hash((frozenset(self.terms.items()), self.grade))

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for (i, j), c in sorted(self.terms.items()):
            mono = "".join(f"*{v}^{e}" if e > 1 else f"*{v}" for v, e in (("z", i), ("u", j)) if e)
            parts.append(f"{c!r}{mono}")
        g = f" (2pi i)^{self.grade}" if self.grade else ""
        return " + ".join(parts) + g


@dataclass(frozen=True, eq=False)
class OneForm:
    """A dz + B du, where A and B are scalars or de Rham classes."""

    dz: object
    du: object

    def __eq__(self, other):
        return isinstance(other, OneForm) and self.dz == other.dz and self.du == other.du

    def __hash__(self):
        return hash((self.dz, self.du))


class DeRhamClass:
    """Coordinates in the horizontal basis b1, b2, b3, b1', b2', b3'."""

    __slots__ = ("coords",)

    def __init__(self, coords):
        coords = tuple(coords)
        if len(coords) != 6:
            raise ValueError("a de Rham class has six coordinates")
        self.coords = coords

    def __add__(self, other):
        return DeRhamClass(a + b for a, b in zip(self.coords, other.coords))

    def scale(self, c):
        return DeRhamClass(x * c for x in self.coords)

    def diff(self, var):
        return DeRhamClass(x.diff(var) for x in self.coords)

    def __eq__(self, other):
        return isinstance(other, DeRhamClass) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return f"DeRhamClass{self.coords!r}"


def basis_class(ctx, i, coeff=1):
    """coeff times the i-th horizontal basis vector (0-based)."""
    zero = FormalScalar(ctx)
    return DeRhamClass(FormalScalar.const(ctx, coeff) if k == i else zero for k in range(6))


# --- the moving basis --------------------------------------------------------------


@dataclass(frozen=True)
class MovingBasis:
    ctx: object
    alphas: tuple

    def at(self, x):
        return tuple(tuple(c.evaluate(x.z, x.u) for c in a) for a in self.alphas)


def iota_prime(ctx, a, vec):
    # diag(a, a, conj a)
    return (vec[0] * a, vec[1] * a, vec[2] * a.conj())


def moving_basis(ctx):
    one = FormalScalar.const(ctx, 1)
    zero = FormalScalar(ctx)
    z, u = FormalScalar.z(ctx), FormalScalar.u(ctx)
    dinv = ctx.delta.inverse()
    a1 = (zero, one, one)
    a2 = (one, zero, u)
    a3 = (u, z * (-dinv), z * dinv)
    primes = tuple(iota_prime(ctx, ctx.omega, a) for a in (a1, a2, a3))
    return MovingBasis(ctx, (a1, a2, a3) + primes)


def t_map(x, zeta, conj_third=True):
    """The linear map sending the moving lattice at x to the standard one."""
    ctx = x.z.ctx
    lx = lam(x)
    if lx == 0:
        raise ZeroDivisionError("t_map is undefined where lambda vanishes")
    z, u = x.z, x.u
    zb, ub = z.conj(), u.conj()
    delta = ctx.delta
    col1 = (ub * z, (z - zb) / delta, ub)
    col2 = (zb + delta * u * ub, u, ctx.one)
    col3 = (z, u, ctx.one)
    z1, z2, z3 = zeta
    c3 = z3.conj() if conj_third else z3
    return tuple((-z1 * a - z2 * b + c3 * c) / lx for a, b, c in zip(col1, col2, col3))


J_MATRIX = tuple(
    tuple(
        {(0, 5): 1, (1, 4): -1, (2, 3): 1, (3, 2): -1, (4, 1): 1, (5, 0): -1}.get((i, j), 0)
        for j in range(6)
    )
    for i in range(6)
)


def _lattice_images(x):
    if lam(x) <= 0:
        raise ValueError("the point is not inside the ball")
    ctx = x.z.ctx
    return [t_map(x, a) for a in moving_basis(ctx).at(x)]


def polar_gram(x):
    """Gram matrix <T alpha_i, T alpha_j> of the raw polarization form."""
    images = _lattice_images(x)
    return [[polar(a, b) for b in images] for a in images]


def riemann_matrix(x):
    """Matrix of the Riemann form E(a, b) = <b, a> on the images of the alphas.

    E is the polarization with the sign fixed by positivity, E(Jv, v) > 0
    for the complex structure J of the point.
    """
    g = polar_gram(x)
    return [[-v for v in row] for row in g]


def det_identity(x):
    ctx = x.z.ctx
    z, u = x.z, x.u
    zb, ub = z.conj(), u.conj()
    delta = ctx.delta
    cols = [
        (ub * z, (z - zb) / delta, ub),
        (zb + delta * u * ub, u, ctx.one),
        (z, u, ctx.one),
    ]
    (a, d, g), (b, e, h), (c, f, i) = cols
    det = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    return det == delta * lam(x) ** 2


# --- de Rham data ------------------------------------------------------------------


def dzeta_in_beta(ctx, i):
    if i not in (1, 2, 3):
        raise ValueError("i must be 1, 2 or 3")
    return DeRhamClass(a[i - 1] for a in moving_basis(ctx).alphas)


def gauss_manin_class(cls):
    # the beta basis is horizontal, so nabla is the coordinatewise differential
    return OneForm(dz=cls.diff("z"), du=cls.diff("u"))


def gauss_manin(ctx, i):
    return gauss_manin_class(dzeta_in_beta(ctx, i))


def derham_pairing(a, b):
    ctx = a.coords[0].ctx
    total = FormalScalar(ctx)
    for i in range(6):
        for j in range(6):
            if J_MATRIX[i][j]:
                total = total + a.coords[i] * b.coords[j] * J_MATRIX[i][j]
    return total.twopii(-1)


def ks_class(cls):
    """KS(cls tensor dzeta_3) via the Gauss-Manin connection."""
    ctx = cls.coords[0].ctx
    gm = gauss_manin_class(cls)
    target = dzeta_in_beta(ctx, 3)
    return OneForm(dz=derham_pairing(gm.dz, target), du=derham_pairing(gm.du, target))


def ks(ctx, i):
    if i not in (1, 2):
        raise ValueError("ks is computed for i = 1, 2")
    return ks_class(dzeta_in_beta(ctx, i))


def ks_closed_form(ctx, i):
    zero = FormalScalar(ctx)
    if i == 1:
        return OneForm(dz=zero, du=FormalScalar.const(ctx, -ctx.delta, grade=-1))
    if i == 2:
        return OneForm(dz=FormalScalar.const(ctx, 1, grade=-1), du=zero)
    raise ValueError("ks is computed for i = 1, 2")


def psi(form):
    """Coefficient c with psi(form) = c dzeta_2 (x) dzeta_3; psi kills du."""
    return form.dz.twopii(1)


@dataclass(frozen=True)
class CuspLocal:
    """coeff * (2 pi i)^grade * q^q_order near the cusp."""

    coeff: Fraction
    grade: int
    q_order: int

    def vanishes_at_cusp(self):
        return self.q_order > 0 and self.coeff != 0


def psi_dq(ctx, M):
    # dq/q = (2 pi i / M) dz, so dq is q times that form
    c = psi(OneForm(dz=FormalScalar.const(ctx, Fraction(1, M), grade=1), du=FormalScalar(ctx)))
    if not c.is_constant() or not c.constant().is_rational():
        raise ArithmeticError("unexpected psi(dq) coefficient")
    return CuspLocal(coeff=c.constant().a, grade=c.grade, q_order=1)


# --- semi-abelian extensions -------------------------------------------------------


@dataclass(frozen=True)
class SemiAbDatum:
    a: FracIdeal
    b: FracIdeal
    u: object


def ext_lattice(a, b):
    """The lattice conj(a) conj(b)^-1 classifying extensions."""
    return ideal_mul(ideal_conj(a), ideal_inv(ideal_conj(b)))


def semiab_split(datum):
    return ideal_member(datum.u, ext_lattice(datum.a, datum.b))


def ext_iso(u, v, a, b):
    return ideal_member(u - v, ext_lattice(a, b))


def ext_mult_N(u, N):
    """Image of u + N O_K under K/N O_K -> K/O_K, as the reduced representative."""
    if N < 1:
        raise ValueError("N must be positive")
    ctx = u.ctx
    x, y = u.coords()
    return ctx.from_coords(x - (x.numerator // x.denominator), y - (y.numerator // y.denominator))


def ext_mult_N_kernel(ctx, N):
    """Representatives of O_K / N O_K, the kernel of multiplication by N."""
    if N < 1:
        raise ValueError("N must be positive")
    return [ctx.from_coords(x, y) for x in range(N) for y in range(N)]
