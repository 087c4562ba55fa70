"""Exact arithmetic in an imaginary quadratic field K = Q(sqrt d).

Elements of K are pairs of Fractions (a, b) standing for a + b*sqrt(d).
Fractional ideals are rank-2 Z-lattices in K kept in Hermite normal form
with respect to the Z-basis {1, omega} of the ring of integers.  The residue
field at an inert odd prime p is F_p[s]/(s^2 - d), so the identity is the
embedding Sigma and p-th power Frobenius is its conjugate Sigma-bar.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd, lcm

import numpy as np


def _is_squarefree(n):
    n = abs(n)
    f = 2
    while f * f <= n:
        if n % (f * f) == 0:
            return False
        f += 1
    return True


def is_prime(n):
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def legendre(a, p):
    """Legendre symbol (a/p) for an odd prime p, by Euler's criterion."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def is_inert(d, p):
    # for odd p the discriminant is d or 4d, and 4 is a square
    return p % 2 == 1 and is_prime(p) and legendre(d, p) == -1


def inert_discriminant(p):
    """First squarefree d in -1, -2, -3, ... for which p is inert in Q(sqrt d)."""
    if p == 2 or not is_prime(p):
        raise ValueError(f"p = {p} is not an odd prime")
    d = -1
    while not (_is_squarefree(d) and is_inert(d, p)):
        d -= 1
    return d


def parse_rational(text):
    """Parse "p/q" or an integer string into a Fraction."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if not isinstance(text, str):
        raise TypeError(f"expected a 'p/q' string, got {type(text).__name__}")
    try:
        return Fraction(text.strip())
    except ValueError:
        raise ValueError(f"malformed rational {text!r}") from None


def format_rational(x):
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class FieldCtx:
    """The field Q(sqrt d) for a squarefree negative integer d."""

    d: int

    def __post_init__(self):
        if not isinstance(self.d, int) or self.d >= 0:
            raise ValueError(f"d must be a negative integer, got {self.d!r}")
        if not _is_squarefree(self.d):
            raise ValueError(f"d = {self.d} is not squarefree")

    @property
    def case_one_mod_four(self):
        return self.d % 4 == 1

    @property
    def D(self):
        return self.d if self.case_one_mod_four else 4 * self.d

    def elem(self, a=0, b=0):
        return KElem(self, Fraction(a), Fraction(b))

    @cached_property
    def zero(self):
        return self.elem(0, 0)

    @cached_property
    def one(self):
        return self.elem(1, 0)

    @cached_property
    def sqrt_d(self):
        return self.elem(0, 1)

    @cached_property
    def delta(self):
        # square root of D with positive imaginary part
        return self.elem(0, 1 if self.case_one_mod_four else 2)

    @cached_property
    def omega(self):
        if self.case_one_mod_four:
            return self.elem(Fraction(1, 2), Fraction(1, 2))
        return self.sqrt_d

    def from_coords(self, x, y):
        """The element x + y*omega."""
        return self.elem(x) + self.omega * y

    def coerce(self, x):
        if isinstance(x, KElem):
            if x.ctx != self:
                raise ValueError(f"element of Q(sqrt {x.ctx.d}) used in Q(sqrt {self.d})")
            return x
        if isinstance(x, (int, Fraction)):
            return self.elem(x)
        raise TypeError(f"cannot coerce {type(x).__name__} into K")


@dataclass(frozen=True)
class KElem:
    ctx: FieldCtx
    a: Fraction
    b: Fraction

    def _other(self, y):
        if isinstance(y, KElem):
            if y.ctx != self.ctx:
                raise ValueError("elements of different quadratic fields")
            return y
        if isinstance(y, (int, Fraction)):
            return KElem(self.ctx, Fraction(y), Fraction(0))
        return NotImplemented

    def __add__(self, y):
        y = self._other(y)
        if y is NotImplemented:
            return y
        return KElem(self.ctx, self.a + y.a, self.b + y.b)

    __radd__ = __add__

    def __neg__(self):
        return KElem(self.ctx, -self.a, -self.b)

    def __sub__(self, y):
        y = self._other(y)
        if y is NotImplemented:
            return y
        return KElem(self.ctx, self.a - y.a, self.b - y.b)

    def __rsub__(self, y):
        return -self + y

    def __mul__(self, y):
        y = self._other(y)
        if y is NotImplemented:
            return y
        d = self.ctx.d
        return KElem(self.ctx, self.a * y.a + d * self.b * y.b, self.a * y.b + self.b * y.a)

    __rmul__ = __mul__

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in K")
        return KElem(self.ctx, self.a / n, -self.b / n)

    def __truediv__(self, y):
        y = self._other(y)
        if y is NotImplemented:
            return y
        return self * y.inverse()

    def __rtruediv__(self, y):
        return self.inverse() * y

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = self.ctx.one, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, y):
        if isinstance(y, (int, Fraction)):
            return self.b == 0 and self.a == y
        if isinstance(y, KElem):
            return self.ctx == y.ctx and self.a == y.a and self.b == y.b
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.ctx.d, self.a, self.b))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def conj(self):
        return KElem(self.ctx, self.a, -self.b)

    def norm(self):
        return self.a * self.a - self.ctx.d * self.b * self.b

    def trace(self):
        return 2 * self.a

    def is_rational(self):
        return self.b == 0

    def coords(self):
        """Coordinates (x, y) with self = x + y*omega."""
        if self.ctx.case_one_mod_four:
            return self.a - self.b, 2 * self.b
        return self.a, self.b

    def is_integral(self):
        x, y = self.coords()
        return x.denominator == 1 and y.denominator == 1

    def __repr__(self):
        if self.b == 0:
            return f"{self.a}"
        return f"({self.a} + {self.b}*sqrt({self.ctx.d}))"

    def to_json(self):
        return {"d": self.ctx.d, "a": format_rational(self.a), "b": format_rational(self.b)}

    @classmethod
    def from_json(cls, obj):
        return FieldCtx(int(obj["d"])).elem(parse_rational(obj["a"]), parse_rational(obj["b"]))


def k_conj(x):
    return x.conj()


def im_delta(x):
    """Im_delta(x) = (x - conj x)/delta, a rational number."""
    # x - conj(x) = 2b sqrt(d) and delta = sqrt(d) or 2 sqrt(d)
    return 2 * x.b if x.ctx.case_one_mod_four else x.b


# --- fractional ideals -------------------------------------------------------


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _hnf2(vectors):
    """Hermite normal form ((a, b), (0, c)) of the Z-span of integer 2-vectors."""
    pivot = None
    c = 0
    for w in vectors:
        if w[0] == 0:
            c = gcd(c, w[1])
            continue
        if pivot is None:
            pivot = w
            continue
        g, s, t = _xgcd(pivot[0], w[0])
        new = (s * pivot[0] + t * w[0], s * pivot[1] + t * w[1])
        killed = (w[0] // g) * pivot[1] - (pivot[0] // g) * w[1]
        c = gcd(c, killed)
        pivot = new
    if pivot is None or c == 0:
        raise ValueError("generators do not span a rank-2 lattice")
    a, b = pivot
    if a < 0:
        a, b = -a, -b
    return (a, b % c), (0, c)


@dataclass(frozen=True)
class FracIdeal:
    """A fractional ideal of O_K stored by a canonical Z-basis."""

    ctx: FieldCtx
    zbasis: tuple

    @classmethod
    def from_zspan(cls, ctx, elems):
        elems = [ctx.coerce(x) for x in elems]
        coords = [x.coords() for x in elems]
        den = 1
        for x, y in coords:
            den = lcm(den, x.denominator, y.denominator)
        ints = [(int(x * den), int(y * den)) for x, y in coords]
        (a, b), (_, c) = _hnf2(ints)
        basis = (
            ctx.from_coords(Fraction(a, den), Fraction(b, den)),
            ctx.from_coords(0, Fraction(c, den)),
        )
        return cls(ctx, basis)

    @classmethod
    def generated_by(cls, ctx, *gens):
        gens = [ctx.coerce(g) for g in gens]
        if not any(gens):
            raise ValueError("the zero ideal is not a fractional ideal")
        span = []
        for g in gens:
            span += [g, g * ctx.omega]
        return cls.from_zspan(ctx, span)

    @classmethod
    def unit(cls, ctx):
        return cls.generated_by(ctx, 1)

    def norm(self):
        # index relative to O_K = |det| of the coordinate matrix
        (x1, y1), (x2, y2) = (v.coords() for v in self.zbasis)
        return abs(x1 * y2 - x2 * y1)

    def scale(self, x):
        x = self.ctx.coerce(x)
        if not x:
            raise ValueError("the zero ideal is not a fractional ideal")
        return FracIdeal.from_zspan(self.ctx, [x * v for v in self.zbasis])

    def is_ok_stable(self):
        return all(ideal_member(self.ctx.omega * v, self) for v in self.zbasis)

    def to_json(self):
        return {"d": self.ctx.d, "zbasis": [v.to_json() for v in self.zbasis]}

    def __repr__(self):
        return f"FracIdeal(d={self.ctx.d}, zbasis={self.zbasis})"


def _check_same(ctx, other):
    if ctx != other:
        raise ValueError(f"context mismatch: d={ctx.d} vs d={other.d}")


def ideal_member(x, ideal):
    _check_same(x.ctx, ideal.ctx)
    (x1, y1), (x2, y2) = (v.coords() for v in ideal.zbasis)
    tx, ty = x.coords()
    det = x1 * y2 - x2 * y1
    m1 = (tx * y2 - x2 * ty) / det
    m2 = (x1 * ty - tx * y1) / det
    return m1.denominator == 1 and m2.denominator == 1


def ideal_conj(ideal):
    return FracIdeal.from_zspan(ideal.ctx, [v.conj() for v in ideal.zbasis])


def ideal_mul(i1, i2):
    _check_same(i1.ctx, i2.ctx)
    return FracIdeal.from_zspan(i1.ctx, [x * y for x in i1.zbasis for y in i2.zbasis])


def ideal_inv(ideal):
    # I * conj(I) = (N(I)), so the inverse is conj(I) / N(I)
    return ideal_conj(ideal).scale(Fraction(1) / ideal.norm())


# --- the residue field F_{p^2} -------------------------------------------------


@dataclass(frozen=True)
class FqField:
    """F_{p^2} realized as F_p[s]/(s^2 - d) for p inert in Q(sqrt d)."""

    p: int
    d: int

    def __post_init__(self):
        if not is_prime(self.p) or self.p == 2:
            raise ValueError(f"p = {self.p} is not an odd prime")
        if not is_inert(self.d, self.p):
            raise ValueError(f"p = {self.p} is not inert in Q(sqrt {self.d})")

    def __call__(self, c0=0, c1=0):
        return FqElem(self, c0 % self.p, c1 % self.p)

    @property
    def order(self):
        return self.p * self.p

    @cached_property
    def zero(self):
        return self(0, 0)

    @cached_property
    def one(self):
        return self(1, 0)

    @cached_property
    def s(self):
        return self(0, 1)

    def elements(self):
        p = self.p
        return [self(a, b) for a in range(p) for b in range(p)]

    def units(self):
        return [x for x in self.elements() if x]

    def random(self, rng, nonzero=False):
        while True:
            x = self(rng.randrange(self.p), rng.randrange(self.p))
            if x or not nonzero:
                return x


@dataclass(frozen=True)
class FqElem:
    field: FqField
    c0: int
    c1: int

    @property
    def p(self):
        return self.field.p

    def _other(self, y):
        if isinstance(y, FqElem):
            if y.field != self.field:
                raise ValueError("elements of different residue fields")
            return y
        if isinstance(y, int):
            return self.field(y)
        return NotImplemented

    def __add__(self, y):
        y = self._other(y)
        if y is NotImplemented:
            return y
        return self.field(self.c0 + y.c0, self.c1 + y.c1)

    __radd__ = __add__

    def __neg__(self):
        return self.field(-self.c0, -self.c1)

    def __sub__(self, y):
        y = self._other(y)
        if y is NotImplemented:
            return y
        return self.field(self.c0 - y.c0, self.c1 - y.c1)

    def __rsub__(self, y):
        return -self + y

    def __mul__(self, y):
        y = self._other(y)
        if y is NotImplemented:
            return y
        d = self.field.d
        return self.field(self.c0 * y.c0 + d * self.c1 * y.c1, self.c0 * y.c1 + self.c1 * y.c0)

    __rmul__ = __mul__

    def inverse(self):
        p = self.field.p
        n = (self.c0 * self.c0 - self.field.d * self.c1 * self.c1) % p
        if n == 0:
            raise ZeroDivisionError("inverse of zero in F_{p^2}")
        ninv = pow(n, -1, p)
        return self.field(self.c0 * ninv, -self.c1 * ninv)

    def __truediv__(self, y):
        y = self._other(y)
        if y is NotImplemented:
            return y
        return self * y.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = self.field.one, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, y):
        if isinstance(y, int):
            return self == self.field(y)
        if isinstance(y, FqElem):
            return self.field == y.field and self.c0 == y.c0 and self.c1 == y.c1
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.d, self.c0, self.c1))

    def __bool__(self):
        return bool(self.c0) or bool(self.c1)

    def in_prime_field(self):
        return self.c1 == 0

    def __repr__(self):
        if self.c1 == 0:
            return f"{self.c0}"
        return f"({self.c0}+{self.c1}s)"

    def to_json(self):
        return {"p": self.field.p, "d": self.field.d, "c": [self.c0, self.c1]}

    @classmethod
    def from_json(cls, obj):
        c = obj["c"]
        if len(c) != 2:
            raise ValueError("FqElem field 'c' must have two entries")
        return FqField(int(obj["p"]), int(obj["d"]))(int(c[0]), int(c[1]))


def sigma_bar(x):
    # s^p = s * d^((p-1)/2) = -s since d is a non-residue
    return x.field(x.c0, -x.c1)


def fq_reduce(x, p):
    """Reduction O_K -> O_K/p = F_{p^2}."""
    field = FqField(p, x.ctx.d)
    if not x.is_integral():
        raise ValueError(f"{x!r} is not integral")
    # integral elements have denominators dividing 2, which is prime to p
    num_a, den_a = x.a.numerator, x.a.denominator
    num_b, den_b = x.b.numerator, x.b.denominator
    return field(num_a * pow(den_a, -1, p), num_b * pow(den_b, -1, p))


# --- characters of Delta(p^n) = (O_K/p^n)^x ----------------------------------------


def _resolve_d(p, d):
    if d is None:
        return inert_discriminant(p)
    if not is_inert(d, p):
        raise ValueError(f"p = {p} is not inert in Q(sqrt {d})")
    return d


_ENUM_LIMIT = 10**6


def _delta_group(p, n, d):
    """Arrays (a, b) listing the units a + b*s of (Z/p^n)[s]/(s^2 - d)."""
    q = p**n
    if q * q > _ENUM_LIMIT:
        raise ValueError(f"(O_K/{p}^{n})^x is too large to enumerate")
    a, b = np.meshgrid(np.arange(q, dtype=np.int64), np.arange(q, dtype=np.int64), indexing="ij")
    a, b = a.ravel(), b.ravel()
    unit = (a % p != 0) | (b % p != 0)
    return a[unit], b[unit], q


def _element_order(a, b, q, d):
    x, y = 1, 0
    k = 0
    while True:
        x, y = (x * a + d * y * b) % q, (x * b + y * a) % q
        k += 1
        if x == 1 and y == 0:
            return k


def delta_group_exponent(p, n, d=None):
    """Brute-force exponent of (O_K/p^n)^x; equals (p^2-1)p^(n-1)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    d = _resolve_d(p, d)
    a, b, q = _delta_group(p, n, d)
    e = 1
    for x, y in zip(a.tolist(), b.tolist()):
        e = lcm(e, _element_order(x, y, q, d))
    return e


def expected_exponent(p, n):
    return (p * p - 1) * p ** (n - 1)


@lru_cache(maxsize=None)
def _character_classes(p, n, d, kmax):
    """Class labels of the characters conj(g)^k, k = 0..kmax, by evaluation on every g."""
    a, b, q = _delta_group(p, n, d)
    ca, cb = a, (-b) % q
    xa = np.ones_like(ca)
    xb = np.zeros_like(cb)
    labels = []
    seen = {}
    for _ in range(kmax + 1):
        key = xa.tobytes() + xb.tobytes()
        labels.append(seen.setdefault(key, len(seen)))
        xa, xb = (xa * ca + d * xb * cb) % q, (xa * cb + xb * ca) % q
    return tuple(labels)


def char_equal_congruence(k1, k2, p, n):
    return (k1 - k2) % expected_exponent(p, n) == 0


def char_equal_bruteforce(k1, k2, p, n, d=None):
    d = _resolve_d(p, d)
    if min(k1, k2) < 0:
        raise ValueError("weights must be non-negative")
    # round the table size up so that repeated calls share a cache entry
    kmax = max(k1, k2, 2 * expected_exponent(p, n) * p)
    labels = _character_classes(p, n, d, kmax)
    return labels[k1] == labels[k2]


def char_equal(k1, k2, p, n, d=None):
    """Whether conj^k1 and conj^k2 agree on (O_K/p^n)^x, decided two ways."""
    by_congruence = char_equal_congruence(k1, k2, p, n)
    d = _resolve_d(p, d)
    if (p**n) ** 2 <= _ENUM_LIMIT and min(k1, k2) >= 0:
        by_table = char_equal_bruteforce(k1, k2, p, n, d)
        if by_table != by_congruence:
            raise ArithmeticError(
                f"character tests disagree for k1={k1}, k2={k2}, p={p}, n={n}, d={d}"
            )
    return by_congruence


# --- p-adic weights and bi-weights -----------------------------------------------


@dataclass(frozen=True)
class PadicWeight:
    """A weight (w, j) in Z/(p^2-1) x Z_p, with j known modulo p^m."""

    p: int
    m: int
    w: int
    j: int

    def __post_init__(self):
        object.__setattr__(self, "w", self.w % (self.p**2 - 1))
        object.__setattr__(self, "j", self.j % self.p**self.m)

    @classmethod
    def from_int(cls, k, p, m):
        return cls(p, m, k, k)

    @property
    def digits(self):
        out, j = [], self.j
        for _ in range(self.m):
            out.append(j % self.p)
            j //= self.p
        return tuple(out)

    def residue(self, n):
        """The integer class mod (p^2-1)p^(n-1) that this weight determines."""
        if not 1 <= n <= self.m + 1:
            raise ValueError(f"level {n} exceeds the stored precision {self.m}")
        p = self.p
        mod1, mod2 = p * p - 1, p ** (n - 1)
        # Chinese remainder: k = w mod p^2-1 and k = j mod p^(n-1)
        t = ((self.j - self.w) * pow(mod1, -1, mod2)) % mod2 if mod2 > 1 else 0
        return self.w + mod1 * t

    def with_w(self, w):
        return PadicWeight(self.p, self.m, w, self.j)


@dataclass(frozen=True)
class BiWeight:
    first: PadicWeight
    second: PadicWeight

    def __post_init__(self):
        if self.first.p != self.second.p:
            raise ValueError("bi-weight components for different primes")

    @property
    def p(self):
        return self.first.p


def biweight_canonical(bw, p=None):
    p = bw.p if p is None else p
    w1, w2 = bw.first.w, bw.second.w
    return BiWeight(bw.first.with_w(0), bw.second.with_w(p * w1 + w2))


def biweight_other_path(bw):
    """The reduction ((w1,j1),(w2,j2)) -> ((p w2 + w1, j1), (0, j2))."""
    p = bw.p
    return BiWeight(bw.first.with_w(p * bw.second.w + bw.first.w), bw.second.with_w(0))


def biweight_char(bw, gamma, p=None):
    """The character conj^w1 * id^w2 of F_{p^2}^x evaluated at gamma."""
    p = bw.p if p is None else p
    if not gamma:
        raise ValueError("the character is defined on units only")
    return gamma ** (p * bw.first.w + bw.second.w)
