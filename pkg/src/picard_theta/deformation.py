"""First-order deformations at a general supersingular point and the valuation ledger.

R = F[u, v]/(u^2, uv, v^2) is the ring of first-order deformations, and its
differentials Omega_R have the F-basis du, dv, v du (since u du = v dv = 0
and u dv = -v du).  Near a general supersingular point the Igusa cover has
the local model w^(p^2-1) = u, which turns the holomorphy of Theta into a
bookkeeping problem about w-valuations.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import fqmatrix as fm
from .dieudonne import Stratum, j6, p0_of, stratify
from .qfield import FqElem, FqField, inert_discriminant, sigma_bar


@dataclass(frozen=True)
class TruncElem:
    """c + cu*u + cv*v in R."""

    c: FqElem
    cu: FqElem
    cv: FqElem

    @classmethod
    def of(cls, field, c=0, cu=0, cv=0):
        return cls(field(c) if isinstance(c, int) else c,
                   field(cu) if isinstance(cu, int) else cu,
                   field(cv) if isinstance(cv, int) else cv)

    @property
    def field(self):
        return self.c.field

    def __add__(self, y):
        return TruncElem(self.c + y.c, self.cu + y.cu, self.cv + y.cv)

    def __neg__(self):
        return TruncElem(-self.c, -self.cu, -self.cv)

    def __sub__(self, y):
        return self + (-y)

    def __mul__(self, y):
        if isinstance(y, (int, FqElem)):
            return TruncElem(self.c * y, self.cu * y, self.cv * y)
        return TruncElem(self.c * y.c, self.c * y.cu + self.cu * y.c, self.c * y.cv + self.cv * y.c)

    __rmul__ = __mul__

    def is_unit(self):
        return bool(self.c)

    def __bool__(self):
        return bool(self.c) or bool(self.cu) or bool(self.cv)

    def at_origin(self):
        return self.c

    def differential(self):
        return OmegaR(self.cu, self.cv, self.field.zero)

    def __repr__(self):
        return f"{self.c!r} + {self.cu!r}*u + {self.cv!r}*v"


@dataclass(frozen=True)
class OmegaR:
    """a du + b dv + c v du, the normal form in Omega_R."""

    a: FqElem
    b: FqElem
    c: FqElem

    @classmethod
    def zero(cls, field):
        return cls(field.zero, field.zero, field.zero)

    def __add__(self, y):
        return OmegaR(self.a + y.a, self.b + y.b, self.c + y.c)

    def times(self, r):
        # u du = 0, v dv = 0, u dv = -v du, and v * v du = u * v du = 0
        return OmegaR(r.c * self.a, r.c * self.b, r.c * self.c - r.cu * self.b + r.cv * self.a)

    def __bool__(self):
        return bool(self.a) or bool(self.b) or bool(self.c)

    def __repr__(self):
        return f"{self.a!r} du + {self.b!r} dv + {self.c!r} v du"


def du(field):
    return OmegaR(field.one, field.zero, field.zero)


def dv(field):
    return OmegaR(field.zero, field.one, field.zero)


def v_du(field):
    return OmegaR(field.zero, field.zero, field.one)


def _rvec(field, entries):
    """An R-vector of D from a {position: TruncElem} dict."""
    zero = TruncElem.of(field)
    return tuple(entries.get(i, zero) for i in range(6))


def pair_R(x, y):
    field = x[0].field
    j = j6(field)
    total = TruncElem.of(field)
    for a in range(6):
        for b in range(6):
            if j[a][b]:
                total = total + x[a] * y[b] * j[a][b]
    return total


def apply_linear(mat, x):
    """A constant matrix acting R-linearly on an R-vector."""
    field = x[0].field
    out = []
    for row in mat:
        acc = TruncElem.of(field)
        for m, r in zip(row, x):
            if m:
                acc = acc + r * m
        out.append(acc)
    return tuple(out)


@dataclass(frozen=True)
class HodgeFamily:
    module: object
    P: tuple
    L: tuple

    def at_origin(self):
        return [tuple(r.at_origin() for r in vec) for vec in self.P + self.L]


def universal_hodge(D, check=True):
    """P = {e1 + u e3, e2 + v e3}, L = {f3 - u f1 - v f2} over R."""
    field = D.field
    one = TruncElem.of(field, 1)
    u = TruncElem.of(field, 0, 1, 0)
    v = TruncElem.of(field, 0, 0, 1)
    ix = D.index
    p1 = _rvec(field, {ix("e1"): one, ix("e3"): u})
    p2 = _rvec(field, {ix("e2"): one, ix("e3"): v})
    ell = _rvec(field, {ix("f3"): one, ix("f1"): -u, ix("f2"): -v})
    fam = HodgeFamily(D, (p1, p2), (ell,))
    if check:
        gens = fam.P + fam.L
        for a in range(3):
            for b in range(a + 1, 3):
                if pair_R(gens[a], gens[b]):
                    raise ValueError("Hodge family is not isotropic: wrong base module")
    return fam


def gss_obstruction(fam):
    """V applied to the L-family generator."""
    return apply_linear(fam.module.V, fam.L[0])


def gss_equation(fam):
    """Generator of the ideal on which V(L) stays on the line P0^(p)."""
    D = fam.module
    if stratify(D) is not Stratum.GSS:
        raise ValueError("the gss-equation contract needs a general supersingular base point")
    field = D.field
    target = tuple(sigma_bar(x) for x in p0_of(D)[0])
    image = gss_obstruction(fam)
    lead = [r.c for r in image]
    k0 = next(i for i, t in enumerate(target) if t)
    lam = lead[k0] / target[k0]
    if not lam or any(x != lam * t for x, t in zip(lead, target)):
        raise ValueError("V(L) does not start on P0^(p)")

    def reduce(vec):
        # coordinates in D^(p) / F*target
        f = vec[k0] / target[k0]
        return [x - f * t for i, (x, t) in enumerate(zip(vec, target)) if i != k0]

    forms = list(zip(reduce([r.cu for r in image]), reduce([r.cv for r in image])))
    forms = [(a, b) for a, b in forms if a or b]
    if not forms:
        return TruncElem.of(field)
    if fm.rank(tuple(forms)) > 1:
        raise ValueError("the obstruction ideal is the whole maximal ideal")
    a, b = forms[0]
    scale = (a if a else b).inverse()
    return TruncElem(field.zero, a * scale, b * scale)


def nabla(x):
    """Gauss-Manin on R (x) D: the coordinates in the base are horizontal."""
    return tuple(r.differential() for r in x)


def p0_section(D):
    field = D.field
    return _rvec(field, {D.index("e1"): TruncElem.of(field, 1), D.index("e3"): TruncElem.of(field, 0, 1, 0)})


def nabla_first_order(g, D):
    """nabla(g (e1 + u e3)) as a vector of Omega_R coefficients."""
    return nabla(tuple(g * r for r in p0_section(D)))


def leibniz_rhs(g, D):
    """dg (x) (e1 + u e3) + g du (x) e3."""
    field = D.field
    s = p0_section(D)
    dg = g.differential()
    out = [dg.times(r) for r in s]
    e3 = D.index("e3")
    out[e3] = out[e3] + du(field).times(g)
    return tuple(out)


def ks_restriction_check(D):
    """The du-part of nabla(e1 + u e3) pairs with L to a unit times du."""
    field = D.field
    fam = universal_hodge(D, check=False)
    grad = nabla(fam.P[0])
    j = j6(field)
    total = OmegaR.zero(field)
    for a in range(6):
        for b in range(6):
            if j[a][b]:
                total = total + grad[a].times(fam.L[0][b] * j[a][b])
    return bool(total.a) and not total.b


# --- the w-adic valuation ledger ------------------------------------------------------------


class ValuationLedger:
    """w-valuations of the symbols in the holomorphy argument."""

    def __init__(self, p):
        self.p = p
        self.values = {"a": 1, "psi_du": p * p - 1, "psi_dv": 0}

    def __getitem__(self, name):
        return self.values[name]

    def product(self, *terms):
        return sum(self.values[t] if isinstance(t, str) else t for t in terms)

    @staticmethod
    def total(vals):
        # a sum is at least as divisible as its least divisible term
        vals = list(vals)
        return min(vals) if vals else math.inf


@dataclass(frozen=True)
class WLaurent:
    """sum_l g_l(v) w^l with g_l polynomials in v over F_{p^2}."""

    field: FqField
    coeffs: tuple  # pairs (l, tuple of FqElem) with nonzero polynomials, sorted by l

    @classmethod
    def from_dict(cls, field, terms):
        clean = []
        for l in sorted(terms):
            poly = _trim(tuple(terms[l]))
            if poly:
                clean.append((l, poly))
        return cls(field, tuple(clean))

    @property
    def min_deg(self):
        return self.coeffs[0][0] if self.coeffs else math.inf

    def to_json(self):
        if not self.coeffs:
            return {"p": self.field.p, "d": self.field.d, "min_deg": 0, "coeffs": []}
        lo, hi = self.coeffs[0][0], self.coeffs[-1][0]
        table = dict(self.coeffs)
        return {
            "p": self.field.p,
            "d": self.field.d,
            "min_deg": lo,
            "coeffs": [[c.to_json() for c in table.get(l, ())] for l in range(lo, hi + 1)],
        }

    @classmethod
    def from_json(cls, obj):
        field = FqField(int(obj["p"]), int(obj["d"]))
        lo = int(obj["min_deg"])
        terms = {lo + i: [FqElem.from_json(c) for c in poly] for i, poly in enumerate(obj["coeffs"])}
        return cls.from_dict(field, terms)


def _trim(poly):
    poly = list(poly)
    while poly and not poly[-1]:
        poly.pop()
    return tuple(poly)


def poly_derivative(poly):
    return _trim(tuple(c * i for i, c in enumerate(poly))[1:])


def dg_terms(g):
    """dg = sum_l (-l g_l w^(l-(p^2-1)) du + g_l' w^l dv), as two {w-exponent: poly} dicts."""
    p = g.field.p
    du_part, dv_part = {}, {}
    for l, poly in g.coeffs:
        if l % p:
            du_part[l - (p * p - 1)] = tuple(c * (-l) for c in poly)
        deriv = poly_derivative(poly)
        if deriv:
            dv_part[l] = deriv
    return du_part, dv_part


def theta_valuation(k, g, ledger=None):
    """w-valuation of a^k psi(dg); math.inf when psi(dg) vanishes."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if g.coeffs and g.min_deg < -k:
        raise ValueError(f"pole of order {-g.min_deg} exceeds k = {k}")
    ledger = ledger or ValuationLedger(g.field.p)
    du_part, dv_part = dg_terms(g)
    vals = [e + ledger["psi_du"] for e in du_part] + [e + ledger["psi_dv"] for e in dv_part]
    inner = ValuationLedger.total(vals)
    return inner if inner == math.inf else ledger.product(*["a"] * k) + inner


# --- supersingular local combinatorics ------------------------------------------------------


def _field_for(p):
    return FqField(p, inert_discriminant(p))


def branch_factorization(p, field=None):
    """The p+1 factors u - zeta v of u^(p+1) + v^(p+1), as the list of zetas."""
    field = field or _field_for(p)
    roots = [z for z in field.elements() if z ** (p + 1) == -1]
    if len(set(roots)) != p + 1:
        raise ArithmeticError(f"found {len(roots)} roots of zeta^(p+1) = -1, expected {p + 1}")
    return roots


def expand_branches(roots):
    """Coefficients (low to high) of prod (x - zeta), with x = u/v."""
    field = roots[0].field
    poly = [field.one]
    for z in roots:
        out = [field.zero] * (len(poly) + 1)
        for i, c in enumerate(poly):
            out[i + 1] = out[i + 1] + c
            out[i] = out[i] - c * z
        poly = out
    return poly


FERMAT_PRIMES = (3, 5, 7, 11)


def fermat_count(p, field=None):
    """Projective F_{p^2}-points of x^(p+1) + y^(p+1) + z^(p+1) = 0, by enumeration."""
    if p not in FERMAT_PRIMES:
        raise ValueError(f"fermat_count enumerates only p in {FERMAT_PRIMES}")
    field = field or _field_for(p)
    powers = [x ** (p + 1) for x in field.elements()]
    n0 = np.array([y.c0 for y in powers], dtype=np.int64)
    n1 = np.array([y.c1 for y in powers], dtype=np.int64)
    # points (1 : y : z)
    s0 = (1 + n0[:, None] + n0[None, :]) % p
    s1 = (n1[:, None] + n1[None, :]) % p
    affine = int(np.count_nonzero((s0 == 0) & (s1 == 0)))
    # points (0 : 1 : z); the point (0 : 0 : 1) is never on the curve
    line = int(np.count_nonzero(((1 + n0) % p == 0) & (n1 % p == 0)))
    return affine + line


@dataclass(frozen=True)
class IgusaLocal:
    p: int
    degree: int
    ramification_index: int
    gss_relation: str
    superspecial_relation: str
    branch_roots: tuple

    @property
    def branch_exponent_divides(self):
        return (self.p * self.p - 1) % (self.p + 1) == 0


def igusa_local(p):
    q1 = p * p - 1
    return IgusaLocal(
        p=p,
        degree=q1,
        ramification_index=q1,
        gss_relation=f"w^{q1} = u",
        superspecial_relation=f"w^{q1} = u^{p + 1} + v^{p + 1}",
        branch_roots=tuple(branch_factorization(p)),
    )
