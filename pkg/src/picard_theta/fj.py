"""Fourier-Jacobi expansions mod p and the theta operator acting on them.

An expansion is sum_m c_m q^m with c_m polynomials over F_{p^2} standing in
for theta sections; Theta multiplies c_m by m/M and raises the weight by p+1.
Expansions are always truncated: `trunc` coefficients c_0 .. c_{trunc-1} are
known and no identity is claimed beyond them.
"""

import os
from dataclasses import dataclass, field as dc_field

from .qfield import FieldCtx, FqElem, FqField
from .unitary import cusp_width

DEFAULT_TRUNC = 64


def default_trunc():
    value = os.environ.get("PICARD_TRUNC")
    if value is None:
        return DEFAULT_TRUNC
    try:
        t = int(value)
    except ValueError:
        raise ValueError(f"PICARD_TRUNC must be an integer, got {value!r}") from None
    if t < 1:
        raise ValueError("PICARD_TRUNC must be positive")
    return t


def _trim(poly):
    poly = list(poly)
    while poly and not poly[-1]:
        poly.pop()
    return tuple(poly)


def poly_add(a, b):
    n = max(len(a), len(b))
    field = (a or b)[0].field if (a or b) else None
    if field is None:
        return ()
    a = list(a) + [field.zero] * (n - len(a))
    b = list(b) + [field.zero] * (n - len(b))
    return _trim(x + y for x, y in zip(a, b))


def poly_mul(a, b):
    if not a or not b:
        return ()
    field = a[0].field
    out = [field.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
    return _trim(out)


def poly_scale(c, a):
    return _trim(c * x for x in a)


@dataclass(frozen=True)
class QExpansion:
    field: FqField
    N: int
    M: int
    weight: int
    coeffs: tuple
    trunc: int = dc_field(default=None)

    def __post_init__(self):
        trunc = len(self.coeffs) if self.trunc is None else self.trunc
        if trunc < 1:
            raise ValueError("truncation must be positive")
        coeffs = [_trim(c) for c in self.coeffs[:trunc]]
        coeffs += [()] * (trunc - len(coeffs))
        object.__setattr__(self, "coeffs", tuple(coeffs))
        object.__setattr__(self, "trunc", trunc)

    @property
    def p(self):
        return self.field.p

    @classmethod
    def from_lists(cls, field, N, M, weight, lists, trunc=None):
        coeffs = tuple(tuple(field(x) if isinstance(x, int) else x for x in c) for c in lists)
        return cls(field, N, M, weight, coeffs, trunc)

    @classmethod
    def constant(cls, field, N, M, weight, value=1, trunc=None):
        trunc = default_trunc() if trunc is None else trunc
        return cls(field, N, M, weight, ((field(value),),), trunc)

    def same_space(self, other):
        return (self.field, self.N, self.M) == (other.field, other.N, other.M)

    def _check(self, other):
        if not self.same_space(other):
            raise ValueError("expansions with different (p, d, N, M)")

    def __add__(self, other):
        self._check(other)
        if self.weight != other.weight:
            raise ValueError("cannot add expansions of different weight")
        t = min(self.trunc, other.trunc)
        return QExpansion(self.field, self.N, self.M, self.weight,
                          tuple(poly_add(a, b) for a, b in zip(self.coeffs[:t], other.coeffs[:t])), t)

    def __mul__(self, other):
        self._check(other)
        t = min(self.trunc, other.trunc)
        out = []
        for m in range(t):
            acc = ()
            for i in range(m + 1):
                if self.coeffs[i] and other.coeffs[m - i]:
                    acc = poly_add(acc, poly_mul(self.coeffs[i], other.coeffs[m - i]))
            out.append(acc)
        return QExpansion(self.field, self.N, self.M, self.weight + other.weight, tuple(out), t)

    def scale(self, c):
        return QExpansion(self.field, self.N, self.M, self.weight,
                          tuple(poly_scale(c, a) for a in self.coeffs), self.trunc)

    def same_coeffs(self, other):
        t = min(self.trunc, other.trunc)
        return self.coeffs[:t] == other.coeffs[:t]

    def is_zero(self):
        return not any(self.coeffs)

    def to_json(self):
        return {
            "p": self.field.p,
            "d": self.field.d,
            "N": self.N,
            "M": self.M,
            "weight": self.weight,
            "trunc": self.trunc,
            "coeffs": [[c.to_json() for c in poly] for poly in self.coeffs],
        }

    @classmethod
    def from_json(cls, obj):
        for key in ("p", "d", "N", "M", "weight", "trunc", "coeffs"):
            if key not in obj:
                raise ValueError(f"missing field '{key}'")
        try:
            field = FqField(int(obj["p"]), int(obj["d"]))
        except (TypeError, ValueError) as exc:
            raise ValueError(f"field 'p'/'d': {exc}") from None
        if not isinstance(obj["coeffs"], list):
            raise ValueError("field 'coeffs': expected a list")
        coeffs = []
        for m, poly in enumerate(obj["coeffs"]):
            if not isinstance(poly, list):
                raise ValueError(f"field 'coeffs[{m}]': expected a list")
            out = []
            for i, c in enumerate(poly):
                try:
                    e = FqElem.from_json(c)
                except (KeyError, TypeError, ValueError) as exc:
                    raise ValueError(f"field 'coeffs[{m}][{i}]': {exc}") from None
                if e.field != field:
                    raise ValueError(f"field 'coeffs[{m}][{i}]': wrong residue field")
                out.append(e)
            coeffs.append(tuple(out))
        trunc = int(obj["trunc"])
        if trunc < len(coeffs):
            raise ValueError("field 'trunc': fewer than the listed coefficients")
        return cls(field, int(obj["N"]), int(obj["M"]), int(obj["weight"]), tuple(coeffs), trunc)


def theta(f):
    """c_m -> (m/M) c_m, weight k -> k + p + 1."""
    p = f.p
    if f.M % p == 0:
        raise ValueError(f"p = {p} divides the width M = {f.M}")
    minv = pow(f.M, -1, p)
    coeffs = tuple(poly_scale(f.field(minv * m), c) for m, c in enumerate(f.coeffs))
    return QExpansion(f.field, f.N, f.M, f.weight + p + 1, coeffs, f.trunc)


def theta_iter(f, t):
    if t < 0:
        raise ValueError("t must be non-negative")
    for _ in range(t):
        f = theta(f)
    return f


def is_theta_image(f):
    return all(not c for m, c in enumerate(f.coeffs) if m % f.p == 0)


def derivation_check(f, g):
    """Theta(fg) = f Theta(g) + Theta(f) g up to the common truncation."""
    if not f.same_space(g):
        raise ValueError("expansions with different (p, d, N, M)")
    lhs = theta(f * g)
    rhs = f * theta(g) + theta(f) * g
    return lhs.weight == rhs.weight and lhs.same_coeffs(rhs)


# --- filtrations -----------------------------------------------------------------------


@dataclass(frozen=True)
class MockForm:
    """An expansion together with its order of vanishing along the supersingular locus."""

    expansion: QExpansion
    ss_order: int

    def __post_init__(self):
        if self.ss_order < 0:
            raise ValueError("ss_order must be non-negative")


def filtration(mf):
    p = mf.expansion.p
    w = mf.expansion.weight - mf.ss_order * (p * p - 1)
    if w < 0:
        raise ValueError(f"negative filtration {w}: inconsistent mock data")
    return w


def power(mf, m):
    if m < 1:
        raise ValueError("power must be positive")
    e = mf.expansion
    for _ in range(m - 1):
        e = e * mf.expansion
    return MockForm(e, mf.ss_order * m)


def filtration_power(mf, m):
    return filtration(power(mf, m))


def hasse_element(p, d, N, trunc=None):
    field = FqField(p, d)
    M = cusp_width(N, FieldCtx(d))
    if M % p == 0:
        raise ValueError(f"p = {p} divides the width M = {M}")
    return MockForm(QExpansion.constant(field, N, M, p * p - 1, 1, trunc), 1)


# --- theta cycles ----------------------------------------------------------------------------


@dataclass(frozen=True)
class CycleSpec:
    p: int
    omega_low: int
    drop: int


def cycle_increments(p, drop):
    if not 0 <= drop <= p - 2:
        raise ValueError(f"drop index {drop} outside [0, {p - 2}]")
    return [p + 1 - (p * p - 1) if i == drop else p + 1 for i in range(p - 1)]


def theta_cycle(spec):
    """Filtrations of Theta^i f for i = 0 .. p-2; the step out of index `drop` drops."""
    inc = cycle_increments(spec.p, spec.drop)
    weights = [spec.omega_low]
    for step in inc[:-1]:
        weights.append(weights[-1] + step)
    if min(weights) < 0 or weights[-1] + inc[-1] < 0:
        raise ValueError("the cycle passes through a negative filtration")
    if weights[-1] + inc[-1] != spec.omega_low:
        raise ArithmeticError("theta cycle does not close")
    return weights


def cycle_observations(spec):
    """(weight, ss_order) of Theta^i f for i = 0 .. p-2, plus Theta^(p-1) f."""
    p = spec.p
    weights = theta_cycle(spec)
    obs = [(spec.omega_low + i * (p + 1), 0 if i <= spec.drop else 1) for i in range(len(weights))]
    closing = (spec.omega_low + (p - 1) * (p + 1), 1)
    return obs, closing


def low_weight_drop(k, p):
    """For 0 <= k < p+1 the drop happens at the last step."""
    if not 0 <= k < p + 1:
        raise ValueError(f"low weight rule needs 0 <= k < p + 1, got k = {k}")
    i = p - 2
    pre = k + i * (p + 1)
    if pre % p != (k - 2) % p:
        raise ArithmeticError("pre-drop weight congruence fails")
    return i


@dataclass(frozen=True)
class CycleReport:
    valid: bool
    drop_indices: tuple
    violations: tuple


def cycle_validate(observed, p, closing=None):
    """Check a cycle of (weight, ss_order) pairs for exactly one drop.

    Step i goes from entry i to entry i+1, and step p-2 closes the cycle.
    Without a closing entry its ss_order jump is inferred from closure.
    """
    violations = []
    q1 = p * p - 1
    if len(observed) != p - 1:
        violations.append(f"expected {p - 1} entries, got {len(observed)}")
        return CycleReport(False, (), tuple(violations))
    entries = list(observed) + ([closing] if closing is not None else [])
    for i, (k, n) in enumerate(entries):
        if k - n * q1 < 0:
            violations.append(f"entry {i}: negative filtration")
    drops = []
    for i in range(len(entries) - 1):
        (k0, n0), (k1, n1) = entries[i], entries[i + 1]
        if k1 - k0 != p + 1:
            violations.append(f"step {i}: weight moves by {k1 - k0}, not {p + 1}")
        if n1 - n0 == 1:
            drops.append(i)
        elif n1 != n0:
            violations.append(f"step {i}: ss_order jumps by {n1 - n0}")
    if closing is None:
        if not drops:
            drops.append(p - 2)
    else:
        w0 = entries[0][0] - entries[0][1] * q1
        wc = closing[0] - closing[1] * q1
        if wc != w0:
            violations.append(f"cycle does not close: filtration {wc} after p-1 steps, started at {w0}")
    if len(drops) != 1:
        violations.append(f"expected exactly one drop, found {len(drops)} at {drops}")
    return CycleReport(not violations, tuple(drops), tuple(violations))


# --- the elliptic theta operator -----------------------------------------------------------------


def classical_theta(series):
    """q d/dq on a plain series a_0, a_1, ... over F_{p^2}."""
    return [a * n for n, a in enumerate(series)]


def elliptic_drop_rule(omega, p):
    """A drop in an elliptic theta cycle is possible iff omega = 0 mod p."""
    return omega % p == 0


def restrict(f):
    """Constant terms of the coefficients, as a plain series."""
    return [c[0] if c else f.field.zero for c in f.coeffs]


def compat_check(f):
    if any(len(c) > 1 for c in f.coeffs):
        raise ValueError("compat_check needs constant coefficients")
    minv = f.field(pow(f.M, -1, f.p))
    lhs = restrict(theta(f))
    rhs = [minv * a for a in classical_theta(restrict(f))]
    return lhs == rhs


def weight_char(k, gamma):
    """Sigma-bar(gamma)^k = gamma^(pk)."""
    if not gamma:
        raise ValueError("weight_char is defined on units only")
    return gamma ** (gamma.p * k)
