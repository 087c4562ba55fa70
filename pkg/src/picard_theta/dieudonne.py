"""Unitary Dieudonne modules of rank 6 over F_{p^2} and the three strata.

The basis is ordered e1, e2, f3, f1, f2, e3.  The e's have type Sigma, the
f's type Sigma-bar, the Hodge filtration omega is spanned by e1, e2, f3 and
<e_i, f_j> = delta_ij.  V : D -> D^(p) and F : D^(p) -> D are stored as
plain matrices; column j of V holds V(b_j) in the twisted basis b^(p).
The Frobenius twist only appears when maps are composed across the
(p)-boundary, and when changing basis (the twisted basis moves by the
entrywise p-th power of the change of basis matrix).
"""

from dataclasses import dataclass, field as dc_field
from enum import Enum

from . import fqmatrix as fm
from .qfield import FqElem, FqField, inert_discriminant

STANDARD_LABELS = ("e1", "e2", "f3", "f1", "f2", "e3")
E_POSITIONS = (0, 1, 5)
F_POSITIONS = (3, 4, 2)  # f1, f2, f3 in the order matching e1, e2, e3
OMEGA_POSITIONS = (0, 1, 2)
P_POSITIONS = (0, 1)
L_POSITIONS = (2,)


def j6(field):
    rows = [[0] * 6 for _ in range(6)]
    for e, f in zip(E_POSITIONS, F_POSITIONS):
        rows[e][f] = 1
        rows[f][e] = -1
    return fm.from_ints(field, rows)


class Stratum(Enum):
    MU_ORDINARY = "mu-ordinary"
    GSS = "gss"
    SUPERSPECIAL = "superspecial"


class InadmissibleModule(ValueError):
    def __init__(self, failed):
        self.failed = failed
        super().__init__(f"inadmissible: {failed}")


@dataclass(frozen=True)
class UnitaryDModule:
    field: FqField
    V: tuple
    F: tuple
    labels: tuple = dc_field(default=STANDARD_LABELS)

    @property
    def p(self):
        return self.field.p

    def index(self, label):
        return self.labels.index(label)

    def to_json(self):
        def mat(m):
            return [[x.to_json() for x in row] for row in m]

        return {"p": self.field.p, "d": self.field.d, "V": mat(self.V), "F": mat(self.F)}

    @classmethod
    def from_json(cls, obj):
        for key in ("p", "d", "V", "F"):
            if key not in obj:
                raise ValueError(f"missing field '{key}'")
        try:
            field = FqField(int(obj["p"]), int(obj["d"]))
        except (TypeError, ValueError) as exc:
            raise ValueError(f"field 'p'/'d': {exc}") from None

        def mat(key):
            m = obj[key]
            if not isinstance(m, list) or len(m) != 6:
                raise ValueError(f"field '{key}': expected 6 rows")
            rows = []
            for i, row in enumerate(m):
                if not isinstance(row, list) or len(row) != 6:
                    raise ValueError(f"field '{key}[{i}]': expected 6 entries")
                out = []
                for j, x in enumerate(row):
                    try:
                        e = FqElem.from_json(x)
                    except (KeyError, TypeError, ValueError) as exc:
                        raise ValueError(f"field '{key}[{i}][{j}]': {exc}") from None
                    if e.field != field:
                        raise ValueError(f"field '{key}[{i}][{j}]': wrong residue field")
                    out.append(e)
                rows.append(tuple(out))
            return tuple(rows)

        return cls(field, mat("V"), mat("F"))


def dual_frobenius(V):
    """The F forced by duality: F^T J6 = J6 V, i.e. F = -J6 V^T J6."""
    field = V[0][0].field
    j = j6(field)
    return fm.scale(field(-1), fm.matmul(fm.matmul(j, fm.transpose(V)), j))


def _module_from_v(field, entries, name):
    V = _labelled_matrix(field, entries)
    D = UnitaryDModule(field, V, dual_frobenius(V))
    report = check_module(D)
    if not report.ok:
        raise RuntimeError(f"{name} construction violates {report.first_failure}")
    return D


def _labelled_matrix(field, entries):
    rows = [[0] * 6 for _ in range(6)]
    for (target, source), value in entries.items():
        rows[STANDARD_LABELS.index(target)][STANDARD_LABELS.index(source)] = value
    return fm.from_ints(field, rows)


def braid3(field):
    field = _as_field(field)
    V = _labelled_matrix(field, {("f3", "e2"): 1, ("e1", "f3"): 1, ("e2", "f1"): 1})
    F = _labelled_matrix(field, {("e3", "f1"): -1, ("e1", "f2"): -1, ("f2", "e3"): -1})
    return UnitaryDModule(field, V, F)


def model_mu_ordinary(field):
    # multiplicative {e2, f3}, local-local {e1, f1}, etale {f2, e3}; the
    # pieces must be unions of dual pairs, so ker V = {e1, f2, e3}
    field = _as_field(field)
    return _module_from_v(field, {("f3", "e2"): 1, ("e2", "f3"): 1, ("e1", "f1"): 1}, "mu-ordinary model")


def model_superspecial(field):
    field = _as_field(field)
    return _module_from_v(field, {("e1", "f1"): 1, ("e2", "f2"): 1, ("f3", "e3"): 1}, "superspecial model")


def _as_field(field):
    if isinstance(field, FqField):
        return field
    return FqField(field, inert_discriminant(field))


# --- invariants ----------------------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


@dataclass(frozen=True)
class ModuleReport:
    results: tuple

    @property
    def ok(self):
        return all(r.ok for r in self.results)

    @property
    def failures(self):
        return [r for r in self.results if not r.ok]

    @property
    def first_failure(self):
        bad = self.failures
        return bad[0].name if bad else None


def duality_failures(D):
    """Basis pairs (i, j) where <F b_i^(p), b_j> differs from <b_i^(p), V b_j>."""
    j = j6(D.field)
    lhs = fm.matmul(fm.transpose(D.F), j)
    rhs = fm.matmul(j, D.V)
    return [(a, b) for a in range(6) for b in range(6) if lhs[a][b] != rhs[a][b]]


def _type_violations(m):
    e = set(E_POSITIONS)
    return [(i, j) for i in range(6) for j in range(6) if m[i][j] and ((i in e) == (j in e))]


def check_module(D):
    V, F = D.V, D.F
    field = D.field
    results = []

    def add(name, ok, detail=""):
        results.append(CheckResult(name, bool(ok), detail))

    rv, rf = fm.rank(V), fm.rank(F)
    add("rank_V", rv == 3, f"rank V = {rv}")
    add("rank_F", rf == 3, f"rank F = {rf}")
    vf = fm.matmul(V, F)
    fv = fm.matmul(F, V)
    add("VF_zero", fm.is_zero(vf))
    add("FV_zero", fm.is_zero(fv))
    # Im F = ker V and Im V = ker F, by inclusion plus dimension count
    add("im_F_eq_ker_V", fm.is_zero(vf) and rf == 6 - rv)
    add("im_V_eq_ker_F", fm.is_zero(fv) and rv == 6 - rf)
    outside = [i for i in range(6) if i not in OMEGA_POSITIONS and any(V[i])]
    add("im_V_eq_omega_p", not outside and rv == 3, f"rows outside omega: {outside}" if outside else "")
    bad = duality_failures(D)
    add("duality", not bad, f"failing pairs {bad}" if bad else "36 pairs")
    j = j6(field)
    iso = [(a, b) for a in OMEGA_POSITIONS for b in OMEGA_POSITIONS if j[a][b]]
    add("omega_isotropic", not iso)
    tv, tf = _type_violations(V), _type_violations(F)
    add("type_V", not tv, f"{tv}" if tv else "")
    add("type_F", not tf, f"{tf}" if tf else "")
    return ModuleReport(tuple(results))


# --- Hasse invariant and strata ------------------------------------------------------


def v_P(D):
    """V on P = span{e1, e2}, landing in L^(p) = span{f3^(p)}: a 1x2 matrix."""
    return fm.submatrix(D.V, L_POSITIONS, P_POSITIONS)


def v_L(D):
    """V on L = span{f3}, landing in P^(p): a 2x1 matrix."""
    return fm.submatrix(D.V, P_POSITIONS, L_POSITIONS)


def hasse_matrix(D):
    """The 1x1 composite V_P^(p) o V_L : L -> L^(p^2)."""
    return fm.matmul(fm.frob(v_P(D)), v_L(D))


def hasse(D):
    return fm.rank(hasse_matrix(D))


def p0_of(D):
    """Basis of ker(V restricted to P), as vectors of D."""
    out = []
    for k in fm.kernel(v_P(D)):
        vec = [D.field.zero] * 6
        for pos, c in zip(P_POSITIONS, k):
            vec[pos] = c
        out.append(tuple(vec))
    return out


def stratify(D):
    report = check_module(D)
    if not report.ok:
        raise InadmissibleModule(report.first_failure)
    if hasse(D) == 1:
        return Stratum.MU_ORDINARY
    rp, rl = fm.rank(v_P(D)), fm.rank(v_L(D))
    if rp == rl == 1:
        return Stratum.GSS
    if rp == rl == 0:
        return Stratum.SUPERSPECIAL
    raise InadmissibleModule(f"hasse 0 with rank V_P = {rp}, rank V_L = {rl}")


# --- change of basis -----------------------------------------------------------------


def basis_change_matrix(A):
    """Symplectic, type and flag preserving 6x6 matrix from A acting on e1, e2, e3.

    A must be block upper triangular (no e3 component in the images of e1, e2);
    the f's then move by the inverse transpose.
    """
    field = A[0][0].field
    if A[2][0] or A[2][1]:
        raise ValueError("A must preserve span{e1, e2}")
    B = fm.transpose(fm.inverse(A))
    rows = [[field.zero] * 6 for _ in range(6)]
    for i in range(3):
        for k in range(3):
            rows[E_POSITIONS[i]][E_POSITIONS[k]] = A[i][k]
            rows[F_POSITIONS[i]][F_POSITIONS[k]] = B[i][k]
    return tuple(tuple(r) for r in rows)


def random_basis_change(field, rng, flag_fixing=False):
    while True:
        A = [[field.random(rng) for _ in range(3)] for _ in range(3)]
        A[2][0] = A[2][1] = field.zero
        if flag_fixing:
            A[1][0] = field.zero
        A = tuple(tuple(r) for r in A)
        if fm.rank(A) == 3:
            return basis_change_matrix(A)


def change_basis(D, P):
    """Rewrite D in the basis b'_j = sum_i P[i][j] b_i."""
    j = j6(D.field)
    if fm.matmul(fm.matmul(fm.transpose(P), j), P) != j:
        raise ValueError("basis change does not preserve the pairing")
    fp = fm.frob(P)
    V = fm.matmul(fm.matmul(fm.inverse(fp), D.V), P)
    F = fm.matmul(fm.matmul(fm.inverse(P), D.F), fp)
    return UnitaryDModule(D.field, V, F, D.labels)


def scaled(D, c):
    """D with V replaced by cV and F by the dual map."""
    V = fm.scale(c, D.V)
    return UnitaryDModule(D.field, V, dual_frobenius(V), D.labels)
