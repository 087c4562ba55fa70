import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from picard_theta import dieudonne as dd
from picard_theta import fqmatrix as fm
from picard_theta.qfield import FqField

MODELS = {
    "braid3": (dd.braid3, dd.Stratum.GSS),
    "mu_ordinary": (dd.model_mu_ordinary, dd.Stratum.MU_ORDINARY),
    "superspecial": (dd.model_superspecial, dd.Stratum.SUPERSPECIAL),
}


def pair(D, x, y):
    """<x, y> through the standard 6x6 pairing."""
    j = dd.j6(D.field)
    return sum((x[a] * j[a][b] * y[b] for a in range(6) for b in range(6) if j[a][b]), D.field.zero)


def basis_vec(D, label):
    i = D.index(label)
    return tuple(D.field.one if k == i else D.field.zero for k in range(6))


def column(m, label, D):
    i = D.index(label)
    return tuple(row[i] for row in m)


def span_of(D, labels):
    vecs = [basis_vec(D, l) for l in labels]
    return tuple(tuple(v[r] for v in vecs) for r in range(6))


def with_entry(D, which, target, source, value):
    m = [list(r) for r in getattr(D, which)]
    m[D.index(target)][D.index(source)] = value
    m = tuple(tuple(r) for r in m)
    return dd.UnitaryDModule(D.field, m if which == "V" else D.V, m if which == "F" else D.F, D.labels)


class TestFqMatrix:
    @given(st.integers(0, 10**6))
    @settings(max_examples=40)
    def test_rank_kernel_inverse(self, seed):
        F = FqField(3, -1)
        r = random.Random(seed)
        a = tuple(tuple(F.random(r) for _ in range(4)) for _ in range(4))
        ker = fm.kernel(a)
        assert fm.rank(a) + len(ker) == 4
        assert all(not any(fm.matvec(a, k)) for k in ker)
        if fm.rank(a) == 4:
            assert fm.matmul(a, fm.inverse(a)) == fm.identity(F, 4)
        else:
            with pytest.raises(ZeroDivisionError):
                fm.inverse(a)


class TestBraid:
    def test_ker_V(self, field):
        D = dd.braid3(field)
        assert fm.column_span_equal(tuple(zip(*fm.kernel(D.V))), span_of(D, ["e1", "f2", "e3"]))

    def test_duality_entry(self, field):
        D = dd.braid3(field)
        assert pair(D, column(D.F, "f2", D), basis_vec(D, "f1")) == -1

    def test_forced_F(self, field):
        D = dd.braid3(field)
        assert D.F == dd.dual_frobenius(D.V)

    def test_omega_isotropic(self, field):
        D = dd.braid3(field)
        assert all(pair(D, basis_vec(D, a), basis_vec(D, b)) == 0 for a in ("e1", "e2", "f3") for b in ("e1", "e2", "f3"))

    def test_prime_argument(self):
        assert dd.braid3(5) == dd.braid3(FqField(5, -2))


class TestModels:
    def test_mu_ordinary_kernel(self, field):
        D = dd.model_mu_ordinary(field)
        assert dd.check_module(D).ok
        assert fm.column_span_equal(tuple(zip(*fm.kernel(D.V))), span_of(D, ["e1", "f2", "e3"]))

    def test_kernel_must_be_isotropic(self, field):
        # ker V = Im F is isotropic in an admissible module, so span{e1, f1, e3} cannot be a kernel
        D = dd.model_mu_ordinary(field)
        assert pair(D, basis_vec(D, "e1"), basis_vec(D, "f1")) == 1
        ker = fm.kernel(D.V)
        assert all(pair(D, x, y) == 0 for x in ker for y in ker)

    def test_superspecial_kernel(self, field):
        D = dd.model_superspecial(field)
        assert fm.column_span_equal(tuple(zip(*fm.kernel(D.V))), span_of(D, ["e1", "e2", "f3"]))

    def test_superspecial_sign(self, field):
        D = dd.model_superspecial(field)
        F_f1 = column(D.F, "f1", D)
        # <F f1, f1> = <f1, V f1> = <f1, e1> = -1
        assert pair(D, F_f1, basis_vec(D, "f1")) == pair(D, basis_vec(D, "f1"), column(D.V, "f1", D)) == -1


class TestCheckModule:
    @pytest.mark.parametrize("name", MODELS)
    def test_models_pass(self, field, name):
        report = dd.check_module(MODELS[name][0](field))
        assert report.ok, report.failures
        assert next(r for r in report.results if r.name == "duality").detail == "36 pairs"

    @pytest.mark.parametrize("target,source", [("e3", "f1"), ("e1", "f2"), ("f2", "e3")])
    def test_sign_flip(self, field, target, source):
        D = dd.braid3(field)
        i, j = D.index(target), D.index(source)
        bad = with_entry(D, "F", target, source, -D.F[i][j])
        J = dd.j6(field)
        # entry (i, j) of F only enters row j of F^T J6, at the partner of i
        expected = [(j, k) for k in range(6) if J[i][k]]
        assert dd.duality_failures(bad) == expected
        report = dd.check_module(bad)
        assert [r.name for r in report.failures] == ["duality"]

    def test_identity_shaped_V(self, field):
        V = fm.identity(field, 6)
        D = dd.UnitaryDModule(field, V, dd.dual_frobenius(V))
        failed = {r.name for r in dd.check_module(D).failures}
        assert {"rank_V", "VF_zero", "im_F_eq_ker_V"} <= failed
        with pytest.raises(dd.InadmissibleModule):
            dd.stratify(D)


class TestStrata:
    def test_hasse(self, field):
        assert dd.hasse(dd.braid3(field)) == 0
        assert dd.hasse(dd.model_mu_ordinary(field)) == 1
        ss = dd.model_superspecial(field)
        assert fm.is_zero(dd.v_P(ss)) and fm.is_zero(dd.v_L(ss))

    def test_braid_hasse_factors(self, field):
        D = dd.braid3(field)
        vl = dd.v_L(D)
        assert [row[0] for row in vl] == [field.one, field.zero]
        assert fm.is_zero(fm.matmul(fm.frob(dd.v_P(D)), vl))

    def test_p0(self, field):
        e1 = (field.one,) + (field.zero,) * 5
        e2 = (field.zero, field.one) + (field.zero,) * 4
        assert dd.p0_of(dd.braid3(field)) == [e1]
        assert dd.p0_of(dd.model_mu_ordinary(field)) == [e1]
        assert fm.column_span_equal(tuple(zip(*dd.p0_of(dd.model_superspecial(field)))), tuple(zip(e1, e2)))

    @pytest.mark.parametrize("name", MODELS)
    def test_stratify(self, field, name):
        make, stratum = MODELS[name]
        assert dd.stratify(make(field)) is stratum

    def test_scaled(self, field):
        D = dd.braid3(field)
        for c in field.units():
            assert dd.stratify(dd.scaled(D, c)) is dd.Stratum.GSS

    @pytest.mark.parametrize("name", MODELS)
    def test_basis_invariance(self, field, name):
        make, stratum = MODELS[name]
        D = make(field)
        r = random.Random(7)
        for _ in range(25):
            E = dd.change_basis(D, dd.random_basis_change(field, r))
            assert dd.check_module(E).ok
            assert dd.stratify(E) is stratum

    def test_non_symplectic_change(self, field):
        rows = [list(r) for r in fm.identity(field, 6)]
        rows[1][0] = field.one  # moves e1 without the matching change of f2
        P = tuple(tuple(r) for r in rows)
        with pytest.raises(ValueError):
            dd.change_basis(dd.braid3(field), P)

    def test_same_answer_for_p3_p5(self):
        for make, stratum in MODELS.values():
            assert dd.stratify(make(3)) is dd.stratify(make(5)) is stratum


class TestJson:
    @pytest.mark.parametrize("name", MODELS)
    def test_round_trip(self, field, name):
        D = MODELS[name][0](field)
        assert dd.UnitaryDModule.from_json(json.loads(json.dumps(D.to_json()))) == D

    def test_bad_entry_names_field(self, field):
        obj = dd.braid3(field).to_json()
        obj["V"][2][4] = {"p": field.p, "d": field.d}
        with pytest.raises(ValueError, match=r"V\[2\]\[4\]"):
            dd.UnitaryDModule.from_json(obj)

    def test_missing_key(self, field):
        obj = dd.braid3(field).to_json()
        del obj["F"]
        with pytest.raises(ValueError, match="'F'"):
            dd.UnitaryDModule.from_json(obj)
