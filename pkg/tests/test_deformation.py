import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from picard_theta import deformation as dfm
from picard_theta import dieudonne as dd
from picard_theta import sampling as sm
from picard_theta.deformation import OmegaR, TruncElem, WLaurent
from picard_theta.qfield import FqField


def R(field, c=0, cu=0, cv=0):
    return TruncElem.of(field, c, cu, cv)


def vec_at(D, entries):
    zero = OmegaR.zero(D.field)
    return tuple(entries.get(l, zero) for l in D.labels)


class TestRing:
    @given(st.integers(0, 10**6))
    @settings(max_examples=30)
    def test_ring_and_differential(self, seed):
        F = FqField(5, -2)
        r = random.Random(seed)
        x, y, z = (TruncElem(F.random(r), F.random(r), F.random(r)) for _ in range(3))
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        # d(xy) = x dy + y dx in Omega_R
        assert (x * y).differential() == y.differential().times(x) + x.differential().times(y)

    def test_relations(self, field):
        u, v = R(field, 0, 1), R(field, 0, 0, 1)
        assert not u * u and not u * v and not v * v
        assert not dfm.du(field).times(u)
        assert dfm.dv(field).times(u) == OmegaR(field.zero, field.zero, -field.one)
        assert dfm.du(field).times(v) == dfm.v_du(field)


class TestHodge:
    def test_origin_is_omega(self, field):
        D = dd.braid3(field)
        at0 = dfm.universal_hodge(D).at_origin()
        expected = [tuple(field.one if l == lab else field.zero for l in D.labels) for lab in ("e1", "e2", "f3")]
        assert at0 == expected

    def test_isotropic(self, field):
        fam = dfm.universal_hodge(dd.braid3(field))
        assert not dfm.pair_R(fam.P[0], fam.L[0])
        assert not dfm.pair_R(fam.P[1], fam.L[0])

    def test_obstruction(self, field):
        D = dd.braid3(field)
        img = dfm.gss_obstruction(dfm.universal_hodge(D))
        assert img[D.index("e1")] == R(field, 1)
        assert img[D.index("e2")] == R(field, 0, -1)
        assert all(not img[D.index(l)] for l in ("f1", "f2", "f3", "e3"))

    def test_equation_is_u(self, field):
        assert dfm.gss_equation(dfm.universal_hodge(dd.braid3(field))) == R(field, 0, 1)

    def test_equation_stable_under_flag_changes(self, field):
        r = random.Random(11)
        for _ in range(10):
            D = dd.change_basis(dd.braid3(field), dd.random_basis_change(field, r, flag_fixing=True))
            eq = dfm.gss_equation(dfm.universal_hodge(D, check=False))
            assert not eq.c and eq.cu and not eq.cv

    def test_superspecial_refused(self, field):
        D = dd.model_superspecial(field)
        assert not dfm.gss_obstruction(dfm.universal_hodge(D))[D.index("e1")].c
        with pytest.raises(ValueError):
            dfm.gss_equation(dfm.universal_hodge(D))


class TestNabla:
    def test_one(self, field):
        D = dd.braid3(field)
        assert dfm.nabla_first_order(R(field, 1), D) == vec_at(D, {"e3": dfm.du(field)})

    def test_u(self, field):
        D = dd.braid3(field)
        assert dfm.nabla_first_order(R(field, 0, 1), D) == vec_at(D, {"e1": dfm.du(field)})

    def test_v(self, field):
        D = dd.braid3(field)
        # dv (e1 + u e3) + v du e3, and u dv + v du = 0 leaves dv e1
        u_dv = dfm.dv(field).times(R(field, 0, 1))
        assert u_dv + dfm.v_du(field) == OmegaR.zero(field)
        assert dfm.nabla_first_order(R(field, 0, 0, 1), D) == vec_at(D, {"e1": dfm.dv(field)})

    def test_leibniz(self, field, rng):
        D = dd.braid3(field)
        for _ in range(30):
            g = TruncElem(field.random(rng), field.random(rng), field.random(rng))
            assert dfm.nabla_first_order(g, D) == dfm.leibniz_rhs(g, D)


class TestKSRestriction:
    def test_braid(self, field):
        assert dfm.ks_restriction_check(dd.braid3(field))

    def test_unit_pairing(self, field):
        D = dd.braid3(field)
        assert dd.j6(field)[D.index("e3")][D.index("f3")] == field.one

    def test_mislabel(self, field):
        D = dd.braid3(field)
        labels = list(D.labels)
        i, j = labels.index("e3"), labels.index("f2")
        labels[i], labels[j] = labels[j], labels[i]
        bad = dd.UnitaryDModule(field, D.V, D.F, tuple(labels))
        assert not dfm.ks_restriction_check(bad)


class TestValuation:
    @pytest.mark.parametrize("p,d", [(3, -1), (5, -2)])
    def test_single_pole(self, p, d):
        F = FqField(p, d)
        for k in range(1, 3 * (p * p - 1)):
            if k % p:
                assert dfm.theta_valuation(k, WLaurent.from_dict(F, {-k: (F.one,)})) == 0

    def test_constant(self, field):
        assert dfm.theta_valuation(4, WLaurent.from_dict(field, {0: (field(2),)})) == math.inf

    def test_mixed(self, field):
        p = field.p
        for k in range(1, 2 * p * p):
            g = WLaurent.from_dict(field, {-k: (field.one,), 1 - k: (field.zero, field.one)})
            assert dfm.theta_valuation(k, g) >= 0

    def test_sweep(self):
        r = random.Random(99)
        for _ in range(200):
            p, d = r.choice([(3, -1), (5, -2)])
            F = FqField(p, d)
            k = r.randint(0, 3 * (p * p - 1))
            assert dfm.theta_valuation(k, sm.random_wlaurent(F, k, r)) >= 0

    def test_pole_too_deep(self, field):
        with pytest.raises(ValueError):
            dfm.theta_valuation(2, WLaurent.from_dict(field, {-3: (field.one,)}))

    def test_ledger(self):
        led = dfm.ValuationLedger(3)
        assert led.product("a", "a", "psi_du", -3) == 2 + 8 - 3
        assert dfm.ValuationLedger.total([]) == math.inf

    def test_json(self, field, rng):
        g = sm.random_wlaurent(field, 6, rng)
        assert WLaurent.from_json(g.to_json()) == g


class TestSupersingular:
    @pytest.mark.parametrize("p", [3, 5, 7])
    def test_branches(self, p):
        roots = dfm.branch_factorization(p)
        assert len(set(roots)) == p + 1
        poly = dfm.expand_branches(roots)
        F = roots[0].field
        assert poly == [F.one] + [F.zero] * p + [F.one]

    @pytest.mark.parametrize("p,count", [(3, 28), (5, 126), (7, 344), (11, 1332)])
    def test_fermat(self, p, count):
        assert dfm.fermat_count(p) == count == p**3 + 1

    def test_fermat_other_model(self):
        assert dfm.fermat_count(5, FqField(5, -3)) == 126

    def test_fermat_range(self):
        with pytest.raises(ValueError):
            dfm.fermat_count(13)

    def test_igusa(self):
        loc = dfm.igusa_local(3)
        assert loc.degree == 8 == loc.ramification_index
        assert loc.branch_exponent_divides
        assert len(loc.branch_roots) == 4
