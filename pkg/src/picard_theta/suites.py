"""Verification suites behind `picard-theta verify`.

Each suite returns a SuiteReport; check ids are stable and reports are sorted
by id so that output does not depend on evaluation order.
"""

import random
from dataclasses import dataclass
from fractions import Fraction

from . import deformation as dfm
from . import dieudonne as dd
from . import fj
from . import frame as fr
from . import qfield as qf
from . import sampling as sm
from . import unitary as un


@dataclass(frozen=True)
class Check:
    id: str
    anchor: str
    passed: bool
    detail: str = ""

    def to_json(self):
        return {"id": self.id, "anchor": self.anchor, "pass": self.passed, "detail": self.detail}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["id"], obj["anchor"], bool(obj["pass"]), obj.get("detail", ""))


@dataclass(frozen=True)
class SuiteReport:
    suite: str
    checks: tuple
    seed: int = 0
    trials: int = 0

    @property
    def overall(self):
        return all(c.passed for c in self.checks)

    def to_json(self):
        return {
            "suite": self.suite,
            "seed": self.seed,
            "trials": self.trials,
            "checks": [c.to_json() for c in self.checks],
            "overall": "pass" if self.overall else "fail",
        }

    @classmethod
    def from_json(cls, obj):
        return cls(obj["suite"], tuple(Check.from_json(c) for c in obj["checks"]),
                   int(obj.get("seed", 0)), int(obj.get("trials", 0)))

    def table(self):
        width = max((len(c.id) for c in self.checks), default=0)
        lines = [f"suite {self.suite} (seed={self.seed}, trials={self.trials})"]
        for c in self.checks:
            mark = "PASS" if c.passed else "FAIL"
            lines.append(f"  {mark}  {c.id:<{width}}  {c.anchor}" + (f"  [{c.detail}]" if c.detail else ""))
        lines.append(f"overall: {'pass' if self.overall else 'fail'}")
        return "\n".join(lines)


@dataclass(frozen=True)
class Params:
    p: int = 3
    d: int = -1
    N: int = 4
    seed: int = 0
    trials: int = 20


class _Collector:
    def __init__(self, prefix):
        self.prefix = prefix
        self.checks = []

    def __call__(self, cid, anchor, fn):
        try:
            result = fn()
            if isinstance(result, tuple):
                ok, detail = result
            else:
                ok, detail = result, ""
        except Exception as exc:  # a crashing identity is a failed identity
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        self.checks.append(Check(f"{self.prefix}.{cid}", anchor, bool(ok), str(detail)))

    def report(self, suite, params):
        return SuiteReport(suite, tuple(sorted(self.checks, key=lambda c: c.id)), params.seed, params.trials)


def suite_qfield(params):
    rng = random.Random(params.seed)
    ctx = qf.FieldCtx(params.d)
    field = qf.FqField(params.p, params.d)
    c = _Collector("qfield")
    xs = [sm.random_kelem(ctx, rng) for _ in range(params.trials)]
    c("conj_involution", "conjugation is a ring involution",
      lambda: all(x.conj().conj() == x for x in xs))
    c("im_delta_half_delta", "Im_delta(delta/2) = 1", lambda: qf.im_delta(ctx.delta / 2) == 1)
    c("ideal_inverse", "I * I^-1 = O_K",
      lambda: all(qf.ideal_mul(I, qf.ideal_inv(I)) == qf.FracIdeal.unit(ctx)
                  for I in (qf.FracIdeal.generated_by(ctx, x) for x in xs if x)))
    ys = [sm.random_kelem(ctx, rng, integral=True) for _ in range(params.trials)]
    zs = [sm.random_kelem(ctx, rng, integral=True) for _ in range(params.trials)]
    c("reduce_homomorphism", "O_K -> F_{p^2} is a ring map",
      lambda: all(qf.fq_reduce(y * z, params.p) == qf.fq_reduce(y, params.p) * qf.fq_reduce(z, params.p)
                  for y, z in zip(ys, zs)))
    c("sigma_bar_is_frobenius", "Sigma-bar is the p-power map",
      lambda: all(qf.sigma_bar(x) == x ** params.p for x in field.elements()))
    c("group_exponent", "exponent of (O_K/p^n)^x is (p^2-1)p^(n-1)",
      lambda: all(qf.delta_group_exponent(params.p, n, params.d) == qf.expected_exponent(params.p, n)
                  for n in (1, 2)))
    top = 2 * (params.p ** 2 - 1) * params.p
    c("char_equal_agreement", "weight congruence decides equality of characters",
      lambda: all(qf.char_equal_bruteforce(k1, k2, params.p, n, params.d) == qf.char_equal_congruence(k1, k2, params.p, n)
                  for n in (1, 2) for k1 in range(0, top + 1, 3) for k2 in range(0, top + 1, 5)))
    bws = [qf.BiWeight(qf.PadicWeight(params.p, 2, rng.randrange(100), rng.randrange(100)),
                       qf.PadicWeight(params.p, 2, rng.randrange(100), rng.randrange(100)))
           for _ in range(params.trials)]
    c("biweight_paths", "both bi-weight reductions agree",
      lambda: all(qf.biweight_canonical(b) == qf.biweight_canonical(qf.biweight_other_path(b)) for b in bws))
    c("biweight_character", "canonical bi-weights have the same character",
      lambda: all(qf.biweight_char(b, g) == qf.biweight_char(qf.biweight_canonical(b), g)
                  for b in bws[:5] for g in field.units()))
    return c.report("qfield", params)


def suite_unitary(params):
    rng = random.Random(params.seed)
    ctx = qf.FieldCtx(params.d)
    c = _Collector("unitary")
    pairs = [(sm.random_vec3(ctx, rng), sm.random_vec3(ctx, rng)) for _ in range(params.trials)]
    c("herm_hermitian", "(v, u) = conj (u, v)", lambda: all(un.herm(v, u) == un.herm(u, v).conj() for u, v in pairs))
    c("polar_identity", "2(u, v) = <u, delta v> + delta <u, v>",
      lambda: all(2 * un.herm(u, v) == un.polar(u, un.scale_vec(ctx.delta, v)) + ctx.delta * un.polar(u, v)
                  for u, v in pairs))
    c("lambda_center", "lambda(x0) = 1", lambda: un.lam(un.center(ctx)) == 1)
    gs = [sm.random_unitary(ctx, rng) for _ in range(params.trials)]
    pts = [sm.random_point(ctx, rng) for _ in range(5)]
    c("generated_unitary", "generators are unitary", lambda: all(un.is_unitary(g) for g in gs))
    c("lambda_invariance", "lambda(x) = lambda(gx) |j(g, x)|^2",
      lambda: all(un.lambda_transform_check(g, x) for g in gs for x in pts))
    c("cocycle", "j(gh, x) = j(g, hx) j(h, x)",
      lambda: all(un.j_factor(g @ h, x) == un.j_factor(g, un.act(h, x)) * un.j_factor(h, x)
                  for g, h in zip(gs, gs[1:]) for x in pts[:2]))
    c("n_action", "n(s, r)(z, u) = (z + delta conj(s)(u + s/2) + r, u + s)",
      lambda: all(_n_action_ok(ctx, rng, x) for x in pts))
    c("cusp_width", "width of the cusp is N|D| or N|D|/2",
      lambda: (un.cusp_width(params.N, ctx) * (1 if ctx.case_one_mod_four else 2) == params.N * abs(ctx.D),
               str(un.cusp_width(params.N, ctx))))
    c("gamma_cusp_trivial_j", "j = 1 on the cusp stabilizer",
      lambda: all(un.j_factor(un.n_of(ctx.coerce(params.N), un.cusp_width(params.N, ctx)), x) == 1 for x in pts))
    c("lattices_self_dual", "L0 and L1 are self-dual",
      lambda: un.self_dual(un.lattice_l0(ctx)) and un.self_dual(un.lattice_l1(ctx)))
    c("geodesic_lambda", "lambda on the geodesic is t^2",
      lambda: all(un.lam(un.geodesic_point(sm.random_kelem(ctx, rng), sm.random_rational(rng), t)) == t * t
                  for t in (Fraction(1, 2), Fraction(1), Fraction(7, 3))))
    return c.report("unitary", params)


def _n_action_ok(ctx, rng, x):
    s, r = sm.random_kelem(ctx, rng), sm.random_rational(rng)
    expected = un.PointZU(x.z + ctx.delta * s.conj() * (x.u + s / 2) + r, x.u + s)
    g = un.n_of(s, r)
    return un.act(g, x) == expected and un.j_factor(g, x) == 1


def suite_frame(params):
    rng = random.Random(params.seed)
    ctx = qf.FieldCtx(params.d)
    c = _Collector("frame")
    pts = [un.center(ctx)] + [sm.random_point(ctx, rng) for _ in range(max(4, params.trials // 4))]
    J = [list(r) for r in fr.J_MATRIX]
    c("riemann_matrix", "Riemann form in the moving basis is J",
      lambda: all(fr.riemann_matrix(x) == J for x in pts))
    c("det_identity", "det = delta lambda^2", lambda: all(fr.det_identity(x) for x in pts))
    c("t_map_basis", "T sends the generators to delta e1, e2, e3 at x0", lambda: _t_map_ok(ctx))
    b = lambda i, coeff=1: fr.basis_class(ctx, i, coeff)
    zero = fr.DeRhamClass([fr.FormalScalar(ctx)] * 6)
    dinv = ctx.delta.inverse()
    w, wb = ctx.omega, ctx.omega.conj()
    c("gauss_manin_1", "nabla dzeta_1 = (b3 + omega b3') du",
      lambda: fr.gauss_manin(ctx, 1) == fr.OneForm(dz=zero, du=b(2) + b(5, w)))
    c("gauss_manin_2", "nabla dzeta_2 = -(b3 + omega b3') dz / delta",
      lambda: fr.gauss_manin(ctx, 2) == fr.OneForm(dz=b(2, -dinv) + b(5, -dinv * w), du=zero))
    c("gauss_manin_3", "nabla dzeta_3 = (b2 + omega-bar b2') du + (b3 + omega-bar b3') dz / delta",
      lambda: fr.gauss_manin(ctx, 3) == fr.OneForm(dz=b(2, dinv) + b(5, dinv * wb), du=b(1) + b(4, wb)))
    c("ks_1", "KS(dzeta_1 dzeta_3) = -delta (2 pi i)^-1 du",
      lambda: fr.ks(ctx, 1) == fr.ks_closed_form(ctx, 1))
    c("ks_2", "KS(dzeta_2 dzeta_3) = (2 pi i)^-1 dz",
      lambda: fr.ks(ctx, 2) == fr.ks_closed_form(ctx, 2))
    c("psi_kills_du", "psi(du) = 0",
      lambda: fr.psi(fr.OneForm(dz=fr.FormalScalar(ctx), du=fr.FormalScalar.const(ctx, 1))).is_zero())
    M = un.cusp_width(params.N, ctx)
    c("psi_simple_zero", "psi(dq) has a simple zero at the cusp",
      lambda: fr.psi_dq(ctx, M) == fr.CuspLocal(Fraction(1, M), 2, 1))
    c("split_criterion", "G_u splits iff u lies in conj(a) conj(b)^-1", lambda: _split_examples(ctx, rng, params))
    kernel = fr.ext_mult_N_kernel(ctx, params.N)
    c("mult_N_kernel", "kernel of multiplication by N has N^2 points",
      lambda: all(fr.ext_mult_N(x, params.N) == 0 for x in kernel)
      and len({fr.ext_mult_N(x / params.N, params.N) for x in kernel}) == params.N ** 2)
    return c.report("frame", params)


def _t_map_ok(ctx):
    x = un.center(ctx)
    mb = fr.moving_basis(ctx).at(x)
    e = [un.unit_vector(ctx, i) for i in range(3)]
    alpha2_other = tuple(-c for c in mb[1])
    return (fr.t_map(x, mb[0]) == un.scale_vec(ctx.delta, e[0])
            and fr.t_map(x, alpha2_other) == e[1]
            and fr.t_map(x, mb[2]) == e[2])


def _split_examples(ctx, rng, params):
    ok = True
    for _ in range(params.trials):
        a = qf.FracIdeal.generated_by(ctx, sm.random_kelem(ctx, rng, 3, integral=True) or ctx.one)
        b = qf.FracIdeal.generated_by(ctx, sm.random_kelem(ctx, rng, 3, integral=True) or ctx.one)
        u = sm.random_kelem(ctx, rng)
        lattice = fr.ext_lattice(a, b)
        ok &= fr.semiab_split(fr.SemiAbDatum(a, b, u)) == qf.ideal_member(u, lattice)
        shift = lattice.zbasis[0] * rng.randint(-3, 3) + lattice.zbasis[1] * rng.randint(-3, 3)
        ok &= fr.semiab_split(fr.SemiAbDatum(a, b, u)) == fr.semiab_split(fr.SemiAbDatum(a, b, u + shift))
    return ok


def suite_dieudonne(params):
    rng = random.Random(params.seed)
    field = qf.FqField(params.p, params.d)
    c = _Collector("dieudonne")
    models = {
        "braid3": (dd.braid3(field), dd.Stratum.GSS),
        "mu_ordinary": (dd.model_mu_ordinary(field), dd.Stratum.MU_ORDINARY),
        "superspecial": (dd.model_superspecial(field), dd.Stratum.SUPERSPECIAL),
    }
    for name, (D, stratum) in models.items():
        c(f"{name}.admissible", "Im F = ker V, Im V = ker F = omega, duality",
          lambda D=D: (dd.check_module(D).ok, dd.check_module(D).first_failure or ""))
        c(f"{name}.stratum", "classification by V_P, V_L and the Hasse invariant",
          lambda D=D, s=stratum: (dd.stratify(D) is s, dd.stratify(D).value))
        c(f"{name}.basis_invariance", "strata do not depend on the symplectic basis",
          lambda D=D, s=stratum: all(dd.stratify(dd.change_basis(D, dd.random_basis_change(field, rng))) is s
                                     for _ in range(params.trials)))
    braid = models["braid3"][0]
    c("braid3.gss_signature", "gss: Hasse 0, V_P and V_L of rank 1",
      lambda: dd.hasse(braid) == 0 and len(dd.p0_of(braid)) == 1)
    nonprime = next(x for x in field.units() if not x.in_prime_field())
    c("braid3.scaled", "rescaling V keeps the stratum",
      lambda: dd.stratify(dd.scaled(braid, nonprime)) is dd.Stratum.GSS)
    return c.report("dieudonne", params)


def suite_deform(params):
    rng = random.Random(params.seed)
    field = qf.FqField(params.p, params.d)
    c = _Collector("deform")
    D = dd.braid3(field)
    fam = dfm.universal_hodge(D)
    one = dfm.TruncElem.of(field, 1)
    u = dfm.TruncElem.of(field, 0, 1, 0)
    c("gss_equation", "the gss locus is u = 0", lambda: dfm.gss_equation(fam) == u)
    c("nabla_leibniz", "nabla(g s) = dg s + g du e3",
      lambda: all(dfm.nabla_first_order(g, D) == dfm.leibniz_rhs(g, D)
                  for g in (dfm.TruncElem(field.random(rng), field.random(rng), field.random(rng))
                            for _ in range(params.trials))))
    c("nabla_unit", "nabla(e1 + u e3) = du e3",
      lambda: dfm.nabla_first_order(one, D)[D.index("e3")] == dfm.du(field))
    c("ks_restriction", "KS maps P0 (x) L onto the du line", lambda: dfm.ks_restriction_check(D))
    q1 = params.p ** 2 - 1

    def sweep():
        for _ in range(params.trials):
            k = rng.randint(0, 3 * q1)
            v = dfm.theta_valuation(k, sm.random_wlaurent(field, k, rng))
            if v < 0:
                return False, f"valuation {v} at k={k}"
        return True, ""

    c("theta_holomorphic", "a^k psi(dg) has no pole", sweep)
    c("theta_pole_exact", "g = w^-k with p not dividing k gives valuation 0",
      lambda: all(dfm.theta_valuation(k, dfm.WLaurent.from_dict(field, {-k: (field.one,)})) == 0
                  for k in range(1, 3 * q1) if k % params.p))
    c("branches", "u^(p+1) + v^(p+1) splits into p+1 distinct lines",
      lambda: len(dfm.branch_factorization(params.p, field)) == params.p + 1)
    if params.p in dfm.FERMAT_PRIMES:
        c("fermat", "the superspecial locus has p^3 + 1 points",
          lambda: (dfm.fermat_count(params.p, field) == params.p ** 3 + 1, str(dfm.fermat_count(params.p, field))))
    return c.report("deform", params)


def suite_fj(params):
    rng = random.Random(params.seed)
    field = qf.FqField(params.p, params.d)
    c = _Collector("fj")
    p = params.p
    M = un.cusp_width(params.N, qf.FieldCtx(params.d))
    trunc = min(fj.default_trunc(), 16)
    fs = [sm.random_expansion(field, rng, params.N, M, trunc=trunc) for _ in range(params.trials)]
    gs = [sm.random_expansion(field, rng, params.N, M, trunc=trunc) for _ in range(params.trials)]
    c("leibniz", "Theta(fg) = f Theta(g) + Theta(f) g", lambda: all(fj.derivation_check(f, g) for f, g in zip(fs, gs)))
    c("theta_p", "Theta^p = Theta", lambda: all(fj.theta_iter(f, p).same_coeffs(fj.theta(f)) for f in fs))
    c("weight_bump", "Theta raises the weight by p+1", lambda: all(fj.theta(f).weight == f.weight + p + 1 for f in fs))
    h = fj.hasse_element(p, params.d, params.N)
    c("theta_hasse", "Theta(h) = 0", lambda: fj.theta(h.expansion).is_zero())
    c("hasse_filtration", "the Hasse invariant has filtration 0", lambda: fj.filtration(h) == 0)
    c("cycles_close", "theta cycles close for every drop index",
      lambda: all(fj.theta_cycle(fj.CycleSpec(p, p * p - 1, i))[-1] + fj.cycle_increments(p, i)[-1] == p * p - 1
                  for i in range(p - 1)))
    c("low_weight_drop", "low weight cycles drop at the last step",
      lambda: all(fj.low_weight_drop(k, p) == p - 2 for k in range(p + 1)))
    c("compat", "Theta restricts to q d/dq on the modular curve",
      lambda: all(fj.compat_check(sm.random_expansion(field, rng, params.N, M, trunc=trunc, degree=0))
                  for _ in range(params.trials)))
    c("weight_char", "Delta(p) acts on weight p^2-1 trivially",
      lambda: all(fj.weight_char(p * p - 1, g) == 1 for g in field.units()))
    return c.report("fj", params)


SUITES = {
    "qfield": suite_qfield,
    "unitary": suite_unitary,
    "frame": suite_frame,
    "dieudonne": suite_dieudonne,
    "deform": suite_deform,
    "fj": suite_fj,
}


def run_suite(name, params):
    if name == "all":
        checks = []
        for fn in SUITES.values():
            checks += fn(params).checks
        return SuiteReport("all", tuple(sorted(checks, key=lambda c: c.id)), params.seed, params.trials)
    return SUITES[name](params)
