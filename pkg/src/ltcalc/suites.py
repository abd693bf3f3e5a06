"""Named verification suites and machine-readable reports.

Each suite runs a family of exact identities on one configuration and returns
CheckRecord rows; the CLI and the acceptance tests share these functions.
Record streams are append-only (a failing check never aborts the rest of its
suite) and are sorted by (suite, identity, params) before emission, so a
fixed (config, seed) pair reproduces the same report bytes.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass

from .errors import ConfigError, LTCalcError
from .fields import LocalField
from .formal_group import FormalGroupModel, dlog_identities_hold
from .operators import OperatorContext
from .series import EXACT_Z, LaurentSeries
from .torsion import TorsionRingOracle
from . import coleman as coleman_mod
from . import explicit as explicit_mod
from . import koszul as koszul_mod
from . import mellin as mellin_mod

SUITE_NAMES = ("core-ops", "psi-omega", "mellin", "residue-identity",
               "coleman-kato", "koszul", "formal-group")
OMEGA_SUITES = {"mellin", "residue-identity", "coleman-kato"}


@dataclass
class CheckRecord:
    suite: str
    identity: str
    anchor: str
    params: dict
    status: bool
    witness: str | None = None
    elapsed: float = 0.0

    def sort_key(self):
        return (self.suite, self.identity,
                json.dumps(self.params, sort_keys=True))


@dataclass
class RunConfig:
    prime: int = 3
    model: str = "special"
    field_kind: str = "qp"
    field_degree: int = 1
    field_poly: list | None = None
    pi_prec: int = 20
    z_len: int = 64
    suites: tuple = SUITE_NAMES
    count: int = 50
    seed: int = 0
    out_format: str = "text"

    def validate(self):
        if self.out_format not in ("text", "json"):
            raise ConfigError(f"unknown format {self.out_format!r}")
        for s in self.suites:
            if s not in SUITE_NAMES:
                raise ConfigError(f"unknown suite {s!r}")
            if s in OMEGA_SUITES and self.model != "multiplicative":
                raise ConfigError(
                    f"suite {s!r} needs the multiplicative model (period 1)")
        if self.model == "multiplicative" and self.field_kind != "qp":
            raise ConfigError("multiplicative model needs L = Q_p")
        return self

    def describe(self):
        return {
            "prime": self.prime, "model": self.model,
            "field_kind": self.field_kind, "field_degree": self.field_degree,
            "pi_prec": self.pi_prec, "z_len": self.z_len,
            "suites": list(self.suites), "count": self.count,
            "seed": self.seed,
        }


_CTX_CACHE = {}


def build_context(prime, model_kind, field_kind="qp", degree=1, poly=None,
                  pi_prec=20, z_len=64):
    key = (prime, model_kind, field_kind, degree,
           tuple(poly) if poly else None, pi_prec, z_len)
    if key not in _CTX_CACHE:
        field = LocalField(prime, field_kind, degree=degree, poly=poly,
                           prec=pi_prec, store_margin=z_len + 32)
        model = FormalGroupModel(field, model_kind, zlen=z_len)
        _CTX_CACHE[key] = OperatorContext(model, zlen=z_len)
    return _CTX_CACHE[key]


def context_from_config(cfg):
    return build_context(cfg.prime, cfg.model, cfg.field_kind,
                         cfg.field_degree, cfg.field_poly, cfg.pi_prec,
                         cfg.z_len)


def random_laurent(ctx, rng, low=-3, terms=16, prec=None):
    field = ctx.field
    coeffs = [field.random_scalar(rng, prec) for _ in range(terms)]
    return LaurentSeries.from_scalars(field, low, coeffs, EXACT_Z)


def random_power_series(ctx, rng, terms=12, prec=None):
    return random_laurent(ctx, rng, low=0, terms=terms, prec=prec)


def random_unit_scalar(ctx, rng):
    field = ctx.field
    while True:
        a = field.random_scalar(rng)
        if a.valuation() == 0:
            return a


def _record(out, suite, identity, anchor, params, fn):
    t0 = time.perf_counter()
    try:
        ok, witness = fn()
    except LTCalcError as exc:
        ok, witness = False, f"{type(exc).__name__}: {exc}"
    out.append(CheckRecord(suite, identity, anchor, params, bool(ok), witness,
                           time.perf_counter() - t0))


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------

def suite_core_ops(cfg, ctx=None):
    """psi o phi = (q/pi) id, projection formula, oracle agreement, pairings."""
    out = []
    ctx = ctx or context_from_config(cfg)
    field = ctx.field
    rng = random.Random(f"{cfg.seed}:core-ops")
    qpi = field.scalar(field.q) * field.pi_power(-1)
    tol = cfg.pi_prec - 2

    for trial in range(cfg.count):
        f = random_laurent(ctx, rng, low=-rng.randint(0, 3),
                           terms=rng.randint(4, 18))

        def chk(f=f):
            lhs = ctx.psi(ctx.phi(f))
            rhs = f.scalar_mul(qpi)
            diff = lhs - rhs.truncate(lhs.zprec)
            ok = diff.is_zero(tol)
            return ok, None if ok else f"defect {diff!r}"
        _record(out, "core-ops", "psi(phi(f)) = (q/pi) f",
                "psi_L o phi_L = q/pi_L", {"trial": trial}, chk)

    for trial in range(cfg.count):
        f = random_laurent(ctx, rng, low=-2, terms=10)
        g = random_power_series(ctx, rng, terms=6)

        def chk(f=f, g=g):
            lhs = ctx.psi(ctx.phi(g) * f)
            rhs = g * ctx.psi(f)
            ok = lhs.eq_at(rhs, pi_prec=tol, z_prec=min(lhs.zprec, rhs.zprec))
            return ok, None
        _record(out, "core-ops", "psi(phi(g) f) = g psi(f)",
                "projection formula", {"trial": trial}, chk)

    # torsion oracle agreement: the extension ring has degree q-1, so this
    # literal-sum counterpart runs on the small-residue-field contexts
    oracle = None
    if field.q <= 7:
        oracle = TorsionRingOracle(ctx, zlen=min(cfg.z_len, 28))
        _record(out, "core-ops", "torsion points valid",
                "[pi](t) = 0, points distinct", {},
                lambda: (oracle.check_points(tol - 4), None))
        for trial in range(cfg.count):
            f = random_laurent(ctx, rng, low=-rng.randint(0, 2),
                               terms=rng.randint(4, 12))

            def chk(f=f):
                tr1 = oracle.direct_trace(f, tol - 6)
                tr2 = ctx.trace(f)
                ok = tr1.eq_at(tr2, pi_prec=tol - 6,
                               z_prec=min(tr1.zprec, tr2.zprec, 12))
                return ok, None
            _record(out, "core-ops", "direct torsion trace = companion trace",
                    "tr(f) = sum over torsion translates", {"trial": trial},
                    chk)

    # pairing adjunctions; phi-arguments pole-free for desk residues,
    # pole-bearing arguments via the boundary pairing
    for trial in range(max(6, cfg.count // 4)):
        f = random_power_series(ctx, rng, terms=8)
        g = random_laurent(ctx, rng, low=-2, terms=10)

        def chk1(f=f, g=g):
            lhs = ctx.pairing(ctx.phi(f), g)
            rhs = ctx.pairing(f, ctx.psi(g))
            ok = (lhs - rhs).is_zero_at(tol - 4)
            return ok, None if ok else f"{lhs!r} vs {rhs!r}"
        _record(out, "core-ops", "<phi f, g> = <f, psi g>",
                "psi-phi adjunction under res(f g dlog)", {"trial": trial}, chk1)

        h = random_power_series(ctx, rng, terms=8)

        def chk2(f=f, h=h):
            lhs = ctx.pairing(ctx.phi(f), ctx.phi(h))
            rhs = ctx.pairing(f, h) * qpi
            ok = (lhs - rhs).is_zero_at(tol - 4)
            return ok, None if ok else f"{lhs!r} vs {rhs!r}"
        _record(out, "core-ops", "<phi f, phi g> = (q/pi)<f, g>",
                "phi isometry up to q/pi", {"trial": trial}, chk2)

        a = random_unit_scalar(ctx, rng)

        def chk3(f=f, g=g, a=a):
            lhs = ctx.pairing(ctx.gamma(a, f), ctx.gamma(a, g)) * a
            rhs = ctx.pairing(f, g)
            ok = (lhs - rhs).is_zero_at(tol - 6)
            return ok, None if ok else f"{lhs!r} vs {rhs!r}"
        _record(out, "core-ops",
                "chi(gamma) <gamma f, gamma g> = <f, g>",
                "Gamma-equivariance (dlog twists by chi)", {"trial": trial},
                chk3)

    if oracle is not None:
        for trial in range(max(4, cfg.count // 8)):
            f = random_laurent(ctx, rng, low=-2, terms=10)
            g = random_laurent(ctx, rng, low=-1, terms=10)

            def chk4(f=f, g=g):
                lhs = oracle.phi_pairing(f, g, tol - 8)
                rhs = ctx.pairing(f, ctx.psi(g))
                ok = (lhs - rhs).is_zero_at(tol - 8)
                return ok, None if ok else f"{lhs!r} vs {rhs!r}"
            _record(out, "core-ops",
                    "<phi f, g>_boundary = <f, psi g>, f with poles",
                    "adjunction incl. torsion residues", {"trial": trial},
                    chk4)

    def chk_res(trial):
        f = random_laurent(ctx, rng, low=-3, terms=12)
        r = ctx.residue(f.derivative())
        ok = r.is_zero_at(tol)
        return ok, None
    for trial in range(max(4, cfg.count // 8)):
        _record(out, "core-ops", "res(df) = 0", "residues kill derivatives",
                {"trial": trial}, lambda trial=trial: chk_res(trial))

    if oracle is not None:
        def chk_unit():
            u = oracle.torsion_product_unit(tol - 8)
            c0 = u.value_at_zero()
            ok = c0.valuation() == 0
            return ok, f"measured unit constant term {c0.to_text()}"
        _record(out, "core-ops", "prod of torsion translates vs phi(Z)/Z",
                "measured unit (open convention)", {}, chk_unit)
    return out


def suite_psi_omega(cfg, ctx=None):
    """(Z^m psi(Z^-m))(0) = pi^(m-1) with integral remainder, m = 1..4."""
    out = []
    ctx = ctx or context_from_config(cfg)
    field = ctx.field
    Z = LaurentSeries.zvar(field)
    tol = cfg.pi_prec - 4
    for m in (1, 2, 3, 4):
        def chk(m=m):
            val = Z.pow_int(m) * ctx.psi(Z.invert().pow_int(m))
            c0 = val.value_at_zero()
            want = field.one() if m == 1 else field.pi().pow_int(m - 1)
            ok1 = (c0 - want).is_zero_at(tol)
            vals = val.valuations()
            ok2 = all(v >= 0 for v in vals)
            ok = ok1 and ok2
            return ok, None if ok else f"value {c0.to_text()}"
        _record(out, "psi-omega", "Z^m psi(Z^-m) = pi^(m-1) + Z o_L[[Z]]",
                "psi of inverse powers of the coordinate", {"m": m}, chk)
    return out


def suite_formal_group(cfg, ctx=None):
    """Group-law axioms, dlog identities, exp/log inversion."""
    out = []
    ctx = ctx or context_from_config(cfg)
    field = ctx.field
    model = ctx.model
    rng = random.Random(f"{cfg.seed}:formal-group")
    tol = cfg.pi_prec - 4
    gl = model.group_law(8)

    def chk_unit():
        ok = True
        for i in range(gl.degree + 1):
            want = field.one() if i == 1 else field.zero()
            if not (gl.get(i, 0) - want).is_zero():
                ok = False
        return ok, None
    _record(out, "formal-group", "F(X, 0) = X", "group law unit", {}, chk_unit)

    def chk_sym():
        ok = all((gl.get(i, j) - gl.get(j, i)).is_zero()
                 for i in range(gl.degree + 1)
                 for j in range(gl.degree + 1 - i))
        return ok, None
    _record(out, "formal-group", "F(X, Y) = F(Y, X)", "commutativity", {},
            chk_sym)

    # associativity at low degree via substitution
    def chk_assoc():
        Z = LaurentSeries.zvar(field)
        a2 = model.a_mult(2, gl.degree)
        lhs = gl.substitute_series(gl.substitute_series(Z, Z).truncate(gl.degree),
                                   Z).truncate(gl.degree // 2)
        rhs = gl.substitute_series(Z, gl.substitute_series(Z, Z).truncate(
            gl.degree)).truncate(gl.degree // 2)
        ok = lhs.eq_at(rhs, pi_prec=tol)
        return ok, None
    _record(out, "formal-group", "F(F(X,Y),Z) = F(X,F(Y,Z)) (diagonal sample)",
            "associativity", {}, chk_assoc)

    def chk_explog():
        Z = LaurentSeries.zvar(field)
        n = min(cfg.z_len, 32)
        e = model.exp_series(n)
        l = model.log_series(n)
        ok = e.compose(l).eq_at(Z, pi_prec=tol - 6) and \
            l.compose(e).eq_at(Z, pi_prec=tol - 6)
        return ok, None
    _record(out, "formal-group", "exp_LT o log_LT = id = log_LT o exp_LT",
            "mutually inverse at tracked precision", {}, chk_explog)

    def chk_gF():
        slice1 = gl.y_slice_series(1, gl.degree)
        g = model.g_series(gl.degree - 1)
        prod = slice1.truncate(gl.degree - 1) * g
        ok = prod.eq_at(LaurentSeries.constant(field, 1), pi_prec=tol)
        return ok, None
    _record(out, "formal-group", "g_LT = (dF/dY(Z,0))^(-1)",
            "invariant differential from the group law", {}, chk_gF)

    n_dlog = min(cfg.z_len, 24)
    for trial in range(10):
        a = field.random_scalar(rng)

        def chk(a=a):
            ok = dlog_identities_hold(model, a, zlen=n_dlog, pi_prec=tol - 6)
            return ok, None
        _record(out, "formal-group",
                "log([a]) = a log and a g = (g o [a]) [a]'",
                "both invariant-differential identities", {"trial": trial}, chk)

    for trial in range(4):
        a = field.random_scalar(rng)

        def chk(a=a):
            am = model.a_mult(a, n_dlog)
            lhs = am.compose(model.frobenius)
            rhs = model.frobenius.compose(am)
            ok = lhs.eq_at(rhs, pi_prec=tol - 6)
            return ok, None
        _record(out, "formal-group", "[a][pi] = [pi][a]",
                "phi-equivariance of multiplications", {"trial": trial}, chk)

    def chk_resolve():
        from .formal_group import build_group_law
        gl2 = build_group_law(field, model.frobenius, 6)
        ok = all((gl.get(i, j) - gl2.get(i, j)).is_zero()
                 for i in range(7) for j in range(7 - i))
        return ok, None
    _record(out, "formal-group", "group law re-solve determinism",
            "unique inductive solution", {}, chk_resolve)
    return out


def suite_mellin(cfg, ctx=None):
    """Character evaluation, eta identities, decompositions, psi=1 values."""
    out = []
    ctx = ctx or context_from_config(cfg)
    field = ctx.field
    p = field.p
    rng = random.Random(f"{cfg.seed}:mellin")
    tol = cfg.pi_prec - 4
    Z = LaurentSeries.zvar(field)
    one = LaurentSeries.constant(field, 1)

    for a in (2, 1 + p):
        G = mellin_mod.MellinElement(ctx, mellin_mod.eta_series(ctx, a),
                                     pi_prec=tol)
        for n in range(7):
            def chk(G=G, a=a, n=n):
                v = mellin_mod.mellin_eval(G, n)
                want = field.scalar(a).pow_int(n)
                ok = (v - want).is_zero_at(tol - 2)
                return ok, None if ok else f"{v.to_text()} vs {want.to_text()}"
            _record(out, "mellin", "eval(eta(a), n) = a^n",
                    "Dirac evaluation law", {"a": a, "n": n}, chk)

    G2 = mellin_mod.MellinElement(ctx, mellin_mod.eta_series(ctx, 2),
                                  pi_prec=tol)
    logs = ctx.model.log_series(cfg.z_len)
    LG = mellin_mod.MellinElement(ctx, logs * G2.series, check=False)
    for n in range(1, 7):
        def chk(n=n):
            lhs = mellin_mod.mellin_eval(LG, n)
            rhs = mellin_mod.mellin_eval(G2, n - 1) * field.scalar(n)
            ok = (lhs - rhs).is_zero_at(tol - 4)
            return ok, None if ok else f"{lhs.to_text()} vs {rhs.to_text()}"
        _record(out, "mellin", "eval(log_LT G, n) = n eval(G, n-1)",
                "multiplication by the logarithm", {"n": n}, chk)

    # eta operator identities
    def chk_etapsi():
        lhs = ctx.psi(mellin_mod.eta_series(ctx, 2 * p))
        rhs = mellin_mod.eta_series(ctx, 2).scalar_mul(
            field.scalar(field.q) * field.pi_power(-1))
        ok1 = lhs.eq_at(rhs, pi_prec=tol, z_prec=12)
        ok2 = ctx.psi(mellin_mod.eta_series(ctx, 2)).is_zero(tol)
        return ok1 and ok2, None
    _record(out, "mellin", "psi(eta(a)) = (q/pi) eta(a/pi) or 0",
            "psi on characters", {}, chk_etapsi)

    def chk_etasigma():
        a = random_unit_scalar(ctx, rng)
        lhs = ctx.gamma(a, mellin_mod.eta_series(ctx, 2))
        rhs = mellin_mod.eta_series(ctx, field.scalar(2) * a)
        ok = lhs.eq_at(rhs, pi_prec=tol - 4, z_prec=12)
        return ok, None
    _record(out, "mellin", "gamma_a(eta(b)) = eta(ab)",
            "Gamma-action on characters", {}, chk_etasigma)

    # decomposition and reassembly
    for n in (1, 2):
        F = random_power_series(ctx, rng, terms=14)

        def chk(F=F, n=n):
            comps = mellin_mod.decompose(ctx, F, n)
            re = mellin_mod.reassemble(ctx, comps, n)
            ok = re.eq_at(F, pi_prec=tol - 6, z_prec=10)
            return ok, None
        _record(out, "mellin", "F = sum_a (pi/q)^n phi^n psi^n(eta(-a)F) eta(a)",
                "projector decomposition", {"n": n}, chk)

    # psi0 projector
    F = random_power_series(ctx, rng, terms=14)

    def chk_proj():
        pr = mellin_mod.psi0_project(ctx, F)
        ok1 = ctx.psi(pr.series).is_zero(tol - 2)
        pr2 = mellin_mod.psi0_project(ctx, pr.series)
        ok2 = pr2.series.eq_at(pr.series, pi_prec=tol - 4, z_prec=12)
        g = random_power_series(ctx, rng, terms=6)
        ok3 = mellin_mod.psi0_project(ctx, ctx.phi(g)).series.is_zero(tol - 2)
        return ok1 and ok2 and ok3, None
    _record(out, "mellin", "psi0 projector: image, idempotence, kernel",
            "F - phi((pi/q) psi F)", {}, chk_proj)

    # twist
    def chk_twist():
        Gr = mellin_mod.psi0_project(ctx, F)
        T = mellin_mod.twist(Gr)
        ok1 = ctx.psi(T.series).is_zero(tol - 4)
        ok2 = all((mellin_mod.mellin_eval(mellin_mod.twist(G2), n)
                   - mellin_mod.mellin_eval(G2, n + 1)).is_zero_at(tol - 4)
                  for n in range(5))
        return ok1 and ok2, None
    _record(out, "mellin", "twist = d_inv on Mellin images",
            "character twist", {}, chk_twist)

    # psi = 1 evaluation identity on its honest domain
    g2 = (mellin_mod.binomial_series(field, 2, cfg.z_len) - one) * Z.invert()
    dl = ctx.d_inv(g2) * g2.invert()
    for n in range(5):
        def chk(n=n):
            lhs, rhs = mellin_mod.one_minus_phi_eval(ctx, dl, n, pi_prec=tol - 8)
            ok = (lhs - rhs).is_zero_at(tol - 8)
            return ok, None if ok else f"{lhs.to_text()} vs {rhs.to_text()}"
        _record(out, "mellin",
                "eval((1-(pi/q)phi)F, n) = (1-pi^(n+1)/q)(d_inv^n F)(0)",
                "psi=1 evaluation on pole-free input", {"n": n}, chk)

    # the literal (1+Z)/Z instantiation: outside the identity's domain;
    # recorded faithfully and expected to fail (see the decisions ledger)
    FZ = (one + Z) * Z.invert()
    for n in range(5):
        def chk(n=n):
            lhs, rhs = mellin_mod.one_minus_phi_eval(ctx, FZ, n,
                                                     pi_prec=tol - 8)
            ok = (lhs - rhs).is_zero_at(tol - 8)
            note = (f"lhs={lhs.to_text()} rhs={rhs.to_text()}"
                    " [documented defect: (1+Z)/Z has a pole, the"
                    " evaluation identity needs a pole-free argument]")
            return ok, None if ok else note
        _record(out, "mellin",
                "psi=1 evaluation on the pole element (1+Z)/Z",
                "literal instantiation, expected red", {"n": n}, chk)
    return out


def suite_residue_identity(cfg, ctx=None):
    """Explicit elements: xi values, Theta descent, varsigma = q/(q-1) varrho."""
    out = []
    ctx = ctx or context_from_config(cfg)
    field = ctx.field
    p = field.p
    tol = cfg.pi_prec - 6
    Z = LaurentSeries.zvar(field)

    for u in range(1, p):
        for n in (1, 2):
            def chk(u=u, n=n):
                bt = explicit_mod.BasisTuple(ctx, n, u)
                xt = explicit_mod.xi_tilde(bt)
                c0 = (xt * Z).value_at_zero()
                want = field.scalar(p ** n)
                ok = (c0 - want).is_zero_at(tol)
                return ok, None if ok else f"(Z Xi~)(0) = {c0.to_text()}"
            _record(out, "residue-identity", "(Z Xi~_b)(0) = pi^n",
                    "leading Laurent coefficient of Xi~",
                    {"u": u, "n": n}, chk)

    def chk_theta(u):
        bt = explicit_mod.BasisTuple(ctx, 1, u)
        img, xib = explicit_mod.theta_mellin(bt, pi_prec=tol)
        ok1 = ctx.psi(img).is_zero(tol - 2)
        log = ctx.model.log_series(max(xib.zprec, 4))
        ratio = (xib * Z) * log.invert()
        ok2 = (ratio.value_at_zero() - field.one()).is_zero_at(tol - 2)
        return ok1 and ok2, None
    for u in (1, 2):
        _record(out, "residue-identity",
                "Theta image in psi=0 with xi_b = log/Z mod log*O",
                "Theta_b eta(1) = phi^n(xi_b) eta(1)", {"u": u},
                lambda u=u: chk_theta(u))

    bts = [explicit_mod.BasisTuple(ctx, 1, u) for u in range(1, p)]
    xis = [explicit_mod.GroupRobbaElement.xi_hat(bt) for bt in bts]

    def chk_values():
        lam = xis[0]
        s = explicit_mod.varsigma(lam)
        r = explicit_mod.varrho(lam)
        want_r = field.scalar(p - 1) * field.scalar(p).invert()
        ok = (s - field.one()).is_zero_at(tol) and (r - want_r).is_zero_at(tol)
        return ok, f"varsigma={s.to_text()} varrho={r.to_text()}"
    _record(out, "residue-identity", "varsigma(Xi^) = 1, varrho(Xi^) = (q-1)/q",
            "the two residue functionals on the augmentation element", {},
            chk_values)

    def family():
        fam = list(xis)
        diracs = [explicit_mod.GroupRobbaElement.dirac(ctx, 1 + a * p)
                  for a in range(1, p)]
        fam += diracs
        fam.append(explicit_mod.GroupRobbaElement.dirac(ctx,
                                                        field.scalar(1 + p * p)))
        for x in xis:
            fam.append(x.mul_dirac(1 + p))
        fam.append(xis[0] + diracs[0].scalar_mul(2))
        fam.append(xis[0].scalar_mul(5))
        fam.append(xis[0] + xis[-1].scalar_mul(3))
        fam.append(xis[0].mul_dirac(1 + 2 * p) + diracs[-1])
        combo = diracs[0].scalar_mul(7) + diracs[-1].scalar_mul(p)
        fam.append(combo)
        fam.append(xis[0] + combo)
        while len(fam) < 20:
            fam.append(fam[len(fam) % len(xis)].scalar_mul(len(fam)))
        return fam

    fam = family()
    for k, lam in enumerate(fam):
        def chk(lam=lam):
            q = field.scalar(field.q)
            s = explicit_mod.varsigma(lam)
            r = explicit_mod.varrho(lam)
            rhs = r * q * (q - field.one()).invert()
            ok = (s - rhs).is_zero_at(tol)
            return ok, None if ok else f"{s.to_text()} vs {rhs.to_text()}"
        _record(out, "residue-identity", "varsigma = q/(q-1) varrho",
                "the residue identity", {"member": k, "label": lam.label}, chk)

    def chk_tw():
        lam = xis[0]
        s0 = explicit_mod.varsigma(lam)
        s1 = explicit_mod.varsigma(lam.twist())
        ok = (s0 - s1).is_zero_at(tol - 2)
        return ok, None
    _record(out, "residue-identity", "varsigma(Tw(lam)) = varsigma(lam)",
            "twist invariance", {}, chk_tw)

    def chk_aug():
        lam = xis[0]
        val = explicit_mod.pairing_level_n0(
            lam, [(field.one(), field.scalar(1 + p))])
        want = field.scalar(field.q).invert()
        ok = (val - want).is_zero_at(tol - 2)
        return ok, None if ok else f"{val.to_text()}"
    _record(out, "residue-identity", "<Xi^, dirac> = q^(-n0) aug",
            "augmentation through the level pairing", {}, chk_aug)

    def chk_descent():
        d1 = explicit_mod.GroupRobbaElement.dirac(ctx, 1 + p)
        r1 = explicit_mod.varrho(d1)
        r2 = explicit_mod.varrho_from_mellin(d1)
        ok = (r1 - r2).is_zero_at(tol - 2) and \
            ctx.psi(d1.mellin).is_zero(tol - 2)
        return ok, None
    _record(out, "residue-identity",
            "transfer route = phi-descent route on Dirac elements",
            "two descents for varrho", {}, chk_descent)
    return out


def suite_coleman_kato(cfg, ctx=None):
    """Norm coherence, psi-fixed dlog, regulator and CW interpolation."""
    out = []
    ctx = ctx or context_from_config(cfg)
    field = ctx.field
    p = field.p
    tol = cfg.pi_prec - 6
    Z = LaurentSeries.zvar(field)
    one = LaurentSeries.constant(field, 1)

    def coherent(g):
        ok, _ = coleman_mod.is_norm_coherent(ctx, g, tol)
        return ok

    _record(out, "coleman-kato", "g = Z is norm-coherent", "N(Z) = Z", {},
            lambda: (coherent(Z), None))
    for c in (2, 1 + p):
        g = mellin_mod.binomial_series(field, c, cfg.z_len) - one
        _record(out, "coleman-kato", "g = (1+Z)^c - 1 is norm-coherent",
                "root-of-unity product", {"c": c},
                lambda g=g: (coherent(g), None))

    def chk_noncoherent():
        g = one + Z.scalar_mul(field.scalar(2))
        ok, defect = coleman_mod.is_norm_coherent(ctx, g, tol)
        really = not ok and not defect.is_zero(4)
        return really, f"defect order {defect.z_order()}"
    _record(out, "coleman-kato", "1 + 2Z is not norm-coherent",
            "nonzero defect witness", {}, chk_noncoherent)

    def chk_fixedpoint():
        g, depths, converged = coleman_mod.norm_project(ctx, one + Z, 4, tol)
        return converged and all(d is None for d in depths), f"depths {depths}"
    _record(out, "coleman-kato", "norm iteration fixes a coherent series",
            "N-projection fixed point", {}, chk_fixedpoint)

    def chk_constant():
        c = LaurentSeries.constant(field, 2)
        n1 = ctx.norm_N(c)
        ok = n1.eq_at(LaurentSeries.constant(field, 2 ** field.q), pi_prec=tol)
        return ok, None
    _record(out, "coleman-kato", "N(c) = c^q on constants",
            "norms of constants iterate to Teichmueller", {}, chk_constant)

    for c in (2, 1 + p):
        greg = (mellin_mod.binomial_series(field, c, cfg.z_len) - one) * \
            Z.invert()

        def chk_dlog(greg=greg):
            dl = coleman_mod.dlog_map(ctx, greg)
            ok = (ctx.psi(dl) - dl).is_zero(tol)
            return ok, None
        _record(out, "coleman-kato", "psi fixes dlog g",
                "coherent series have psi-fixed dlog", {"c": c}, chk_dlog)

        for r in (2, 3, 4, 5):
            def chk_reg(greg=greg, r=r):
                v = coleman_mod.regulator_value(ctx, greg, r, pi_prec=tol - 4)
                return True, f"value {v.to_text()}"
            _record(out, "coleman-kato",
                    "regulator composite = r(1-pi^r/q)(d^r log g)(0)",
                    "two-path interpolation equality", {"c": c, "r": r},
                    chk_reg)

        for r in (2, 3):
            def chk_cw(greg=greg, r=r):
                lhs, rhs, ok = coleman_mod.cw_interpolation_check(
                    ctx, greg, r, 1, pi_prec=tol - 6)
                return ok, None if ok else f"{lhs.to_text()} vs {rhs.to_text()}"
            _record(out, "coleman-kato",
                    "CW interpolation factor identity",
                    "kato value vs scaled regulator", {"c": c, "r": r}, chk_cw)

    def chk_dlogZ():
        dl = coleman_mod.dlog_map(ctx, Z)
        ok = dl.eq_at((one + Z) * Z.invert(), pi_prec=tol, z_prec=16) and \
            (ctx.psi(dl) - dl).is_zero(tol)
        return ok, None
    _record(out, "coleman-kato", "dlog Z = (1+Z)/Z, psi-fixed",
            "classical fixed vector", {}, chk_dlogZ)
    return out


def suite_koszul(cfg, ctx=None):
    """Signed Koszul differentials, self-duality, fibres, order counts."""
    out = []
    rng = random.Random(f"{cfg.seed}:koszul")
    p = cfg.prime
    from math import comb

    for d in (1, 2, 3):
        def chk_triv(d=d):
            M = koszul_mod.FiniteActionModule(
                [p], [koszul_mod.mat_identity(1) for _ in range(d)])
            cx = koszul_mod.build_koszul(M)
            ok = all(len(cx.cohomology(q)) == comb(d, q) for q in range(d + 1))
            return ok, None
        _record(out, "koszul", "trivial action: rank h^q = binom(d, q)",
                "exterior algebra cohomology", {"d": d}, chk_triv)

    for d in (1, 2, 3, 4):
        def chk_dual(d=d):
            base = [[1 + p * rng.randint(0, p - 1), p * rng.randint(0, p - 1)],
                    [p * rng.randint(0, p - 1), 1 + p * rng.randint(0, p - 1)]]
            gammas = []
            P = koszul_mod.mat_identity(2)
            for _ in range(d):
                P = koszul_mod.mat_mul(P, base)
                gammas.append([[x % (p * p) for x in row] for row in P])
            M = koszul_mod.FiniteActionModule([p * p, p * p], gammas)
            ok = koszul_mod.duality_square_commutes(M)
            return ok, None
        _record(out, "koszul", "signed self-duality squares commute",
                "sign(I, J) chain isomorphism", {"d": d}, chk_dual)

    def chk_signs():
        ok = all(koszul_mod.sign_transposition_identity(
            koszul_mod.ExteriorIndex(d, I), k)
            for d in range(1, 5) for q in range(1, d + 1)
            for I in koszul_mod.subsets(d, q) for k in range(1, q + 1))
        return ok, None
    _record(out, "koszul", "sign(I,J)/sign(I_k,J_k) = (-1)^(q-k+l-1)",
            "transposition count", {}, chk_signs)

    def chk_fib_id():
        M = koszul_mod.FiniteActionModule([p * p], [[[1 + p]]])
        cx = koszul_mod.build_koszul(M)
        endo = koszul_mod.chain_endo_from_matrix(cx, koszul_mod.mat_identity(1), 1)
        fib = koszul_mod.mapping_fibre(cx, endo)
        ok = all(fib.cohomology_order(i) == 1 for i in range(-1, 3))
        return ok, None
    _record(out, "koszul", "Fib(identity) is acyclic", "cone conventions",
            {}, chk_fib_id)

    def chk_fib_zero():
        M = koszul_mod.FiniteActionModule([p * p], [[[1 + p]]])
        cx = koszul_mod.build_koszul(M)
        endo = koszul_mod.chain_endo_from_matrix(cx, [[0]], 1)
        fib = koszul_mod.mapping_fibre(cx, endo)
        ok = all(fib.cohomology_order(i)
                 == cx.cohomology_order(i) * cx.cohomology_order(i - 1)
                 for i in range(0, 3))
        return ok, None
    _record(out, "koszul", "Fib(0) interleaves h^i and h^(i-1)",
            "split cone", {}, chk_fib_zero)

    # random finite modules: SES order count for the phi-fibre
    for trial in range(10):
        d = rng.randint(1, 2)
        m = rng.randint(1, 2)
        r = rng.randint(1, 2)
        mod = p ** m

        def chk(d=d, m=m, r=r, mod=mod):
            base = [[rng.randrange(mod) for _ in range(r)] for _ in range(r)]
            for i in range(r):
                base[i][i] = (1 + p * base[i][i]) % mod
                for j in range(r):
                    if i != j:
                        base[i][j] = (p * base[i][j]) % mod
            gammas = []
            P = koszul_mod.mat_identity(r)
            for _ in range(d):
                P = koszul_mod.mat_mul(P, base)
                gammas.append([[x % mod for x in row] for row in P])
            fmat = koszul_mod.mat_mul(base, base)
            fmat = [[x % mod for x in row] for row in fmat]
            M = koszul_mod.FiniteActionModule([mod] * r, gammas, f=fmat)
            cx = koszul_mod.build_koszul(M)
            endo = koszul_mod.chain_endo_from_matrix(cx, fmat, r)
            fib = koszul_mod.mapping_fibre(
                cx, koszul_mod.endo_minus_one(endo, cx))
            ok = True
            for i in range(0, d + 2):
                lhs = fib.cohomology_order(i)
                rhs = (cx.induced_coinvariants_order(i - 1, endo)
                       * cx.induced_coinvariants_order(i, endo))
                if lhs != rhs:
                    ok = False
            return ok, None
        _record(out, "koszul",
                "|h^i(K_f)| = |h^(i-1)(K)_(f=1)| |h^i(K)^(f=1)|",
                "edge sequence order count", {"trial": trial}, chk)
    return out


SUITE_RUNNERS = {
    "core-ops": suite_core_ops,
    "psi-omega": suite_psi_omega,
    "mellin": suite_mellin,
    "residue-identity": suite_residue_identity,
    "coleman-kato": suite_coleman_kato,
    "koszul": suite_koszul,
    "formal-group": suite_formal_group,
}


def run_suites(cfg):
    cfg.validate()
    records = []
    for name in cfg.suites:
        records.extend(SUITE_RUNNERS[name](cfg))
    records.sort(key=CheckRecord.sort_key)
    return records


def report_json(cfg, records):
    """Canonical JSON bytes: deterministic for a fixed (config, seed).

    Timing is inherently nondeterministic, so elapsed stays out of the JSON
    stream (the text format carries it).
    """
    doc = {
        "schema": 1,
        "config": cfg.describe(),
        "checks": [
            {
                "suite": r.suite,
                "identity": r.identity,
                "anchor": r.anchor,
                "params": r.params,
                "status": "pass" if r.status else "fail",
                "witness": r.witness,
            }
            for r in records
        ],
        "passed": sum(1 for r in records if r.status),
        "failed": sum(1 for r in records if not r.status),
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def report_text(cfg, records):
    lines = []
    lines.append(f"ltcalc verification report  "
                 f"(p={cfg.prime}, model={cfg.model}, "
                 f"prec pi^{cfg.pi_prec}, Z^{cfg.z_len}, seed={cfg.seed})")
    cur = None
    npass = nfail = 0
    for r in records:
        if r.suite != cur:
            cur = r.suite
            lines.append(f"-- suite {cur} --")
        mark = "pass" if r.status else "FAIL"
        if r.status:
            npass += 1
        else:
            nfail += 1
        extra = f"  [{r.witness}]" if (r.witness and not r.status) else ""
        params = json.dumps(r.params, sort_keys=True) if r.params else ""
        lines.append(f"  {mark}  {r.identity}  {params}  "
                     f"({r.elapsed * 1000:.0f} ms){extra}")
    lines.append(f"total: {npass} pass, {nfail} fail")
    return "\n".join(lines) + "\n"
