"""Explicit group-Robba elements and the residue functionals.

Everything here lives on the multiplicative model over Q_p (period 1) at
level n0 = 1 (p odd), with U_n = 1 + p^n Z_p.

An element lam of the group Robba ring supported on the level-n0 subgroup is
realized by two desk series:

  * ``twist_image``  T = Mellin image of the character twist of lam, which
    equals d_inv of the Mellin image of lam.  For the pole-bearing elements
    (the Xi family) the Mellin image itself has a logarithmic boundary term
    and is NOT a desk Laurent series, but T always is: for Xi it comes
    from the Theta operator series divided by log_LT.
  * ``transfer``  t = the level-n0 logarithm transfer of lam (the series the
    explicit residue formula for the second functional consumes); for a
    Dirac mass at the unit u it is eta(log(u)/pi^n0, Z), and for the Xi
    family it is the closed form ell(b) / (eta(log(b)/pi^n0, Z) - 1).

The two residue functionals are then

  varsigma(lam) = res( eta(-1) * T * g_LT dZ ),
  varrho(lam)   = (q-1)/q * (q/pi)^n0 * res( t * g_LT dZ ),

and the residue identity states varsigma = q/(q-1) * varrho on all of them.
For elements with an honest Mellin image G (Dirac combinations) G is kept
too, with psi(G) = 0 and d_inv(G) = T checked, and the phi-descent
h = phi^{-n0}(G / eta(1)) available as a cross-check route for varrho.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (
    DescentFailed,
    IdentityViolation,
    SeriesInOperatorDiverged,
)
from .fields import Scalar
from .mellin import MellinElement, eta_series, require_period_one
from .series import EXACT_Z, LaurentSeries

N0 = 1  # p odd: log and exp are inverse on 1 + p Z_p


def padic_log(field, b, prec=None):
    """log(b) for v(b - 1) >= 1, by the alternating series."""
    prec = prec or field.store_prec - 4
    x = b - field.one()
    v = x.valuation_lower_bound()
    if v < 1:
        raise DescentFailed("padic_log needs v(b-1) >= 1")
    total = field.zero(prec)
    term = field.one(prec)
    k = 1
    while k * v - _vp_int(field, k) < prec + 4:
        term = term * x
        contrib = term / field.scalar(k)
        total = total + (contrib if k % 2 == 1 else -contrib)
        k += 1
    return total


def _vp_int(field, k):
    v = 0
    while k % field.p == 0:
        k //= field.p
        v += 1
    return v * field.e


def bernoulli_numbers(count):
    """B_0 .. B_{count-1} as Fractions (recurrence on binomials)."""
    from math import comb
    B = [Fraction(1)]
    for m in range(1, count):
        acc = Fraction(0)
        for j in range(m):
            acc += comb(m + 1, j) * B[j]
        B.append(-acc / (m + 1))
    return B


class BasisTuple:
    """A basis b = 1 + u p^n of U_n as a Z_p-module (d = 1 here)."""

    def __init__(self, ctx, n, unit=1):
        require_period_one(ctx)
        field = ctx.field
        self.ctx = ctx
        self.n = n
        if isinstance(unit, int):
            unit = field.scalar(unit)
        self.b = field.one() + unit * field.pi().pow_int(n)
        self.ell = padic_log(field, self.b)
        if self.ell.valuation() != n:
            raise DescentFailed("log(b) must have valuation n")
        self.ell_star = self.ell * field.scalar(field.q).invert().pow_int(N0)

    def __repr__(self):
        return f"BasisTuple(n={self.n}, b={self.b.to_text()})"


def xi_tilde(bt, zlen=None):
    """The level-n transfer of the normalized Xi: ell(b)/(eta(log b / pi^n) - 1).

    A simple pole at Z = 0; Z * xi_tilde has constant term pi^n (period 1).
    """
    ctx = bt.ctx
    field = ctx.field
    zlen = zlen or ctx.zlen
    cprime = bt.ell * field.pi_power(-bt.n)
    denom = eta_series(ctx, cprime, zlen + 1) - 1
    return denom.invert().scalar_mul(bt.ell)


def theta_image(bt, zlen=None, pi_target=None):
    """Theta_b applied to eta(1, Z): the operator series F(ell(b) nabla).

    F(X) = X/(e^X - 1) = sum B_k X^k / k!, and nabla^k eta(1) = Q_k eta(1)
    with Q_0 = 1 and Q_{k+1} = log_LT (d_inv Q_k + Q_k)  (equivalently the
    Stirling-number polynomials of the second kind in log_LT; the exponential
    resums to exp(e^t log_LT) as the Gamma-flow requires).  Terms are summed
    until the scalar weight B_k ell^k / k! clears target precision by a
    margin covering the denominators of the log powers; the defining relation
    (dirac(b) - 1) Theta eta(1) = ell(b) nabla eta(1) is verified in tests.
    """
    ctx = bt.ctx
    field = ctx.field
    zlen = zlen or ctx.zlen
    pi_target = pi_target or field.prec
    margin = (zlen // (field.p - 1)) + 6
    needed = pi_target + margin
    log = ctx.model.log_series(zlen)
    eta1 = eta_series(ctx, 1, zlen)
    from math import factorial
    n = bt.ell.valuation()
    if n is None or n < 1:
        raise SeriesInOperatorDiverged("v(log b) must be >= 1")
    B = bernoulli_numbers(8)
    total = LaurentSeries.zero(field)
    Q = LaurentSeries.constant(field, 1)
    k = 0
    kmax = 8 * needed + 32
    while True:
        # analytic tail bound: v(B_k ell^k / k!) >= k n - k/(p-1) - 1
        if k > 0 and k * n - k // (field.p - 1) - 2 >= needed:
            break
        if k >= len(B):
            B = bernoulli_numbers(2 * len(B))
        if B[k] != 0:
            w = field.scalar(Fraction(B[k], factorial(k))) * bt.ell.pow_int(k)
            if w.valuation_lower_bound() < needed:
                total = total + Q.scalar_mul(w)
        Q = (log * (ctx.d_inv(Q) + Q)).truncate(zlen)
        k += 1
        if k > kmax:
            raise SeriesInOperatorDiverged("operator series failed its ledger")
    return (total * eta1).truncate(zlen)


def theta_mellin(bt, zlen=None, pi_prec=None):
    """(Mellin image of Theta_b, the extracted descent series xi_b).

    The image is phi^n(xi_b) eta(1, Z) with xi_b = log_LT/Z mod log_LT * O;
    extraction divides by eta(1) and inverts phi by substitution.  The
    normalized constant (xi_b Z / log_LT)(0) = 1 is asserted.
    """
    ctx = bt.ctx
    field = ctx.field
    zlen = zlen or ctx.zlen
    img = theta_image(bt, zlen, pi_prec)
    eta1_inv = eta_series(ctx, 1, zlen).invert()
    descended = (img * eta1_inv)
    xi = ctx.phi_inverse(descended, bt.n)
    log = ctx.model.log_series(max(xi.zprec, 2))
    Z = LaurentSeries.zvar(field)
    ratio = (xi * Z) * log.invert()
    c0 = ratio.value_at_zero()
    if not (c0 - field.one()).is_zero(
            ) and not (c0 - field.one()).is_zero_at(pi_prec or field.prec):
        raise DescentFailed(f"xi_b normalization failed: c(0) = {c0!r}")
    # xi_b - log/Z must lie in log * O: the quotient has no pole
    diff = xi - (log * Z.invert()).truncate(xi.zprec)
    quot = diff * log.invert()
    zo = quot.z_order()
    if zo is not None and zo < 0:
        vals = quot.valuations()
        bad = [v for k, v in enumerate(vals) if quot.low + k < 0
               and v < quot.precs[k]]
        if bad:
            raise DescentFailed("xi_b - log/Z has a pole after division")
    return img, xi


class GroupRobbaElement:
    """A level-n0 group-Robba element.

    The twist image is kept in factored form  T = plain + sum phi(a_i) c_i :
    phi-images of poles do not admit faithful desk expansions at 0 (their
    boundary Laurent series have infinite principal parts), but their residue
    pairings reduce through the psi-adjunction, so varsigma stays exactly
    computable.
    """

    def __init__(self, ctx, plain, phi_parts, transfer, mellin=None, label=""):
        self.ctx = ctx
        self.plain = plain              # desk series, poles at 0 only
        self.phi_parts = phi_parts      # list of (a, c): phi(a) * c with c pole-free
        self.transfer = transfer
        self.mellin = mellin
        self.label = label

    # -- constructors -------------------------------------------------------

    @staticmethod
    def dirac(ctx, gamma_unit, zlen=None, label=None):
        """The Dirac mass at the group element with chi_LT-value u in U_n0."""
        field = ctx.field
        zlen = zlen or ctx.zlen
        if isinstance(gamma_unit, int):
            gamma_unit = field.scalar(gamma_unit)
        u = gamma_unit
        if (u - field.one()).valuation_lower_bound() < N0:
            raise DescentFailed("Dirac element must lie in U_n0")
        G = eta_series(ctx, u, zlen)
        T = G.scalar_mul(u)
        t = eta_series(ctx, padic_log(field, u) * field.pi_power(-N0), zlen)
        return GroupRobbaElement(ctx, T, [], t, mellin=G,
                                 label=label or f"dirac({u.to_text()})")

    @staticmethod
    def xi_hat(bt, zlen=None):
        """The augmentation representative: q^{-n0} ell(b) / (dirac(b) - 1).

        Twist image (pi/q) phi(e/Z) eta(1,Z) with e = xi_b Z / log_LT from
        the Theta extraction; transfer q^{-n0} xi_tilde.
        """
        ctx = bt.ctx
        field = ctx.field
        zlen = zlen or ctx.zlen
        if bt.n != N0:
            raise DescentFailed("xi_hat lives at level n0")
        img, xib = theta_mellin(bt, zlen)
        log = ctx.model.log_series(max(xib.zprec, 2))
        Z = LaurentSeries.zvar(field)
        e = (xib * Z) * log.invert()
        scale = field.pi() * field.scalar(field.q).invert()
        a = (e * Z.invert()).scalar_mul(scale)
        c = eta_series(ctx, 1, zlen)
        qinv = field.scalar(field.q).invert().pow_int(N0)
        t = xi_tilde(bt, zlen).scalar_mul(qinv)
        return GroupRobbaElement(ctx, LaurentSeries.zero(field), [(a, c)], t,
                                 label=f"xi_hat(b={bt.b.to_text()})")

    # -- module structure -----------------------------------------------------

    def scalar_mul(self, s):
        if isinstance(s, int):
            s = self.ctx.field.scalar(s)
        return GroupRobbaElement(
            self.ctx, self.plain.scalar_mul(s),
            [(a.scalar_mul(s), c) for a, c in self.phi_parts],
            None if self.transfer is None else self.transfer.scalar_mul(s),
            None if self.mellin is None else self.mellin.scalar_mul(s),
            label=f"({s.to_text()})*{self.label}")

    def __add__(self, other):
        mel = None
        if self.mellin is not None and other.mellin is not None:
            mel = self.mellin + other.mellin
        tr = None
        if self.transfer is not None and other.transfer is not None:
            tr = self.transfer + other.transfer
        return GroupRobbaElement(
            self.ctx, self.plain + other.plain,
            self.phi_parts + other.phi_parts, tr, mel,
            label=f"{self.label} + {other.label}")

    def mul_dirac(self, gamma_unit):
        """Multiplication by the Dirac mass at u: the Gamma-action side.

        T(dirac(u) * lam) = u * gamma_u(T(lam)); gamma_u commutes with phi,
        so phi(a) c parts become phi(gamma_u a) gamma_u(c).
        """
        ctx = self.ctx
        field = ctx.field
        if isinstance(gamma_unit, int):
            gamma_unit = field.scalar(gamma_unit)
        u = gamma_unit
        plain = ctx.gamma(u, self.plain).scalar_mul(u) if self.plain.nstored \
            else self.plain
        parts = [(ctx.gamma(u, a).scalar_mul(u), ctx.gamma(u, c))
                 for a, c in self.phi_parts]
        tr = None
        if self.transfer is not None:
            tr = self.transfer * eta_series(
                ctx, padic_log(field, u) * field.pi_power(-N0), ctx.zlen)
        mel = None if self.mellin is None else ctx.gamma(u, self.mellin)
        return GroupRobbaElement(ctx, plain, parts, tr, mel,
                                 label=f"dirac({u.to_text()})*{self.label}")

    def twist(self):
        """Tw by the Lubin-Tate character: d_inv on twist data.

        d_inv(phi(a) c) = pi phi(d_inv a) c + phi(a) d_inv(c); the transfer
        does not survive twisting (its pole moves off the origin), so only
        varsigma applies to the result.
        """
        ctx = self.ctx
        field = ctx.field
        plain = ctx.d_inv(self.plain) if self.plain.nstored else self.plain
        parts = []
        for a, c in self.phi_parts:
            parts.append((ctx.d_inv(a).scalar_mul(field.pi()), c))
            parts.append((a, ctx.d_inv(c)))
        mel = None if self.mellin is None else ctx.d_inv(self.mellin)
        return GroupRobbaElement(ctx, plain, parts, None, mel,
                                 label=f"Tw({self.label})")

    def __repr__(self):
        return f"GroupRobbaElement({self.label})"


def varsigma(lam):
    """First residue functional: res_B(eta(-1) * T * dlog_LT).

    The plain part is a desk residue; each phi(a) c part goes through the
    adjunction res_B(phi(a) u dlog) = <a, psi(u)>.
    """
    ctx = lam.ctx
    field = ctx.field
    zlen = ctx.zlen
    em1 = eta_series(ctx, -1, max(zlen, 2))
    glt = ctx.model.g_series(max(zlen, 2))
    total = field.zero()
    if lam.plain.nstored:
        total = total + (em1 * lam.plain * glt).residue()
    for a, c in lam.phi_parts:
        u = em1 * c
        total = total + ctx.pairing(a, ctx.psi(u))
    return total


def varrho(lam):
    """Second residue functional, by the explicit level-n0 formula."""
    ctx = lam.ctx
    field = ctx.field
    if lam.transfer is None:
        raise DescentFailed("element carries no level-n0 transfer data")
    q = field.scalar(field.q)
    scale = (q - field.one()) * q.invert()
    scale = scale * (q * field.pi().invert()).pow_int(N0)
    zlen = min(lam.transfer.zprec, ctx.zlen)
    glt = ctx.model.g_series(max(zlen, 2))
    return (lam.transfer * glt).residue() * scale


def varrho_from_mellin(lam, pi_prec=None):
    """varrho through the phi-descent h = phi^{-n0}(G / eta(1)).

    Only available when the Mellin image G is an honest desk series.
    """
    ctx = lam.ctx
    field = ctx.field
    if lam.mellin is None:
        raise DescentFailed("no desk Mellin image on this element")
    G = lam.mellin
    h = ctx.phi_inverse(G * eta_series(ctx, -1, G.zprec
                                       if G.zprec < EXACT_Z else ctx.zlen), N0)
    q = field.scalar(field.q)
    scale = (q - field.one()) * q.invert() * (q * field.pi().invert()).pow_int(N0)
    glt = ctx.model.g_series(max(min(h.zprec, ctx.zlen), 2))
    return (h * glt).residue() * scale


def pairing_level_n0(lam, mu):
    """<lam, mu> at level n0: varrho(lam * mu) / ((q-1) q^(n0-1))."""
    ctx = lam.ctx
    field = ctx.field
    q = field.q
    denom = field.scalar((q - 1) * q ** (N0 - 1))
    return varrho_product(lam, mu) * denom.invert()


def varrho_product(lam, mu_diracs):
    """varrho(lam * mu) for mu a list of (coefficient, unit) Dirac data."""
    total = None
    for coeff, u in mu_diracs:
        term = varrho(lam.mul_dirac(u)) * coeff
        total = term if total is None else total + term
    return total


def residue_identity_check(family, pi_prec=None):
    """varsigma = q/(q-1) varrho across the family; raises on any violation.

    Returns the list of (label, varsigma, varrho) triples.
    """
    out = []
    for lam in family:
        ctx = lam.ctx
        field = ctx.field
        q = field.scalar(field.q)
        s = varsigma(lam)
        r = varrho(lam)
        rhs = r * q * (q - field.one()).invert()
        target = pi_prec if pi_prec is not None else min(s.prec, rhs.prec)
        if not (s - rhs).is_zero_at(target):
            raise IdentityViolation(
                f"residue identity fails on {lam.label}: "
                f"varsigma={s!r}, (q/(q-1))varrho={rhs!r}",
                witness=(lam.label, s, rhs))
        out.append((lam.label, s, r))
    return out
