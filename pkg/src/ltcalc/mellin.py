"""Fourier/Mellin layer at the multiplicative specialization (period = 1).

On the model [pi](Z) = (1+Z)^p - 1 over Q_p the characters of o_L pull back
to the series eta(a, Z) = (1+Z)^a, the Mellin image of the Dirac mass at a.
Distributions are probed through their psi=0 Mellin images: evaluation at the
n-th power of the tautological character is reading off (d_inv^n G)(0), the
twist operator is d_inv itself, and every series decomposes over the
congruence classes mod pi^n with the projector (pi/q)^n phi^n psi^n.
"""

from __future__ import annotations

from .errors import (
    ModelRequiresPeriod,
    NotPsiOne,
    NotPsiZero,
    PrincipalPartAtZero,
)
from .fields import Scalar
from .series import EXACT_Z, LaurentSeries


def require_period_one(ctx):
    if not ctx.model.is_multiplicative:
        raise ModelRequiresPeriod("needs the multiplicative model (period 1)")


def binomial_series(field, a, zlen):
    """(1+Z)^a - the binomial series for a in Z_p (exact for integer a)."""
    if isinstance(a, int):
        a = field.scalar(a)
    coeffs = [field.one()]
    b = field.one()
    for k in range(1, zlen):
        b = b * (a - field.scalar(k - 1)) / field.scalar(k)
        coeffs.append(b)
    return LaurentSeries.from_scalars(field, 0, coeffs, zlen)


def eta_series(ctx, a, zlen=None):
    """eta(a, Z) = (1+Z)^a; multiplicative: eta(a+b) = eta(a)eta(b)."""
    require_period_one(ctx)
    zlen = zlen or ctx.zlen
    return binomial_series(ctx.field, a, zlen)


class MellinElement:
    """A series G asserted to lie in the psi = 0 part.

    G realizes a distribution lambda on the unit group through G = lambda
    applied to eta(1, Z); only Mellin images and character values are ever
    used, so the distribution itself stays implicit.
    """

    def __init__(self, ctx, series, check=True, pi_prec=None):
        self.ctx = ctx
        self.series = series
        if check:
            img = ctx.psi(series)
            if not img.is_zero(pi_prec):
                raise NotPsiZero("series is not killed by psi at precision")

    def __repr__(self):
        return f"MellinElement({self.series!r})"


def psi0_project(ctx, F):
    """F - phi(psi_normalized(F)): the projector onto the psi = 0 part."""
    out = F - ctx.phi(ctx.psi_normalized(F))
    return MellinElement(ctx, out, check=False)


def decompose(ctx, F, n):
    """Components c_a = (pi/q)^n phi^n psi^n(eta(-a) F), a mod pi^n.

    Reassembles as F = sum_a c_a * eta(a).
    """
    require_period_one(ctx)
    field = ctx.field
    p = field.p
    scale = (field.pi() / field.scalar(field.q)).pow_int(n)
    comps = {}
    for a in range(p ** n):
        t = eta_series(ctx, -a, ctx.zlen) * F
        for _ in range(n):
            t = ctx.psi(t)
        for _ in range(n):
            t = ctx.phi(t)
        comps[a] = t.scalar_mul(scale)
    return comps


def reassemble(ctx, comps, n):
    field = ctx.field
    out = LaurentSeries.zero(field)
    for a, c in comps.items():
        out = out + c * eta_series(ctx, a, ctx.zlen)
    return out


def mellin_eval(G, n):
    """Value at the n-th power of the Lubin-Tate character.

    For the period-1 model this is (d_inv^n G)(0); other models get the
    period-normalized pair (-n, (d_inv^n G)(0)).
    """
    ctx = G.ctx if isinstance(G, MellinElement) else None
    if ctx is None:
        raise TypeError("mellin_eval needs a MellinElement")
    series = G.series
    for _ in range(n):
        series = ctx.d_inv(series)
    value = series.value_at_zero()
    if not ctx.model.is_multiplicative:
        return (-n, value)
    return value


def twist(G):
    """Tw by the Lubin-Tate character: d_inv on Mellin images (period 1)."""
    ctx = G.ctx
    require_period_one(ctx)
    return MellinElement(ctx, ctx.d_inv(G.series), check=False)


def one_minus_phi_eval(ctx, F, n, pi_prec=None):
    """Both sides of the psi = 1 evaluation identity.

    For F fixed by psi, the value of (1 - (pi/q) phi)F at the n-th character
    power equals (1 - pi^(n+1)/q) (d_inv^n F)(0).  Returns (lhs, rhs); the
    evaluations read constant terms of Laurent expansions, so F needs to be
    pole-free for the identity to carry the intended meaning.
    """
    require_period_one(ctx)
    field = ctx.field
    chk = ctx.psi(F) - F
    if not chk.is_zero(pi_prec):
        raise NotPsiOne("argument is not fixed by psi")
    scale = field.pi() / field.scalar(field.q)
    G = F - ctx.phi(F).scalar_mul(scale)
    lhs_series = G
    for _ in range(n):
        lhs_series = ctx.d_inv(lhs_series)
    lhs = _laurent_constant(lhs_series)
    rhs_series = F
    for _ in range(n):
        rhs_series = ctx.d_inv(rhs_series)
    factor = field.one() - field.pi().pow_int(n + 1) / field.scalar(field.q)
    rhs = _laurent_constant(rhs_series) * factor
    return lhs, rhs


def _laurent_constant(series):
    """Constant term of the Laurent expansion (ignores any pole part)."""
    if series.zprec <= 0:
        raise PrincipalPartAtZero("constant term not determined")
    if series.low > 0:
        return series.field.zero()
    return series.coefficient(0)
