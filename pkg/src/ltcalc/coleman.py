"""Coleman power series: norm coherence, dlog, and interpolation values.

A norm-coherent g (N(g) = g for the Coleman norm N with N(g) o [pi] equal to
the product of g over torsion translates) has psi-fixed logarithmic
derivative d_inv(g)/g; feeding that through 1 - (pi/q) phi, multiplication by
log_LT and Mellin evaluation produces the interpolation values whose closed
form r (1 - pi^r/q) (d_inv^r log g)(0) is asserted against the composite on
every call.
"""

from __future__ import annotations

from math import factorial

from .errors import (
    CompositeClosedFormMismatch,
    DegenerateFactor,
    NoConvergence,
    NonUnitArgument,
    PoleAtZero,
)
from .mellin import MellinElement, mellin_eval, require_period_one
from .series import EXACT_Z, LaurentSeries


class ColemanSeries:
    """g = unit * Z^k with k in {0, 1}, with its norm and coherence flag."""

    def __init__(self, ctx, series, pi_prec=None):
        self.ctx = ctx
        self.series = series
        order = series.z_order()
        if order not in (0, 1):
            raise NonUnitArgument("Coleman series must be unit * Z^k, k <= 1")
        self.order = order
        self.norm = ctx.norm_N(series)
        defect_src = self.norm - series.truncate(self.norm.zprec)
        self.defect = defect_src
        self.norm_coherent = defect_src.is_zero(pi_prec)

    def __repr__(self):
        tag = "coherent" if self.norm_coherent else "not coherent"
        return f"ColemanSeries({tag}, order={self.order})"


def is_norm_coherent(ctx, g, pi_prec=None):
    """(flag, defect N(g)/g - 1)."""
    cs = ColemanSeries(ctx, g, pi_prec)
    unit = g.z_shift(-cs.order) if cs.order else g
    defect = (cs.norm.z_shift(-cs.order) * unit.invert()) - 1
    return cs.norm_coherent, defect


def norm_project(ctx, g0, iterations, pi_prec=None):
    """Iterate the norm operator; reports pi-adic agreement depths.

    Coleman's construction: N^k(g0) converges to a coherent series; depths of
    successive agreement must be nondecreasing, else NoConvergence.
    """
    iters = [g0]
    for _ in range(iterations):
        iters.append(ctx.norm_N(iters[-1]))
    depths = []
    for a, b in zip(iters, iters[1:]):
        diff = b - a.truncate(b.zprec)
        if diff.is_zero():
            depths.append(None)  # agree at full available precision
            continue
        vals = diff.valuations()
        depth = min(v for k, v in enumerate(vals) if v < diff.precs[k])
        depths.append(depth)
    seen = [d for d in depths if d is not None]
    for d1, d2 in zip(seen, seen[1:]):
        if d2 < d1:
            raise NoConvergence(f"agreement depths not monotone: {depths}")
    converged = depths and depths[-1] is None
    return iters[-1], depths, converged


def dlog_map(ctx, g, check_psi_fixed=False, pi_prec=None):
    """d_inv(g)/g; lands in the psi-fixed part when g is norm-coherent."""
    out = ctx.d_inv(g) * g.invert()
    if check_psi_fixed:
        if not (ctx.psi(out) - out).is_zero(pi_prec):
            raise CompositeClosedFormMismatch("dlog of a coherent series "
                                              "must be psi-fixed")
    return out


def regulator_value(ctx, g, r, pi_prec=None):
    """Interpolation value at the r-th character power, both ways.

    Composite: Mellin-evaluate log_LT * (1 - (pi/q) phi) dlog g.  Closed
    form: r (1 - pi^r/q) (d_inv^(r-1) dlog g)(0).  The two must agree; the
    composite is returned.
    """
    require_period_one(ctx)
    field = ctx.field
    if r < 1:
        raise DegenerateFactor("r >= 1 required")
    g0 = g.value_at_zero() if g.low >= 0 or g.z_order() >= 0 else None
    if g0 is None or g0.valuation() != 0:
        raise PoleAtZero("pass the regular part: g(0) must be a unit")
    A = dlog_map(ctx, g)
    if not (ctx.psi(A) - A).is_zero(pi_prec):
        raise CompositeClosedFormMismatch("dlog g is not psi-fixed")
    scale = field.pi() / field.scalar(field.q)
    B = A - ctx.phi(A).scalar_mul(scale)
    C = ctx.model.log_series(ctx.zlen) * B
    composite = mellin_eval(MellinElement(ctx, C, check=False), r)
    Ar = A
    for _ in range(r - 1):
        Ar = ctx.d_inv(Ar)
    factor = field.one() - field.pi().pow_int(r) / field.scalar(field.q)
    closed = Ar.value_at_zero() * factor * field.scalar(r)
    target = pi_prec if pi_prec is not None else min(composite.prec, closed.prec)
    if not (composite - closed).is_zero_at(target):
        raise CompositeClosedFormMismatch(
            f"composite {composite!r} != closed form {closed!r} at r={r}")
    return composite


def kato_value(ctx, g, r, a, pi_prec=None):
    """a (1 - pi^(-r)) / (r-1)! * (d_inv^r log g)(0)."""
    field = ctx.field
    if isinstance(a, int):
        a = field.scalar(a)
    A = dlog_map(ctx, g)
    for _ in range(r - 1):
        A = ctx.d_inv(A)
    euler = field.one() - field.pi_power(-r)
    fact_inv = field.scalar(factorial(r - 1)).invert()
    return A.value_at_zero() * euler * fact_inv * a


def cw_interpolation_check(ctx, g, r, a, pi_prec=None):
    """(1/r!) (1-pi^{-r})/(1-pi^r/q) * reg(g, r) * a  ==  kato_value(g, r, a).

    Returns (lhs, rhs, ok); DegenerateFactor when 1 - pi^r/q vanishes.
    """
    field = ctx.field
    if isinstance(a, int):
        a = field.scalar(a)
    denom = field.one() - field.pi().pow_int(r) / field.scalar(field.q)
    if denom.is_zero():
        raise DegenerateFactor("1 - pi^r/q vanishes at this r")
    reg = regulator_value(ctx, g, r, pi_prec)
    lhs = (reg * a * (field.one() - field.pi_power(-r))
           * denom.invert() * field.scalar(factorial(r)).invert())
    rhs = kato_value(ctx, g, r, a, pi_prec)
    target = pi_prec if pi_prec is not None else min(lhs.prec, rhs.prec)
    ok = (lhs - rhs).is_zero_at(target)
    return lhs, rhs, ok
