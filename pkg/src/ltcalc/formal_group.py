"""Lubin-Tate formal groups from a Frobenius polynomial.

A Frobenius series [pi](Z) with [pi] = pi*Z mod deg 2 and [pi] = Z^q mod pi
determines the group law F(X,Y), the multiplications [a](Z), the invariant
differential coefficient g_LT, the logarithm log_LT and its inverse exp_LT.

The group law is solved degree by degree from F([pi]X, [pi]Y) = [pi](F(X,Y));
log_LT is solved from log([pi](Z)) = pi * log(Z) (its derivative is g_LT and
the compositional inverse is exp_LT).  Both constructions are cross-checked
against each other and against (dF/dY)(Z,0) in the test suite.
"""

from __future__ import annotations

from .errors import (
    DegenerateSpec,
    FrobeniusInvariantViolated,
    NonUnitLinearSolve,
)
from .fields import LocalField, Scalar
from .series import EXACT_Z, LaurentSeries

GROUP_LAW_DEGREE = 10


def frobenius_polynomial(field, kind, coeffs=None):
    """The series [pi](Z) as an exact polynomial, with invariant checks."""
    p, q = field.p, field.q
    if kind == "special":
        ints = [0] * (q + 1)
        cs = [field.zero() for _ in range(q + 1)]
        cs[1] = field.pi()
        cs[q] = field.one()
        return LaurentSeries.from_scalars(field, 0, cs, EXACT_Z).normalize_low()
    if kind == "multiplicative":
        if field.kind != "qp":
            raise DegenerateSpec("multiplicative model needs L = Q_p")
        from math import comb
        cs = [field.scalar(comb(p, k)) for k in range(p + 1)]
        cs[0] = field.zero()
        return LaurentSeries.from_scalars(field, 0, cs, EXACT_Z).normalize_low()
    if kind == "custom":
        if coeffs is None:
            raise DegenerateSpec("custom model needs polynomial coefficients")
        cs = [field.scalar(c) for c in coeffs]
        fr = LaurentSeries.from_scalars(field, 0, cs, EXACT_Z).normalize_low()
        check_frobenius_invariants(field, fr)
        return fr
    raise DegenerateSpec(f"unknown model kind {kind!r}")


def check_frobenius_invariants(field, fr):
    """[pi](Z) = pi*Z mod deg 2 and = Z^q mod pi, coefficientwise."""
    q = field.q
    if fr.low < 1 or not (fr.coefficient(0).is_zero() if fr.low <= 0 else True):
        raise FrobeniusInvariantViolated("[pi](0) != 0")
    c1 = fr.coefficient(1)
    if not (c1 - field.pi()).is_zero():
        raise FrobeniusInvariantViolated("linear coefficient is not pi")
    for k in range(fr.low, fr.high):
        c = fr.coefficient(k)
        if k == q:
            if not (c - field.one()).is_zero_at(1):
                raise FrobeniusInvariantViolated("Z^q coefficient != 1 mod pi")
        else:
            if not c.is_zero_at(1):
                raise FrobeniusInvariantViolated(f"Z^{k} coefficient != 0 mod pi")
    if fr.high - 1 < q:
        raise FrobeniusInvariantViolated("degree below q")


class Bivariate:
    """Polynomial in X, Y over L truncated at a total degree bound."""

    __slots__ = ("field", "degree", "rows")

    def __init__(self, field, degree, rows=None):
        self.field = field
        self.degree = degree
        if rows is None:
            rows = [[field.zero() for _ in range(degree + 1 - i)]
                    for i in range(degree + 1)]
        self.rows = rows  # rows[i][j] = coefficient of X^i Y^j, i + j <= degree

    def clone(self):
        return Bivariate(self.field, self.degree,
                         [list(r) for r in self.rows])

    def get(self, i, j):
        if i < 0 or j < 0 or i + j > self.degree:
            return self.field.zero()
        return self.rows[i][j]

    def set(self, i, j, value):
        self.rows[i][j] = value

    def __add__(self, other):
        out = self.clone()
        for i in range(self.degree + 1):
            for j in range(self.degree + 1 - i):
                out.rows[i][j] = out.rows[i][j] + other.get(i, j)
        return out

    def __sub__(self, other):
        out = self.clone()
        for i in range(self.degree + 1):
            for j in range(self.degree + 1 - i):
                out.rows[i][j] = out.rows[i][j] - other.get(i, j)
        return out

    def __mul__(self, other):
        D = self.degree
        out = Bivariate(self.field, D)
        for i1 in range(D + 1):
            for j1 in range(D + 1 - i1):
                c1 = self.rows[i1][j1]
                if c1.is_zero():
                    continue
                for i2 in range(D + 1 - i1 - j1):
                    for j2 in range(D + 1 - i1 - j1 - i2):
                        c2 = other.get(i2, j2)
                        if c2.is_zero():
                            continue
                        i, j = i1 + i2, j1 + j2
                        out.rows[i][j] = out.rows[i][j] + c1 * c2
        return out

    def scalar_mul(self, s):
        out = self.clone()
        for i in range(self.degree + 1):
            for j in range(self.degree + 1 - i):
                out.rows[i][j] = out.rows[i][j] * s
        return out

    def homogeneous_part(self, n):
        out = Bivariate(self.field, self.degree)
        for i in range(min(n, self.degree) + 1):
            j = n - i
            if j <= self.degree - i:
                out.rows[i][j] = self.rows[i][j]
        return out

    def truncate_total(self, n):
        out = self.clone()
        for i in range(self.degree + 1):
            for j in range(self.degree + 1 - i):
                if i + j > n:
                    out.rows[i][j] = self.field.zero()
        return out

    def is_zero_at(self, prec=None):
        for i in range(self.degree + 1):
            for j in range(self.degree + 1 - i):
                c = self.rows[i][j]
                target = c.prec if prec is None else min(prec, c.prec)
                if not c.is_zero_at(target):
                    return False
        return True

    def substitute_series(self, u, v):
        """Evaluate at X = u(Z), Y = v(Z); both must vanish at 0."""
        D = self.degree
        upow = [LaurentSeries.constant(self.field, 1)]
        vpow = [LaurentSeries.constant(self.field, 1)]
        for _ in range(D):
            upow.append(upow[-1] * u)
            vpow.append(vpow[-1] * v)
        out = LaurentSeries.zero(self.field)
        for i in range(D + 1):
            for j in range(D + 1 - i):
                c = self.rows[i][j]
                if c.is_zero():
                    continue
                out = out + (upow[i] * vpow[j]).scalar_mul(c)
        return out

    def compose_univariate(self, f):
        """f(self) for a univariate polynomial/series f with f(0) = 0."""
        D = self.degree
        out = Bivariate(self.field, D)
        power = None
        for k in range(1, min(f.high, D + 1)):
            power = self if power is None else (power * self).truncate_total(D)
            ck = f.coefficient(k)
            if ck.is_zero():
                continue
            out = out + power.scalar_mul(ck)
        return out

    def swap(self):
        out = Bivariate(self.field, self.degree)
        for i in range(self.degree + 1):
            for j in range(self.degree + 1 - i):
                out.rows[j][i] = self.rows[i][j]
        return out

    def y_slice_series(self, j, zlen=None):
        """Coefficient of Y^j as a series in X |-> Z."""
        cs = [self.get(i, j) for i in range(self.degree + 1 - j)]
        while len(cs) > 1 and cs[-1].is_zero():
            cs.pop()
        return LaurentSeries.from_scalars(self.field, 0, cs,
                                          EXACT_Z).truncate(zlen or EXACT_Z)


def build_group_law(field, frobenius, degree=GROUP_LAW_DEGREE):
    """Solve F([pi]X,[pi]Y) = [pi](F(X,Y)) with F = X + Y mod degree 2.

    Degree-by-degree linear solve; each step divides the defect by
    pi - pi^(n+1), which has valuation exactly 1.
    """
    F = Bivariate(field, degree)
    F.set(1, 0, field.one())
    F.set(0, 1, field.one())
    pi = field.pi()
    piX = Bivariate(field, degree)
    for k in range(frobenius.low, min(frobenius.high, degree + 1)):
        piX.set(k, 0, frobenius.coefficient(k))
    piY = piX.swap()
    for n in range(1, degree):
        lhs = _substitute_bivar(F, piX, piY, degree)
        rhs = F_compose_frobenius(F, frobenius, degree)
        defect = lhs - rhs
        target = n + 1
        div = pi - pi.pow_int(target)
        if div.valuation() != 1:
            raise NonUnitLinearSolve("pi - pi^(n+1) is not valuation 1")
        div_inv = div.invert()
        delta = defect.homogeneous_part(target).scalar_mul(div_inv)
        F = F + delta
        # defect in lower degrees must already vanish
        for m in range(2, target):
            if not defect.homogeneous_part(m).is_zero_at():
                raise NonUnitLinearSolve(
                    f"induction defect at degree {m} did not vanish")
    return F


def _substitute_bivar(F, piX, piY, degree):
    """F(piX, piY) truncated at total degree ``degree``."""
    field = F.field
    out = Bivariate(field, degree)
    # powers of piX and piY
    px = [None] * (degree + 1)
    py = [None] * (degree + 1)
    cur = None
    for i in range(1, degree + 1):
        cur = piX if cur is None else (cur * piX).truncate_total(degree)
        px[i] = cur
    cur = None
    for j in range(1, degree + 1):
        cur = piY if cur is None else (cur * piY).truncate_total(degree)
        py[j] = cur
    for i in range(degree + 1):
        for j in range(degree + 1 - i):
            c = F.rows[i][j]
            if c.is_zero():
                continue
            if i == 0 and j == 0:
                term = Bivariate(field, degree)
                term.set(0, 0, field.one())
            elif i == 0:
                term = py[j]
            elif j == 0:
                term = px[i]
            else:
                term = (px[i] * py[j]).truncate_total(degree)
            out = out + term.scalar_mul(c)
    return out


def F_compose_frobenius(F, frobenius, degree):
    """[pi](F(X,Y)) truncated at total degree ``degree``."""
    return F.compose_univariate(frobenius)


def solve_logarithm(field, frobenius, zlen):
    """log_LT = Z + ... with log([pi](Z)) = pi*log(Z); lands in L[[Z]]."""
    pi = field.pi()
    fr = frobenius.truncate(zlen)
    # powers of [pi](Z), truncated
    powers = [None, fr]
    deg = zlen - 1
    for j in range(2, deg + 1):
        powers.append((powers[-1] * fr).truncate(zlen))
    coeffs = [field.zero(), field.one()]
    for i in range(2, deg + 1):
        acc = field.zero()
        for j in range(1, i):
            cj = coeffs[j]
            if cj.is_zero():
                continue
            pw = powers[j]
            if i < pw.zprec and pw.low <= i < pw.high:
                acc = acc + cj * pw.coefficient(i)
        div = pi - pi.pow_int(i)
        coeffs.append(acc * div.invert())
    return LaurentSeries.from_scalars(field, 0, coeffs, zlen).normalize_low()


def reversion(h, zlen):
    """Compositional inverse of h = c1*Z + ... with c1 a unit, by Newton."""
    field = h.field
    c1 = h.coefficient(1)
    e = LaurentSeries.from_scalars(field, 1, [c1.invert()], 2)
    Z = LaurentSeries.zvar(field)
    cur = 2
    while cur < zlen:
        cur = min(2 * cur, zlen)
        e_raised = LaurentSeries(field, e.low, e.coords, e.precs, EXACT_Z, e.shift)
        val = h.truncate(cur).compose(e_raised).truncate(cur)
        der = h.derivative().truncate(cur - 1).compose(e_raised).truncate(cur - 1)
        defect = (val - Z).normalize_low()
        corr = (defect * der.invert(zlen=cur)).truncate(cur)
        e = (e_raised - corr).truncate(cur)
    return e.truncate(zlen)


class FormalGroupModel:
    """All derived data of one Lubin-Tate model at one working length."""

    def __init__(self, field, kind="special", coeffs=None, zlen=64,
                 group_law_degree=GROUP_LAW_DEGREE):
        self.field = field
        self.kind = kind
        self.zlen = zlen
        self.frobenius = frobenius_polynomial(field, kind, coeffs)
        check_frobenius_invariants(field, self.frobenius)
        self.group_law_degree = group_law_degree
        self._group_law = None
        self._log = None
        self._exp = None
        self._g = None
        self._amult = {}

    def __repr__(self):
        return (f"FormalGroupModel({self.kind}, p={self.field.p}, "
                f"q={self.field.q}, zlen={self.zlen})")

    @property
    def is_multiplicative(self):
        return self.kind == "multiplicative"

    def group_law(self, degree=None):
        degree = degree or self.group_law_degree
        if self._group_law is None or self._group_law.degree < degree:
            self._group_law = build_group_law(self.field, self.frobenius, degree)
        return self._group_law

    def log_series(self, zlen=None):
        zlen = zlen or self.zlen
        if self._log is None or self._log.zprec < zlen:
            self._log = solve_logarithm(self.field, self.frobenius, zlen)
        return self._log.truncate(zlen)

    def g_series(self, zlen=None):
        """g_LT = d(log_LT)/dZ, the inverse of (dF/dY)(Z, 0)."""
        zlen = zlen or self.zlen
        if self._g is None or self._g.zprec < zlen:
            self._g = self.log_series(zlen + 1).derivative()
        return self._g.truncate(zlen)

    def exp_series(self, zlen=None):
        zlen = zlen or self.zlen
        if self._exp is None or self._exp.zprec < zlen:
            self._exp = reversion(self.log_series(zlen), zlen)
        return self._exp.truncate(zlen)

    def a_mult(self, a, zlen=None):
        """[a](Z) = exp_LT(a * log_LT(Z)); a in o_L.

        Satisfies [a] = a*Z mod deg 2, [a][pi] = [pi][a], [ab] = [a] o [b].
        """
        zlen = zlen or self.zlen
        if isinstance(a, int):
            a = self.field.scalar(a)
        an = a.normalized()
        key = (an.coords, an.shift, zlen)
        if key in self._amult:
            return self._amult[key]
        v = a.valuation()
        if v is not None and v < 0:
            raise DegenerateSpec("[a] needs a integral")
        out = self.exp_series(zlen).compose(
            self.log_series(zlen).scalar_mul(a)).truncate(zlen)
        self._amult[key] = out
        return out

    def add_series(self, u, v, degree=None):
        """u +_LT v through the group law (total-degree-limited)."""
        return self.group_law(degree).substitute_series(u, v)

    def translate_by_point(self, y, other_ring, zlen):
        """The series y +_LT Z over a ring containing the torsion point y.

        Solved by Newton from [pi](t(Z)) = [pi](Z), t(0) = y; multiplicative
        models use the exact closed form y + (1+y)Z.
        """
        raise NotImplementedError("lives on TorsionRingOracle")


def dlog_identities_hold(model, a, zlen=24, pi_prec=None):
    """Both invariant-differential identities for one a (test substrate).

    log_LT([a](Z)) = a*log_LT(Z)  and  a*g_LT(Z) = g_LT([a](Z)) * [a]'(Z).
    """
    fld = model.field
    if isinstance(a, int):
        a = fld.scalar(a)
    la = model.log_series(zlen)
    am = model.a_mult(a, zlen)
    lhs1 = la.compose(am)
    rhs1 = la.scalar_mul(a)
    ok1 = lhs1.eq_at(rhs1, pi_prec=pi_prec)
    g = model.g_series(zlen)
    lhs2 = g.scalar_mul(a)
    rhs2 = g.compose(am) * am.derivative()
    ok2 = lhs2.eq_at(rhs2, pi_prec=pi_prec)
    return ok1 and ok2
