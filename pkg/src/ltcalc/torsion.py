"""Torsion-point oracle: the trace as a literal sum over [pi]-torsion.

The nonzero pi-torsion points live in the extension ring o_L[y]/(P0(y)) with
P0(y) = [pi](y)/y of degree q-1.  Series over that ring are kept as vectors of
base-field series on the power basis of y.  The sum

    tr(f)(Z) = sum_{y in ker[pi]} f(y +_LT Z)

is computed literally: the translates y +_LT Z come from a closed form on the
multiplicative model and from a Newton solve of [pi](t) = [pi](Z), t(0) = y,
otherwise.  Results descend to the base ring; a nonzero y-component raises
NotDescended.  This is the independent counterpart of the companion-matrix
pipeline in operators.py.
"""

from __future__ import annotations

from itertools import permutations

from .errors import DegenerateSpec, NotDescended, NonUnitInverse
from .fields import Scalar
from .series import EXACT_Z, LaurentSeries


class ExtensionRing:
    """o_L[y]/(P0) with P0 monic; elements are coordinate vectors over o_L."""

    def __init__(self, field, modulus):
        self.field = field
        self.modulus = list(modulus)  # Scalars, constant first, monic
        if not (self.modulus[-1] - field.one()).is_zero():
            raise DegenerateSpec("extension modulus must be monic")
        self.m = len(modulus) - 1
        # y^k for k in [m, 2m-2] on the basis, vectors of Scalars
        self._ypow = []
        if self.m > 1:
            top = [-c for c in self.modulus[:-1]]
            self._ypow.append(top)
            for _ in range(self.m - 2):
                prev = self._ypow[-1]
                nxt = [field.zero()] + prev[:-1]
                if not prev[-1].is_zero():
                    nxt = [a + prev[-1] * b for a, b in zip(nxt, top)]
                self._ypow.append(nxt)

    def zero_series(self, zprec=EXACT_Z):
        return ExtSeries(self, tuple(LaurentSeries.zero(self.field, zprec)
                                     for _ in range(self.m)))

    def from_base(self, f):
        comps = [f] + [LaurentSeries.zero(self.field, f.zprec)
                       for _ in range(self.m - 1)]
        return ExtSeries(self, tuple(comps))

    def y_element(self):
        """The class of y as a constant extension series."""
        comps = [LaurentSeries.zero(self.field) for _ in range(self.m)]
        comps[1 if self.m > 1 else 0] = LaurentSeries.constant(self.field, 1)
        if self.m == 1:
            comps[0] = LaurentSeries.constant(self.field, -self.modulus[0])
        return ExtSeries(self, tuple(comps))

    def constant(self, vec):
        """Constant extension series from a coordinate vector of Scalars."""
        comps = []
        for c in vec:
            comps.append(LaurentSeries.constant(self.field, c))
        while len(comps) < self.m:
            comps.append(LaurentSeries.zero(self.field))
        return ExtSeries(self, tuple(comps))

    def scalar_inverse(self, vec):
        """Inverse of a nonzero constant element, by Cramer on the
        multiplication matrix (m <= 8: permutation expansion)."""
        f = self.field
        m = self.m
        if m > 8:
            raise DegenerateSpec("extension degree too large for the oracle")
        cols = [list(vec)]
        for _ in range(m - 1):
            prev = cols[-1]
            nxt = [f.zero()] + prev[:-1]
            if not prev[-1].is_zero():
                top = [-c for c in self.modulus[:-1]]
                nxt = [a + prev[-1] * b for a, b in zip(nxt, top)]
            cols.append(nxt)
        # solve M x = e0 by Cramer
        det = _scalar_det(cols, f)
        if det.is_zero():
            raise NonUnitInverse("extension element is 0 at precision")
        out = []
        for i in range(m):
            repl = [list(col) for col in cols]
            for r in range(m):
                repl[i][r] = f.one() if r == 0 else f.zero()
            out.append(_scalar_det(repl, f) / det)
        return out


def _scalar_det(cols, field):
    m = len(cols)
    total = field.zero()
    for perm in permutations(range(m)):
        sign = _perm_sign(perm)
        term = field.one()
        for c in range(m):
            term = term * cols[c][perm[c]]
        total = total + (term if sign > 0 else -term)
    return total


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        clen = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            clen += 1
        if clen % 2 == 0:
            sign = -sign
    return sign


class ExtSeries:
    """Laurent series with coefficients in an ExtensionRing."""

    __slots__ = ("ring", "comps")

    def __init__(self, ring, comps):
        self.ring = ring
        self.comps = tuple(comps)

    @property
    def zprec(self):
        return min(c.zprec for c in self.comps)

    def __add__(self, other):
        if isinstance(other, (int, Scalar)):
            other = self.ring.from_base(LaurentSeries.constant(self.ring.field, other))
        return ExtSeries(self.ring, tuple(a + b for a, b in
                                          zip(self.comps, other.comps)))

    def __sub__(self, other):
        if isinstance(other, (int, Scalar)):
            other = self.ring.from_base(LaurentSeries.constant(self.ring.field, other))
        return ExtSeries(self.ring, tuple(a - b for a, b in
                                          zip(self.comps, other.comps)))

    def __neg__(self):
        return ExtSeries(self.ring, tuple(-a for a in self.comps))

    def __mul__(self, other):
        ring = self.ring
        m = ring.m
        f = ring.field
        if isinstance(other, LaurentSeries):
            return ExtSeries(ring, tuple(c * other for c in self.comps))
        raw = [None] * (2 * m - 1)
        for i in range(m):
            for j in range(m):
                prod = self.comps[i] * other.comps[j]
                t = i + j
                raw[t] = prod if raw[t] is None else raw[t] + prod
        out = list(raw[:m])
        for t in range(m, 2 * m - 1):
            if raw[t] is None:
                continue
            red = ring._ypow[t - m]
            for k in range(m):
                if not red[k].is_zero():
                    out[k] = out[k] + raw[t].scalar_mul(red[k])
        return ExtSeries(ring, tuple(out))

    def scalar_mul(self, s):
        return ExtSeries(self.ring, tuple(c.scalar_mul(s) for c in self.comps))

    def truncate(self, zprec):
        return ExtSeries(self.ring, tuple(c.truncate(zprec) for c in self.comps))

    def raise_exact(self):
        return ExtSeries(self.ring, tuple(
            LaurentSeries(c.field, c.low, c.coords, c.precs, EXACT_Z, c.shift)
            for c in self.comps))

    def constant_vector(self):
        return [c.value_at_zero() for c in self.comps]

    def is_zero(self, pi_prec=None):
        return all(c.is_zero(pi_prec) for c in self.comps)

    def pow_int(self, k):
        out = self.ring.from_base(LaurentSeries.constant(self.ring.field, 1))
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def invert(self, zlen):
        """Newton inversion; the lowest coefficient vector must be invertible."""
        ring = self.ring
        f = ring.field
        low = min((c.low + k for c in self.comps for k in range(c.nstored)
                   if any(c.coords[j][k] for j in range(f.d))), default=0)
        lead = []
        for c in self.comps:
            lead.append(c.coefficient(low) if c.low <= low < max(c.high, c.zprec)
                        else f.zero())
        lead_inv = ring.scalar_inverse(lead)
        shifted = ExtSeries(ring, tuple(c.z_shift(-low) for c in self.comps))
        u = (shifted * ring.constant(lead_inv)).truncate(zlen)
        inv = ring.from_base(LaurentSeries.constant(f, 1))
        cur = 1
        while cur < zlen:
            cur = min(2 * cur, zlen)
            inv_r = inv.raise_exact()
            w = (u.truncate(cur) * inv_r).truncate(cur)
            two = self.ring.from_base(LaurentSeries.constant(f, 2))
            inv = (inv_r * (two - w)).truncate(cur)
        out = (inv * ring.constant(lead_inv))
        return ExtSeries(ring, tuple(c.z_shift(-low) for c in out.comps))

    def compose_base(self, f, work):
        """f(self) for a base Laurent series f (Horner; poles via invert)."""
        ring = self.ring
        fld = ring.field
        pos = ring.zero_series()
        top = f.high - 1
        gt = self.truncate(work)
        if top >= 0:
            start = max(f.low, 0)
            for i in range(top, start - 1, -1):
                pos = (pos * gt).truncate(work)
                pos = pos + f.coefficient(i)
            if start > 0:
                pos = (pos * gt.pow_int(start)).truncate(work)
        neg = ring.zero_series()
        if f.low < 0:
            ginv = gt.invert(work)
            for i in range(f.low, 0):
                neg = (neg * ginv).truncate(work) + f.coefficient(i)
            neg = (neg * ginv).truncate(work)
        return pos + neg


class TorsionRingOracle:
    """The q-1 nonzero torsion points with their translation series."""

    def __init__(self, ctx, zlen=None):
        self.ctx = ctx
        self.field = ctx.field
        self.model = ctx.model
        self.zlen = zlen or ctx.zlen
        field, model = self.field, self.model
        q = field.q
        fr = model.frobenius
        if fr.high - 1 != q:
            raise DegenerateSpec("torsion oracle needs a degree-q Frobenius")
        # P0(y) = [pi](y)/y
        mod = [fr.coefficient(k + 1) for k in range(q)]
        self.ring = ExtensionRing(field, mod)
        self.points = self._torsion_points()
        self._translates = None

    def _torsion_points(self):
        field, model = self.field, self.model
        ring = self.ring
        q = field.q
        y = ring.y_element()
        pts = []
        if model.kind == "multiplicative":
            one = ring.from_base(LaurentSeries.constant(field, 1))
            base = y + 1
            cur = one
            for _ in range(field.p - 1):
                cur = cur * base
                pts.append(cur - 1)
        else:
            gen = field.residue_multiplicative_generator()
            omega = field.teichmuller(gen, field.store_prec - 4)
            cur = y
            for _ in range(q - 1):
                pts.append(cur)
                cur = cur.scalar_mul(omega)
        return pts

    def check_points(self, pi_prec=None):
        """[pi](t) = 0 for every listed point; points pairwise distinct."""
        fr = self.model.frobenius
        for t in self.points:
            img = t.compose_base(fr, 4)
            if not img.is_zero(pi_prec):
                return False
        for i in range(len(self.points)):
            for j in range(i + 1, len(self.points)):
                d = self.points[i] - self.points[j]
                if d.is_zero(pi_prec):
                    return False
        return True

    def translates(self):
        """The series y +_LT Z for every nonzero torsion point y."""
        if self._translates is None:
            self._translates = [self._translate(pt) for pt in self.points]
        return self._translates

    def _translate(self, pt):
        field, model = self.field, self.model
        ring = self.ring
        zlen = self.zlen
        Zext = ring.from_base(LaurentSeries.zvar(field))
        if model.kind == "multiplicative":
            # y +_LT Z = y + (1+y) Z exactly
            return pt + (pt + 1) * LaurentSeries.zvar(field)
        # Newton on [pi](t) = [pi](Z) with t = y + Z mod Z^2
        fr = model.frobenius
        frZ = ring.from_base(fr)
        t = (pt + Zext).truncate(2)
        cur = 2
        while True:
            t_r = t.raise_exact()
            val = (t_r.compose_base(fr, cur) - frZ.truncate(cur)).truncate(cur)
            der = t_r.compose_base(fr.derivative(), cur)
            corr = (val * der.invert(cur)).truncate(cur)
            t = (t_r - corr).truncate(cur)
            if cur >= zlen:
                break
            cur = min(2 * cur, zlen)
        return t

    def direct_trace(self, f, pi_prec=None):
        """tr(f) = f + sum over translates of f, descended to the base ring."""
        work = min(f.zprec, self.zlen) if f.zprec < EXACT_Z else self.zlen
        total = None
        for t in self.translates():
            term = t.truncate(work).compose_base(f, work)
            total = term if total is None else total + term
        for k in range(1, self.ring.m):
            comp = total.comps[k]
            if not comp.is_zero(pi_prec):
                raise NotDescended("trace failed to land in the base ring")
        return total.comps[0] + f.truncate(work)

    def direct_psi(self, f, pi_prec=None):
        """psi via the definition: pi^{-1} phi^{-1}(tr f)."""
        tr = self.direct_trace(f, pi_prec)
        return self.ctx.phi_inverse(tr).scalar_mul(self.field.pi_power(-1))

    def phi_pairing(self, f, u, pi_prec=None):
        """Boundary pairing <phi(f), u> = res_B(phi(f) u dlog_LT).

        A pole of f makes phi(f) singular at every torsion point, where the
        at-0 Laurent expansion of phi(f) stops representing the function; the
        residues there are recovered locally.  In the coordinate at y the
        phi-factor is f([pi](y +_LT Z')) = f([pi](Z')) again, so

            res_y = res_0( phi(f) * (u g_LT)(t_y) * t_y' ).
        """
        ctx = self.ctx
        field = self.field
        work = self.zlen
        A = ctx.phi(f)
        glt = self.model.g_series(work)
        base = (A * u * glt).residue()
        if f.low >= 0 or (f.z_order() is not None and f.z_order() >= 0):
            return base
        rest = (u * glt).truncate(work)
        acc = None
        for t in self.translates():
            tt = t.truncate(work)
            der = ExtSeries(self.ring, tuple(c.derivative() for c in tt.comps))
            E = tt.compose_base(rest, work) * der
            prod = E * A
            res = [c.residue() for c in prod.comps]
            acc = res if acc is None else [a + b for a, b in zip(acc, res)]
        for k in range(1, self.ring.m):
            ok = acc[k].is_zero() if pi_prec is None else acc[k].is_zero_at(pi_prec)
            if not ok:
                raise NotDescended("torsion residue failed to descend")
        return base + acc[0]

    def torsion_product_unit(self, pi_prec=None):
        """The unit  u = prod_{y != 0}(y +_LT Z) * Z / [pi](Z).

        The abstract theory pins this product down only up to a unit; the
        oracle measures it.
        """
        prod = None
        for t in self.translates():
            prod = t if prod is None else (prod * t).truncate(self.zlen)
        for k in range(1, self.ring.m):
            if not prod.comps[k].is_zero(pi_prec):
                raise NotDescended("torsion product failed to descend")
        base = prod.comps[0]
        fr = self.model.frobenius.truncate(self.zlen)
        return (base * LaurentSeries.zvar(self.field)) * fr.invert()
