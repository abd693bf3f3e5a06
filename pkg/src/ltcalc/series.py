"""Truncated Laurent series over a local field.

A series is a finite principal part plus a truncated tail: coefficients for
exponents ``low .. low+n-1``, known modulo O(Z^zprec).  Tails of exact
polynomials carry ``zprec = EXACT_Z`` (a large sentinel); their unstored
coefficients are exactly zero.

Coefficients share one pi-power denominator (``shift``); each carries its own
absolute pi-adic precision.  Joint precision rules:

  * multiplication truncates at min(N_f + low_g, N_g + low_f);
  * composition by g with v_Z(g) = v truncates at
    min(N_f * v, N_g + (low_f - 1) * v);
  * integration divides by exponents and pays their pi-valuation.

Inner loops run on packed integers (one coefficient per fixed-width slot of a
single big int) so that a series product is a handful of machine big-int
multiplications.
"""

from __future__ import annotations

from .errors import (
    DegenerateSpec,
    FieldMismatch,
    IllegalCompositionPoint,
    NonUnitLeading,
    PrincipalPartUnknown,
    PrincipalPartAtZero,
    ResidueObstruction,
)
from .fields import LocalField, Scalar

EXACT_Z = 10 ** 9


def _conv(a, b, nout, mod):
    """Convolution of nonneg int lists modulo ``mod``, truncated to nout terms."""
    na, nb = len(a), len(b)
    if na == 0 or nb == 0 or nout <= 0:
        return [0] * max(nout, 0)
    slot = 2 * mod.bit_length() + min(na, nb).bit_length() + 2
    xa = 0
    for i in range(na - 1, -1, -1):
        xa = (xa << slot) | (a[i] % mod)
    xb = 0
    for i in range(nb - 1, -1, -1):
        xb = (xb << slot) | (b[i] % mod)
    prod = xa * xb
    mask = (1 << slot) - 1
    out = []
    for k in range(nout):
        out.append(((prod >> (slot * k)) & mask) % mod)
    return out


class LaurentSeries:
    __slots__ = ("field", "low", "zprec", "shift", "coords", "precs", "_vals")

    def __init__(self, field, low, coords, precs, zprec, shift=0):
        self.field = field
        self.low = low
        self.coords = coords          # list of d int-lists, equal lengths
        self.precs = precs            # per-coefficient absolute pi precision
        self.zprec = zprec
        self.shift = shift
        self._vals = None

    # ------------------------------------------------------------------
    # construction
    # ------------------------------------------------------------------

    @staticmethod
    def from_scalars(field, low, scalars, zprec=EXACT_Z):
        shift = max([s.shift for s in scalars], default=0)
        n = len(scalars)
        coords = [[0] * n for _ in range(field.d)]
        precs = []
        maxprec = max([s.prec for s in scalars], default=field.store_prec)
        mod = field.p ** field.modexp_for(maxprec, shift)
        for k, s in enumerate(scalars):
            if s.field != field:
                raise FieldMismatch("coefficient over the wrong field")
            c = list(s.coords)
            for _ in range(shift - s.shift):
                c = field.coord_pi_mult(c, mod)
            for j in range(field.d):
                coords[j][k] = c[j] % mod
            precs.append(s.prec)
        return LaurentSeries(field, low, coords, precs, zprec, shift)

    @staticmethod
    def constant(field, value, zprec=EXACT_Z):
        s = field.scalar(value) if not isinstance(value, Scalar) else value
        return LaurentSeries.from_scalars(field, 0, [s], zprec)

    @staticmethod
    def zero(field, zprec=EXACT_Z):
        return LaurentSeries(field, 0, [[] for _ in range(field.d)], [], zprec, 0)

    @staticmethod
    def zvar(field, exponent=1):
        s = field.one()
        out = LaurentSeries.from_scalars(field, exponent, [s], EXACT_Z)
        return out

    @staticmethod
    def from_int_coeffs(field, low, ints, zprec=EXACT_Z, prec=None):
        sc = [field.scalar(c, prec) for c in ints]
        return LaurentSeries.from_scalars(field, low, sc, zprec)

    # ------------------------------------------------------------------
    # inspection
    # ------------------------------------------------------------------

    @property
    def nstored(self):
        return len(self.precs)

    @property
    def high(self):
        """One past the last stored exponent."""
        return self.low + self.nstored

    def _mod(self):
        f = self.field
        mx = max(self.precs, default=f.store_prec)
        return f.p ** f.modexp_for(max(mx, 0), self.shift)

    def coefficient(self, exponent):
        """Coefficient of Z^exponent as a Scalar."""
        k = exponent - self.low
        f = self.field
        if k < 0 or k >= self.nstored:
            if exponent < self.zprec:
                return f.zero()
            raise PrincipalPartUnknown(
                f"coefficient of Z^{exponent} beyond O(Z^{self.zprec})")
        coords = [self.coords[j][k] for j in range(f.d)]
        return Scalar(f, coords, self.shift, self.precs[k]).normalized()

    def coefficients(self):
        return [(self.low + k, self.coefficient(self.low + k))
                for k in range(self.nstored)]

    def valuations(self):
        """Per-coefficient pi-valuation lower bounds (prec when undetermined)."""
        if self._vals is not None:
            return self._vals
        f = self.field
        mod = self._mod()
        out = []
        for k in range(self.nstored):
            vec = [self.coords[j][k] for j in range(f.d)]
            cap = self.precs[k] + self.shift
            v = f.coord_valuation(vec, cap, mod) if cap > 0 else None
            out.append(self.precs[k] if v is None else v - self.shift)
        self._vals = out
        return out

    def min_prec(self):
        return min(self.precs, default=self.field.store_prec)

    def z_valuation(self):
        """Order of vanishing at Z = 0, or None if 0 at joint precision."""
        vals = self.valuations()
        for k in range(self.nstored):
            if vals[k] < self.precs[k]:
                return self.low + k
        return None

    def is_zero(self, pi_prec=None):
        f = self.field
        for k in range(self.nstored):
            coeff = self.coefficient(self.low + k)
            target = coeff.prec if pi_prec is None else min(pi_prec, coeff.prec)
            if not coeff.is_zero_at(target):
                return False
        return True

    def __repr__(self):
        return self.to_text(max_terms=8)

    # ------------------------------------------------------------------
    # bookkeeping
    # ------------------------------------------------------------------

    def _aligned_to_shift(self, shift):
        if shift == self.shift:
            return self
        if shift < self.shift:
            raise DegenerateSpec("cannot lower a shift without normalizing")
        f = self.field
        mx = max(self.precs, default=0)
        mod = f.p ** f.modexp_for(max(mx, 0), shift)
        k = shift - self.shift
        if f.pi_is_p:
            mult = f.p ** k
            coords = [[c * mult % mod for c in col] for col in self.coords]
        else:
            coords = [list(col) for col in self.coords]
            n = self.nstored
            for _ in range(k):
                cols = []
                for t in range(n):
                    vec = f.coord_pi_mult([coords[j][t] for j in range(f.d)], mod)
                    cols.append(vec)
                coords = [[cols[t][j] for t in range(n)] for j in range(f.d)]
        return LaurentSeries(f, self.low, coords, list(self.precs), self.zprec, shift)

    def normalized_shift(self):
        """Cancel pi factors common to every stored coefficient (bulk strip)."""
        if self.shift == 0 or self.nstored == 0:
            return self
        f = self.field
        mod = self._mod()
        n = self.nstored
        strip = self.shift
        for k in range(n):
            vec = [self.coords[j][k] for j in range(f.d)]
            v = f.coord_valuation(vec, strip, mod)
            if v is not None and v < strip:
                strip = v
            if strip == 0:
                return self
        if f.pi_is_p:
            div = f.p ** strip
            coords = [[(c % mod) // div for c in col] for col in self.coords]
        else:
            coords = [list(col) for col in self.coords]
            for _ in range(strip):
                for t in range(n):
                    vec = f.coord_pi_div([coords[j][t] for j in range(f.d)], mod)
                    for j in range(f.d):
                        coords[j][t] = vec[j]
        return LaurentSeries(f, self.low, coords, list(self.precs), self.zprec,
                             self.shift - strip)

    def normalize_low(self):
        """Drop leading coefficients that are identically zero.

        Never changes the represented value.  Callers opt in explicitly:
        operator pipelines keep stored zeros so precision bookkeeping stays
        deterministic.
        """
        k = 0
        while k < self.nstored and self.coefficient(self.low + k).is_zero():
            if any(self.coords[j][k] for j in range(self.field.d)):
                break  # zero at precision but not identically: keep
            k += 1
        if k == 0:
            return self
        return LaurentSeries(self.field, self.low + k,
                             [col[k:] for col in self.coords],
                             self.precs[k:], self.zprec, self.shift)

    def truncate(self, zprec):
        if zprec >= self.zprec and zprec - self.low >= self.nstored:
            return self
        n = max(0, min(self.nstored, zprec - self.low))
        return LaurentSeries(self.field, self.low,
                             [col[:n] for col in self.coords],
                             self.precs[:n], min(zprec, self.zprec), self.shift)

    def cap_coeff_prec(self, cap_fn):
        """Cap coefficient precisions by exponent -> max allowed precision."""
        precs = [min(p, cap_fn(self.low + k)) for k, p in enumerate(self.precs)]
        return LaurentSeries(self.field, self.low, [list(c) for c in self.coords],
                             precs, self.zprec, self.shift)

    def pad_to(self, zprec):
        """Materialize exact-zero tail coefficients up to zprec."""
        n_new = zprec - self.low
        if n_new <= self.nstored:
            return self
        if self.zprec < zprec:
            raise DegenerateSpec("cannot pad beyond O(Z^zprec)")
        add = n_new - self.nstored
        coords = [list(col) + [0] * add for col in self.coords]
        precs = list(self.precs) + [self.field.store_prec] * add
        return LaurentSeries(self.field, self.low, coords, precs, self.zprec, self.shift)

    # ------------------------------------------------------------------
    # ring operations
    # ------------------------------------------------------------------

    def _check_field(self, other):
        if self.field != other.field:
            raise FieldMismatch("series over different fields")

    def __add__(self, other):
        if isinstance(other, (int, Scalar)):
            other = LaurentSeries.constant(self.field, other)
        self._check_field(other)
        a, b = self, other
        shift = max(a.shift, b.shift)
        a = a._aligned_to_shift(shift)
        b = b._aligned_to_shift(shift)
        zprec = min(a.zprec, b.zprec)
        if a.nstored == 0 and b.nstored == 0:
            return LaurentSeries.zero(self.field, zprec)
        lows = [x.low for x in (a, b) if x.nstored > 0]
        low = min(lows) if lows else 0
        top = max([x.high for x in (a, b) if x.nstored > 0] + [low])
        top = min(top, zprec) if zprec < EXACT_Z else top
        n = max(0, top - low)
        f = self.field
        mod = max(a._mod(), b._mod())
        coords = [[0] * n for _ in range(f.d)]
        precs = [f.store_prec] * n
        for src in (a, b):
            for k in range(src.nstored):
                idx = src.low + k - low
                if 0 <= idx < n:
                    for j in range(f.d):
                        coords[j][idx] = (coords[j][idx] + src.coords[j][k]) % mod
                    precs[idx] = min(precs[idx], src.precs[k])
        # beyond a series' stored range but below its zprec the value is exact 0
        return LaurentSeries(f, low, coords, precs, zprec, shift)

    __radd__ = __add__

    def __neg__(self):
        mod = self._mod()
        coords = [[(-c) % mod for c in col] for col in self.coords]
        return LaurentSeries(self.field, self.low, coords, list(self.precs),
                             self.zprec, self.shift)

    def __sub__(self, other):
        if isinstance(other, (int, Scalar)):
            other = LaurentSeries.constant(self.field, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scalar_mul(self, s):
        if isinstance(s, int):
            s = self.field.scalar(s)
        f = self.field
        if s.field != f:
            raise FieldMismatch("scalar over the wrong field")
        n = self.nstored
        if n == 0:
            return self
        vs = s.valuation_lower_bound()
        vals = self.valuations()
        shift = self.shift + s.shift
        maxprec = max(min(self.precs[k] + vs, s.prec + vals[k]) for k in range(n))
        mod = f.p ** f.modexp_for(max(maxprec, 0), shift)
        precs = [min(self.precs[k] + vs, s.prec + vals[k]) for k in range(n)]
        if f.d == 1:
            c0 = s.coords[0] % mod
            coords = [[c0 * c % mod for c in self.coords[0]]]
        else:
            coords = [[0] * n for _ in range(f.d)]
            svec = [c % mod for c in s.coords]
            for k in range(n):
                vec = f.coord_mul([self.coords[j][k] % mod for j in range(f.d)],
                                  svec, mod)
                for j in range(f.d):
                    coords[j][k] = vec[j]
        return LaurentSeries(f, self.low, coords, precs, self.zprec,
                             shift).normalized_shift()

    def __mul__(self, other):
        if isinstance(other, (int, Scalar)):
            return self.scalar_mul(other)
        self._check_field(other)
        f = self.field
        a, b = self, other
        na, nb = a.nstored, b.nstored
        zprec = min(
            (a.zprec + b.low) if a.zprec < EXACT_Z else EXACT_Z,
            (b.zprec + a.low) if b.zprec < EXACT_Z else EXACT_Z,
            EXACT_Z,
        )
        if na == 0 or nb == 0:
            return LaurentSeries.zero(f, zprec if zprec < EXACT_Z else EXACT_Z)
        low = a.low + b.low
        nout = na + nb - 1
        if zprec < EXACT_Z:
            nout = min(nout, zprec - low)
        if nout <= 0:
            return LaurentSeries.zero(f, zprec)
        shift = a.shift + b.shift
        # value-precision bookkeeping
        pa, pb = a.precs, b.precs
        uniform = (a.shift == 0 and b.shift == 0
                   and min(pa) == max(pa) and min(pb) == max(pb))
        if uniform:
            p_out = min(pa[0], pb[0])
            precs = [p_out] * nout
            maxprec = p_out
        else:
            va, vb = a.valuations(), b.valuations()
            precs = [10 ** 9] * nout
            for i in range(na):
                pai, vai = pa[i], va[i]
                for j in range(nb):
                    k = i + j
                    if k >= nout:
                        break
                    t = pai + vb[j]
                    u = pb[j] + vai
                    if u < t:
                        t = u
                    if t < precs[k]:
                        precs[k] = t
            maxprec = max(precs)
        mod = f.p ** f.modexp_for(max(maxprec, 0), shift)
        d = f.d
        if d == 1:
            out = [_conv(a.coords[0], b.coords[0], nout, mod)]
        else:
            raw = [None] * (2 * d - 1)
            for i in range(d):
                for j in range(d):
                    c = _conv(a.coords[i], b.coords[j], nout, mod)
                    t = i + j
                    if raw[t] is None:
                        raw[t] = c
                    else:
                        raw[t] = [(x + y) % mod for x, y in zip(raw[t], c)]
            out = [raw[m] or [0] * nout for m in range(d)]
            for t in range(d, 2 * d - 1):
                if raw[t] is None:
                    continue
                red = f._xpow[t - d]
                for m in range(d):
                    if red[m]:
                        r = red[m]
                        col = raw[t]
                        om = out[m]
                        for k in range(nout):
                            om[k] = (om[k] + r * col[k]) % mod
        res = LaurentSeries(f, low, out, precs, zprec, shift)
        return res.normalized_shift() if shift else res

    __rmul__ = __mul__

    def z_shift(self, k):
        return LaurentSeries(self.field, self.low + k,
                             [list(c) for c in self.coords], list(self.precs),
                             self.zprec + k if self.zprec < EXACT_Z else EXACT_Z,
                             self.shift)

    def pow_int(self, k):
        if k < 0:
            return self.invert().pow_int(-k)
        result = LaurentSeries.constant(self.field, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # ------------------------------------------------------------------
    # calculus
    # ------------------------------------------------------------------

    def derivative(self):
        f = self.field
        out_coeffs = []
        for k in range(self.nstored):
            i = self.low + k
            if i == 0:
                out_coeffs.append(f.zero())
            else:
                out_coeffs.append(self.coefficient(i) * f.scalar(i))
        zprec = self.zprec - 1 if self.zprec < EXACT_Z else EXACT_Z
        out = LaurentSeries.from_scalars(f, self.low - 1, out_coeffs, zprec)
        return out.normalize_low()

    def integrate(self):
        """Antiderivative with zero constant term; requires no Z^-1 coefficient."""
        f = self.field
        if self.low <= -1 < self.high:
            c = self.coefficient(-1)
            if not c.is_zero():
                raise ResidueObstruction("integrating a series with a Z^-1 term")
        out_coeffs = []
        for k in range(self.nstored):
            i = self.low + k
            if i == -1:
                out_coeffs.append(f.zero())
                continue
            out_coeffs.append(self.coefficient(i) / f.scalar(i + 1))
        zprec = self.zprec + 1 if self.zprec < EXACT_Z else EXACT_Z
        return LaurentSeries.from_scalars(f, self.low + 1, out_coeffs, zprec)

    # ------------------------------------------------------------------
    # inversion and composition
    # ------------------------------------------------------------------

    def invert(self, zlen=None):
        """Two-sided inverse at joint precision.

        The lowest stored coefficient must be nonzero at its precision (its
        valuation may be positive; the inverse then carries denominators).
        """
        f = self.field
        s = self
        if s.nstored == 0:
            raise NonUnitLeading("inverting the zero series")
        lead = s.coefficient(s.low)
        if lead.is_zero():
            s = s.normalize_low()
            lead = s.coefficient(s.low) if s.nstored else None
            if lead is None or lead.is_zero():
                raise NonUnitLeading("leading coefficient is 0 at precision")
        ell = s.low
        # exact monomials invert exactly
        if s.zprec >= EXACT_Z and s.nstored >= 1 and all(
                not any(s.coords[j][k] for j in range(f.d))
                for k in range(1, s.nstored)):
            return LaurentSeries.from_scalars(f, -ell, [lead.invert()], EXACT_Z)
        tail_len = (s.zprec - ell) if s.zprec < EXACT_Z else (
            zlen if zlen is not None else max(s.nstored, 1))
        if zlen is not None:
            tail_len = min(tail_len, zlen) if s.zprec < EXACT_Z else zlen
        # u := s / (lead * Z^ell) = 1 + h, invert by Newton doubling.  Each
        # pass doubles the correct prefix; the zprec claim is re-raised by
        # hand because the generic product rule cannot see the quadratic
        # convergence.
        lead_inv = lead.invert()
        u = s.z_shift(-ell).scalar_mul(lead_inv).truncate(tail_len)
        inv = LaurentSeries.constant(f, 1)
        cur = 1
        while cur < tail_len:
            cur = min(2 * cur, tail_len)
            inv_raised = LaurentSeries(f, inv.low, inv.coords, inv.precs,
                                       EXACT_Z, inv.shift)
            w = (u.truncate(cur) * inv_raised).truncate(cur)
            inv = (inv_raised * (2 - w)).truncate(cur)
        inv = inv.truncate(tail_len)
        out = inv.scalar_mul(lead_inv).z_shift(-ell)
        return out

    def z_order(self):
        """Lowest exponent with a coefficient that is not identically zero."""
        for k in range(self.nstored):
            if any(self.coords[j][k] for j in range(self.field.d)):
                return self.low + k
        return None

    def compose(self, g, zlen=None):
        """f(g(Z)) for g with g(0) = 0.

        Negative exponents of f additionally require g's lowest coefficient to
        be invertible, so that g^(-1) exists as a Laurent series.  When f is an
        exact Laurent polynomial with a pole the expansion is infinite;
        ``zlen`` picks the output length (a shape-derived default otherwise).
        """
        self._check_field(g)
        f = self.field
        gord = g.z_order()
        if gord is None:
            if self.low < 0:
                raise IllegalCompositionPoint("g = 0 with a principal part")
            gord = g.zprec if g.zprec < EXACT_Z else 1
        if gord < 1:
            raise IllegalCompositionPoint("composition point g(0) != 0")
        v = gord
        ng = g.zprec
        nf = self.zprec
        z1 = nf * v if nf < EXACT_Z else EXACT_Z
        is_constant = self.low == 0 and self.nstored <= 1
        if ng < EXACT_Z and not is_constant:
            z2 = ng + (min(self.low, 1) - 1) * v
        else:
            z2 = EXACT_Z
        zprec = min(z1, z2)
        if zprec >= EXACT_Z and self.low < 0:
            zprec = zlen if zlen is not None else v * (self.high + 2 * -self.low) + 2
        work = zprec if zprec < EXACT_Z else max(v * max(self.high - 1, 1) + 1, 1)
        gt = g.truncate(work) if work < g.zprec else g
        # nonnegative part: Horner over the stored range, then scale by g^start
        pos = LaurentSeries.zero(f)
        top = self.high - 1
        if top >= 0:
            start = max(self.low, 0)
            for i in range(top, start - 1, -1):
                pos = (pos * gt).truncate(work)
                pos = pos + self.coefficient(i)
            if start > 0:
                pos = (pos * gt.pow_int(start)).truncate(work)
        neg = LaurentSeries.zero(f)
        if self.low < 0:
            ginv = gt.invert(zlen=work + (-self.low + 2) * v)
            for i in range(self.low, 0):
                neg = neg * ginv + self.coefficient(i)
            neg = neg * ginv
        out = pos + neg
        return out.truncate(zprec)

    # ------------------------------------------------------------------
    # residue, evaluation, comparisons
    # ------------------------------------------------------------------

    def residue(self):
        """Coefficient of Z^-1."""
        if self.zprec <= -1:
            raise PrincipalPartUnknown("series unknown at Z^-1")
        if self.low > -1:
            return self.field.zero()
        return self.coefficient(-1)

    def value_at_zero(self):
        vals = self.valuations()
        for k in range(self.nstored):
            if self.low + k < 0 and vals[k] < self.precs[k]:
                raise PrincipalPartAtZero("series has a pole at Z = 0")
        if self.zprec <= 0:
            raise PrincipalPartUnknown("constant term not determined")
        if self.low > 0:
            return self.field.zero()
        return self.coefficient(0)

    def eq_at(self, other, pi_prec=None, z_prec=None):
        diff = self - other
        if z_prec is not None:
            diff = diff.truncate(z_prec)
        return diff.is_zero(pi_prec)

    # ------------------------------------------------------------------
    # text
    # ------------------------------------------------------------------

    def to_text(self, max_terms=None):
        parts = []
        shown = 0
        for k in range(self.nstored):
            i = self.low + k
            c = self.coefficient(i)
            if max_terms is not None and c.is_zero():
                continue
            parts.append(f"({c.to_text()})*Z^{i}")
            shown += 1
            if max_terms is not None and shown >= max_terms:
                parts.append("...")
                break
        body = " + ".join(parts) if parts else "0"
        tail = "O(Z^inf)" if self.zprec >= EXACT_Z else f"O(Z^{self.zprec})"
        return f"{body} + {tail}"

    @staticmethod
    def from_text(field, text):
        text = text.strip()
        if "+ O(Z^" not in text and not text.endswith("O(Z^inf)"):
            raise DegenerateSpec(f"series literal missing O(Z^N): {text!r}")
        body, otail = text.rsplit("+", 1)
        otail = otail.strip()
        if otail == "O(Z^inf)":
            zprec = EXACT_Z
        else:
            zprec = int(otail[4:-1])
        body = body.strip()
        terms = []
        if body != "0":
            depth = 0
            cur = ""
            chunks = []
            for ch in body:
                if ch == "(":
                    depth += 1
                elif ch == ")":
                    depth -= 1
                if ch == "+" and depth == 0:
                    chunks.append(cur)
                    cur = ""
                else:
                    cur += ch
            if cur.strip():
                chunks.append(cur)
            for chunk in chunks:
                chunk = chunk.strip()
                if not chunk or chunk == "...":
                    continue
                if not chunk.startswith("(") or ")*Z^" not in chunk:
                    raise DegenerateSpec(f"bad series term {chunk!r}")
                inner, expo = chunk.rsplit(")*Z^", 1)
                terms.append((int(expo), Scalar.from_text(field, inner[1:])))
        if not terms:
            return LaurentSeries.zero(field, zprec)
        low = min(e for e, _ in terms)
        top = max(e for e, _ in terms) + 1
        scalars = [field.zero() for _ in range(top - low)]
        for e, s in terms:
            scalars[e - low] = s
        return LaurentSeries.from_scalars(field, low, scalars, zprec)


def geometric_inverse_check(f):
    """f * invert(f) compared with 1 at joint precision (test helper)."""
    return (f * f.invert()).eq_at(LaurentSeries.constant(f.field, 1))
