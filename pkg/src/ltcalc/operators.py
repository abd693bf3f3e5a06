"""The (phi, Gamma)-operator calculus over one Lubin-Tate model.

phi is composition with [pi](Z).  The trace over phi is realized through the
distinguished polynomial P(X; W) with [pi](X) - W = U(X; W) * P(X; W): traces
and norms of f are trace/det of f acting on the free rank-q module
B[X]/(P(X;W)), i.e. of f evaluated on the companion matrix of P.  Reduction
mod P uses the companion recursion (X * r and X^{-1} * r are O(q) series
operations), and tr(X^j) for j < q comes from Newton's identities; both are
checked against literal matrix arithmetic and against a torsion-point oracle
in the tests.

Normalizations: psi is the canonical operator with psi(phi(f)) = (q/pi) f and
phi(psi(f)) = pi^{-1} tr(f); the exact left inverse (pi/q) psi is exposed
separately as psi_normalized.
"""

from __future__ import annotations

from .errors import (
    DegenerateSpec,
    NonUnitArgument,
    NonUnitGamma,
    NotInPhiImage,
    SingularCompanion,
)
from .fields import LocalField, Scalar
from .series import EXACT_Z, LaurentSeries
from .formal_group import FormalGroupModel


# ---------------------------------------------------------------------------
# distinguished polynomial
# ---------------------------------------------------------------------------

def distinguished_polynomial(model, wlen):
    """P(X;W) with [pi](X) - W = U(X;W) P(X;W), P monic distinguished of deg q.

    For a Frobenius polynomial of degree exactly q this is [pi](X) - W on the
    nose (U = 1); higher-degree polynomial Frobenius goes through Weierstrass
    preparation.  Returns (p_coeffs, u_coeffs): lists of W-series, p_coeffs of
    length q (coefficients of X^0..X^{q-1}; X^q is monic), u_coeffs of length
    deg - q + 1.
    """
    field = model.field
    q = field.q
    fr = model.frobenius
    deg = fr.high - 1
    W = LaurentSeries.zvar(field)
    if deg == q:
        p = []
        for j in range(q):
            c = LaurentSeries.constant(field, fr.coefficient(j))
            if j == 0:
                c = c - W
            p.append(c)
        u = [LaurentSeries.constant(field, 1)]
        return p, u
    if deg < q:
        raise DegenerateSpec("Frobenius degree below q")
    return weierstrass_prepare(model, wlen)


def weierstrass_prepare(model, wlen):
    """Hensel factorization A = P*U in (o_L[[W]])[X] for A = [pi](X) - W.

    Iterates along powers of the ideal (pi, W); U is inverted mod P by Newton
    doubling inside B[X]/(P).
    """
    field = model.field
    q = field.q
    fr = model.frobenius
    deg = fr.high - 1
    W = LaurentSeries.zvar(field)
    one = LaurentSeries.constant(field, 1)

    A = [LaurentSeries.constant(field, fr.coefficient(j)) for j in range(deg + 1)]
    A[0] = A[0] - W

    def ptrim(v):
        while len(v) > 1 and v[-1].is_zero() and v[-1].nstored == 0:
            v.pop()
        return v

    def padd(a, b):
        n = max(len(a), len(b))
        z = LaurentSeries.zero(field)
        return [(a[i] if i < len(a) else z) + (b[i] if i < len(b) else z)
                for i in range(n)]

    def pneg(a):
        return [-c for c in a]

    def pmul(a, b):
        out = [LaurentSeries.zero(field) for _ in range(len(a) + len(b) - 1)]
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + (x * y).truncate(wlen)
        return out

    def pmod(a, pcoeffs):
        # reduce mod monic X^q + sum pcoeffs[j] X^j
        a = list(a)
        for i in range(len(a) - 1, q - 1, -1):
            c = a[i]
            for j in range(q):
                a[i - q + j] = a[i - q + j] - (c * pcoeffs[j]).truncate(wlen)
        return a[:q]

    def pdivmod_monic(a, pcoeffs):
        a = list(a)
        qq = [LaurentSeries.zero(field) for _ in range(max(1, len(a) - q))]
        for i in range(len(a) - 1, q - 1, -1):
            c = a[i]
            qq[i - q] = c
            a[i] = LaurentSeries.zero(field)
            for j in range(q):
                a[i - q + j] = a[i - q + j] - (c * pcoeffs[j]).truncate(wlen)
        return qq, a[:q]

    # initial approximation mod (pi, W)
    P = [LaurentSeries.zero(field) for _ in range(q)]
    U = [A[j + q] for j in range(deg - q + 1)]
    prec_target = field.prec + 8
    steps = max(prec_target, wlen) + 4
    for _ in range(steps):
        PU = pmul([*P, one], U)
        defect = padd(A, pneg(PU))
        if all(c.truncate(wlen).is_zero(prec_target) for c in defect):
            break
        # V := U^{-1} mod P by Newton, seeded with the constant-term inverse
        seed = U[0].value_at_zero().invert()
        V = [LaurentSeries.constant(field, seed)]
        for _ in range(8):
            UV = pmod(pmul(U, V), P)
            twom = padd([2 * one], pneg(UV))
            V = pmod(pmul(V, twom), P)
        dP = pmod(pmul(defect, V), P)
        rest = padd(defect, pneg(pmul(dP, U)))
        dU, rem = pdivmod_monic(rest, P)
        P = padd(P, dP)
        U = padd(U, dU)
        P = [c.truncate(wlen) for c in P]
        U = [c.truncate(wlen) for c in U]
    # distinguishedness checks
    for j in range(q):
        c0 = P[j].value_at_zero() if P[j].zprec > 0 else field.zero()
        if not c0.is_zero_at(1):
            raise SingularCompanion("prepared polynomial is not distinguished")
    return P, U


# ---------------------------------------------------------------------------
# operator context
# ---------------------------------------------------------------------------

class OperatorContext:
    """phi, psi, trace, norm, Gamma-action, d_inv, nabla, residue, pairing."""

    def __init__(self, model, zlen=None, prec=None):
        self.model = model
        self.field = model.field
        self.zlen = zlen or model.zlen
        self.prec = prec or self.field.prec
        q = self.field.q
        self.q = q
        wlen = self.zlen + 2
        self.p_coeffs, self.u_coeffs = distinguished_polynomial(model, wlen)
        # p_0 must be unit * W
        p0 = self.p_coeffs[0]
        if p0.z_order() != 1 or p0.coefficient(1).valuation() != 0:
            raise SingularCompanion("P(0; W) is not a unit times W")
        self._powersums = self._newton_power_sums()
        self._ginv = None
        self._gammacache = {}

    # -- companion data ------------------------------------------------------

    def companion_matrix(self):
        """The q x q companion matrix of P(X;W) (columns map X^j)."""
        f = self.field
        q = self.q
        zero = LaurentSeries.zero(f)
        one = LaurentSeries.constant(f, 1)
        C = [[zero for _ in range(q)] for _ in range(q)]
        for j in range(q - 1):
            C[j + 1][j] = one
        for i in range(q):
            C[i][q - 1] = -self.p_coeffs[i]
        return C

    def _newton_power_sums(self):
        """tr(X^k) for 0 <= k < q from Newton's identities."""
        f = self.field
        q = self.q
        s = [LaurentSeries.constant(f, q)]
        for k in range(1, q):
            acc = self.p_coeffs[q - k].scalar_mul(f.scalar(k))
            for i in range(1, k):
                acc = acc + self.p_coeffs[q - i] * s[k - i]
            s.append(-acc)
        return s

    def _mul_by_x(self, r):
        top = r[-1]
        out = [-(top * self.p_coeffs[0])]
        for j in range(1, self.q):
            out.append(r[j - 1] - top * self.p_coeffs[j])
        return out

    def reduce_mod_p(self, f):
        """f(X) mod P(X;W) as a length-q vector of W-series, f pole-free.

        Only sound for power series: the Laurent expansion at 0 of a pole does
        not converge at the torsion-sized roots of P, so callers must clear
        principal parts first (trace_T and psi do, via the projection
        formula).
        """
        if f.low < 0 and f.z_order() is not None and f.z_order() < 0:
            raise DegenerateSpec("reduce_mod_p needs a pole-free series")
        fld = self.field
        q = self.q
        zero = LaurentSeries.zero(fld)
        pos = [zero] * q
        top = f.high - 1
        if top >= 0:
            for i in range(top, max(f.low, 0) - 1, -1):
                pos = self._mul_by_x(pos)
                pos[0] = pos[0] + f.coefficient(i)
            for _ in range(max(f.low, 0)):
                pos = self._mul_by_x(pos)
        return pos

    # -- trace / psi / norm ----------------------------------------------------

    def _tail_caps(self, zf, tail_shift=0):
        """(W-zprec, per-W-degree pi-precision cap) for input known mod Z^zf.

        Monomial weight a(q-1) + bq + c (pi^a W^b X^c) never drops under
        reduction mod a distinguished P, so an unknown Z^{N'} tail (N' >= zf)
        with coefficients in pi^{-tail_shift} o_L reaches W^k only with
        pi-valuation >= (zf - qk - q + 1)/(q - 1) - tail_shift.  (O(Z^N) on
        the desk means a tail no more denominated than the stored data.)
        """
        q = self.q
        if zf >= EXACT_Z:
            return EXACT_Z, None
        wz = max(0, (-(-(zf - q + 1) // q)) - tail_shift)

        def cap(k):
            if k < 0:
                return EXACT_Z
            return max(0, -(-(zf - q * k - q + 1) // (q - 1)) - tail_shift)

        return wz, cap

    def trace_T(self, f):
        """T(f)(W) = sum of f over the roots of P(.;W) = tr(f(C_P)).

        Principal parts are cleared first through the projection formula
        tr(phi(Z^{-m}) h) = phi(Z^{-m}) tr(h), i.e. T(f) = W^{-m} T([pi]^m f).
        """
        m = max(0, -f.low)
        if m:
            fr = self.model.frobenius
            h = f
            for _ in range(m):
                h = h * fr
        else:
            h = f
        g = self.reduce_mod_p(h)
        out = LaurentSeries.zero(self.field)
        for j in range(self.q):
            out = out + g[j] * self._powersums[j]
        wz, cap = self._tail_caps(h.zprec, h.shift)
        out = out.truncate(min(wz, self.zlen + 1 + m))
        if cap is not None:
            out = out.cap_coeff_prec(cap)
        return out.z_shift(-m)

    def trace(self, f):
        """tr(f) = sum over torsion translates = phi(T(f))."""
        return self.phi(self.trace_T(f))

    def psi(self, f):
        """Canonical psi: phi(psi(f)) = pi^{-1} tr(f), psi(phi(f)) = (q/pi) f."""
        return self.trace_T(f).scalar_mul(self.field.pi_power(-1))

    def psi_normalized(self, f):
        """The exact left inverse of phi: (pi/q) psi."""
        s = self.field.pi() / self.field.scalar(self.q)
        return self.psi(f).scalar_mul(s)

    def norm_N(self, g):
        """Coleman norm: N(g)(W) = det g(C_P), N(g)([pi](Z)) = prod g(y + Z)."""
        order = g.z_order()
        if order is None:
            raise NonUnitArgument("norm of (0 at precision)")
        lead = g.coefficient(order)
        if lead.valuation() != 0:
            raise NonUnitArgument("norm needs a unit times Z^k")
        unit = g.z_shift(-order)
        q = self.q
        red = self.reduce_mod_p(unit)
        # multiplication matrix of the reduced element
        cols = [red]
        for _ in range(q - 1):
            cols.append(self._mul_by_x(cols[-1]))
        mat = [[cols[j][i] for j in range(q)] for i in range(q)]
        det = _det_series(mat, self.field)
        if order:
            detC = self.p_coeffs[0].scalar_mul(self.field.scalar((-1) ** q))
            det = det * detC.pow_int(order)
        wz, cap = self._tail_caps(g.zprec)
        det = det.truncate(min(wz, self.zlen + 1))
        if cap is not None:
            det = det.cap_coeff_prec(cap)
        return det

    # -- the remaining operators -----------------------------------------------

    def phi(self, f):
        return f.compose(self.model.frobenius, zlen=self.zlen + 1)

    def phi_pow(self, f, n):
        for _ in range(n):
            f = self.phi(f)
        return f

    def phi_inverse(self, F, n=1):
        """Substitution-inversion: the h with h([pi]^n-fold) = F.

        Solves the triangular system degree by degree (the Z^j slot divides by
        pi^j) and verifies the residual; NotInPhiImage when F is not a series
        in [pi](Z) at precision.
        """
        for _ in range(n):
            F = self._phi_inverse_once(F)
        return F

    def _phi_inverse_once(self, F):
        fld = self.field
        fr = self.model.frobenius
        zl = F.zprec if F.zprec < EXACT_Z else self.zlen
        frpow = {}

        def frob_pow(i):
            if i not in frpow:
                if i >= 0:
                    out = LaurentSeries.constant(fld, 1)
                    base = fr.truncate(zl + 1)
                    for _ in range(i):
                        out = (out * base).truncate(zl + 1)
                else:
                    inv = fr.truncate(zl + 1 - fr.low * i).invert()
                    out = inv.pow_int(-i).truncate(zl + 1)
                frpow[i] = out
            return frpow[i]

        residual = F
        coeffs = {}
        for j in range(F.low, zl):
            if j >= residual.zprec:
                break
            c = residual.coefficient(j)
            if c.is_zero():
                continue
            hj = c * fld.pi_power(-j)
            coeffs[j] = hj
            residual = residual - frob_pow(j).scalar_mul(hj)
        if not residual.truncate(zl).is_zero():
            raise NotInPhiImage("no preimage under phi at this precision")
        if not coeffs:
            return LaurentSeries.zero(fld, zl)
        lo = min(coeffs)
        hi = max(coeffs) + 1
        out = [coeffs.get(i, fld.zero()) for i in range(lo, hi)]
        return LaurentSeries.from_scalars(fld, lo, out, zl)

    def gamma(self, a, f):
        """The action gamma_a(f) = f o [a] for a unit a."""
        if isinstance(a, int):
            a = self.field.scalar(a)
        if a.valuation() != 0:
            raise NonUnitGamma("Gamma action needs a unit")
        zl = min(f.zprec, self.zlen) if f.zprec < EXACT_Z else self.zlen
        zl = max(zl, f.high)
        key = (a.normalized().coords, a.shift, zl)
        am = self._gammacache.get(key)
        if am is None:
            am = self.model.a_mult(a, zl)
            self._gammacache[key] = am
        return f.compose(am, zlen=self.zlen + 1)

    def g_inverse(self, zlen=None):
        zlen = zlen or self.zlen
        if self._ginv is None or self._ginv.zprec < zlen:
            self._ginv = self.model.g_series(zlen).invert()
        return self._ginv.truncate(zlen)

    def d_inv(self, f):
        """The invariant derivation: d_inv(f) = g_LT^{-1} f'."""
        zl = f.zprec if f.zprec < EXACT_Z else self.zlen
        return (self.g_inverse(max(zl, 2)) * f.derivative())

    def nabla(self, f):
        """The Lie-algebra action: nabla = log_LT * d_inv."""
        zl = f.zprec if f.zprec < EXACT_Z else self.zlen
        return self.model.log_series(max(zl, 2)) * self.d_inv(f)

    def residue(self, f):
        """res(f dZ): the Z^{-1} coefficient."""
        return f.residue()

    def pairing(self, f, g):
        """<f, g> = res(f g dlog_LT) = res(f g g_LT dZ)."""
        zl = min(f.zprec if f.zprec < EXACT_Z else self.zlen,
                 g.zprec if g.zprec < EXACT_Z else self.zlen)
        glen = max(2, 2 - min(f.low + g.low, 0))
        return (f * g * self.model.g_series(glen)).residue()

    def eta(self, a, zlen=None):
        """(1+Z)^a on the multiplicative model (see the mellin module)."""
        from .mellin import eta_series
        return eta_series(self, a, zlen)


def _det_series(mat, field):
    """Determinant of a small matrix of Laurent series, by fraction-free
    expansion for q <= 3 and division Gauss with valuation pivoting above."""
    q = len(mat)
    if q == 1:
        return mat[0][0]
    if q == 2:
        return mat[0][0] * mat[1][1] - mat[0][1] * mat[1][0]
    if q == 3:
        m = mat
        return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))
    mat = [row[:] for row in mat]
    det = LaurentSeries.constant(field, 1)
    sign = 1
    for col in range(q):
        pivot_row = None
        best = None
        for r in range(col, q):
            zo = mat[r][col].z_order()
            if zo is None:
                continue
            if best is None or zo < best:
                best = zo
                pivot_row = r
        if pivot_row is None:
            return LaurentSeries.zero(field)
        if pivot_row != col:
            mat[col], mat[pivot_row] = mat[pivot_row], mat[col]
            sign = -sign
        piv = mat[col][col]
        det = det * piv
        pinv = piv.invert()
        for r in range(col + 1, q):
            factor = mat[r][col] * pinv
            for c in range(col, q):
                mat[r][c] = mat[r][c] - factor * mat[col][c]
    if sign < 0:
        det = -det
    return det
