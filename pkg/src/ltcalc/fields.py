"""Exact arithmetic in o_L and L at capped pi-adic precision.

A local field L is Q_p, an unramified extension of degree f, or a totally
ramified extension cut out by an Eisenstein polynomial E(x) over Z_p.  Elements
are stored on the power basis 1, x, ..., x^(d-1) of the defining polynomial,
as integer coordinate vectors modulo a power of p, together with

  * ``shift``  -- the value is pi^(-shift) times the stored integral element,
  * ``prec``   -- the absolute pi-adic precision (value known mod pi^prec).

Precision rules: add keeps min of precisions; mul of values with valuations
v_a, v_b keeps min(prec_a + v_b, prec_b + v_a); invert of a unit keeps the
input precision.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (
    DegenerateSpec,
    EvenPrimeUnsupported,
    NonEisenstein,
    NonUnitInverse,
    PrecisionExhausted,
    ZeroResidue,
)

DEFAULT_PI_PREC = 20

# Construction pipelines (group law, exp/log, operator series) spend digits;
# scalars made from exact integers start with this much headroom on top of the
# requested working precision.
STORE_MARGIN = 48


# ---------------------------------------------------------------------------
# small polynomial helpers over F_p (coefficient lists, low degree first)
# ---------------------------------------------------------------------------

def _poly_mod_trim(a, p):
    a = [c % p for c in a]
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_mod_trim(out, p)


def _poly_mod_divmod(a, b, p):
    a = list(a)
    binv = pow(b[-1], -1, p)
    q = [0] * max(0, len(a) - len(b) + 1)
    for i in range(len(a) - len(b), -1, -1):
        c = (a[i + len(b) - 1] * binv) % p
        q[i] = c
        if c:
            for j, bj in enumerate(b):
                a[i + j] = (a[i + j] - c * bj) % p
    return _poly_mod_trim(q, p), _poly_mod_trim(a, p)


def _poly_mod_gcdext(a, b, p):
    """Extended gcd in F_p[t]: returns (g, u, v) with u*a + v*b = g."""
    r0, r1 = _poly_mod_trim(a, p), _poly_mod_trim(b, p)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = _poly_mod_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_mod_trim(
            [x - y for x, y in zip_pad(s0, _poly_mod_mul(q, s1, p))], p)
        t0, t1 = t1, _poly_mod_trim(
            [x - y for x, y in zip_pad(t0, _poly_mod_mul(q, t1, p))], p)
    return r0, s0, t0


def zip_pad(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0)
            for i in range(n)]


def _poly_mod_pow(a, k, modpoly, p):
    result = [1]
    base = _poly_mod_divmod(a, modpoly, p)[1]
    while k:
        if k & 1:
            result = _poly_mod_divmod(_poly_mod_mul(result, base, p), modpoly, p)[1]
        base = _poly_mod_divmod(_poly_mod_mul(base, base, p), modpoly, p)[1]
        k >>= 1
    return result


def _is_irreducible_mod_p(poly, p):
    """Rabin test for a monic polynomial over F_p."""
    n = len(poly) - 1
    x = [0, 1]
    xq = _poly_mod_pow(x, p ** n, poly, p)
    if _poly_mod_trim([a - b for a, b in zip_pad(xq, x)], p):
        return False
    for ell in _prime_divisors(n):
        xe = _poly_mod_pow(x, p ** (n // ell), poly, p)
        diff = _poly_mod_trim([a - b for a, b in zip_pad(xe, x)], p)
        g, _, _ = _poly_mod_gcdext(poly, diff, p)
        if len(g) - 1 != 0:
            return False
    return True


def _prime_divisors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _find_unramified_poly(p, f):
    """Monic degree-f integer polynomial irreducible mod p, small coefficients."""
    if f == 1:
        return [0, 1]
    for c0 in range(1, p):
        for c1 in range(0, p):
            cand = [c0, c1] + [0] * (f - 2) + [1]
            if _is_irreducible_mod_p(cand, p):
                return cand
    for tail in range(p ** f):  # exhaustive fallback; never reached in practice
        digits = []
        t = tail
        for _ in range(f):
            digits.append(t % p)
            t //= p
        cand = digits + [1]
        if _is_irreducible_mod_p(cand, p):
            return cand
    raise DegenerateSpec(f"no irreducible polynomial of degree {f} mod {p} found")


def _is_probable_prime(n):
    if n < 2:
        return False
    for sp in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % sp == 0:
            return n == sp
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# LocalField
# ---------------------------------------------------------------------------

class LocalField:
    """Arithmetic context for one local field at one working precision.

    ``kind`` is one of ``"qp"``, ``"unramified"``, ``"eisenstein"``.  The
    uniformizer is p itself except in the Eisenstein case, where it is the
    class of x.  Instances are immutable and shareable.
    """

    def __init__(self, p, kind="qp", degree=1, poly=None, prec=DEFAULT_PI_PREC,
                 store_margin=STORE_MARGIN):
        if not _is_probable_prime(p):
            raise DegenerateSpec(f"{p} is not prime")
        if p == 2:
            raise EvenPrimeUnsupported("p = 2 is not supported")
        self.p = p
        self.kind = kind
        self.prec = prec
        self.store_prec = prec + store_margin
        if kind == "qp":
            self.e, self.f = 1, 1
            self.poly = [0, 1]
        elif kind == "unramified":
            if degree < 1:
                raise DegenerateSpec("unramified degree must be >= 1")
            self.e, self.f = 1, degree
            self.poly = list(poly) if poly is not None else _find_unramified_poly(p, degree)
            if len(self.poly) - 1 != degree or self.poly[-1] != 1:
                raise DegenerateSpec("defining polynomial must be monic of the stated degree")
            if degree > 1 and not _is_irreducible_mod_p([c % p for c in self.poly], p):
                raise DegenerateSpec("unramified polynomial is reducible mod p")
        elif kind == "eisenstein":
            if poly is None:
                raise DegenerateSpec("eisenstein kind needs a coefficient list")
            self.poly = list(poly)
            e = len(self.poly) - 1
            if e < 1 or self.poly[-1] != 1:
                raise NonEisenstein("polynomial must be monic")
            if self.poly[0] % p != 0 or self.poly[0] % (p * p) == 0:
                raise NonEisenstein("constant term must have valuation exactly 1")
            for c in self.poly[1:-1]:
                if c % p != 0:
                    raise NonEisenstein("middle coefficients must be divisible by p")
            self.e, self.f = e, 1
        else:
            raise DegenerateSpec(f"unknown field kind {kind!r}")
        self.d = self.e * self.f
        self.q = p ** self.f
        # x^k for k in [d, 2d-2] on the power basis, exact integers
        self._xpow = []
        if self.d > 1:
            top = [-c for c in self.poly[:-1]]
            self._xpow.append(top)
            for _ in range(self.d - 2):
                prev = self._xpow[-1]
                nxt = [0] + prev[:-1]
                if prev[-1]:
                    nxt = [a + prev[-1] * b for a, b in zip(nxt, top)]
                self._xpow.append(nxt)
        self._teich_cache = {}

    # -- basic descriptors --------------------------------------------------

    @property
    def pi_is_p(self):
        return self.kind != "eisenstein"

    def __repr__(self):
        if self.kind == "qp":
            return f"LocalField(Q_{self.p})"
        return f"LocalField(p={self.p}, {self.kind}, d={self.d}, q={self.q})"

    def __eq__(self, other):
        return (isinstance(other, LocalField) and self.p == other.p
                and self.kind == other.kind and self.poly == other.poly)

    def __hash__(self):
        return hash((self.p, self.kind, tuple(self.poly)))

    def modexp_for(self, prec, shift):
        """p-exponent large enough to hold a value mod pi^(prec+shift)."""
        need = prec + shift
        return max(1, -(-need // self.e) + 2)

    # -- coordinate kernel ops (exact integer vectors) ----------------------

    def coord_mul(self, a, b, mod):
        d = self.d
        if d == 1:
            return [a[0] * b[0] % mod]
        raw = [0] * (2 * d - 1)
        for i in range(d):
            ai = a[i]
            if ai:
                for j in range(d):
                    raw[i + j] += ai * b[j]
        out = raw[:d]
        for k in range(d, 2 * d - 1):
            c = raw[k]
            if c:
                red = self._xpow[k - d]
                for m in range(d):
                    if red[m]:
                        out[m] += c * red[m]
        return [c % mod for c in out]

    def coord_pi_mult(self, a, mod):
        """Multiply an integral coordinate vector by the uniformizer."""
        if self.pi_is_p:
            return [c * self.p % mod for c in a]
        d = self.d
        out = [0] + a[:-1]
        if a[-1]:
            red = self._xpow[0]
            out = [x + a[-1] * r for x, r in zip(out, red)]
        return [c % mod for c in out]

    def coord_pi_divisible(self, a, mod):
        if self.pi_is_p:
            return all(c % self.p == 0 for c in a)
        return a[0] % self.p == 0

    def coord_pi_div(self, a, mod):
        """Exact division by the uniformizer; caller guarantees divisibility."""
        p = self.p
        if self.pi_is_p:
            return [(c % mod) // p for c in a]
        # x/pi = -w^{-1} * (x * s)/p  with  s = x^{e-1} + a_{e-1} x^{e-2} + ... + a_1
        e = self.e
        s = [0] * self.d
        s[e - 1] = 1
        for k in range(1, e):
            s[k - 1] = self.poly[k]
        y = self.coord_mul([c % mod for c in a], s, mod * p)
        w = self.poly[0] // p
        winv = pow(-w % (mod), -1, mod) if mod > 1 else 0
        out = []
        for c in y:
            out.append((c // p) * winv % mod)
        return out

    def coord_is_zero_mod_pik(self, a, k, mod):
        """Whether the integral vector is 0 mod pi^k (k <= capacity of mod)."""
        v = [c % mod for c in a]
        for _ in range(k):
            if not self.coord_pi_divisible(v, mod):
                return False
            v = self.coord_pi_div(v, mod)
        return True

    def coord_valuation(self, a, cap, mod):
        """pi-valuation of an integral vector, or None if >= cap."""
        if self.d == 1:
            c = a[0] % mod
            if c == 0:
                return None
            p = self.p
            count = 0
            while count < cap:
                c, r = divmod(c, p)
                if r:
                    return count
                count += 1
                if c == 0:
                    return None
            return None
        if self.pi_is_p:
            p = self.p
            v = [c % mod for c in a]
            if all(c == 0 for c in v):
                return None
            count = 0
            while count < cap:
                if any(c % p for c in v):
                    return count
                v = [c // p for c in v]
                count += 1
                if all(c == 0 for c in v):
                    return None
            return None
        v = [c % mod for c in a]
        if all(c == 0 for c in v):
            return None
        count = 0
        while count < cap:
            if not self.coord_pi_divisible(v, mod):
                return count
            v = self.coord_pi_div(v, mod)
            count += 1
            if all(c == 0 for c in v):
                return None
        return None

    def coord_inverse(self, a, mod_k):
        """Inverse of a unit vector mod p^mod_k (unit: nonzero mod pi)."""
        p = self.p
        pbar = [c % p for c in self.poly]
        abar = _poly_mod_trim([c % p for c in a], p)
        g, u, _ = _poly_mod_gcdext(abar, pbar, p)
        if len(g) != 1:
            raise NonUnitInverse("not invertible in the residue ring")
        ginv = pow(g[0], -1, p)
        w = [(c * ginv) % p for c in u] + [0] * (self.d - len(u))
        w = w[:self.d]
        # Hensel: w <- w(2 - a w), doubling p-adic correctness each pass
        k = 1
        mod = p
        while k < mod_k:
            k = min(2 * k, mod_k)
            mod = p ** k
            aw = self.coord_mul([c % mod for c in a], w, mod)
            two_minus = [(-c) % mod for c in aw]
            two_minus[0] = (two_minus[0] + 2) % mod
            w = self.coord_mul(w, two_minus, mod)
        return w

    # -- scalar constructors -------------------------------------------------

    def scalar(self, value, prec=None):
        """Scalar from an int, Fraction, or coordinate list."""
        if prec is None:
            prec = self.store_prec
        if isinstance(value, Scalar):
            if value.field is not self and value.field != self:
                raise DegenerateSpec("scalar belongs to another field")
            return value
        if isinstance(value, Fraction):
            if value.denominator == 1:
                return self.scalar(value.numerator, prec)
            vden = 0
            den = value.denominator
            while den % self.p == 0:
                den //= self.p
                vden += 1
            boost = prec + 2 * vden * self.e + 4
            num = self.scalar(value.numerator, boost)
            den_s = self.scalar(value.denominator, boost)
            return num * den_s.invert()
        if isinstance(value, int):
            coords = [value] + [0] * (self.d - 1)
        else:
            coords = list(value) + [0] * (self.d - len(value))
        mod = self.p ** self.modexp_for(prec, 0)
        return Scalar(self, tuple(c % mod for c in coords), 0, prec)

    def zero(self, prec=None):
        return self.scalar(0, prec)

    def one(self, prec=None):
        return self.scalar(1, prec)

    def pi(self, prec=None):
        if self.pi_is_p:
            return self.scalar(self.p, prec)
        return self.scalar([0, 1], prec)

    def pi_power(self, k, prec=None):
        """pi^k for any integer k (negative exponents use the shift)."""
        if prec is None:
            prec = self.store_prec
        if k >= 0:
            out = self.one(prec)
            for _ in range(k):
                out = out.pi_mult()
            return out
        mod = self.p ** self.modexp_for(prec, -k)
        coords = [1] + [0] * (self.d - 1)
        return Scalar(self, tuple(coords), -k, prec)

    def from_residue(self, cls):
        """Lift a residue class (int or coords) to an exact integral scalar."""
        if isinstance(cls, int):
            coords = [cls % self.p] + [0] * (self.d - 1)
        else:
            coords = [c % self.p for c in cls] + [0] * (self.d - len(cls))
        return self.scalar(coords)

    def teichmuller(self, cls, prec=None):
        """Teichmuller representative: omega = cls mod pi, omega^q = omega.

        Raises ZeroResidue on the zero class.  Nonzero classes give roots of
        x^(q-1) = 1, idempotent under the q-power map at precision.
        """
        if prec is None:
            prec = self.prec
        t = self.from_residue(cls)
        if self.kind == "eisenstein" or self.kind == "qp":
            key = (t.coords[0] % self.p, prec)
        else:
            key = (tuple(c % self.p for c in t.coords), prec)
        if key in self._teich_cache:
            return self._teich_cache[key]
        if all(c % self.p == 0 for c in t.coords):
            raise ZeroResidue("Teichmuller lift of the zero class")
        work = prec + 2
        t = self.scalar(t.coords, work)
        for _ in range(work + 1):
            tq = t.pow_int(self.q)
            if (tq - t).is_zero_at(prec):
                t = tq
                break
            t = tq
        out = Scalar(self, t.coords, 0, prec)
        self._teich_cache[key] = out
        return out

    def residue_multiplicative_generator(self):
        """A generator of the cyclic group F_q^*, as a residue coordinate tuple."""
        p, f, q = self.p, self.f, self.q
        order = q - 1
        fac = _prime_divisors(order)
        # enumerate residue elements
        for code in range(1, q):
            coords = []
            t = code
            for _ in range(f):
                coords.append(t % p)
                t //= p
            if all(c == 0 for c in coords):
                continue
            if self._residue_order_is(coords, order, fac):
                return tuple(coords)
        raise DegenerateSpec("no generator found")  # pragma: no cover

    def _residue_order_is(self, coords, order, fac):
        pbar = [c % self.p for c in self.poly]
        for ell in fac:
            power = _poly_mod_pow(list(coords), order // ell, pbar, self.p)
            if power == [1]:
                return False
        return True

    def random_scalar(self, rng, prec=None, integral=True):
        if prec is None:
            prec = self.prec
        mod = self.p ** self.modexp_for(prec, 0)
        coords = tuple(rng.randrange(mod) for _ in range(self.d))
        return Scalar(self, coords, 0, prec)


# ---------------------------------------------------------------------------
# Scalar
# ---------------------------------------------------------------------------

class Scalar:
    """An element of L known modulo pi^prec; value = pi^(-shift) * coords."""

    __slots__ = ("field", "coords", "shift", "prec")

    def __init__(self, field, coords, shift, prec):
        self.field = field
        self.coords = tuple(coords)
        self.shift = shift
        self.prec = prec

    # -- helpers -------------------------------------------------------------

    def _mod(self):
        return self.field.p ** self.field.modexp_for(max(self.prec, 0), self.shift)

    def _reduced(self, prec=None, shift=None):
        prec = self.prec if prec is None else prec
        shift = self.shift if shift is None else shift
        mod = self.field.p ** self.field.modexp_for(max(prec, 0), shift)
        return Scalar(self.field, tuple(c % mod for c in self.coords), shift, prec)

    def normalized(self):
        """Cancel common pi factors against the shift."""
        if self.shift == 0:
            return self
        f = self.field
        mod = self._mod()
        coords = [c % mod for c in self.coords]
        v = f.coord_valuation(coords, self.shift, mod)
        strip = self.shift if v is None else v
        if strip and f.pi_is_p:
            div = f.p ** strip
            coords = [c // div for c in coords]
        else:
            for _ in range(strip):
                coords = f.coord_pi_div(coords, mod)
        return Scalar(f, tuple(coords), self.shift - strip, self.prec)._reduced()

    # -- predicates ----------------------------------------------------------

    def valuation(self):
        """pi-adic valuation, or None when the value is 0 at this precision."""
        if self.prec <= -self.shift:
            return None
        f = self.field
        mod = self._mod()
        cap = self.prec + self.shift
        v = f.coord_valuation(list(self.coords), cap, mod)
        if v is None:
            return None
        return v - self.shift

    def valuation_lower_bound(self):
        v = self.valuation()
        return self.prec if v is None else v

    def is_zero(self):
        return self.valuation() is None

    def is_zero_at(self, prec):
        """Zero modulo pi^prec (requires prec <= self.prec to be meaningful)."""
        f = self.field
        k = min(prec, self.prec) + self.shift
        if k <= 0:
            return True
        return f.coord_is_zero_mod_pik(list(self.coords), k, self._mod())

    def is_unit(self):
        return self.valuation() == 0

    # -- arithmetic ----------------------------------------------------------

    def _align(self, other):
        if self.field != other.field:
            raise DegenerateSpec("scalars over different fields")
        s = max(self.shift, other.shift)
        a, b = self, other
        f = self.field
        if a.shift < s:
            coords = list(a.coords)
            mod = f.p ** f.modexp_for(max(a.prec, 0), s)
            for _ in range(s - a.shift):
                coords = f.coord_pi_mult(coords, mod)
            a = Scalar(f, coords, s, a.prec)
        if b.shift < s:
            coords = list(b.coords)
            mod = f.p ** f.modexp_for(max(b.prec, 0), s)
            for _ in range(s - b.shift):
                coords = f.coord_pi_mult(coords, mod)
            b = Scalar(f, coords, s, b.prec)
        return a, b

    def __add__(self, other):
        if isinstance(other, int):
            other = self.field.scalar(other)
        a, b = self._align(other)
        prec = min(a.prec, b.prec)
        mod = self.field.p ** self.field.modexp_for(max(prec, 0), a.shift)
        coords = tuple((x + y) % mod for x, y in zip(a.coords, b.coords))
        return Scalar(self.field, coords, a.shift, prec)

    __radd__ = __add__

    def __neg__(self):
        mod = self._mod()
        return Scalar(self.field, tuple((-c) % mod for c in self.coords),
                      self.shift, self.prec)

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.field.scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            other = self.field.scalar(other)
        f = self.field
        if f != other.field:
            raise DegenerateSpec("scalars over different fields")
        va = self.valuation_lower_bound()
        vb = other.valuation_lower_bound()
        prec = min(self.prec + vb, other.prec + va)
        shift = self.shift + other.shift
        mod = f.p ** f.modexp_for(max(prec, 0), shift)
        coords = f.coord_mul([c % mod for c in self.coords],
                             [c % mod for c in other.coords], mod)
        return Scalar(f, coords, shift, prec).normalized()

    __rmul__ = __mul__

    def pi_mult(self):
        f = self.field
        if self.shift > 0:
            return Scalar(f, self.coords, self.shift - 1, self.prec)
        mod = f.p ** f.modexp_for(max(self.prec, 0), 0)
        return Scalar(f, f.coord_pi_mult(list(self.coords), mod), 0, self.prec)

    def pow_int(self, k):
        if k < 0:
            return self.invert().pow_int(-k)
        out = self.field.one(self.prec + self.shift + 8)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def invert(self):
        """Inverse; precision prec - 2*valuation (= prec for units)."""
        v = self.valuation()
        if v is None:
            raise NonUnitInverse("inversion of a value that is 0 at precision")
        f = self.field
        # strip pi^v from the integral part
        mod = self._mod()
        coords = [c % mod for c in self.coords]
        intval = v + self.shift  # valuation of the stored integral vector
        for _ in range(intval):
            coords = f.coord_pi_div(coords, mod)
        prec_out = self.prec - 2 * v
        if prec_out <= 0:
            raise PrecisionExhausted("inverse has no significant digits")
        shift_out = max(0, v)
        mod_k = f.modexp_for(prec_out, shift_out + self.shift + 4)
        u = f.coord_inverse(coords, mod_k)
        modp = f.p ** mod_k
        if v <= 0:
            # value = pi^(-v) * u^{-1}, integral
            out = u
            for _ in range(-v):
                out = f.coord_pi_mult(out, modp)
            return Scalar(f, out, 0, prec_out)._reduced()
        return Scalar(f, u, v, prec_out)._reduced()

    def __truediv__(self, other):
        if isinstance(other, int):
            other = self.field.scalar(other)
        return self * other.invert()

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field.scalar(other, self.prec)
        if not isinstance(other, Scalar):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):  # pragma: no cover - identity-ish, rarely used
        return hash((self.field, self.normalized().coords, self.shift))

    def with_prec(self, prec):
        return self._reduced(prec=min(prec, self.prec))

    def cap_prec(self, prec):
        return self._reduced(prec=min(prec, self.prec))

    # -- text ------------------------------------------------------------------

    def __repr__(self):
        return self.to_text()

    def to_text(self):
        """Round-trippable form  c0 + c1*x + ... + O(pi^M), pi^-s*(...) if shifted."""
        s = self.normalized()
        mod = s._mod()
        parts = []
        for i, c in enumerate(s.coords):
            c = c % mod
            if c == 0:
                continue
            if 2 * c > mod:
                c -= mod  # balanced representative reads better
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append(f"{c}*x")
            else:
                parts.append(f"{c}*x^{i}")
        body = " + ".join(parts) if parts else "0"
        core = f"{body} + O(pi^{s.prec})"
        if s.shift > 0:
            return f"pi^-{s.shift}*({core})"
        return core

    @staticmethod
    def from_text(field, text):
        text = text.strip()
        shift = 0
        if text.startswith("pi^-"):
            head, rest = text.split("*(", 1)
            shift = int(head[4:])
            if not rest.endswith(")"):
                raise DegenerateSpec(f"bad scalar literal {text!r}")
            text = rest[:-1]
        if "O(pi^" not in text:
            raise DegenerateSpec(f"scalar literal missing O(pi^M): {text!r}")
        body, otail = text.rsplit("+", 1)
        otail = otail.strip()
        if not (otail.startswith("O(pi^") and otail.endswith(")")):
            raise DegenerateSpec(f"bad precision tail {otail!r}")
        prec = int(otail[5:-1])
        coords = [0] * field.d
        body = body.strip()
        if body != "0":
            for term in body.split("+"):
                term = term.strip()
                if not term:
                    continue
                if "*x^" in term:
                    c, k = term.split("*x^")
                    coords[int(k)] = int(c)
                elif term.endswith("*x"):
                    coords[1] = int(term[:-2])
                else:
                    coords[0] = int(term)
        return Scalar(field, tuple(coords), shift, prec)._reduced()


def make_field(spec):
    """Build a LocalField from a key-value mapping.

    Keys: prime, kind (qp | unramified | eisenstein), degree (unramified),
    poly (coefficient list, constant first; eisenstein), prec (optional).
    """
    if "prime" not in spec:
        raise DegenerateSpec("field spec needs a prime")
    p = int(spec["prime"])
    kind = spec.get("kind", "qp")
    prec = int(spec.get("prec", DEFAULT_PI_PREC))
    if kind == "qp":
        return LocalField(p, "qp", prec=prec)
    if kind == "unramified":
        return LocalField(p, "unramified", degree=int(spec.get("degree", 1)),
                          poly=spec.get("poly"), prec=prec)
    if kind == "eisenstein":
        poly = spec.get("poly") or spec.get("coefficients")
        if poly is None:
            raise DegenerateSpec("eisenstein spec needs a coefficient list")
        return LocalField(p, "eisenstein", poly=[int(c) for c in poly], prec=prec)
    raise DegenerateSpec(f"unknown kind {kind!r}")
