"""Exact arithmetic in the field Q(v) with v = q^(1/d), plus q-combinatorics
and evaluation homomorphisms into Q and the cyclotomic fields Q(zeta_ell).

All coefficients are arbitrary-precision rationals; no floating point is used
anywhere.  A QScalar is kept in a canonical reduced form so that equality is
syntactic.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache


class MalformedExponentError(ValueError):
    """A q-exponent does not scale to an integer power of v."""


class DomainError(ValueError):
    """An argument is outside the operation's domain."""


class NotInLocalRingError(ValueError):
    """The element has a pole at the requested evaluation point."""


class EllValidationError(ValueError):
    """The integer ell violates the standing root-of-unity hypotheses."""


# ---------------------------------------------------------------------------
# polynomial helpers: a polynomial is a tuple of Fractions, index = exponent,
# normalized so the last entry is nonzero (the zero polynomial is ()).
# ---------------------------------------------------------------------------

def _ptrim(cs):
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def _padd(a, b):
    n = max(len(a), len(b))
    return _ptrim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                   for i in range(n)])


def _pneg(a):
    return tuple(-c for c in a)


def _pmul(a, b):
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                if cb:
                    out[i + j] += ca * cb
    return _ptrim(out)


def _pscale(a, c):
    if c == 0:
        return ()
    return tuple(x * c for x in a)


def _pdivmod(a, b):
    """Division with remainder in Q[v]; b must be nonzero."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a)
    quo = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    for i in range(len(a) - len(b), -1, -1):
        if len(rem) >= i + len(b) and rem[i + len(b) - 1] != 0:
            c = rem[i + len(b) - 1] / lead
            quo[i] = c
            for j, cb in enumerate(b):
                rem[i + j] -= c * cb
    return _ptrim(quo), _ptrim(rem)


def _pgcd(a, b):
    """Monic gcd in Q[v]."""
    while b:
        a, b = b, _pdivmod(a, b)[1]
    if not a:
        return ()
    return _pscale(a, 1 / a[-1])


def _peval(a, x, one):
    """Evaluate a polynomial at x (Horner); `one` is the 1 of the target."""
    acc = one * 0
    for c in reversed(a):
        acc = acc * x + one * c
    return acc


_TERM_RE = re.compile(
    r"([+-]?)(\d+(?:/\d+)?)?(?:\*?(v)(?:\^(-?\d+))?)?")


def _laurent_str(coeffs, shift):
    """Render sum of coeffs[i] * v^(i+shift), highest exponent first."""
    if not coeffs:
        return "0"
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        e = i + shift
        sign = "-" if c < 0 else "+"
        c = abs(c)
        if e == 0:
            body = str(c)
        else:
            ve = "v" if e == 1 else "v^%d" % e
            body = ve if c == 1 else "%s%s" % (c, ve)
        parts.append((sign, body))
    out = ""
    for k, (sign, body) in enumerate(parts):
        if k == 0:
            out = ("-" if sign == "-" else "") + body
        else:
            out += sign + body
    return out


def _parse_laurent(text):
    """Parse a Laurent polynomial string into (coeffs tuple, shift)."""
    text = text.strip()
    if text in ("0", ""):
        return (), 0
    terms = {}
    pos = 0
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError("cannot parse %r at position %d" % (text, pos))
        sign, coeff, var, exp = m.groups()
        c = Fraction(coeff) if coeff else Fraction(1)
        if sign == "-":
            c = -c
        if var:
            e = int(exp) if exp is not None else 1
        else:
            e = 0
        terms[e] = terms.get(e, Fraction(0)) + c
        pos = m.end()
    terms = {e: c for e, c in terms.items() if c != 0}
    if not terms:
        return (), 0
    lo, hi = min(terms), max(terms)
    return _ptrim([terms.get(e, Fraction(0)) for e in range(lo, hi + 1)]), lo


class QScalar:
    """An element of Q(v), v = q^(1/d), as a canonical reduced fraction
    v^shift * num(v) / den(v) with num(0) != 0, den(0) != 0, den monic and
    gcd(num, den) = 1.
    """

    __slots__ = ("shift", "num", "den", "d")

    def __init__(self, num=(), den=(Fraction(1),), shift=0, d=1):
        if d < 1:
            raise ValueError("d must be a positive integer")
        num = _ptrim(Fraction(c) for c in num)
        den = _ptrim(Fraction(c) for c in den)
        if not den:
            raise ZeroDivisionError("QScalar denominator is zero")
        # strip v-powers into the shift
        while num and num[0] == 0:
            num = num[1:]
            shift += 1
        while den and den[0] == 0:
            den = den[1:]
            shift -= 1
        if not num:
            self.num, self.den, self.shift, self.d = (), (Fraction(1),), 0, d
            return
        g = _pgcd(num, den)
        if len(g) > 1:
            num = _pdivmod(num, g)[0]
            den = _pdivmod(den, g)[0]
        lead = den[-1]
        if lead != 1:
            num = _pscale(num, 1 / lead)
            den = _pscale(den, 1 / lead)
        self.num, self.den, self.shift, self.d = num, den, shift, d

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_rational(c, d=1):
        return QScalar((Fraction(c),), d=d)

    @staticmethod
    def zero(d=1):
        return QScalar((), d=d)

    @staticmethod
    def one(d=1):
        return QScalar((Fraction(1),), d=d)

    @staticmethod
    def v_power(k, d=1):
        """v^k as a QScalar."""
        return QScalar((Fraction(1),), shift=int(k), d=d)

    @staticmethod
    def q_power(exponent, d=1):
        """q^exponent = v^(d*exponent); exponent may be a Fraction provided
        d*exponent is an integer."""
        e = Fraction(exponent) * d
        if e.denominator != 1:
            raise MalformedExponentError(
                "q-exponent %s does not scale to an integer power of v with d=%d"
                % (exponent, d))
        return QScalar.v_power(int(e), d=d)

    # -- structure ---------------------------------------------------------

    def is_zero(self):
        return not self.num

    def is_one(self):
        return self.shift == 0 and self.num == (Fraction(1),) and self.den == (Fraction(1),)

    def _key(self):
        return (self.shift, self.num, self.den)

    def __eq__(self, other):
        if isinstance(other, int):
            other = QScalar.from_rational(other, d=self.d)
        if not isinstance(other, QScalar):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def _coerce(self, other):
        if isinstance(other, QScalar):
            if other.d != self.d:
                raise ValueError("mixing QScalars with d=%d and d=%d"
                                 % (self.d, other.d))
            return other
        if isinstance(other, (int, Fraction)):
            return QScalar.from_rational(other, d=self.d)
        return None

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        s = min(self.shift, other.shift)
        a = _pmul(self._shifted_num(s), other.den)
        b = _pmul(other._shifted_num(s), self.den)
        return QScalar(_padd(a, b), _pmul(self.den, other.den), shift=s, d=self.d)

    def _shifted_num(self, base):
        """num with the shift re-expressed relative to `base` <= self.shift."""
        pad = self.shift - base
        return tuple([Fraction(0)] * pad) + self.num

    __radd__ = __add__

    def __neg__(self):
        r = QScalar.__new__(QScalar)
        r.num, r.den, r.shift, r.d = _pneg(self.num), self.den, self.shift, self.d
        return r

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return QScalar.zero(self.d)
        return QScalar(_pmul(self.num, other.num), _pmul(self.den, other.den),
                       shift=self.shift + other.shift, d=self.d)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero QScalar")
        return QScalar(self.den, self.num, shift=-self.shift, d=self.d)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n):
        n = int(n)
        if n < 0:
            return self.inverse() ** (-n)
        r = QScalar.one(self.d)
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    # -- evaluation --------------------------------------------------------

    def as_rational(self):
        """Return self as a Fraction if it is constant, else raise."""
        if self.is_zero():
            return Fraction(0)
        if self.shift == 0 and len(self.num) == 1 and self.den == (Fraction(1),):
            return self.num[0]
        raise DomainError("QScalar %s is not a rational constant" % self)

    def regular_at_one(self):
        return _peval(self.den, Fraction(1), Fraction(1)) != 0

    def eval_at_one(self):
        """Evaluate at v = 1 (in Q); raises if there is a pole."""
        dv = _peval(self.den, Fraction(1), Fraction(1))
        if dv == 0:
            raise NotInLocalRingError("pole at v = 1")
        return _peval(self.num, Fraction(1), Fraction(1)) / dv

    def regular_at_root(self, ell):
        if self.is_zero():
            return True
        zeta = CycloScalar.zeta(ell)
        return not _peval(self.den, zeta, CycloScalar.one(ell)).is_zero()

    def __str__(self):
        numstr = _laurent_str(self.num, self.shift)
        if self.den == (Fraction(1),):
            return "(%s)/1" % numstr
        return "(%s)/(%s)" % (numstr, _laurent_str(self.den, 0))

    __repr__ = __str__

    @staticmethod
    def parse(text, d=1):
        """Round-trip parser for the canonical text form."""
        text = text.strip()
        if text.endswith("/1"):
            numpart, denpart = text[:-2], "1"
        else:
            depth = 0
            split = None
            for i, ch in enumerate(text):
                if ch == "(":
                    depth += 1
                elif ch == ")":
                    depth -= 1
                elif ch == "/" and depth == 0:
                    split = i
                    break
            if split is None:
                numpart, denpart = text, "1"
            else:
                numpart, denpart = text[:split], text[split + 1:]
        numpart = numpart.strip()
        denpart = denpart.strip()
        if numpart.startswith("(") and numpart.endswith(")"):
            numpart = numpart[1:-1]
        if denpart.startswith("(") and denpart.endswith(")"):
            denpart = denpart[1:-1]
        ncs, nsh = _parse_laurent(numpart)
        dcs, dsh = _parse_laurent(denpart)
        num = QScalar(ncs, shift=nsh, d=d)
        den = QScalar(dcs, shift=dsh, d=d)
        return num / den


# ---------------------------------------------------------------------------
# q-combinatorics
# ---------------------------------------------------------------------------

def q_integer(n, weight, d=1):
    """[n]_t with t = q^weight: (t^n - t^-n)/(t - t^-1), as a QScalar.

    `weight` is a rational exponent of q; weight*d must be an integer.
    """
    n = int(n)
    e = Fraction(weight) * d
    if e.denominator != 1:
        raise MalformedExponentError(
            "weight %s does not give an integer power of v with d=%d"
            % (weight, d))
    e = int(e)
    if n < 0:
        return -q_integer(-n, weight, d)
    acc = QScalar.zero(d)
    for j in range(n):
        acc = acc + QScalar.v_power(e * (n - 1 - 2 * j), d)
    return acc


def q_factorial(m, weight, d=1):
    """[m]_t! = [m]_t [m-1]_t ... [1]_t."""
    m = int(m)
    if m < 0:
        raise DomainError("q_factorial of negative integer %d" % m)
    acc = QScalar.one(d)
    for j in range(2, m + 1):
        acc = acc * q_integer(j, weight, d)
    return acc


def q_binomial(n, m, weight, d=1):
    """[n; m]_t = [n][n-1]...[n-m+1] / [m]!  (a Laurent polynomial in t)."""
    n, m = int(n), int(m)
    if m < 0:
        raise DomainError("q_binomial with negative lower index %d" % m)
    acc = QScalar.one(d)
    for j in range(m):
        acc = acc * q_integer(n - j, weight, d)
    return acc / q_factorial(m, weight, d)


# ---------------------------------------------------------------------------
# cyclotomic field Q(zeta_ell)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def cyclotomic_polynomial(ell):
    """Coefficient tuple of the ell-th cyclotomic polynomial."""
    # x^ell - 1 divided by the cyclotomic polynomials of the proper divisors
    num = tuple([Fraction(-1)] + [Fraction(0)] * (ell - 1) + [Fraction(1)])
    for k in range(1, ell):
        if ell % k == 0:
            num = _pdivmod(num, cyclotomic_polynomial(k))[0]
    return num


def validate_ell(ell, lam_over_q=1, is_g2=False):
    """Standing hypotheses for the root-of-unity order: ell odd, prime to 3
    in type G2, and prime to the order of the fundamental group."""
    ell = int(ell)
    if ell < 3 or ell % 2 == 0:
        raise EllValidationError("ell = %d must be odd and at least 3" % ell)
    if is_g2 and ell % 3 == 0:
        raise EllValidationError("ell = %d must be prime to 3 in type G2" % ell)
    from math import gcd
    if gcd(ell, lam_over_q) != 1:
        raise EllValidationError(
            "ell = %d must be prime to the fundamental group order %d"
            % (ell, lam_over_q))
    return ell


class CycloScalar:
    """An element of Q(zeta_ell): a polynomial in zeta of degree < phi(ell),
    reduced modulo the ell-th cyclotomic polynomial."""

    __slots__ = ("ell", "coeffs")

    def __init__(self, coeffs, ell, _validated=False):
        if not _validated:
            validate_ell(ell)
        mod = cyclotomic_polynomial(ell)
        cs = _ptrim(Fraction(c) for c in coeffs)
        if len(cs) >= len(mod):
            cs = _pdivmod(cs, mod)[1]
        self.ell = ell
        self.coeffs = cs

    @staticmethod
    def zero(ell):
        return CycloScalar((), ell)

    @staticmethod
    def one(ell):
        return CycloScalar((Fraction(1),), ell)

    @staticmethod
    def from_rational(c, ell):
        return CycloScalar((Fraction(c),), ell)

    @staticmethod
    def zeta(ell, power=1):
        """zeta^power as a CycloScalar."""
        power %= ell
        return CycloScalar([Fraction(0)] * power + [Fraction(1)], ell)

    def is_zero(self):
        return not self.coeffs

    def _coerce(self, other):
        if isinstance(other, CycloScalar):
            if other.ell != self.ell:
                raise ValueError("mixing Q(zeta_%d) and Q(zeta_%d)"
                                 % (self.ell, other.ell))
            return other
        if isinstance(other, (int, Fraction)):
            return CycloScalar.from_rational(other, self.ell)
        return None

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ell, self.coeffs))

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return CycloScalar(_padd(self.coeffs, other.coeffs), self.ell,
                           _validated=True)

    __radd__ = __add__

    def __neg__(self):
        return CycloScalar(_pneg(self.coeffs), self.ell, _validated=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return CycloScalar(_pmul(self.coeffs, other.coeffs), self.ell,
                           _validated=True)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero CycloScalar")
        # extended Euclid: a*self + b*mod = gcd = constant
        mod = cyclotomic_polynomial(self.ell)
        r0, r1 = mod, self.coeffs
        s0, s1 = (), (Fraction(1),)
        while r1:
            q, r = _pdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _padd(s0, _pneg(_pmul(q, s1)))
        # r0 is a nonzero constant times gcd; since mod is squarefree and
        # self != 0 mod Phi_ell, r0 is a nonzero constant
        if len(r0) != 1:
            raise ZeroDivisionError("element is a zero divisor (unexpected)")
        return CycloScalar(_pscale(s0, 1 / r0[0]), self.ell, _validated=True)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        n = int(n)
        if n < 0:
            return self.inverse() ** (-n)
        r = CycloScalar.one(self.ell)
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def as_rational(self):
        if self.is_zero():
            return Fraction(0)
        if len(self.coeffs) == 1:
            return self.coeffs[0]
        raise DomainError("CycloScalar %s is not rational" % self)

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append("%s*z" % c if c != 1 else "z")
            else:
                parts.append("%s*z^%d" % (c, i) if c != 1 else "z^%d" % i)
        return " + ".join(parts)

    __repr__ = __str__


def eval_at_root(s, ell):
    """The image of s under v -> zeta_ell, in Q(zeta_ell).

    Raises NotInLocalRingError when the reduced denominator vanishes at zeta
    (the element is outside the local ring at zeta).
    """
    validate_ell(ell)
    one = CycloScalar.one(ell)
    zeta = CycloScalar.zeta(ell)
    dv = _peval(s.den, zeta, one)
    if dv.is_zero():
        raise NotInLocalRingError("pole at v = zeta_%d" % ell)
    nv = _peval(s.num, zeta, one)
    return nv * CycloScalar.zeta(ell, s.shift) / dv


def hbar(ell, d=1):
    """hbar = ell * (q^ell - q^-ell) as a QScalar."""
    q = QScalar.q_power(1, d)
    return (q ** ell - q ** (-ell)) * ell


def divide_by_hbar(s, ell, d=None):
    """Exact division of s by hbar = ell (q^ell - q^-ell) in the field."""
    if d is None:
        d = s.d
    return s / hbar(ell, d)
