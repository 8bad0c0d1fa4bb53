"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Every scalar appearing in an S- or T-matrix in this package lives in some
cyclotomic field.  ``CycNum`` stores the canonical representative of such a
value: the remainder modulo the N-th cyclotomic polynomial, kept as a sparse
integer coefficient dictionary over a single positive denominator.  Two
values are equal iff their canonical forms agree after promotion to the
least common conductor, so equality never involves floating point.

``RootOfUnity`` is the lighter exact representation e^{2 pi i r} with r a
rational mod 1; it is the natural container for quadratic-form and
bicharacter values and converts losslessly to ``CycNum``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import InvalidArgumentError

__all__ = [
    "CycNum",
    "RootOfUnity",
    "zeta",
    "cyc",
    "sqrt_int",
    "euler_phi",
    "factorize",
]


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division (inputs here are desk-scale)."""
    if n < 1:
        raise InvalidArgumentError(f"cannot factor {n}")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def euler_phi(n: int) -> int:
    phi = 1
    for p, e in factorize(n).items():
        phi *= (p - 1) * p ** (e - 1)
    return phi


def _divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # Exact division of integer polynomials, divisor monic.
    num = list(num)
    dn = len(den) - 1
    out = [0] * (len(num) - dn)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        if c == 0:
            continue
        out[i - dn] = c
        for j, dj in enumerate(den):
            num[i - dn + j] -= c * dj
    if any(num):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients (low to high) of the n-th cyclotomic polynomial."""
    poly = [-1] + [0] * (n - 1) + [1]
    for d in _divisors(n):
        if d < n:
            poly = _poly_divexact(poly, list(cyclotomic_poly(d)))
    return tuple(poly)


@lru_cache(maxsize=None)
def _reduction_table(n: int) -> tuple[dict[int, int], ...]:
    """x^m mod Phi_n as sparse integer dicts, for m in [0, n)."""
    phi_poly = cyclotomic_poly(n)
    deg = len(phi_poly) - 1
    head = [-c for c in phi_poly[:deg]]  # x^deg = head (mod Phi_n)
    rows: list[dict[int, int]] = [{m: 1} for m in range(deg)]
    cur = list(head)
    for _ in range(deg, n):
        rows.append({e: c for e, c in enumerate(cur) if c})
        top = cur[deg - 1]
        cur = [0] + cur[: deg - 1]
        if top:
            for e, hc in enumerate(head):
                cur[e] += top * hc
    return tuple(rows)


def _phi_deg(n: int) -> int:
    return len(cyclotomic_poly(n)) - 1


def _normalize(num: dict[int, int], den: int) -> tuple[dict[int, int], int]:
    num = {e: c for e, c in num.items() if c}
    if not num:
        return {}, 1
    if den < 0:
        den = -den
        num = {e: -c for e, c in num.items()}
    g = den
    for c in num.values():
        g = math.gcd(g, c)
        if g == 1:
            return num, den
    if g > 1:
        num = {e: c // g for e, c in num.items()}
        den //= g
    return num, den


class CycNum:
    """Element of Q(zeta_n), reduced mod the n-th cyclotomic polynomial.

    ``num`` maps exponents in [0, phi(n)) to integer coefficients; the actual
    coefficient of zeta^e is num[e]/den.  The pair is normalized (den > 0,
    gcd of all entries and den is 1), so representation is canonical.
    """

    __slots__ = ("n", "num", "den")
    __hash__ = None  # equality crosses conductors; use key_at() for hashing

    def __init__(self, n: int, num: dict[int, int], den: int = 1):
        self.n = n
        self.num, self.den = _normalize(num, den)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_fraction(x) -> "CycNum":
        f = Fraction(x)
        return CycNum(1, {0: f.numerator}, f.denominator)

    @staticmethod
    def zero() -> "CycNum":
        return CycNum(1, {})

    @staticmethod
    def one() -> "CycNum":
        return CycNum(1, {0: 1})

    # -- conversions -------------------------------------------------------

    def promoted(self, m: int) -> "CycNum":
        """The same value viewed in Q(zeta_m); requires n | m."""
        if m == self.n:
            return self
        if m % self.n:
            raise InvalidArgumentError(f"cannot promote conductor {self.n} to {m}")
        k = m // self.n
        table = _reduction_table(m)
        deg = _phi_deg(m)
        num: dict[int, int] = {}
        for e, c in self.num.items():
            ee = e * k
            if ee < deg:
                num[ee] = num.get(ee, 0) + c
            else:
                for e2, c2 in table[ee].items():
                    num[e2] = num.get(e2, 0) + c * c2
        return CycNum(m, num, self.den)

    def key_at(self, m: int) -> tuple:
        """Hashable canonical key for this value inside Q(zeta_m)."""
        v = self.promoted(m)
        return (m, tuple(sorted(v.num.items())), v.den)

    def is_zero(self) -> bool:
        return not self.num

    def is_rational(self) -> bool:
        return all(e == 0 for e in self.num)

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise InvalidArgumentError("value is irrational")
        return Fraction(self.num.get(0, 0), self.den)

    def __complex__(self) -> complex:
        w = 2j * cmath.pi / self.n
        total = 0j
        for e in sorted(self.num):  # fixed order keeps the float view deterministic
            total += self.num[e] * cmath.exp(w * e)
        return total / self.den

    def to_complex(self) -> complex:
        return complex(self)

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _coerce(x):
        if isinstance(x, CycNum):
            return x
        if isinstance(x, (int, Fraction)):
            return CycNum.from_fraction(x)
        return None

    def _common(self, other: "CycNum") -> tuple["CycNum", "CycNum"]:
        if self.n == other.n:
            return self, other
        m = self.n * other.n // math.gcd(self.n, other.n)
        return self.promoted(m), other.promoted(m)

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self._common(other)
        num = {e: c * b.den for e, c in a.num.items()}
        for e, c in b.num.items():
            num[e] = num.get(e, 0) + c * a.den
        return CycNum(a.n, num, a.den * b.den)

    __radd__ = __add__

    def __neg__(self):
        out = CycNum.__new__(CycNum)
        out.n, out.num, out.den = self.n, {e: -c for e, c in self.num.items()}, self.den
        return out

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
        a, b = self._common(other)
        n = a.n
        acc: dict[int, int] = {}
        bn = b.num
        for e1, c1 in a.num.items():
            for e2, c2 in bn.items():
                e = e1 + e2
                if e >= n:
                    e -= n
                acc[e] = acc.get(e, 0) + c1 * c2
        deg = _phi_deg(n)
        table = _reduction_table(n)
        num: dict[int, int] = {}
        for e, c in acc.items():
            if not c:
                continue
            if e < deg:
                num[e] = num.get(e, 0) + c
            else:
                for e2, c2 in table[e].items():
                    num[e2] = num.get(e2, 0) + c * c2
        return CycNum(n, num, a.den * b.den)

    __rmul__ = __mul__

    def conj(self) -> "CycNum":
        """Complex conjugate (zeta -> zeta^{-1})."""
        n = self.n
        deg = _phi_deg(n)
        table = _reduction_table(n)
        num: dict[int, int] = {}
        for e, c in self.num.items():
            ee = (n - e) % n
            if ee < deg:
                num[ee] = num.get(ee, 0) + c
            else:
                for e2, c2 in table[ee].items():
                    num[e2] = num.get(e2, 0) + c * c2
        return CycNum(n, num, self.den)

    def inverse(self) -> "CycNum":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero cyclotomic value")
        if self.is_rational():
            return CycNum.from_fraction(1 / self.rational_value()).promoted(self.n)
        # extended Euclid in Q[x] against the (irreducible) cyclotomic polynomial
        deg = _phi_deg(self.n)
        a = [Fraction(self.num.get(e, 0), self.den) for e in range(deg)]
        b = [Fraction(c) for c in cyclotomic_poly(self.n)]
        s0, s1 = [Fraction(1)], [Fraction(0)]
        while any(b):
            q, r = _poly_divmod(a, b)
            a, b = b, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        # now a = gcd (a nonzero constant), s0 * self = a  (mod Phi_n)
        assert len(_poly_trim(a)) == 1
        inv_c = 1 / a[0]
        coeffs = [c * inv_c for c in s0]
        num: dict[int, int] = {}
        den = 1
        for c in coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        for e, c in enumerate(coeffs):
            if c:
                num[e] = int(c * den)
        out = CycNum(self.n, num, den)
        assert (out * self) == 1
        return out

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

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = CycNum.one().promoted(self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.n == other.n:
            return self.num == other.num and self.den == other.den
        a, b = self._common(other)
        return a.num == b.num and a.den == b.den

    def __repr__(self):
        if self.is_zero():
            return "CycNum(0)"
        terms = " + ".join(
            f"{c}*z{self.n}^{e}" if e else str(c) for e, c in sorted(self.num.items())
        )
        tail = f")/{self.den}" if self.den != 1 else ")"
        return f"CycNum(({terms}{tail}"

    # -- roots of unity ----------------------------------------------------

    def as_root_of_unity(self) -> "RootOfUnity | None":
        """Identify this value as e^{2 pi i k/n} if it is one, else None."""
        if (self * self.conj()) != 1:
            return None
        z = complex(self)
        k = round(cmath.phase(z) * self.n / (2 * math.pi)) % self.n
        if self == zeta(self.n, k):
            return RootOfUnity(Fraction(k, self.n))
        for k in range(self.n):  # exact fallback; the guess above rarely misses
            if self == zeta(self.n, k):
                return RootOfUnity(Fraction(k, self.n))
        return None

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        deg = _phi_deg(self.n)
        coeffs = []
        for e in range(deg):
            c = self.num.get(e, 0)
            f = Fraction(c, self.den)
            coeffs.append([f.numerator, f.denominator])
        z = complex(self)
        return {"conductor": self.n, "coeffs": coeffs, "approx": [z.real, z.imag]}

    @staticmethod
    def from_json(obj: dict) -> "CycNum":
        n = int(obj["conductor"])
        if n < 1:
            raise InvalidArgumentError("conductor must be >= 1")
        coeffs = obj["coeffs"]
        if len(coeffs) != _phi_deg(n):
            raise InvalidArgumentError("coefficient vector has wrong length")
        den = 1
        fracs = [Fraction(int(p), int(q)) for p, q in coeffs]
        for f in fracs:
            den = den * f.denominator // math.gcd(den, f.denominator)
        num = {e: int(f * den) for e, f in enumerate(fracs) if f}
        return CycNum(n, num, den)


def _poly_trim(p):
    while p and not p[-1]:
        p.pop()
    return p


def _poly_sub(a, b):
    out = list(a) + [Fraction(0)] * (len(b) - len(a))
    for i, c in enumerate(b):
        out[i] -= c
    return _poly_trim(out)


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
    return _poly_trim(out)


def _poly_divmod(a, b):
    a = _poly_trim(list(a))
    b = _poly_trim(list(b))
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    lead = b[-1]
    while len(a) >= len(b):
        c = a[-1] / lead
        d = len(a) - len(b)
        q[d] = c
        for i, cb in enumerate(b):
            a[d + i] -= c * cb
        _poly_trim(a)
    return _poly_trim(q), a


def zeta(n: int, k: int = 1) -> CycNum:
    """The root of unity zeta_n^k = e^{2 pi i k/n}, in canonical form."""
    if n < 1:
        raise InvalidArgumentError(f"conductor must be >= 1, got {n}")
    k %= n
    deg = _phi_deg(n)
    if k < deg:
        return CycNum(n, {k: 1})
    return CycNum(n, dict(_reduction_table(n)[k]))


def cyc(x) -> CycNum:
    """Embed an int or Fraction as a CycNum."""
    return CycNum.from_fraction(x)


@lru_cache(maxsize=None)
def _sqrt_prime(p: int) -> CycNum:
    """sqrt(p) for a prime p via the quadratic Gauss sum, at its natural
    conductor: p for p = 1 mod 4, else 4p (8 for p = 2)."""
    if p == 2:
        return (zeta(8, 1) + zeta(8, 7)).promoted(8)
    g = CycNum.zero().promoted(p)
    for x in range(p):
        g = g + zeta(p, (x * x) % p)
    if p % 4 == 1:
        return g
    return g.promoted(4 * p) * zeta(4, 3)  # the sum equals i*sqrt(p)


@lru_cache(maxsize=None)
def _sqrt_int_min(n: int) -> CycNum:
    """sqrt(n) at its natural conductor (see sqrt_int_conductor)."""
    if n < 1:
        raise InvalidArgumentError(f"sqrt_int needs n >= 1, got {n}")
    square_part = 1
    root = CycNum.one()
    for p, e in factorize(n).items():
        square_part *= p ** (e // 2)
        if e % 2:
            root = root * _sqrt_prime(p)
    root = (root * square_part).promoted(sqrt_int_conductor(n))
    assert root * root == n
    return root


def sqrt_int_conductor(n: int) -> int:
    """The conductor this package uses for sqrt(n): the lcm over the odd
    primes p dividing the squarefree part of p (p = 1 mod 4) or 4p, and 8
    when the squarefree part is even."""
    out = 1
    for p, e in factorize(n).items():
        if e % 2 == 0:
            continue
        piece = 8 if p == 2 else (p if p % 4 == 1 else 4 * p)
        out = out * piece // math.gcd(out, piece)
    return out


@lru_cache(maxsize=None)
def sqrt_int(n: int) -> CycNum:
    """The positive square root of n >= 1, exact in Q(zeta_{4n})."""
    root = _sqrt_int_min(n)
    return root.promoted(4 * n) if (4 * n) % root.n == 0 else root


@dataclass(frozen=True, order=True)
class RootOfUnity:
    """The unit complex number e^{2 pi i r} with exact rational r mod 1."""

    exponent: Fraction

    def __post_init__(self):
        object.__setattr__(self, "exponent", Fraction(self.exponent) % 1)

    @staticmethod
    def of(num, den=1) -> "RootOfUnity":
        return RootOfUnity(Fraction(num, den))

    @staticmethod
    def one() -> "RootOfUnity":
        return RootOfUnity(Fraction(0))

    @property
    def order(self) -> int:
        return self.exponent.denominator

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        return RootOfUnity(self.exponent + other.exponent)

    def __pow__(self, k: int) -> "RootOfUnity":
        return RootOfUnity(self.exponent * k)

    def inverse(self) -> "RootOfUnity":
        return RootOfUnity(-self.exponent)

    conj = inverse  # unit modulus

    def sqrt(self) -> "RootOfUnity":
        """Principal square root: e^{2 pi i r} -> e^{pi i r} for r in [0, 1)."""
        return RootOfUnity(self.exponent / 2)

    def is_one(self) -> bool:
        return self.exponent == 0

    def to_cyc(self, conductor: int | None = None) -> CycNum:
        den, num = self.exponent.denominator, self.exponent.numerator
        z = zeta(den, num)
        return z.promoted(conductor) if conductor else z

    def to_complex(self) -> complex:
        return cmath.exp(2j * cmath.pi * float(self.exponent))

    def __repr__(self):
        return f"RootOfUnity({self.exponent})"
