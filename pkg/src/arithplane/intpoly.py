"""Exact univariate polynomial arithmetic over Z and Q.

Polynomials are immutable coefficient tuples, constant term first, with no
trailing zeros; the zero polynomial is the empty tuple and has degree -1.
:class:`IntPoly` holds Python ints, :class:`RatPoly` holds
:class:`fractions.Fraction` values in lowest terms.

Integer arithmetic here is exact, but every product and accumulated sum is
checked against a 128-bit magnitude bound: the structures downstream are
specified for desk-scale inputs, and a silent blow-up inside a resultant is
worse than a loud error.  Exceeding the bound raises
:class:`~arithplane.errors.ArithmeticOverflowError`.

The resultant uses the subresultant polynomial remainder sequence
(pseudo-division with the Brown/Collins content corrections), which keeps
every intermediate coefficient an integer while bounding growth.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import ArithmeticOverflowError, DenominatorNotInvertibleError

INT128_MAX = 2**127 - 1


def _checked(value: int) -> int:
    """Return value unchanged unless it exceeds the 128-bit magnitude bound."""
    if value > INT128_MAX or value < -INT128_MAX:
        raise ArithmeticOverflowError(
            f"integer intermediate exceeds 128 bits: ~2^{value.bit_length()}"
        )
    return value


def _trim(coeffs: Sequence) -> tuple:
    n = len(coeffs)
    while n and not coeffs[n - 1]:
        n -= 1
    return tuple(coeffs[:n])


@dataclass(frozen=True)
class IntPoly:
    """Polynomial over Z; ``coeffs[i]`` multiplies x^i."""

    coeffs: tuple[int, ...]

    @staticmethod
    def of(*coeffs: int) -> "IntPoly":
        return IntPoly(_trim([int(c) for c in coeffs]))

    @staticmethod
    def from_coeffs(coeffs: Iterable[int]) -> "IntPoly":
        return IntPoly(_trim([int(c) for c in coeffs]))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __add__(self, other: "IntPoly") -> "IntPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = _checked(out[i] + c)
        return IntPoly(_trim(out))

    def __neg__(self) -> "IntPoly":
        return IntPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        return self + (-other)

    def __mul__(self, other: "IntPoly") -> "IntPoly":
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return IntPoly(())
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if not ca:
                continue
            for j, cb in enumerate(b):
                out[i + j] = _checked(out[i + j] + _checked(ca * cb))
        return IntPoly(_trim(out))

    def scale(self, k: int) -> "IntPoly":
        return IntPoly(_trim([_checked(c * k) for c in self.coeffs]))

    def derivative(self) -> "IntPoly":
        return IntPoly(_trim([_checked(i * c) for i, c in enumerate(self.coeffs)][1:]))

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = _checked(_checked(acc * x) + c)
        return acc

    def to_rat(self) -> "RatPoly":
        return RatPoly(tuple(Fraction(c) for c in self.coeffs))

    def __str__(self) -> str:
        return _format_poly(self.coeffs)


@dataclass(frozen=True)
class RatPoly:
    """Polynomial over Q; ``coeffs[i]`` multiplies x^i."""

    coeffs: tuple[Fraction, ...]

    @staticmethod
    def of(*coeffs) -> "RatPoly":
        return RatPoly(_trim([Fraction(c) for c in coeffs]))

    @staticmethod
    def from_coeffs(coeffs: Iterable) -> "RatPoly":
        return RatPoly(_trim([Fraction(c) for c in coeffs]))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "RatPoly") -> "RatPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return RatPoly(_trim(out))

    def __neg__(self) -> "RatPoly":
        return RatPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "RatPoly") -> "RatPoly":
        return self + (-other)

    def __mul__(self, other: "RatPoly") -> "RatPoly":
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return RatPoly(())
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if not ca:
                continue
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
        return RatPoly(_trim(out))

    def divmod(self, other: "RatPoly") -> tuple["RatPoly", "RatPoly"]:
        """Exact polynomial long division over Q."""
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dd = other.degree
        lead = other.coeffs[-1]
        quo = [Fraction(0)] * max(len(rem) - dd, 0)
        while len(rem) - 1 >= dd:
            k = len(rem) - 1 - dd
            q = rem[-1] / lead
            quo[k] = q
            for i, c in enumerate(other.coeffs):
                rem[k + i] -= q * c
            rem = list(_trim(rem))
            if not rem:
                break
        return RatPoly(_trim(quo)), RatPoly(_trim(rem))

    def mod(self, other: "RatPoly") -> "RatPoly":
        return self.divmod(other)[1]

    def compose(self, inner: "RatPoly") -> "RatPoly":
        """Return self(inner(x)) by Horner over Q."""
        acc = RatPoly(())
        for c in reversed(self.coeffs):
            acc = acc * inner + RatPoly.of(c)
        return acc

    def compose_mod(self, inner: "RatPoly", modulus: "RatPoly") -> "RatPoly":
        """Return self(inner(x)) reduced mod modulus at every Horner step."""
        acc = RatPoly(())
        for c in reversed(self.coeffs):
            acc = (acc * inner + RatPoly.of(c)).mod(modulus)
        return acc

    def denominators(self) -> set[int]:
        return {c.denominator for c in self.coeffs if c.denominator != 1}

    def __str__(self) -> str:
        return _format_poly(self.coeffs)


def _format_poly(coeffs: Sequence) -> str:
    if not coeffs:
        return "0"
    parts = []
    for i, c in enumerate(coeffs):
        if not c:
            continue
        if i == 0:
            parts.append(str(c))
        else:
            x = "x" if i == 1 else f"x^{i}"
            if c == 1:
                parts.append(x)
            elif c == -1:
                parts.append(f"-{x}")
            else:
                parts.append(f"{c}*{x}")
    return " + ".join(parts).replace("+ -", "- ")


def _content(coeffs: Sequence[int]) -> int:
    g = 0
    for c in coeffs:
        g = gcd(g, abs(c))
    return g or 1


def _pseudo_rem(a: list[int], b: list[int]) -> list[int]:
    """prem(a, b) = lc(b)^(deg a - deg b + 1) * a  mod  b, over Z.

    Division-free: each of the (delta+1) elimination steps replaces rem by
    lc(b)*rem - top*x^(k-db)*b, so the total scaling is exactly lc(b)^(delta+1)
    with no integrality assumptions along the way.
    """
    da, db = len(a) - 1, len(b) - 1
    lb = b[-1]
    rem = list(a)
    for k in range(da, db - 1, -1):
        top = rem[k]
        rem = [_checked(c * lb) for c in rem]
        if top:
            for i in range(db + 1):
                rem[k - db + i] = _checked(rem[k - db + i] - _checked(top * b[i]))
    return list(_trim(rem[:db]))


def resultant(f: IntPoly, g: IntPoly) -> int:
    """Resultant of two integer polynomials via the subresultant PRS."""
    if f.is_zero or g.is_zero:
        return 0
    if f.degree == 0:
        return _checked(f.coeffs[0] ** g.degree)
    if g.degree == 0:
        return _checked(g.coeffs[0] ** f.degree)

    a, b = list(f.coeffs), list(g.coeffs)
    sign = 1
    if len(a) < len(b):
        if (len(a) - 1) % 2 == 1 and (len(b) - 1) % 2 == 1:
            sign = -sign
        a, b = b, a
    ca, cb = _content(a), _content(b)
    a = [c // ca for c in a]
    b = [c // cb for c in b]
    scale = _checked(_checked(ca ** (len(b) - 1)) * _checked(cb ** (len(a) - 1)))

    gg, h = 1, 1
    while True:
        da, db = len(a) - 1, len(b) - 1
        delta = da - db
        if da % 2 == 1 and db % 2 == 1:
            sign = -sign
        rem = _pseudo_rem(a, b)
        if not rem:
            return 0
        divisor = _checked(gg * _checked(h**delta))
        nxt = []
        for c in rem:
            q, r = divmod(c, divisor)
            assert r == 0, "subresultant division not exact"
            nxt.append(q)
        a, b = b, nxt
        gg = a[-1]
        if delta > 0:
            num = _checked(gg**delta)
            q, r = divmod(num, _checked(h ** (delta - 1)))
            assert r == 0
            h = q
        if len(b) - 1 <= 0:
            break

    # b is now a nonzero constant; finish with h <- lc(b)^deg(a) / h^(deg(a)-1)
    da = len(a) - 1
    num = _checked(b[0] ** da)
    q, r = divmod(num, _checked(h ** (da - 1)))
    assert r == 0
    return _checked(sign * _checked(scale * q))


def discriminant(f: IntPoly) -> int:
    """Discriminant of f: (-1)^(n(n-1)/2) * res(f, f') / lc(f).

    For degree 1 the product over root pairs is empty and the value is 1.
    """
    n = f.degree
    if n < 1:
        raise ValueError("discriminant needs degree >= 1")
    if n == 1:
        return 1
    r = resultant(f, f.derivative())
    q, rem = divmod(r, f.leading)
    assert rem == 0, "resultant not divisible by leading coefficient"
    return -q if (n * (n - 1) // 2) % 2 else q


def reduce_mod_p(h: RatPoly | IntPoly, p: int) -> list[int]:
    """Coefficients of h mod p, constant first, trailing zeros trimmed.

    Raises DenominatorNotInvertibleError when a denominator shares a factor
    with p (the caller decides whether that means skip or refuse).
    """
    if isinstance(h, IntPoly):
        return list(_trim([c % p for c in h.coeffs]))
    out = []
    for c in h.coeffs:
        den = c.denominator % p
        if den == 0:
            raise DenominatorNotInvertibleError(
                f"denominator {c.denominator} not invertible mod {p}"
            )
        out.append((c.numerator % p) * pow(den, -1, p) % p)
    return list(_trim(out))


def validate_embedding(h: RatPoly, f_src: IntPoly, f_dst: IntPoly) -> bool:
    """True iff f_src(h(x)) ≡ 0 (mod f_dst) over Q.

    That is exactly the condition for x ↦ h(x) to send the generator root of
    f_dst's field to a root of f_src, i.e. for h to define a field embedding
    of the source field into the destination field.
    """
    if h.degree >= f_dst.degree:
        raise ValueError("embedding polynomial must have degree < deg f_dst")
    image = f_src.to_rat().compose_mod(h, f_dst.to_rat())
    return image.is_zero
