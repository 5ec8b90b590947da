"""Points over a rational prime: splitting, residue fields, Pi/Psi predicates.

For a field K = Z[α] in the lattice, the points over a rational prime p are
the irreducible factors of f_K mod p.  Each point carries a residue field
F_p[t]/(g) together with the naming map that sends a polynomial expression
in α to its class mod (p, g) — evaluation and membership questions all
reduce to that map.

Two families of predicates live here.  Pointwise ones relate a point of K
to a point of L along a declared embedding: ``lies_over``,
``relative_degree`` and the multiplicity bound ``pn_holds``.  Fibrewise
ones quantify over all points of K above a fixed point of L: ``in_pi``
(some point has relative degree 1) and ``in_psi`` (all do).  The fibrewise
predicates are computed directly over the residue field of the base point
— count the roots of f_K that restrict correctly — while
``in_pi_absolute``/``in_psi_absolute`` re-derive them from the full
splitting as an independent cross-check.

Ramified primes (dividing a discriminant or an embedding denominator) are
represented honestly as points with ``ramified_flag`` set, but every
predicate refuses them: the residue data of a non-maximal order at such p
does not determine the answer.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import modpoly as mp
from .errors import InvalidPrimeError, NotLyingOverError, RamifiedPrimeError
from .finitefield import FqElement, FqField, fq_factor, fq_minpoly, fq_roots, is_prime, poly_over
from .intpoly import IntPoly, RatPoly, reduce_mod_p
from .lattice import Extension, NumberField


@dataclass(frozen=True)
class SplitPrime:
    """One point of K over the rational prime p."""

    field: str
    p: int
    local_factor: tuple[int, ...]
    e: int
    ramified_flag: bool

    @property
    def residue_degree(self) -> int:
        return len(self.local_factor) - 1

    @property
    def order(self) -> int:
        """Size of the residue field, p^residue_degree."""
        return self.p ** self.residue_degree

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.local_factor):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                var = "t" if i == 1 else f"t^{i}"
                terms.append(var if c == 1 else f"{c}*{var}")
        poly = " + ".join(terms) if terms else "0"
        tag = ", ramified" if self.ramified_flag else ""
        return f"({self.p}, {poly}) in {self.field}{tag}"


@dataclass(frozen=True)
class ResidueField:
    """Residue field at a point, with the naming map from Z[α]."""

    base: SplitPrime
    fq: FqField

    def name(self, gamma: IntPoly | RatPoly | int) -> FqElement:
        """Class of γ(α) mod (p, local_factor).

        Rational coefficients are allowed as long as their denominators are
        invertible mod p (embedding images need this).
        """
        if isinstance(gamma, int):
            gamma = IntPoly.of(gamma)
        coeffs = reduce_mod_p(gamma, self.base.p)
        return self.fq.element(coeffs)


@functools.lru_cache(maxsize=512)
def _residue_fq(p: int, modulus: tuple[int, ...]) -> FqField:
    return FqField(p, modulus)


def residue_field(pK: SplitPrime) -> ResidueField:
    return ResidueField(pK, _residue_fq(pK.p, pK.local_factor))


def residue_name(pK: SplitPrime, gamma: IntPoly | RatPoly | int) -> FqElement:
    return residue_field(pK).name(gamma)


def split_prime(field: NumberField, p: int) -> list[SplitPrime]:
    """All points of `field` over p, in canonical (degree, value) order."""
    if not is_prime(p):
        raise InvalidPrimeError(f"{p} is not prime")
    fbar = reduce_mod_p(field.poly, p)
    prime_fld = FqField(p, (0, 1), _checked=True)
    out = []
    for coeffs, mult in fq_factor(poly_over(prime_fld, fbar)):
        g = tuple(c.rep[0] for c in coeffs)
        out.append(
            SplitPrime(
                field=field.name,
                p=p,
                local_factor=g,
                e=mult,
                ramified_flag=field.disc % p == 0,
            )
        )
    return out


def _eval_ints(coeffs: Sequence[int], x: FqElement) -> FqElement:
    fld = x.field
    acc = fld.zero
    for c in reversed(coeffs):
        acc = acc * x + fld.element(c)
    return acc


def _check_related(pK: SplitPrime, pL: SplitPrime, emb) -> None:
    if emb.src != pL.field or emb.dst != pK.field:
        raise NotLyingOverError(
            f"embedding {emb.src} -> {emb.dst} does not relate points of "
            f"{pL.field} and {pK.field}"
        )
    if pK.p != pL.p:
        raise NotLyingOverError(f"points sit over different rational primes {pK.p}, {pL.p}")


def lies_over(pK: SplitPrime, pL: SplitPrime, emb) -> bool:
    """Does the point of K restrict to the point of L along emb?

    True iff pL's local factor vanishes at the name of the embedded
    generator, i.e. the naming kernels agree on the subring.
    """
    _check_related(pK, pL, emb)
    image = residue_name(pK, emb.h)
    return _eval_ints(pL.local_factor, image) == image.field.zero


def relative_degree(pK: SplitPrime, pL: SplitPrime, emb) -> int:
    """Residue-field extension degree [F_pK : F_pL]."""
    if not lies_over(pK, pL, emb):
        raise NotLyingOverError(f"{pK} does not lie over {pL}")
    image = residue_name(pK, emb.h)
    sub = len(fq_minpoly(image)) - 1
    return pK.residue_degree // sub


def primes_over(ext: Extension, pL: SplitPrime) -> list[SplitPrime]:
    """Points of ext.field restricting to pL, in canonical order."""
    return [pK for pK in split_prime(ext.field, pL.p) if lies_over(pK, pL, ext.emb)]


def pn_holds(pK: SplitPrime, pL: SplitPrime, emb, n: int) -> bool:
    """Multiplicity bound: (|pK|-1)/(|pL|-1) <= n.

    The quotient is the size of every nonzero fibre of the norm projection,
    so this bounds how many names above collapse onto one name below.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    if not lies_over(pK, pL, emb):
        raise NotLyingOverError(f"{pK} does not lie over {pL}")
    qk, ql = pK.order, pL.order
    assert (qk - 1) % (ql - 1) == 0
    return (qk - 1) // (ql - 1) <= n


# ---------------------------------------------------------------------------
# fibrewise predicates
# ---------------------------------------------------------------------------


def _refuse_excluded(ext: Extension, pL: SplitPrime) -> None:
    if pL.field != ext.base.name:
        raise NotLyingOverError(
            f"point of {pL.field} is not a base point for {ext.name}"
        )
    if pL.ramified_flag or ext.is_excluded(pL.p):
        raise RamifiedPrimeError(f"prime {pL.p} is excluded for {ext.name}")


def compatible_root_count(ext: Extension, pL: SplitPrime) -> int:
    """Number of roots of f_K in F_pL whose restriction names pL.

    Each such root is a point of K over pL with relative degree 1, so this
    count is what in_pi/in_psi threshold.
    """
    _refuse_excluded(ext, pL)
    fld = residue_field(pL).fq
    fpoly = poly_over(fld, reduce_mod_p(ext.field.poly, pL.p))
    hbar = reduce_mod_p(ext.emb.h, pL.p)
    target = fld.gen
    count = 0
    for x in fq_roots(fpoly):
        if _eval_ints(hbar, x) == target:
            count += 1
    return count


def in_pi(ext: Extension, pL: SplitPrime) -> bool:
    """Some point of K over pL has relative degree 1."""
    return compatible_root_count(ext, pL) >= 1


def in_psi(ext: Extension, pL: SplitPrime) -> bool:
    """Every point of K over pL has relative degree 1 (full splitting)."""
    return compatible_root_count(ext, pL) == ext.rel_degree


def in_pi_absolute(ext: Extension, pL: SplitPrime) -> bool:
    """Slow route for in_pi via the full splitting of K; cross-check only."""
    _refuse_excluded(ext, pL)
    return any(relative_degree(pK, pL, ext.emb) == 1 for pK in primes_over(ext, pL))


def in_psi_absolute(ext: Extension, pL: SplitPrime) -> bool:
    """Slow route for in_psi via the full splitting of K; cross-check only."""
    _refuse_excluded(ext, pL)
    above = primes_over(ext, pL)
    assert above, "an unramified base point always has points above it"
    return all(relative_degree(pK, pL, ext.emb) == 1 for pK in above)


def fingerprint(pL: SplitPrime, family: Iterable[Extension]) -> tuple[bool, ...]:
    """in_pi membership bits of pL across an ordered family of extensions."""
    bits = []
    for ext in family:
        try:
            bits.append(in_pi(ext, pL))
        except RamifiedPrimeError:
            raise RamifiedPrimeError(
                f"prime {pL.p} is excluded for family member {ext.name}"
            ) from None
    return tuple(bits)


# ---------------------------------------------------------------------------
# prime-field fast paths (used by scans; no field objects, no allocation)
# ---------------------------------------------------------------------------


def pi_psi_flags(fbar: list[int], p: int) -> tuple[bool, bool]:
    """(in_pi, in_psi) of K/Q at unramified p from the root count alone."""
    r = mp.root_count(fbar, p)
    return r >= 1, r == mp.deg(fbar)


def degree_pattern(field: NumberField, p: int) -> tuple[int, ...]:
    """Multiset of residue degrees over an unramified p, ascending."""
    if field.disc % p == 0:
        raise RamifiedPrimeError(f"prime {p} ramifies in {field.name}")
    fbar = reduce_mod_p(field.poly, p)
    n = mp.deg(fbar)
    if n <= 3:
        r = mp.root_count(fbar, p)
        if n == 1:
            return (1,)
        if n == 2:
            return (1, 1) if r == 2 else (2,)
        if r == 3:
            return (1, 1, 1)
        return (1, 2) if r == 1 else (3,)
    return tuple(mp.degree_pattern(fbar, p))
