"""The declared lattice of number fields: parsing, validation, navigation.

A lattice is a set of monogenic fields Z[α] given by monic integer
polynomials, together with declared embeddings (the image of a source
generator as a rational polynomial in the destination generator),
automorphisms, Galois marks, and declared Galois closures.  The rational
base field Q is implicit in every lattice as the degree-1 field with
defining polynomial x, zero embedding into everything, and identity
self-embeddings throughout.

Nothing is computed over Q beyond exact polynomial identities: closures and
composita are *declared* and the loader verifies each declaration
(root-map identities, group closure, degree bookkeeping) rather than
deriving it.  Predicates downstream only ever evaluate at primes away from
each pair's excluded set — primes dividing a discriminant or an embedding
denominator — and those sets are surfaced in the validation report.

Configuration format (line-oriented, ``#`` comments)::

    field <name>
      poly c0 c1 ... cn          # constant-first integers, cn = 1
    embed <src> -> <dst>
      map c0 c1 ...              # tokens integer or num/den
    auto <field>
      map c0 c1 ...
    closure <field> -> <galois-field-name>
    galois <field>               # assertion: #automorphisms == degree
    trusted <field>              # skip the irreducibility certificate

Unknown directives are errors, not warnings.  Names may be declared after
first use; resolution happens once the whole document is read.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    AutomorphismGroupError,
    EmbeddingInvalidError,
    LatticeSyntaxError,
    UnknownFieldError,
)
from .intpoly import IntPoly, RatPoly, discriminant, validate_embedding
from .sieve import stream_primes

CERTIFICATE_PRIME_BOUND = 200

BASE_NAME = "Q"


@dataclass(frozen=True)
class NumberField:
    name: str
    poly: IntPoly
    disc: int
    trusted: bool = False
    certificate_prime: int | None = None

    @property
    def degree(self) -> int:
        return self.poly.degree


@dataclass(frozen=True)
class Embedding:
    src: str
    dst: str
    h: RatPoly

    def denominator_primes(self) -> frozenset[int]:
        out: set[int] = set()
        for den in self.h.denominators():
            out.update(prime_factors(den))
        return frozenset(out)


@dataclass(frozen=True)
class Automorphism:
    field: str
    h: RatPoly

    def __str__(self) -> str:
        return f"{self.field}: x -> {self.h}"


@dataclass(frozen=True)
class Extension:
    """A relative extension K/L realized by a declared embedding L -> K."""

    field: NumberField
    base: NumberField
    emb: Embedding

    @property
    def rel_degree(self) -> int:
        return self.field.degree // self.base.degree

    @property
    def name(self) -> str:
        return f"{self.field.name}/{self.base.name}"

    def excluded_primes(self) -> frozenset[int]:
        out = set(prime_factors(abs(self.field.disc)))
        out.update(prime_factors(abs(self.base.disc)))
        out.update(self.emb.denominator_primes())
        return frozenset(out)

    def is_excluded(self, p: int) -> bool:
        if self.field.disc % p == 0 or self.base.disc % p == 0:
            return True
        return any(den % p == 0 for den in self.emb.h.denominators())


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of |n| by trial division (desk-scale inputs)."""
    n = abs(n)
    out = []
    for d in [2, 3, 5]:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
    d = 7
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 2
    if n > 1:
        out.append(n)
    return out


class LatticeConfig:
    """Immutable (after load) view of the declared lattice."""

    def __init__(self, fields, embeddings, automorphisms, closures, galois_marks):
        self.fields: dict[str, NumberField] = fields
        self.embeddings: dict[tuple[str, str], Embedding] = embeddings
        self.automorphisms: dict[str, tuple[Automorphism, ...]] = automorphisms
        self.closures: dict[str, str] = closures
        self.galois_marks: frozenset[str] = frozenset(galois_marks)

    def field(self, name: str) -> NumberField:
        try:
            return self.fields[name]
        except KeyError:
            raise UnknownFieldError(f"field {name!r} is not declared") from None

    def embedding(self, src: str, dst: str) -> Embedding:
        """Declared embedding src -> dst, or an implicit one (Q -> K, K -> K)."""
        fs, fd = self.field(src), self.field(dst)
        if (src, dst) in self.embeddings:
            return self.embeddings[(src, dst)]
        if src == dst:
            return Embedding(src, dst, RatPoly.of(0, 1))
        if src == BASE_NAME:
            return Embedding(src, dst, RatPoly.of())
        raise UnknownFieldError(
            f"no declared embedding {src} -> {dst} (degrees {fs.degree}, {fd.degree})"
        )

    def extension(self, spec: str | tuple[str, str]) -> Extension:
        """Extension from a 'K/L' string or a (field, base) pair."""
        if isinstance(spec, str):
            if spec.count("/") != 1:
                raise UnknownFieldError(f"extension spec {spec!r} is not of the form K/L")
            top, base = (part.strip() for part in spec.split("/"))
        else:
            top, base = spec
        emb = self.embedding(base, top)
        return Extension(self.field(top), self.field(base), emb)

    def autos(self, name: str) -> tuple[Automorphism, ...]:
        self.field(name)
        return self.automorphisms.get(name, ())

    def automorphisms_fixing(self, name: str, base: str) -> tuple[Automorphism, ...]:
        """Declared automorphisms of `name` that fix the image of `base`."""
        emb = self.embedding(base, name)
        fmod = self.field(name).poly.to_rat()
        out = []
        for sigma in self.autos(name):
            if emb.h.compose_mod(sigma.h, fmod) == emb.h:
                out.append(sigma)
        return tuple(out)

    def closure_of(self, name: str) -> str | None:
        self.field(name)
        return self.closures.get(name)

    def is_galois(self, name: str) -> bool:
        return name in self.galois_marks


def _base_field() -> NumberField:
    return NumberField(BASE_NAME, IntPoly.of(0, 1), disc=1, trusted=True, certificate_prime=None)


_SMALL_PRIMES: list[int] | None = None


def _certificate_primes() -> list[int]:
    global _SMALL_PRIMES
    if _SMALL_PRIMES is None:
        _SMALL_PRIMES = list(stream_primes(CERTIFICATE_PRIME_BOUND))
    return _SMALL_PRIMES


def _parse_map_token(tok: str, lineno: int) -> Fraction:
    try:
        if "/" in tok:
            num, den = tok.split("/", 1)
            return Fraction(int(num), int(den))
        return Fraction(int(tok))
    except (ValueError, ZeroDivisionError):
        raise LatticeSyntaxError(f"bad coefficient token {tok!r}", lineno) from None


def load_lattice(text: str) -> LatticeConfig:
    """Parse and fully validate a lattice configuration document."""
    raw_fields: dict[str, tuple[list[int], int, int]] = {}  # name -> (coeffs, declared_at, poly_line)
    raw_embeds: list[tuple[str, str, RatPoly, int]] = []
    raw_autos: list[tuple[str, RatPoly, int]] = []
    raw_closures: list[tuple[str, str, int]] = []
    raw_galois: list[tuple[str, int]] = []
    raw_trusted: list[tuple[str, int]] = []

    pending: tuple | None = None  # ("poly", name) or ("map", kind, payload)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        head = toks[0]
        if pending is not None:
            want = "poly" if pending[0] == "poly" else "map"
            if head != want:
                raise LatticeSyntaxError(
                    f"expected '{want}' line for preceding '{pending[2]}'", lineno
                )
            coeffs = [_parse_map_token(t, lineno) for t in toks[1:]]
            if not coeffs:
                raise LatticeSyntaxError("empty coefficient list", lineno)
            if pending[0] == "poly":
                name = pending[1]
                if any(c.denominator != 1 for c in coeffs):
                    raise LatticeSyntaxError("poly coefficients must be integers", lineno)
                ints = [int(c) for c in coeffs]
                if len(ints) < 2 or ints[-1] != 1:
                    raise LatticeSyntaxError(
                        "poly must be monic of degree >= 1 (constant first, last = 1)", lineno
                    )
                raw_fields[name] = (ints, pending[3], lineno)
            else:
                kind, payload = pending[1], pending[3]
                h = RatPoly.from_coeffs(coeffs)
                if kind == "embed":
                    raw_embeds.append((payload[0], payload[1], h, lineno))
                else:
                    raw_autos.append((payload, h, lineno))
            pending = None
            continue

        if head == "field":
            if len(toks) != 2:
                raise LatticeSyntaxError("usage: field <name>", lineno)
            name = toks[1]
            if name == BASE_NAME:
                raise LatticeSyntaxError(f"{BASE_NAME} is implicit and cannot be redeclared", lineno)
            if name in raw_fields:
                raise LatticeSyntaxError(f"duplicate field {name!r}", lineno)
            pending = ("poly", name, f"field {name}", lineno)
        elif head == "embed":
            if len(toks) != 4 or toks[2] != "->":
                raise LatticeSyntaxError("usage: embed <src> -> <dst>", lineno)
            pending = ("map", "embed", f"embed {toks[1]} -> {toks[3]}", (toks[1], toks[3]))
        elif head == "auto":
            if len(toks) != 2:
                raise LatticeSyntaxError("usage: auto <field>", lineno)
            pending = ("map", "auto", f"auto {toks[1]}", toks[1])
        elif head == "closure":
            if len(toks) != 4 or toks[2] != "->":
                raise LatticeSyntaxError("usage: closure <field> -> <galois-field>", lineno)
            raw_closures.append((toks[1], toks[3], lineno))
        elif head == "galois":
            if len(toks) != 2:
                raise LatticeSyntaxError("usage: galois <field>", lineno)
            raw_galois.append((toks[1], lineno))
        elif head == "trusted":
            if len(toks) != 2:
                raise LatticeSyntaxError("usage: trusted <field>", lineno)
            raw_trusted.append((toks[1], lineno))
        elif head in ("poly", "map"):
            raise LatticeSyntaxError(f"'{head}' line without a preceding directive", lineno)
        else:
            raise LatticeSyntaxError(f"unknown directive {head!r}", lineno)

    if pending is not None:
        want = "poly" if pending[0] == "poly" else "map"
        raise LatticeSyntaxError(f"document ends while '{pending[2]}' still needs a '{want}' line")

    return _assemble(raw_fields, raw_embeds, raw_autos, raw_closures, raw_galois, raw_trusted)


def _assemble(raw_fields, raw_embeds, raw_autos, raw_closures, raw_galois, raw_trusted):
    from . import modpoly as mp
    from .intpoly import reduce_mod_p

    trusted_names = {}
    for name, lineno in raw_trusted:
        if name not in raw_fields:
            raise LatticeSyntaxError(f"trusted: unknown field {name!r}", lineno)
        trusted_names[name] = lineno

    fields: dict[str, NumberField] = {BASE_NAME: _base_field()}
    for name, (ints, _decl_line, poly_line) in raw_fields.items():
        poly = IntPoly.from_coeffs(ints)
        cert = None
        if name not in trusted_names:
            for p in _certificate_primes():
                fbar = reduce_mod_p(poly, p)
                if len(fbar) == len(poly.coeffs) and mp.is_irreducible(fbar, p):
                    cert = p
                    break
            if cert is None:
                raise LatticeSyntaxError(
                    f"no irreducibility certificate for {name!r} mod any prime <= "
                    f"{CERTIFICATE_PRIME_BOUND}; declare 'trusted {name}' if intended",
                    poly_line,
                )
        fields[name] = NumberField(
            name, poly, disc=discriminant(poly), trusted=name in trusted_names, certificate_prime=cert
        )

    def need(name, lineno):
        if name not in fields:
            raise LatticeSyntaxError(f"unknown field {name!r}", lineno)
        return fields[name]

    embeddings: dict[tuple[str, str], Embedding] = {}
    for src, dst, h, lineno in raw_embeds:
        fs, fd = need(src, lineno), need(dst, lineno)
        if src == dst:
            if h != RatPoly.of(0, 1):
                raise EmbeddingInvalidError(f"self-embedding {src} -> {dst} must be the identity")
            continue
        if (src, dst) in embeddings:
            raise LatticeSyntaxError(f"duplicate embedding {src} -> {dst}", lineno)
        if fd.degree % fs.degree != 0:
            raise EmbeddingInvalidError(
                f"embed {src} -> {dst}: degree {fs.degree} does not divide {fd.degree}"
            )
        try:
            ok = validate_embedding(h, fs.poly, fd.poly)
        except ValueError as exc:
            raise EmbeddingInvalidError(f"embed {src} -> {dst}: {exc}") from None
        if not ok:
            raise EmbeddingInvalidError(
                f"embed {src} -> {dst}: map does not send a root of {fs.poly} into {fd.poly}"
            )
        embeddings[(src, dst)] = Embedding(src, dst, h)

    # acyclicity over distinct names
    graph: dict[str, list[str]] = {}
    for src, dst in embeddings:
        graph.setdefault(src, []).append(dst)
    state: dict[str, int] = {}

    def visit(node):
        state[node] = 1
        for nxt in graph.get(node, ()):
            st = state.get(nxt)
            if st == 1:
                raise EmbeddingInvalidError(f"embedding cycle through {nxt!r}")
            if st is None:
                visit(nxt)
        state[node] = 2

    for node in graph:
        if node not in state:
            visit(node)

    # declared two-step compositions must match declared one-step maps
    for (a, b), e_ab in embeddings.items():
        for (b2, c), e_bc in embeddings.items():
            if b2 != b or (a, c) not in embeddings:
                continue
            f_c = fields[c].poly.to_rat()
            composed = e_ab.h.compose_mod(e_bc.h, f_c)
            if composed != embeddings[(a, c)].h:
                raise EmbeddingInvalidError(
                    f"embeddings {a} -> {b} -> {c} compose to {composed}, but "
                    f"{a} -> {c} is declared as {embeddings[(a, c)].h}"
                )

    automorphisms: dict[str, list[Automorphism]] = {}
    for name, h, lineno in raw_autos:
        fld = need(name, lineno)
        try:
            ok = validate_embedding(h, fld.poly, fld.poly)
        except ValueError:
            ok = False
        if not ok:
            raise AutomorphismGroupError(f"auto {name}: {h} is not a root map of {fld.poly}")
        automorphisms.setdefault(name, []).append(Automorphism(name, h))

    for name, sigmas in automorphisms.items():
        fmod = fields[name].poly.to_rat()
        seen = {s.h.coeffs for s in sigmas}
        if len(seen) != len(sigmas):
            raise AutomorphismGroupError(f"auto {name}: duplicate map declared")
        identity = RatPoly.of(0, 1).coeffs
        if identity not in seen:
            raise AutomorphismGroupError(f"auto {name}: identity map is not declared")
        for s in sigmas:
            for t in sigmas:
                comp = s.h.compose_mod(t.h, fmod)
                if comp.coeffs not in seen:
                    raise AutomorphismGroupError(
                        f"auto {name}: composition {s.h} o {t.h} = {comp} is not declared"
                    )
        # invertibility: some power is the identity
        for s in sigmas:
            power = s.h
            for _ in range(len(sigmas)):
                if power.coeffs == identity:
                    break
                power = power.compose_mod(s.h, fmod)
            else:
                raise AutomorphismGroupError(f"auto {name}: {s.h} has no finite order")

    galois_marks = set()
    for name, lineno in raw_galois:
        fld = need(name, lineno)
        count = len(automorphisms.get(name, []))
        if count != fld.degree:
            raise AutomorphismGroupError(
                f"galois {name}: {count} automorphisms declared, degree is {fld.degree}"
            )
        galois_marks.add(name)

    closures: dict[str, str] = {}
    for src, dst, lineno in raw_closures:
        need(src, lineno)
        need(dst, lineno)
        if src in closures:
            raise LatticeSyntaxError(f"duplicate closure for {src!r}", lineno)
        if dst not in galois_marks:
            raise AutomorphismGroupError(f"closure {src} -> {dst}: target is not declared galois")
        if src != dst and (src, dst) not in embeddings:
            raise EmbeddingInvalidError(f"closure {src} -> {dst}: no embedding {src} -> {dst}")
        closures[src] = dst

    auto_tuples = {k: tuple(v) for k, v in automorphisms.items()}
    return LatticeConfig(fields, embeddings, auto_tuples, closures, galois_marks)


# ---------------------------------------------------------------------------
# diagnostics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldDiagnostic:
    name: str
    degree: int
    disc: int
    certificate: str
    galois: bool
    closure: str | None


@dataclass(frozen=True)
class PairDiagnostic:
    extension: str
    excluded: tuple[int, ...]


@dataclass(frozen=True)
class LatticeReport:
    fields: tuple[FieldDiagnostic, ...]
    pairs: tuple[PairDiagnostic, ...]

    def render(self) -> str:
        lines = []
        for f in self.fields:
            flags = []
            if f.galois:
                flags.append("galois")
            if f.closure:
                flags.append(f"closure={f.closure}")
            lines.append(
                f"field {f.name}: degree {f.degree}, disc {f.disc}, "
                f"certificate {f.certificate}"
                + (", " + ", ".join(flags) if flags else "")
            )
        for pr in self.pairs:
            shown = ", ".join(str(p) for p in pr.excluded) if pr.excluded else "none"
            lines.append(f"pair {pr.extension}: excluded primes {{{shown}}}")
        return "\n".join(lines)


def validate_lattice(cfg: LatticeConfig) -> LatticeReport:
    """Report-only diagnostics: certificates, Galois flags, excluded primes."""
    fields = []
    for name in sorted(cfg.fields):
        f = cfg.fields[name]
        if name == BASE_NAME:
            cert = "base field"
        elif f.trusted:
            cert = "trusted"
        else:
            cert = f"irreducible mod {f.certificate_prime}"
        fields.append(
            FieldDiagnostic(
                name=name,
                degree=f.degree,
                disc=f.disc,
                certificate=cert,
                galois=cfg.is_galois(name),
                closure=cfg.closure_of(name),
            )
        )
    pairs = []
    seen = set()
    for name in sorted(cfg.fields):
        if name != BASE_NAME:
            seen.add((name, BASE_NAME))
    for src, dst in sorted(cfg.embeddings):
        seen.add((dst, src))
    for top, base in sorted(seen):
        ext = cfg.extension((top, base))
        pairs.append(PairDiagnostic(ext.name, tuple(sorted(ext.excluded_primes()))))
    return LatticeReport(tuple(fields), tuple(pairs))
