"""Natural-density scans over prime spectra, with Chebotarev predictions.

Set expressions are boolean combinations of the membership predicates
``Pi(K/L)`` and ``Psi(K/L)`` (all atoms over one common base field) plus
finite sets of rational primes.  ``estimate_density`` counts how often an
expression holds over the primes of the base spectrum up to a bound, with a
convergence trace at powers of ten.  ``chebotarev_predict`` computes the
exact expected density by counting automorphisms of a declared Galois
closure, when the lattice declares enough data.  The ``check_*`` functions
are finite-truncation verifiers for the structural identities the rest of
the package relies on; they report what they find and adjudicate nothing.

Scans partition the prime list into fixed-size chunks merged by counter
addition, so results are identical for any worker count.
"""

from __future__ import annotations

import bisect
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence, Union

from . import plane
from . import spectrum as sp
from .errors import ExprSyntaxError, UnknownFieldError
from .lattice import BASE_NAME, Extension, LatticeConfig, NumberField
from .sieve import stream_primes

CHECKPOINT_START = 100
CHUNK_PRIMES = 4096

# --------------------------------------------------------------------------
# expression AST


@dataclass(frozen=True)
class PiAtom:
    ext: Extension


@dataclass(frozen=True)
class PsiAtom:
    ext: Extension


@dataclass(frozen=True)
class PrimeSet:
    """All points of the base spectrum lying over the listed primes."""

    primes: tuple[int, ...]


@dataclass(frozen=True)
class Not:
    inner: "Node"


@dataclass(frozen=True)
class And:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Or:
    left: "Node"
    right: "Node"


Node = Union[PiAtom, PsiAtom, PrimeSet, Not, And, Or]


@dataclass(frozen=True)
class SetExpr:
    node: Node
    base: NumberField
    source: str

    def atoms(self) -> tuple[Union[PiAtom, PsiAtom], ...]:
        out: list[Union[PiAtom, PsiAtom]] = []
        _walk_atoms(self.node, out)
        return tuple(out)


def _walk_atoms(node: Node, out: list) -> None:
    if isinstance(node, (PiAtom, PsiAtom)):
        out.append(node)
    elif isinstance(node, Not):
        _walk_atoms(node.inner, out)
    elif isinstance(node, (And, Or)):
        _walk_atoms(node.left, out)
        _walk_atoms(node.right, out)


def _eval_node(node: Node, atom_fn: Callable) -> bool:
    """Evaluate a boolean tree; ``atom_fn`` decides the leaves."""
    if isinstance(node, Not):
        return not _eval_node(node.inner, atom_fn)
    if isinstance(node, And):
        return _eval_node(node.left, atom_fn) and _eval_node(node.right, atom_fn)
    if isinstance(node, Or):
        return _eval_node(node.left, atom_fn) or _eval_node(node.right, atom_fn)
    return atom_fn(node)


# --------------------------------------------------------------------------
# parser

_PUNCT = ("|", "&", "!", "(", ")", "{", "}", "/", ",")


class _Tok:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind: str, text: str, pos: int):
        self.kind = kind
        self.text = text
        self.pos = pos


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c in _PUNCT:
            toks.append(_Tok(c, c, i))
            i += 1
        elif c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(_Tok("int", text[i:j], i))
            i = j
        elif c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(_Tok("name", text[i:j], i))
            i = j
        else:
            raise ExprSyntaxError(f"unexpected character {c!r}", i)
    toks.append(_Tok("end", "", n))
    return toks


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class _Parser:
    def __init__(self, text: str, cfg: LatticeConfig):
        self.text = text
        self.cfg = cfg
        self.toks = _tokenize(text)
        self.i = 0
        self.base: str | None = None

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self, kind: str) -> _Tok:
        t = self.toks[self.i]
        if t.kind != kind:
            want = "end of input" if kind == "end" else repr(kind)
            raise ExprSyntaxError(f"expected {want}, found {t.text or 'end of input'!r}", t.pos)
        self.i += 1
        return t

    def expr(self) -> Node:
        node = self.term()
        while self.peek().kind == "|":
            self.take("|")
            node = Or(node, self.term())
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.peek().kind == "&":
            self.take("&")
            node = And(node, self.factor())
        return node

    def factor(self) -> Node:
        t = self.peek()
        if t.kind == "!":
            self.take("!")
            return Not(self.factor())
        if t.kind == "(":
            self.take("(")
            node = self.expr()
            self.take(")")
            return node
        return self.atom()

    def atom(self) -> Node:
        t = self.peek()
        if t.kind == "{":
            self.take("{")
            primes = [self.prime()]
            while self.peek().kind == ",":
                self.take(",")
                primes.append(self.prime())
            self.take("}")
            return PrimeSet(tuple(sorted(set(primes))))
        if t.kind == "name" and t.text in ("Pi", "Psi"):
            self.take("name")
            self.take("(")
            top = self.take("name").text
            self.take("/")
            base = self.take("name").text
            self.take(")")
            if self.base is None:
                self.base = base
            elif self.base != base:
                raise ExprSyntaxError(
                    f"mixed base fields: {self.base!r} and {base!r}", t.pos
                )
            ext = self.cfg.extension((top, base))
            return PiAtom(ext) if t.text == "Pi" else PsiAtom(ext)
        raise ExprSyntaxError(
            f"expected Pi, Psi, or a prime set, found {t.text or 'end of input'!r}", t.pos
        )

    def prime(self) -> int:
        t = self.take("int")
        p = int(t.text)
        if not _is_prime(p):
            raise ExprSyntaxError(f"{p} is not prime", t.pos)
        return p


def parse_set_expr(text: str, cfg: LatticeConfig) -> SetExpr:
    """Parse a set expression against a lattice.

    Grammar: ``expr := term ('|' term)*``, ``term := factor ('&' factor)*``,
    ``factor := '!' factor | '(' expr ')' | atom``,
    ``atom := ('Pi'|'Psi') '(' name '/' name ')' | '{' p (',' p)* '}'``.
    """
    parser = _Parser(text, cfg)
    node = parser.expr()
    parser.take("end")
    base = cfg.field(parser.base if parser.base is not None else BASE_NAME)
    return SetExpr(node, base, text)


# --------------------------------------------------------------------------
# scan engine


@dataclass(frozen=True)
class TraceRow:
    bound: int
    hits: int
    total: int

    @property
    def density(self) -> float:
        return self.hits / self.total if self.total else 0.0


@dataclass(frozen=True)
class DensityEstimate:
    n: int
    hits: int
    total: int
    skipped: tuple[tuple[str, int], ...]
    trace: tuple[TraceRow, ...]

    @property
    def value(self) -> float:
        return self.hits / self.total if self.total else 0.0

    def __str__(self) -> str:
        skips = ", ".join(f"{k}={v}" for k, v in self.skipped) or "none"
        return (
            f"{self.hits}/{self.total} = {self.value:.6f} over primes <= {self.n}"
            f" (skipped: {skips})"
        )


def trace_csv(est: DensityEstimate) -> str:
    """Convergence trace as CSV: header ``N,hits,total,density``, LF rows."""
    lines = ["N,hits,total,density"]
    for row in est.trace:
        lines.append(f"{row.bound},{row.hits},{row.total},{row.density:.6f}")
    return "\n".join(lines) + "\n"


def _checkpoints(n: int) -> tuple[int, ...]:
    out = []
    c = CHECKPOINT_START
    while c < n:
        out.append(c)
        c *= 10
    out.append(n)
    return tuple(out)


def _skip_sets(exprs: Sequence[SetExpr]) -> tuple[tuple[int, ...], frozenset[int]]:
    """(discriminants, denominator primes) whose divisibility excludes p."""
    discs = []
    dens: set[int] = set()
    for expr in exprs:
        for atom in expr.atoms():
            ext = atom.ext
            for d in (ext.field.disc, ext.base.disc):
                if d not in (1, -1) and d not in discs:
                    discs.append(d)
            dens |= ext.emb.denominator_primes()
    return tuple(discs), frozenset(dens)


def _quad_flags(c0: int, c1: int, p: int) -> tuple[bool, bool]:
    # unramified quadratic: split iff the discriminant is a square mod p
    if p == 2:
        r = (c0 % 2 == 0) + ((1 + c1 + c0) % 2 == 0)
        return r >= 1, r == 2
    square = pow((c1 * c1 - 4 * c0) % p, (p - 1) // 2, p) == 1
    return square, square


def _fast_flags(coeffs: tuple[int, ...], p: int) -> tuple[bool, bool]:
    deg = len(coeffs) - 1
    if deg == 2:
        return _quad_flags(coeffs[0], coeffs[1], p)
    if deg == 1:
        return True, True
    return sp.pi_psi_flags([c % p for c in coeffs], p)


def _scan_chunk(payload) -> list[list[int]]:
    """Count one chunk of primes.

    Returns one row per checkpoint interval:
    ``[total, skipped_ramified, skipped_denominator, c_0, ..., c_{2^e - 1}]``
    where ``c_mask`` counts points whose expression truth values form
    ``mask`` (expression j contributing bit j).
    """
    exprs, primes, checkpoints = payload
    discs, dens = _skip_sets(exprs)
    base = exprs[0].base
    nexpr = len(exprs)
    rows = [[0] * (3 + (1 << nexpr)) for _ in checkpoints]
    fast = base.degree == 1

    for p in primes:
        if fast:
            row = rows[bisect.bisect_left(checkpoints, p)]
            reason = _skip_reason(p, discs, dens)
            if reason:
                row[reason] += 1
                continue
            memo: dict[str, tuple[bool, bool]] = {}
            mask = 0
            for j, expr in enumerate(exprs):
                if _eval_node(expr.node, lambda a: _fast_atom(a, p, memo)):
                    mask |= 1 << j
            row[0] += 1
            row[3 + mask] += 1
        else:
            if base.disc % p == 0:
                rows[bisect.bisect_left(checkpoints, p)][1] += 1
                continue
            reason = _skip_reason(p, discs, dens)
            for pL in sp.split_prime(base, p):
                if pL.order > checkpoints[-1]:
                    continue
                row = rows[bisect.bisect_left(checkpoints, pL.order)]
                if reason:
                    row[reason] += 1
                    continue
                mask = 0
                for j, expr in enumerate(exprs):
                    if _eval_node(expr.node, lambda a: _point_atom(a, pL)):
                        mask |= 1 << j
                row[0] += 1
                row[3 + mask] += 1
    return rows


def _skip_reason(p: int, discs: tuple[int, ...], dens: frozenset[int]) -> int:
    # 0 = evaluable; 1, 2 index the skip counters in a scan row
    for d in discs:
        if d % p == 0:
            return 1
    if p in dens:
        return 2
    return 0


def _fast_atom(atom: Node, p: int, memo: dict) -> bool:
    if isinstance(atom, PrimeSet):
        return p in atom.primes
    name = atom.ext.field.name
    flags = memo.get(name)
    if flags is None:
        flags = memo[name] = _fast_flags(atom.ext.field.poly.coeffs, p)
    return flags[0] if isinstance(atom, PiAtom) else flags[1]


def _point_atom(atom: Node, pL: sp.SplitPrime) -> bool:
    if isinstance(atom, PrimeSet):
        return pL.p in atom.primes
    if isinstance(atom, PiAtom):
        return sp.in_pi(atom.ext, pL)
    return sp.in_psi(atom.ext, pL)


def _run_scan(
    exprs: Sequence[SetExpr], n: int, workers: int
) -> tuple[tuple[int, ...], list[list[int]]]:
    if n < CHECKPOINT_START:
        raise ValueError(f"bound must be at least {CHECKPOINT_START}, got {n}")
    for expr in exprs[1:]:
        if expr.base.name != exprs[0].base.name:
            raise ExprSyntaxError(
                f"mixed base fields: {exprs[0].base.name!r} and {expr.base.name!r}"
            )
    checkpoints = _checkpoints(n)
    primes = list(stream_primes(n))
    payloads = [
        (tuple(exprs), tuple(primes[i : i + CHUNK_PRIMES]), checkpoints)
        for i in range(0, len(primes), CHUNK_PRIMES)
    ]
    if workers <= 1 or len(payloads) <= 1:
        results: Iterable[list[list[int]]] = map(_scan_chunk, payloads)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scan_chunk, payloads))
    width = 3 + (1 << len(exprs))
    merged = [[0] * width for _ in checkpoints]
    for rows in results:
        for acc, row in zip(merged, rows):
            for i, v in enumerate(row):
                acc[i] += v
    return checkpoints, merged


def _build_estimate(
    n: int, checkpoints: tuple[int, ...], merged: list[list[int]], bit: int, nexpr: int
) -> DensityEstimate:
    trace = []
    hits = total = ram = den = 0
    for ck, row in zip(checkpoints, merged):
        total += row[0]
        ram += row[1]
        den += row[2]
        for mask in range(1 << nexpr):
            if mask >> bit & 1:
                hits += row[3 + mask]
        trace.append(TraceRow(ck, hits, total))
    skipped = tuple(
        (k, v) for k, v in (("ramified", ram), ("denominator", den)) if v
    )
    return DensityEstimate(n, hits, total, skipped, tuple(trace))


def estimate_density(expr: SetExpr, n: int, workers: int = 1) -> DensityEstimate:
    """Fraction of evaluable base primes with norm <= n satisfying the expression.

    Primes where any atom's extension is excluded (ramified, or a map
    denominator vanishes) are skipped and tallied by reason; the estimate
    carries a cumulative trace at every power-of-ten checkpoint.
    """
    checkpoints, merged = _run_scan((expr,), n, workers)
    return _build_estimate(n, checkpoints, merged, 0, 1)


# --------------------------------------------------------------------------
# exact predictions from declared closure data


def chebotarev_predict(expr: SetExpr, cfg: LatticeConfig) -> Fraction | None:
    """Predicted density by counting automorphisms of a common Galois closure.

    Works when every atom's field has a declared closure and some declared
    Galois field admits embeddings from the base and from every atom field;
    returns None when the lattice does not declare enough.
    """
    atoms = expr.atoms()
    if not atoms:
        truth = _eval_node(expr.node, lambda a: False)
        return Fraction(1 if truth else 0)
    base = expr.base
    fields = []
    for atom in atoms:
        k = atom.ext.field
        if cfg.closure_of(k.name) is None:
            return None
        if all(k.name != f.name for f in fields):
            fields.append(k)

    for m in sorted(cfg.fields.values(), key=lambda f: (f.degree, f.name)):
        if not cfg.is_galois(m.name):
            continue
        try:
            base_h = cfg.embedding(base.name, m.name).h
            embs = {k.name: cfg.embedding(k.name, m.name).h for k in fields}
        except UnknownFieldError:
            continue
        group = cfg.automorphisms_fixing(m.name, base.name)
        if len(group) * base.degree != m.degree:
            continue
        fmod = m.poly.to_rat()
        homs: dict[str, tuple] = {}
        ok = True
        for atom in atoms:
            k = atom.ext.field
            if k.name in homs:
                continue
            root0 = embs[k.name]
            orbit = {root0.compose_mod(a.h, fmod) for a in cfg.autos(m.name)}
            rel_h = atom.ext.emb.h
            hom = tuple(r for r in sorted(orbit, key=lambda r: r.coeffs)
                        if rel_h.compose_mod(r, fmod) == base_h)
            if len(orbit) != k.degree or len(hom) != k.degree // base.degree:
                ok = False
                break
            homs[k.name] = hom
        if not ok:
            continue

        count = 0
        for sigma in group:
            def atom_truth(a, _s=sigma):
                if isinstance(a, PrimeSet):
                    return False  # finite sets carry no density
                fixed = [r.compose_mod(_s.h, fmod) == r for r in homs[a.ext.field.name]]
                return any(fixed) if isinstance(a, PiAtom) else all(fixed)

            if _eval_node(expr.node, atom_truth):
                count += 1
        return Fraction(count, len(group))
    return None


# --------------------------------------------------------------------------
# Frobenius statistics


@dataclass(frozen=True)
class FrobeniusStats:
    field_name: str
    n: int
    total: int
    counts: tuple[tuple[tuple[int, ...], int], ...]

    def frequencies(self) -> dict[tuple[int, ...], float]:
        return {pat: c / self.total for pat, c in self.counts}

    def __str__(self) -> str:
        parts = [
            f"{'+'.join(map(str, pat))}: {c}/{self.total} = {c / self.total:.4f}"
            for pat, c in self.counts
        ]
        return f"{self.field_name}, primes <= {self.n}: " + "; ".join(parts)


def _frob_chunk(payload) -> Counter:
    fld, primes = payload
    out: Counter = Counter()
    for p in primes:
        if fld.disc % p == 0:
            continue
        out[sp.degree_pattern(fld, p)] += 1
    return out


def frobenius_histogram(
    fld: NumberField, n: int, workers: int = 1
) -> FrobeniusStats:
    """Distribution of factorization patterns of the field polynomial mod p."""
    primes = list(stream_primes(n))
    payloads = [
        (fld, tuple(primes[i : i + CHUNK_PRIMES]))
        for i in range(0, len(primes), CHUNK_PRIMES)
    ]
    counts: Counter = Counter()
    if workers <= 1 or len(payloads) <= 1:
        for payload in payloads:
            counts += _frob_chunk(payload)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_frob_chunk, payloads):
                counts += part
    total = sum(counts.values())
    return FrobeniusStats(fld.name, n, total, tuple(sorted(counts.items())))


# --------------------------------------------------------------------------
# structural checkers


def _evaluable_primes(exts: Sequence[Extension], n: int):
    """Base-spectrum points with norm <= n evaluable for every extension."""
    base = exts[0].base
    for p in stream_primes(n):
        if any(ext.is_excluded(p) for ext in exts) or base.disc % p == 0:
            continue
        for pL in sp.split_prime(base, p):
            if pL.order <= n:
                yield pL


@dataclass(frozen=True)
class PsiProductReport:
    k1: str
    k2: str
    composite: str
    base: str
    n: int
    total: int
    hits: int
    violations: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def density(self) -> float:
        return self.hits / self.total if self.total else 0.0

    def __str__(self) -> str:
        status = "OK" if self.ok else f"VIOLATED at {list(self.violations)}"
        return (
            f"Psi({self.k1}/{self.base}) & Psi({self.k2}/{self.base}) vs"
            f" Psi({self.composite}/{self.base}), primes <= {self.n}: {status};"
            f" intersection {self.hits}/{self.total} = {self.density:.4f}"
        )


def check_psi_product(
    cfg: LatticeConfig, k1: str, k2: str, composite: str, base: str, n: int
) -> PsiProductReport:
    """Compare Psi(k1) & Psi(k2) against Psi(composite), prime by prime."""
    e1 = cfg.extension((k1, base))
    e2 = cfg.extension((k2, base))
    ec = cfg.extension((composite, base))
    # the square must actually be declared
    cfg.embedding(k1, composite)
    cfg.embedding(k2, composite)
    total = hits = 0
    violations = []
    for pL in _evaluable_primes((e1, e2, ec), n):
        total += 1
        both = sp.in_psi(e1, pL) and sp.in_psi(e2, pL)
        comp = sp.in_psi(ec, pL)
        if both != comp:
            violations.append(pL.p)
        if comp:
            hits += 1
    return PsiProductReport(k1, k2, composite, base, n, total, hits, tuple(violations))


@dataclass(frozen=True)
class PiEqPsiReport:
    ext_name: str
    n: int
    galois: bool
    total: int
    mismatches: int
    sample: tuple[int, ...]

    @property
    def density(self) -> float:
        return self.mismatches / self.total if self.total else 0.0

    def __str__(self) -> str:
        kind = "declared-galois" if self.galois else "non-galois"
        return (
            f"Pi vs Psi for {self.ext_name} ({kind}), primes <= {self.n}:"
            f" {self.mismatches}/{self.total} disagree ({self.density:.4f})"
        )


def check_pi_eq_psi(cfg: LatticeConfig, spec: str, n: int) -> PiEqPsiReport:
    """Count primes where the two membership predicates disagree."""
    ext = cfg.extension(spec)
    autos = cfg.autos(ext.field.name)
    if autos:
        fixing = cfg.automorphisms_fixing(ext.field.name, ext.base.name)
        galois = len(fixing) == ext.rel_degree
    else:
        galois = False
    total = mismatches = 0
    sample = []
    for pL in _evaluable_primes((ext,), n):
        total += 1
        if sp.in_pi(ext, pL) != sp.in_psi(ext, pL):
            mismatches += 1
            if len(sample) < 32:
                sample.append(pL.p)
    return PiEqPsiReport(ext.name, n, galois, total, mismatches, tuple(sample))


@dataclass(frozen=True)
class PullbackRow:
    p: int
    local_factor: tuple[int, ...]
    upstairs: bool
    downstairs: bool


@dataclass(frozen=True)
class PullbackReport:
    tower: tuple[str, str, str, str]  # (L, K, M, KM)
    n: int
    points: int
    pi_discrepancies: tuple[PullbackRow, ...]
    psi_discrepancies: tuple[PullbackRow, ...]

    def __str__(self) -> str:
        l, k, m, km = self.tower
        head = (
            f"pullback square ({l}, {k}, {m}, {km}), {self.points} points of"
            f" Sp_{k} over p <= {self.n}:"
        )
        pi = f" Pi: {len(self.pi_discrepancies)} discrepancies"
        if self.pi_discrepancies:
            pi += " at p in " + str(sorted({r.p for r in self.pi_discrepancies}))
        psi = f"; Psi: {len(self.psi_discrepancies)} discrepancies"
        if self.psi_discrepancies:
            psi += " at p in " + str(sorted({r.p for r in self.psi_discrepancies}))
        return head + pi + psi


def check_pullback(
    cfg: LatticeConfig, l: str, k: str, m: str, km: str, n: int
) -> PullbackReport:
    """Test whether membership upstairs matches membership of the projection.

    For each point pK of Sp_k, compares [pK in Pi(km/k)] with
    [projection(pK) in Pi(m/l)], and likewise for Psi.  Discrepancies are
    data, not errors: the report lists both variants and leaves the verdict
    to the caller.
    """
    ext_kl = cfg.extension((k, l))
    ext_ml = cfg.extension((m, l))
    ext_kmk = cfg.extension((km, k))
    ext_kmm = cfg.extension((km, m))  # the square's fourth side must exist
    points = 0
    pi_rows = []
    psi_rows = []
    for p in stream_primes(n):
        if any(
            e.is_excluded(p) for e in (ext_kl, ext_ml, ext_kmk, ext_kmm)
        ):
            continue
        for pK in sp.split_prime(ext_kl.field, p):
            points += 1
            below = plane.project_point(ext_kl, pK)
            up_pi = sp.in_pi(ext_kmk, pK)
            down_pi = sp.in_pi(ext_ml, below)
            if up_pi != down_pi:
                pi_rows.append(PullbackRow(p, pK.local_factor, up_pi, down_pi))
            up_psi = sp.in_psi(ext_kmk, pK)
            down_psi = sp.in_psi(ext_ml, below)
            if up_psi != down_psi:
                psi_rows.append(PullbackRow(p, pK.local_factor, up_psi, down_psi))
    return PullbackReport((l, k, m, km), n, points, tuple(pi_rows), tuple(psi_rows))


@dataclass(frozen=True)
class InclusionExclusionReport:
    n: int
    a: DensityEstimate
    b: DensityEstimate
    union: DensityEstimate
    intersection: DensityEstimate

    @property
    def exact(self) -> bool:
        return self.union.hits + self.intersection.hits == self.a.hits + self.b.hits

    def __str__(self) -> str:
        status = "exact" if self.exact else "BROKEN"
        return (
            f"inclusion-exclusion over primes <= {self.n}: {status};"
            f" dn(A)={self.a.value:.4f} dn(B)={self.b.value:.4f}"
            f" dn(A|B)={self.union.value:.4f} dn(A&B)={self.intersection.value:.4f}"
        )


def check_inclusion_exclusion(
    expr_a: SetExpr, expr_b: SetExpr, n: int, workers: int = 1
) -> InclusionExclusionReport:
    """Verify hits(A|B) + hits(A&B) = hits(A) + hits(B) on a shared universe.

    All four counts come from one scan over the primes evaluable for both
    expressions, so the identity is a statement about integers, not limits.
    """
    checkpoints, merged = _run_scan((expr_a, expr_b), n, workers)
    est_a = _build_estimate(n, checkpoints, merged, 0, 2)
    est_b = _build_estimate(n, checkpoints, merged, 1, 2)
    trace_u = []
    trace_i = []
    hits_u = hits_i = total = ram = den = 0
    for ck, row in zip(checkpoints, merged):
        total += row[0]
        ram += row[1]
        den += row[2]
        hits_u += row[4] + row[5] + row[6]
        hits_i += row[6]
        trace_u.append(TraceRow(ck, hits_u, total))
        trace_i.append(TraceRow(ck, hits_i, total))
    skipped = tuple((k, v) for k, v in (("ramified", ram), ("denominator", den)) if v)
    est_u = DensityEstimate(n, hits_u, total, skipped, tuple(trace_u))
    est_i = DensityEstimate(n, hits_i, total, skipped, tuple(trace_i))
    return InclusionExclusionReport(n, est_a, est_b, est_u, est_i)


@dataclass(frozen=True)
class PiIntersectionReport:
    names: tuple[str, ...]
    base: str
    n: int
    witness: int | None

    def __str__(self) -> str:
        sets = " & ".join(f"Pi({k}/{self.base})" for k in self.names)
        if self.witness is None:
            return f"{sets}: no witness <= {self.n}"
        return f"{sets}: smallest witness {self.witness}"


def check_pi_intersection(
    cfg: LatticeConfig, tops: Sequence[str], base: str, n: int
) -> PiIntersectionReport:
    """Smallest evaluable base prime lying in every Pi set, if one exists <= n."""
    if not tops:
        raise ValueError("need at least one extension")
    exts = [cfg.extension((k, base)) for k in tops]
    for pL in _evaluable_primes(exts, n):
        if all(sp.in_pi(ext, pL) for ext in exts):
            return PiIntersectionReport(tuple(tops), base, n, pL.p)
    return PiIntersectionReport(tuple(tops), base, n, None)
