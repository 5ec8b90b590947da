"""Low-level polynomial kernels over a prime field F_p.

A polynomial is a plain list of ints in [0, p), constant term first, with no
trailing zeros; [] is the zero polynomial.  The prime p travels as an
explicit argument — these are free functions, not methods, so the hot scan
loops pay no object overhead.  Nothing here validates primality of p; that
is the caller's contract.

The only nontrivial algorithms are x^e mod f by binary exponentiation with a
precomputed reduction row (the innermost loop of every density scan) and
distinct-degree factorization used for splitting-type patterns.
"""

from __future__ import annotations


def trim(a: list[int]) -> list[int]:
    n = len(a)
    while n and not a[n - 1]:
        n -= 1
    del a[n:]
    return a


def deg(a: list[int]) -> int:
    return len(a) - 1


def add(a: list[int], b: list[int], p: int) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return trim(out)


def sub(a: list[int], b: list[int], p: int) -> list[int]:
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return trim(out)


def neg(a: list[int], p: int) -> list[int]:
    return [(-c) % p for c in a]


def scalar_mul(k: int, a: list[int], p: int) -> list[int]:
    k %= p
    return trim([(k * c) % p for c in a])


def mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
    return trim([c % p for c in out])


def monic(a: list[int], p: int) -> list[int]:
    if not a or a[-1] == 1:
        return list(a)
    inv = pow(a[-1], -1, p)
    return [(c * inv) % p for c in a]


def divmod_p(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    """Quotient and remainder of a by b (b nonzero)."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    db = deg(b)
    inv = pow(b[-1], -1, p)
    rem = list(a)
    quo = [0] * max(len(a) - db, 0)
    for k in range(len(rem) - 1 - db, -1, -1):
        q = (rem[k + db] * inv) % p
        if q:
            quo[k] = q
            for i in range(db + 1):
                rem[k + i] = (rem[k + i] - q * b[i]) % p
    del rem[db:]
    return trim(quo), trim(rem)


def rem_p(a: list[int], b: list[int], p: int) -> list[int]:
    return divmod_p(a, b, p)[1]


def gcd_p(a: list[int], b: list[int], p: int) -> list[int]:
    """Monic gcd."""
    a, b = list(a), list(b)
    while b:
        a, b = b, rem_p(a, b, p)
    return monic(a, p)


def eval_at(a: list[int], x: int, p: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


def derivative(a: list[int], p: int) -> list[int]:
    return trim([(i * c) % p for i, c in enumerate(a)][1:])


def xpow_mod(e: int, fmod: list[int], p: int) -> list[int]:
    """x^e mod fmod for monic fmod, by binary exponentiation.

    The reduction row (-fmod[:n]) is precomputed once; squaring and the
    shift-by-x step run on fixed-length coefficient lists.  This is the
    innermost kernel of the prime scans, so it avoids divmod entirely.
    """
    n = deg(fmod)
    if n <= 0:
        raise ValueError("modulus must have degree >= 1")
    if n == 1:
        return trim([pow((-fmod[0]) % p, e, p)])
    if e == 0:
        return [1 % p]
    red = [(-c) % p for c in fmod[:n]]
    cur = [0] * n
    cur[1] = 1  # x, matching the leading bit of e
    for bit in bin(e)[3:]:
        cur = _sqr_red(cur, red, n, p)
        if bit == "1":
            cur = _shift_red(cur, red, n, p)
    return trim(cur)


def _sqr_red(a: list[int], red: list[int], n: int, p: int) -> list[int]:
    # full square, then fold degrees n..2n-2 down with the reduction row
    out = [0] * (2 * n - 1)
    for i, ca in enumerate(a):
        if ca:
            out[2 * i] += ca * ca
            for j in range(i + 1, n):
                if a[j]:
                    out[i + j] += 2 * ca * a[j]
    for k in range(2 * n - 2, n - 1, -1):
        c = out[k] % p
        if c:
            base = k - n
            for j in range(n):
                out[base + j] += c * red[j]
        out[k] = 0
    return [c % p for c in out[:n]]


def _mul_red(a: list[int], b: list[int], red: list[int], n: int, p: int) -> list[int]:
    out = [0] * (2 * n - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
    for k in range(2 * n - 2, n - 1, -1):
        c = out[k] % p
        if c:
            base = k - n
            for j in range(n):
                out[base + j] += c * red[j]
        out[k] = 0
    return [c % p for c in out[:n]]


def _shift_red(a: list[int], red: list[int], n: int, p: int) -> list[int]:
    # multiply by x: shift up one, fold the spilled coefficient back
    top = a[n - 1]
    out = [0] + a[: n - 1]
    if top:
        for j in range(n):
            out[j] = (out[j] + top * red[j]) % p
    return out


def powmod(a: list[int], e: int, fmod: list[int], p: int) -> list[int]:
    """a^e mod fmod for monic fmod."""
    n = deg(fmod)
    if n <= 0:
        raise ValueError("modulus must have degree >= 1")
    a = rem_p(a, fmod, p)
    if e == 0:
        return [1 % p]
    if not a:
        return []
    red = [(-c) % p for c in fmod[:n]]
    base = a + [0] * (n - len(a))
    cur = list(base)
    for bit in bin(e)[3:]:
        cur = _sqr_red(cur, red, n, p)
        if bit == "1":
            cur = _mul_red(cur, base, red, n, p)
    return trim(cur)


def root_count(f: list[int], p: int) -> int:
    """Number of distinct roots of f in F_p: deg gcd(x^p - x, f)."""
    fm = monic(f, p)
    if deg(fm) < 1:
        return 0
    h = xpow_mod(p, fm, p)
    g = gcd_p(sub(h, [0, 1], p), fm, p)
    return deg(g)


def roots_prime_field(f: list[int], p: int) -> list[int]:
    """Distinct roots of f in F_p, ascending (brute force under 512, else
    via the linear factors of gcd(x^p - x, f) found by splitting)."""
    fm = monic(f, p)
    if p <= 512:
        return [x for x in range(p) if eval_at(fm, x, p) == 0]
    h = xpow_mod(p, fm, p)
    g = gcd_p(sub(h, [0, 1], p), fm, p)
    return sorted(_split_linear(g, p))


def _split_linear(g: list[int], p: int) -> list[int]:
    """Roots of a product of distinct linear factors, by recursive splitting."""
    d = deg(g)
    if d <= 0:
        return []
    if d == 1:
        return [(-g[0] * pow(g[1], -1, p)) % p]
    # deterministic sweep over shift values; (x+s)^((p-1)/2) separates roots
    for s in range(p):
        h = powmod([s, 1], (p - 1) // 2, g, p)
        part = gcd_p(sub(h, [1], p), g, p)
        if 0 < deg(part) < d:
            rest = divmod_p(g, part, p)[0]
            return _split_linear(part, p) + _split_linear(rest, p)
    raise AssertionError("linear splitting failed")  # pragma: no cover


def degree_pattern(f: list[int], p: int) -> tuple[int, ...]:
    """Multiset of irreducible-factor degrees of squarefree monic f mod p.

    Distinct-degree factorization only — the actual factors are never
    materialized, which keeps the full-scan histogram cheap.
    """
    v = monic(f, p)
    n = deg(v)
    if n < 1:
        return ()
    out: list[int] = []
    d = 1
    h = xpow_mod(p, v, p)
    while n >= 2 * d:
        g = gcd_p(sub(h, [0, 1], p), v, p)
        if deg(g) > 0:
            out.extend([d] * (deg(g) // d))
            v = divmod_p(v, g, p)[0]
            n = deg(v)
            if n == 0:
                break
            h = rem_p(h, v, p)
        d += 1
        if n >= 2 * d:
            h = powmod(h, p, v, p)
    if n > 0:
        out.append(n)
    return tuple(sorted(out))


def is_squarefree(f: list[int], p: int) -> bool:
    return deg(gcd_p(f, derivative(f, p), p)) == 0


def is_irreducible(f: list[int], p: int) -> bool:
    """Irreducibility over F_p: no factor of degree <= n/2 survives DDF."""
    n = deg(f)
    if n < 1:
        return False
    if n == 1:
        return True
    fm = monic(f, p)
    h = xpow_mod(p, fm, p)
    for _ in range(n // 2):
        if deg(gcd_p(sub(h, [0, 1], p), fm, p)) > 0:
            return False
        h = powmod(h, p, fm, p)
    return True


def invert_mod(a: list[int], fmod: list[int], p: int) -> list[int]:
    """Inverse of a modulo fmod (extended Euclid); a must be a unit."""
    r0, r1 = list(fmod), rem_p(a, fmod, p)
    t0, t1 = [], [1]
    while r1:
        q, r = divmod_p(r0, r1, p)
        r0, r1 = r1, r
        t0, t1 = t1, sub(t0, mul(q, t1, p), p)
    if deg(r0) != 0:
        raise ZeroDivisionError("element is not invertible")
    return scalar_mul(pow(r0[0], -1, p), t0, p)


def linsolve(matrix: list[list[int]], rhs: list[int], p: int) -> list[int]:
    """Solve matrix @ x = rhs over F_p; requires a consistent system with
    unique solution on the pivoted columns (free columns get 0)."""
    rows = [list(r) + [b % p] for r, b in zip(matrix, rhs)]
    nrows, ncols = len(rows), len(matrix[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if rows[i][c] % p), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [(v * inv) % p for v in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(v - f * w) % p for v, w in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if rows[i][ncols] % p:
            raise ValueError("inconsistent linear system")
    out = [0] * ncols
    for i, c in enumerate(pivots):
        out[c] = rows[i][ncols]
    return out
