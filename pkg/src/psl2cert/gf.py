"""Arithmetic in F_p and its extensions F_{p^k} for k <= 4.

A field context fixes the prime p, the degree k and a monic irreducible
modulus of degree k over F_p.  Elements are residues modulo that modulus,
stored as coefficient tuples (constant coefficient first).  Each element
also has an integer encoding sum(c_i * p^i), which the bulk point-counting
kernel uses to index precomputed tables.

Contexts are immutable and safe to share; `fq_ctx` returns a cached
deterministic context whose modulus is the lexicographically smallest
monic irreducible of its degree, so results reproduce bit-for-bit.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .modarith import factorize, is_prime

CHI_TABLE_MAX_Q = 1 << 20  # full character table only below this size

Poly = tuple[int, ...]  # coefficients over F_p, constant term first


# ---------------------------------------------------------------------------
# polynomial helpers over F_p (dense tuples, constant coefficient first)


def poly_trim(c: list[int]) -> Poly:
    n = len(c)
    while n and c[n - 1] == 0:
        n -= 1
    return tuple(c[:n])


def poly_mul(a: Poly, b: Poly, p: int) -> Poly:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return poly_trim(out)


def poly_mod(a: Poly, m: Poly, p: int) -> Poly:
    """Remainder of a modulo the monic polynomial m."""
    r = list(a)
    dm = len(m) - 1
    while len(r) - 1 >= dm and r:
        lead = r[-1] % p
        if lead:
            shift = len(r) - 1 - dm
            for i in range(dm + 1):
                r[shift + i] = (r[shift + i] - lead * m[i]) % p
        r.pop()
        while r and r[-1] == 0:
            r.pop()
    return tuple(r)


def poly_eval(a: Poly, x: int, p: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


def _has_root(m: Poly, p: int) -> bool:
    return any(poly_eval(m, c, p) == 0 for c in range(p))


def _monic_polys(p: int, d: int):
    """Monic degree-d polynomials over F_p in lexicographic order.

    Order is on the coefficient tuple read from the t^(d-1) coefficient
    down to the constant term.
    """
    for high_to_low in itertools.product(range(p), repeat=d):
        yield tuple(reversed(high_to_low)) + (1,)


def is_irreducible(m: Poly, p: int) -> bool:
    """Exhaustive test for monic m of degree <= 4: root check plus, in
    degree 4, trial division by every irreducible quadratic."""
    d = len(m) - 1
    if d < 1 or d > 4:
        raise ValueError("degree out of range 1..4")
    if d == 1:
        return True
    if _has_root(m, p):
        return False
    if d < 4:
        return True  # degree 2/3 reducible only via a linear factor
    for q2 in _monic_polys(p, 2):
        if not _has_root(q2, p) and poly_mod(m, q2, p) == ():
            return False
    return True


def enum_irreducibles(p: int, d: int) -> list[Poly]:
    """All monic irreducible polynomials of degree d over F_p, in
    lexicographic order (constant coefficient compared last)."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if not 1 <= d <= 4:
        raise ValueError("degree out of range 1..4")
    return [m for m in _monic_polys(p, d) if is_irreducible(m, p)]


class FieldCtx:
    """Context for F_{p^k}: prime, degree, monic irreducible modulus."""

    __slots__ = ("p", "k", "q", "modulus", "_chi", "_powers_of_p")

    def __init__(self, p: int, k: int, modulus: Poly):
        if not is_prime(p) or p == 2:
            raise ValueError(f"p must be an odd prime, got {p}")
        if not 1 <= k <= 4:
            raise ValueError(f"extension degree must be 1..4, got {k}")
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree k")
        if not is_irreducible(modulus, p):
            raise ValueError(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = tuple(c % p for c in modulus)
        self._chi = None
        self._powers_of_p = tuple(p**i for i in range(k))

    # -- element plumbing ---------------------------------------------------

    def elem(self, value) -> "FqElem":
        """Coerce an int (prime-subfield value) or coefficient sequence."""
        if isinstance(value, FqElem):
            if value.ctx is not self:
                raise ValueError("element from a different context")
            return value
        if isinstance(value, int):
            coeffs = (value % self.p,) + (0,) * (self.k - 1)
            return FqElem(self, coeffs)
        coeffs = tuple(int(c) % self.p for c in value)
        if len(coeffs) > self.k:
            raise ValueError("too many coefficients")
        coeffs += (0,) * (self.k - len(coeffs))
        return FqElem(self, coeffs)

    def zero(self) -> "FqElem":
        return self.elem(0)

    def one(self) -> "FqElem":
        return self.elem(1)

    def gen(self) -> "FqElem":
        """The residue class of t (a root of the modulus); k >= 2 only."""
        if self.k == 1:
            raise ValueError("prime field has no extension generator")
        return self.elem((0, 1))

    def elements(self):
        for enc in range(self.q):
            yield self.decode(enc)

    # -- integer encoding ---------------------------------------------------

    def encode(self, a: "FqElem") -> int:
        return sum(c * w for c, w in zip(a.coeffs, self._powers_of_p))

    def decode(self, enc: int) -> "FqElem":
        p = self.p
        coeffs = []
        for _ in range(self.k):
            coeffs.append(enc % p)
            enc //= p
        return FqElem(self, tuple(coeffs))

    # -- raw coefficient arithmetic -----------------------------------------

    def _add(self, a: Poly, b: Poly) -> Poly:
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def _sub(self, a: Poly, b: Poly) -> Poly:
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def _mul(self, a: Poly, b: Poly) -> Poly:
        if self.k == 1:
            return ((a[0] * b[0]) % self.p,)
        r = poly_mod(poly_mul(a, b, self.p), self.modulus, self.p)
        return r + (0,) * (self.k - len(r))

    def _pow(self, a: Poly, n: int) -> Poly:
        result = (1,) + (0,) * (self.k - 1)
        base = a
        while n:
            if n & 1:
                result = self._mul(result, base)
            base = self._mul(base, base)
            n >>= 1
        return result

    # -- quadratic character --------------------------------------------------

    def chi_table(self):
        """numpy int8 array of chi over the whole field, indexed by encoding.

        Built lazily (idempotent) from a multiplicative generator; only
        available when q <= CHI_TABLE_MAX_Q.
        """
        if self._chi is None:
            if self.q > CHI_TABLE_MAX_Q:
                raise ValueError("field too large for a character table")
            import numpy as np

            chi = np.zeros(self.q, dtype=np.int8)
            g = self._find_generator()
            cur = self.one().coeffs
            for i in range(self.q - 1):
                chi[self.encode(FqElem(self, cur))] = 1 if i % 2 == 0 else -1
                cur = self._mul(cur, g)
            self._chi = chi
        return self._chi

    def _find_generator(self) -> Poly:
        order = self.q - 1
        prime_divs = list(factorize(order))
        one = self.one().coeffs
        for enc in range(2, self.q):
            cand = self.decode(enc).coeffs
            if all(self._pow(cand, order // r) != one for r in prime_divs):
                return cand
        raise AssertionError("no multiplicative generator found")


class FqElem:
    """Element of F_{p^k}, immutable residue with operator arithmetic."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs: Poly):
        self.ctx = ctx
        self.coeffs = coeffs

    def __add__(self, other):
        other = self.ctx.elem(other)
        return FqElem(self.ctx, self.ctx._add(self.coeffs, other.coeffs))

    def __sub__(self, other):
        other = self.ctx.elem(other)
        return FqElem(self.ctx, self.ctx._sub(self.coeffs, other.coeffs))

    def __mul__(self, other):
        other = self.ctx.elem(other)
        return FqElem(self.ctx, self.ctx._mul(self.coeffs, other.coeffs))

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return self.ctx.elem(other) - self

    def __neg__(self):
        return FqElem(self.ctx, tuple((-c) % self.ctx.p for c in self.coeffs))

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return FqElem(self.ctx, self.ctx._pow(self.coeffs, n))

    def inverse(self) -> "FqElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return self ** (self.ctx.q - 2)

    def __truediv__(self, other):
        return self * self.ctx.elem(other).inverse()

    def frobenius(self) -> "FqElem":
        return self ** self.ctx.p

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ctx.elem(other)
        return isinstance(other, FqElem) and self.ctx is other.ctx and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((id(self.ctx), self.coeffs))

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{c}*t" if c != 1 else "t")
            else:
                terms.append(f"{c}*t^{i}" if c != 1 else f"t^{i}")
        body = " + ".join(terms) if terms else "0"
        return f"Fq({body} ; q={self.ctx.q})"


@lru_cache(maxsize=None)
def fq_ctx(p: int, k: int) -> FieldCtx:
    """Deterministic context for F_{p^k}: the modulus is the
    lexicographically smallest monic irreducible of degree k over F_p."""
    if not is_prime(p) or p == 2:
        raise ValueError(f"p must be an odd prime, got {p}")
    if not 1 <= k <= 4:
        raise ValueError(f"extension degree must be 1..4, got {k}")
    if k == 1:
        modulus: Poly = (0, 1)  # the polynomial t
    else:
        for m in _monic_polys(p, k):
            if is_irreducible(m, p):
                modulus = m
                break
    return FieldCtx(p, k, modulus)


def quad_char(ctx: FieldCtx, v) -> int:
    """Quadratic character of F_q: 0 at zero, +1 on nonzero squares, -1
    otherwise.  Table lookup when q is small, else v^((q-1)/2)."""
    v = ctx.elem(v)
    if v.is_zero():
        return 0
    if ctx.q <= CHI_TABLE_MAX_Q:
        return int(ctx.chi_table()[ctx.encode(v)])
    return 1 if v ** ((ctx.q - 1) // 2) == ctx.one() else -1
