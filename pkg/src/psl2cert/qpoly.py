"""Exact polynomial arithmetic over Q, Newton power sums, and reductions mod l.

Coefficients are `fractions.Fraction` throughout; nothing here ever touches
floating point.  Degrees stay tiny (at most 8 in this project), so the dense
representation and schoolbook algorithms are the right tool.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence

from .modarith import inv_mod

Q = Fraction


def _trim(cs: list[Fraction]) -> tuple[Fraction, ...]:
    n = len(cs)
    while n and cs[n - 1] == 0:
        n -= 1
    return tuple(cs[:n])


class QPolynomial:
    """Dense polynomial over Q; coefficients lowest degree first, no
    trailing zeros (the zero polynomial is the empty tuple)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        self.coeffs = _trim([Q(c) for c in coeffs])

    @staticmethod
    def monomial(degree: int, coeff=1) -> "QPolynomial":
        return QPolynomial([0] * degree + [coeff])

    @property
    def degree(self) -> int:
        """Degree, with the zero polynomial at -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Q(0)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QPolynomial([other])
        return isinstance(other, QPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QPolynomial([other])
        n = max(len(self.coeffs), len(other.coeffs))
        return QPolynomial([self[i] + other[i] for i in range(n)])

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QPolynomial([other])
        n = max(len(self.coeffs), len(other.coeffs))
        return QPolynomial([self[i] - other[i] for i in range(n)])

    def __neg__(self):
        return QPolynomial([-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QPolynomial([c * other for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return QPolynomial()
        out = [Q(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return QPolynomial(out)

    __rmul__ = __mul__
    __radd__ = __add__

    def __pow__(self, n: int):
        result = QPolynomial([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __call__(self, x) -> Fraction:
        """Exact Horner evaluation."""
        acc = Q(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "QPolynomial":
        return QPolynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    def divmod(self, other: "QPolynomial"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return QPolynomial(), self
        quo = [Q(0)] * (dq + 1)
        lead = other.coeffs[-1]
        for shift in range(dq, -1, -1):
            c = rem[shift + other.degree] / lead
            quo[shift] = c
            if c:
                for i, b in enumerate(other.coeffs):
                    rem[shift + i] -= c * b
        return QPolynomial(quo), QPolynomial(rem)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self) -> "QPolynomial":
        if self.is_zero():
            return self
        lead = self.coeffs[-1]
        return QPolynomial([c / lead for c in self.coeffs])

    def __repr__(self):
        return f"QPolynomial({format_poly(self, 'T')})"


def poly_gcd(a: QPolynomial, b: QPolynomial) -> QPolynomial:
    """Monic gcd by the Euclidean algorithm."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def format_poly(poly: QPolynomial, var: str = "T") -> str:
    """Human form like '1 - 2/9*T^2 + T^4'."""
    if poly.is_zero():
        return "0"
    parts = []
    for i, c in enumerate(poly.coeffs):
        if c == 0:
            continue
        mag = abs(c)
        if i == 0:
            body = str(mag)
        else:
            power = var if i == 1 else f"{var}^{i}"
            body = power if mag == 1 else f"{mag}*{power}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)


# ---------------------------------------------------------------------------
# Newton identities and n-th power transforms for quartics with P(0) = 1


def power_sums(poly: QPolynomial, count: int) -> list[Fraction]:
    """Power sums s_1..s_count of the inverse roots of a degree-4
    polynomial with constant term 1 (P = prod(1 - a_i T))."""
    if poly.degree != 4:
        raise ValueError("power sums need a degree-4 polynomial")
    if poly[0] != 1:
        raise ValueError("constant term must be 1")
    # elementary symmetric functions of the inverse roots
    e = [Q(0)] * 5
    for i in range(1, 5):
        e[i] = (-1) ** i * poly[i]
    s: list[Fraction] = []
    for m in range(1, count + 1):
        acc = Q(0)
        for i in range(1, min(m, 4) + 1):
            if i == m:
                acc += (-1) ** (i - 1) * i * e[i]
            else:
                acc += (-1) ** (i - 1) * e[i] * s[m - i - 1]
        s.append(acc)
    return s


def elementary_from_power_sums(t: Sequence[Fraction]) -> list[Fraction]:
    """e_1..e_4 from power sums t_1..t_4 of four quantities."""
    t1, t2, t3, t4 = (Q(x) for x in t)
    e1 = t1
    e2 = (e1 * t1 - t2) / 2
    e3 = (e2 * t1 - e1 * t2 + t3) / 3
    e4 = (e3 * t1 - e2 * t2 + e1 * t3 - t4) / 4
    return [e1, e2, e3, e4]


def nth_power_poly(poly: QPolynomial, n: int) -> QPolynomial:
    """The quartic whose inverse roots are the n-th powers of poly's.

    Computed exactly via Newton identities (power sums s_n, s_2n, s_3n,
    s_4n, then the inverse identities); no root extraction.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    if n == 1:
        return QPolynomial(poly.coeffs)
    s = power_sums(poly, 4 * n)
    e1, e2, e3, e4 = elementary_from_power_sums([s[n - 1], s[2 * n - 1], s[3 * n - 1], s[4 * n - 1]])
    return QPolynomial([1, -e1, e2, -e3, e4])


def eval_exact(poly: QPolynomial, x) -> Fraction:
    return poly(Q(x))


# ---------------------------------------------------------------------------
# reduction to F_l


class DenominatorDivisibleError(ValueError):
    """The denominator of an exact rational is divisible by the target prime."""


def reduce_mod(x, ell: int) -> int:
    """Image of an exact rational in F_ell (num * den^-1 mod ell)."""
    x = Q(x)
    if x.denominator % ell == 0:
        raise DenominatorDivisibleError(
            f"denominator of {x} is divisible by {ell}; invalid witness/l pairing"
        )
    return x.numerator * inv_mod(x.denominator, ell) % ell


def reduce_poly_mod(poly: QPolynomial, ell: int, width: int | None = None) -> tuple[int, ...]:
    """Coefficients of poly in F_ell, zero-padded to `width` if given."""
    n = width if width is not None else len(poly.coeffs)
    return tuple(reduce_mod(poly[i], ell) for i in range(n))


# ---------------------------------------------------------------------------
# truncated power series (lists of coefficients, index = degree)


def series_mul(a: Sequence, b: Sequence, order: int) -> list:
    out = [0] * (order + 1)
    for i, ai in enumerate(a[: order + 1]):
        if ai:
            for j, bj in enumerate(b[: order + 1 - i]):
                out[i + j] += ai * bj
    return out


def series_inverse(a: Sequence, order: int) -> list:
    """Multiplicative inverse of a power series with a[0] = 1."""
    if a[0] != 1:
        raise ValueError("series inverse requires unit constant term 1")
    inv = [1] + [0] * order
    for n in range(1, order + 1):
        acc = 0
        for j in range(1, n + 1):
            aj = a[j] if j < len(a) else 0
            acc += aj * inv[n - j]
        inv[n] = -acc
    return inv


def series_exp(s: Sequence[Fraction], order: int) -> list[Fraction]:
    """exp of a series with zero constant term, to the given order."""
    if s and s[0] != 0:
        raise ValueError("series exp requires zero constant term")
    e = [Q(1)] + [Q(0)] * order
    for n in range(1, order + 1):
        acc = Q(0)
        for k in range(1, n + 1):
            sk = Q(s[k]) if k < len(s) else Q(0)
            acc += k * sk * e[n - k]
        e[n] = acc / n
    return e


def series_log(c: Sequence, order: int) -> list[Fraction]:
    """log of a power series with constant term 1, to the given order."""
    if c[0] != 1:
        raise ValueError("series log requires constant term 1")
    lg = [Q(0)] * (order + 1)
    for n in range(1, order + 1):
        cn = Q(c[n]) if n < len(c) else Q(0)
        acc = cn
        for k in range(1, n):
            ck = Q(c[n - k]) if n - k < len(c) else Q(0)
            acc -= Q(k, n) * lg[k] * ck
        lg[n] = acc
    return lg


# ---------------------------------------------------------------------------
# resultants / discriminants (tiny degrees: Sylvester determinant suffices)


def resultant(f: QPolynomial, g: QPolynomial) -> Fraction:
    m, n = f.degree, g.degree
    if m < 0 or n < 0:
        return Q(0)
    size = m + n
    rows = []
    fc = list(reversed(f.coeffs))  # leading coefficient first
    gc = list(reversed(g.coeffs))
    for i in range(n):
        rows.append([Q(0)] * i + fc + [Q(0)] * (size - m - 1 - i))
    for i in range(m):
        rows.append([Q(0)] * i + gc + [Q(0)] * (size - n - 1 - i))
    # fraction-exact Gaussian elimination
    det = Q(1)
    for col in range(size):
        pivot = None
        for r in range(col, size):
            if rows[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            return Q(0)
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        pv = rows[col][col]
        det *= pv
        for r in range(col + 1, size):
            factor = rows[r][col] / pv
            if factor:
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[col])]
    return det


def discriminant(f: QPolynomial) -> Fraction:
    n = f.degree
    if n < 1:
        raise ValueError("discriminant needs degree >= 1")
    sign = (-1) ** (n * (n - 1) // 2)
    return sign * resultant(f, f.derivative()) / f.coeffs[-1]


def rational_sqrt(x) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if irrational."""
    x = Q(x)
    if x < 0:
        return None
    rn, rd = isqrt(x.numerator), isqrt(x.denominator)
    if rn * rn == x.numerator and rd * rd == x.denominator:
        return Q(rn, rd)
    return None
