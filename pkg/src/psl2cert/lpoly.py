"""Point counting on the fibers of t(t-1)(t+1) y^2 = x(x+1)(x+t^2) and exact
assembly of the degree-4 L-polynomial of the family over F_p.

The trace of Frobenius at a good parameter t0 in F_q is computed as a
quadratic-character sum
    a(t0) = -chi(t0^3 - t0) * sum_x chi(x (x+1) (x+t0^2)),
one vectorised pass of table lookups per fiber, so a full degree-k trace sum
costs O(q^2) table operations.  The L-series is recovered from the trace
sums A_1, A_2 through exp(sum A_k T^k / k); the functional equation fills in
the T^3 and T^4 coefficients, and a "full direct" mode recounts over the
degree-3 and degree-4 extensions to confirm them independently.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .gf import FieldCtx, FqElem, enum_irreducibles, fq_ctx, quad_char
from .modarith import is_prime
from .qpoly import (
    Q,
    QPolynomial,
    rational_sqrt,
    series_exp,
    series_inverse,
    series_log,
    series_mul,
)

MODE_FE = "FE"
MODE_FULL = "Full"

FULL_DIRECT_MAX_P = 13  # degree-4 counting is O(p^8); cost guard


class HasseBoundError(ArithmeticError):
    """A computed trace violates |a| <= 2 sqrt(q); signals a counting bug."""


class WeilBoundError(ArithmeticError):
    """An assembled L-polynomial has a root off the unit circle."""


class ReciprocityError(ArithmeticError):
    """Direct degree-3/4 counts contradict the functional-equation completion."""


class ShapeViolation(ArithmeticError):
    """An L-polynomial does not match the shape law for its residue class."""


def _bad_encodings(ctx: FieldCtx) -> frozenset[int]:
    # t0 in {0, 1, -1} are the singular parameters; their encodings are
    # constant polynomials.
    return frozenset((0, 1, ctx.p - 1))


def _fiber_traces(ctx: FieldCtx, t0_encs: list[int]) -> list[int]:
    """Frobenius traces for the fibers at the given encoded parameters."""
    p, k, q = ctx.p, ctx.k, ctx.q
    chi = ctx.chi_table()
    x = np.arange(q, dtype=np.int64)
    digits = []
    tmp = x
    for _ in range(k):
        digits.append(tmp % p)
        tmp = tmp // p
    d0 = digits[0]
    x_plus_1 = x - d0 + (d0 + 1) % p
    chi01 = (chi.astype(np.int16) * chi[x_plus_1]).astype(np.int8)
    weights = [p**i for i in range(k)]

    out = []
    for enc in t0_encs:
        t0 = ctx.decode(enc)
        if enc in _bad_encodings(ctx):
            raise ValueError(f"t0 = {t0!r} is a singular fiber")
        c2 = t0 * t0
        c = c2 * t0 - t0
        xc = np.zeros(q, dtype=np.int64)
        for i in range(k):
            ci = c2.coeffs[i]
            col = (digits[i] + ci) % p if ci else digits[i]
            xc += col * weights[i]
        s = int((chi01.astype(np.int64) * chi[xc]).sum())
        a = -quad_char(ctx, c) * s
        if a * a > 4 * q:
            raise HasseBoundError(f"|a|={abs(a)} exceeds 2*sqrt({q}) at t0={t0!r}")
        out.append(a)
    return out


def fiber_trace(p: int, k: int, t0) -> int:
    """Trace a = q + 1 - #E_{t0}(F_q) for the fiber at t0 in F_{p^k}.

    t0 may be an FqElem of fq_ctx(p, k), an int (prime-subfield value) or a
    coefficient sequence.
    """
    ctx = fq_ctx(p, k)
    elem = t0 if isinstance(t0, FqElem) else ctx.elem(t0)
    return _fiber_traces(ctx, [ctx.encode(elem)])[0]


def _range_trace_sum(args) -> int:
    p, k, lo, hi = args
    ctx = fq_ctx(p, k)
    bad = _bad_encodings(ctx)
    encs = [e for e in range(lo, hi) if e not in bad]
    return sum(_fiber_traces(ctx, encs)) if encs else 0


def trace_sum(p: int, k: int, jobs: int = 1) -> int:
    """A_k = sum of fiber traces over all good t0 in F_{p^k}.

    The fiber partition across workers is contiguous and summed in order,
    so the result does not depend on the worker count.
    """
    if not is_prime(p) or p == 2:
        raise ValueError(f"p must be an odd prime, got {p}")
    if not 1 <= k <= 4:
        raise ValueError(f"k must be 1..4, got {k}")
    q = p**k
    if jobs <= 1 or q < 4096:
        return _range_trace_sum((p, k, 0, q))
    bounds = [q * i // jobs for i in range(jobs + 1)]
    chunks = [(p, k, bounds[i], bounds[i + 1]) for i in range(jobs)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return sum(pool.map(_range_trace_sum, chunks))


def euler_product_truncated(p: int, max_degree: int) -> list[int]:
    """The L-series as a literal Euler product over closed points of degree
    <= max_degree, expanded to that order; exact integer coefficients.

    Closed points of the parameter line are monic irreducibles; the three
    linear polynomials at the singular parameters contribute no factor.
    Each remaining point is handled in its own residue field, which keeps
    this independent of the single-field aggregation done by trace_sum.
    """
    if not 1 <= max_degree <= 4:
        raise ValueError("max_degree must be 1..4")
    series = [1] + [0] * max_degree
    for d in range(1, max_degree + 1):
        for modulus in enum_irreducibles(p, d):
            if d == 1 and (-modulus[0]) % p in (0, 1, p - 1):
                continue  # singular parameter
            ctx = FieldCtx(p, d, modulus)
            t_bar = (-modulus[0]) % p if d == 1 else ctx.encode(ctx.gen())
            a_x = _fiber_traces(ctx, [t_bar])[0]
            local = [0] * (max_degree + 1)
            local[0] = 1
            local[d] = -a_x
            if 2 * d <= max_degree:
                local[2 * d] += p**d
            series = series_mul(series, series_inverse(local, max_degree), max_degree)
    return series


def trace_sums_from_series(series: list[int], count: int) -> list[Fraction]:
    """Recover A_1..A_count from a truncated L-series via the logarithm."""
    lg = series_log(series, count)
    return [k * lg[k] for k in range(1, count + 1)]


def roots_on_unit_circle(a: Fraction, b: Fraction) -> bool:
    """Whether 1 + aT + bT^2 + aT^3 + T^4 has all roots of absolute value 1.

    Equivalent to a real factorization (1+uT+T^2)(1+vT+T^2) with
    |u|, |v| <= 2, i.e. z^2 - a z + (b-2) has both roots in [-2, 2]:
    nonnegative discriminant plus sign conditions at z = +-2, all rational.
    """
    disc = a * a - 4 * (b - 2)
    return (
        abs(a) <= 4
        and abs(b) <= 6
        and disc >= 0
        and b - 2 * a + 2 >= 0
        and b + 2 * a + 2 >= 0
    )


def _denominator_is_p_power(x: Fraction, p: int) -> bool:
    d = x.denominator
    while d % p == 0:
        d //= p
    return d == 1


@dataclass(frozen=True)
class LPolynomial:
    """The reciprocal quartic 1 + a T + b T^2 + a T^3 + T^4 attached to an
    odd prime p, with a, b in Z[1/p] and all roots on the unit circle."""

    p: int
    a: Fraction
    b: Fraction

    def __post_init__(self):
        if not _denominator_is_p_power(self.a, self.p) or not _denominator_is_p_power(
            self.b, self.p
        ):
            raise ValueError(f"coefficients of P_{self.p} not in Z[1/{self.p}]")
        if not roots_on_unit_circle(self.a, self.b):
            raise WeilBoundError(
                f"P_{self.p} = 1 + ({self.a})T + ({self.b})T^2 + ... has a root off |z|=1"
            )

    def as_qpoly(self) -> QPolynomial:
        return QPolynomial([1, self.a, self.b, self.a, 1])

    def __str__(self):
        from .qpoly import format_poly

        return format_poly(self.as_qpoly(), "T")


def lpolynomial(p: int, mode: str = MODE_FE, jobs: int = 1) -> LPolynomial:
    """Assemble P_p from point counts.

    MODE_FE uses degree-1 and degree-2 trace sums and completes the quartic
    by reciprocity.  MODE_FULL additionally counts over the degree-3 and
    degree-4 extensions and verifies the completed coefficients; any
    disagreement is a hard error, never repaired.
    """
    if not is_prime(p) or p == 2:
        raise ValueError(f"p must be an odd prime, got {p}")
    if mode not in (MODE_FE, MODE_FULL):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == MODE_FULL and p > FULL_DIRECT_MAX_P:
        raise ValueError(f"full-direct mode limited to p <= {FULL_DIRECT_MAX_P}")

    a1 = trace_sum(p, 1, jobs)
    a2 = trace_sum(p, 2, jobs)
    coeffs = series_exp([Q(0), Q(a1), Q(a2, 2)], 2)
    if coeffs[1].denominator != 1 or coeffs[2].denominator != 1:
        raise HasseBoundError(f"non-integral L-series coefficients for p={p}")
    lp = LPolynomial(p, Q(coeffs[1], p), Q(coeffs[2], p * p))

    if mode == MODE_FULL:
        a3 = trace_sum(p, 3, jobs)
        a4 = trace_sum(p, 4, jobs)
        full = series_exp([Q(0), Q(a1), Q(a2, 2), Q(a3, 3), Q(a4, 4)], 4)
        if full[3] != lp.a * p**3 or full[4] != p**4:
            raise ReciprocityError(
                f"direct degree-3/4 counts for p={p} contradict the reciprocal "
                f"completion: got T^3 coeff {full[3]}, T^4 coeff {full[4]}"
            )
    return lp


@dataclass(frozen=True)
class SquareShape:
    """P = (1 + b T + T^2)^2 with b*p integral; the p = 1 (mod 4) shape."""

    b: Fraction

    @property
    def u(self) -> Fraction:
        return self.b * self.b

    def describe(self) -> str:
        return f"square b={self.b}"


@dataclass(frozen=True)
class BiquadraticShape:
    """P = 1 + (b^2 - 2) T^2 + T^4 with b >= 0 and b*p integral; the
    p = 3 (mod 4) shape."""

    b: Fraction

    @property
    def u(self) -> Fraction:
        return self.b * self.b

    def describe(self) -> str:
        return f"biquadratic b={self.b}"


Shape = SquareShape | BiquadraticShape


def shape_classify(lp: LPolynomial) -> Shape:
    """Match an L-polynomial against the residue-class shape law.

    A mismatch raises ShapeViolation with the offending polynomial; that
    outcome would contradict the shape law and must surface loudly.
    """
    p, a, b = lp.p, lp.a, lp.b
    if p % 4 == 1:
        half = a / 2
        if b != half * half + 2:
            raise ShapeViolation(f"P_{p} = {lp} is not a perfect square of a quadratic")
        if (half * p).denominator != 1:
            raise ShapeViolation(f"P_{p}: b*p = {half * p} is not integral")
        return SquareShape(half)
    if a != 0:
        raise ShapeViolation(f"P_{p} = {lp} has nonzero odd coefficients")
    root = rational_sqrt(b + 2)
    if root is None:
        raise ShapeViolation(f"P_{p} = {lp}: T^2 coefficient + 2 is not a rational square")
    if (root * p).denominator != 1:
        raise ShapeViolation(f"P_{p}: b*p = {root * p} is not integral")
    return BiquadraticShape(root)
