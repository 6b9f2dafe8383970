"""The SL2 (x) SL2 model of the 4-dimensional orthogonal group Omega.

F_l^2 (x) F_l^2 carries the symmetric nondegenerate pairing
b(v1 (x) w1, v2 (x) w2) = h(v1, v2) h(w1, w2) built from the symplectic
pairing h on F_l^2, written in the basis
{e1 (x) e1, e2 (x) e1, e1 (x) e2, e2 (x) e2}.  Pairs of SL2 matrices act by
the Kronecker product; this module provides that action, its inverse
(rank-one block factorization, with the +-(A, B) ambiguity resolved by a
canonical sign), the trace-square invariant extracted from a quartic mod l,
the block-diagonal group generated together with the complex-structure
matrix, its Gaussian-integer 2x2 model, and breadth-first group orders for
validating all of it at small l.
"""

from __future__ import annotations

from functools import lru_cache
from typing import NamedTuple

from .modarith import inv_mod, is_prime, legendre, sqrt_mod
from .ortho import GramForm, Mat, OrthMatrix, identity, mat_mul

Mat2 = tuple[tuple[int, int], tuple[int, int]]

M2_IDENTITY: Mat2 = ((1, 0), (0, 1))

# B0 below squares to -I; it is the second factor of the complex structure.
B0: Mat2 = ((0, -1), (1, 0))


class NotDecomposableError(ValueError):
    """The matrix is not a Kronecker product of an SL2 pair."""


class FormMismatchError(ValueError):
    """A reduced quartic does not have the residue-class mandated shape."""


class NotInGroupError(ValueError):
    """The matrix is outside the block-diagonal group extended by the
    complex structure."""


class CapExceededError(RuntimeError):
    """Breadth-first closure grew past the requested cap."""


def m2_mul(a: Mat2, b: Mat2, ell: int) -> Mat2:
    return (
        (
            (a[0][0] * b[0][0] + a[0][1] * b[1][0]) % ell,
            (a[0][0] * b[0][1] + a[0][1] * b[1][1]) % ell,
        ),
        (
            (a[1][0] * b[0][0] + a[1][1] * b[1][0]) % ell,
            (a[1][0] * b[0][1] + a[1][1] * b[1][1]) % ell,
        ),
    )


def m2_det(a: Mat2, ell: int) -> int:
    return (a[0][0] * a[1][1] - a[0][1] * a[1][0]) % ell


def m2_neg(a: Mat2, ell: int) -> Mat2:
    return tuple(tuple((-x) % ell for x in row) for row in a)


def m2_reduce(a, ell: int) -> Mat2:
    return tuple(tuple(x % ell for x in row) for row in a)


def m2_trace(a: Mat2, ell: int) -> int:
    return (a[0][0] + a[1][1]) % ell


def sl2_generators(ell: int) -> list[Mat2]:
    """Standard generating pair of SL2(F_l)."""
    return [((0, ell - 1), (1, 0)), ((1, 1), (0, 1))]


def tensor_gram(ell: int) -> Mat:
    """Gram matrix of the product pairing in the tensor basis."""
    h = ((0, 1), (-1, 0))
    return tuple(
        tuple(h[r % 2][c % 2] * h[r // 2][c // 2] % ell for c in range(4)) for r in range(4)
    )


@lru_cache(maxsize=None)
def tensor_form(ell: int) -> GramForm:
    return GramForm(ell, tensor_gram(ell))


def _kron(a: Mat2, b: Mat2, ell: int) -> Mat:
    """Action of (A, B) on the tensor basis: entry (k + 2l, i + 2j) is
    A[k][i] * B[l][j]."""
    return tuple(
        tuple(a[r % 2][c % 2] * b[r // 2][c // 2] % ell for c in range(4)) for r in range(4)
    )


def tensor_action(a: Mat2, b: Mat2, ell: int) -> OrthMatrix:
    """The orthogonal matrix by which the SL2 pair (A, B) acts."""
    a, b = m2_reduce(a, ell), m2_reduce(b, ell)
    if m2_det(a, ell) != 1 or m2_det(b, ell) != 1:
        raise ValueError("both factors must have determinant 1")
    return OrthMatrix(_kron(a, b, ell), tensor_form(ell))


def tensor_action_matrix(a: Mat2, b: Mat2, ell: int) -> Mat:
    """Same action as a raw matrix (usable below the l >= 11 form bound)."""
    a, b = m2_reduce(a, ell), m2_reduce(b, ell)
    if m2_det(a, ell) != 1 or m2_det(b, ell) != 1:
        raise ValueError("both factors must have determinant 1")
    return _kron(a, b, ell)


class PairSL2(NamedTuple):
    """An SL2 pair with the +-(A, B) ambiguity resolved: the first nonzero
    entry of A, scanned row-major, lies in [1, (l-1)/2]."""

    a: Mat2
    b: Mat2


def _canonical_pair(a: Mat2, b: Mat2, ell: int) -> PairSL2:
    for x in (y for row in a for y in row):
        if x:
            if not 1 <= x <= (ell - 1) // 2:
                a, b = m2_neg(a, ell), m2_neg(b, ell)
            return PairSL2(a, b)
    raise AssertionError("zero matrix cannot arise from an SL2 pair")


def kronecker_decompose(m, ell: int | None = None) -> PairSL2:
    """Invert the tensor action: recover (A, B) with kron(A, B) = m.

    Accepts an OrthMatrix or a raw 4x4 matrix plus l.  Raises
    NotDecomposableError when m is not such a product (nonsquare block
    determinant, bad block ratios, or recomposition mismatch).
    """
    if isinstance(m, OrthMatrix):
        ell = m.form.ell
        mat = m.mat
    else:
        if ell is None:
            raise ValueError("raw matrix input needs l")
        mat = tuple(tuple(x % ell for x in row) for row in m)

    def block(l: int, j: int) -> Mat2:
        return (
            (mat[2 * l][2 * j], mat[2 * l][2 * j + 1]),
            (mat[2 * l + 1][2 * j], mat[2 * l + 1][2 * j + 1]),
        )

    pivot = None
    for l in range(2):
        for j in range(2):
            blk = block(l, j)
            d = m2_det(blk, ell)
            if d:
                pivot = blk
                break
        if pivot:
            break
    if pivot is None:
        raise NotDecomposableError("every 2x2 block is singular")
    d = m2_det(pivot, ell)
    if legendre(d, ell) != 1:
        raise NotDecomposableError("pivot block determinant is a nonsquare")
    scale = inv_mod(sqrt_mod(d, ell), ell)
    a = tuple(tuple(x * scale % ell for x in row) for row in pivot)
    # with A fixed, every block is a scalar multiple of it; read the scalars
    i0, j0 = next((i, j) for i in range(2) for j in range(2) if a[i][j])
    a_inv_entry = inv_mod(a[i0][j0], ell)
    b = tuple(
        tuple(block(l, j)[i0][j0] * a_inv_entry % ell for j in range(2)) for l in range(2)
    )
    if m2_det(a, ell) != 1 or m2_det(b, ell) != 1 or _kron(a, b, ell) != mat:
        raise NotDecomposableError("matrix is not a Kronecker product of an SL2 pair")
    return _canonical_pair(a, b, ell)


def trace_square_invariant(pmod: tuple[int, ...], p: int, ell: int) -> int:
    """The squared trace of either Kronecker factor, read off a reduced
    quartic 1 + c1 T + c2 T^2 + c3 T^3 + c4 T^4 over F_l.

    For p = 1 (mod 4) the quartic must be (1 + bT + T^2)^2 and the value is
    b^2; for p = 3 (mod 4) it must be 1 + (b^2 - 2) T^2 + T^4 and the value
    is c2 + 2.  Well defined despite the sign ambiguity of the trace.
    """
    if p % 2 == 0 or p % ell == 0:
        raise ValueError("witness prime must be odd and different from l")
    c = tuple(x % ell for x in pmod)
    if len(c) != 5 or c[0] != 1:
        raise FormMismatchError(f"not a quartic with constant term 1: {c}")
    if p % 4 == 1:
        b = c[1] * inv_mod(2, ell) % ell
        expect = (1, 2 * b % ell, (b * b + 2) % ell, 2 * b % ell, 1)
        if c != expect:
            raise FormMismatchError(f"reduction {c} is not a squared quadratic mod {ell}")
        return b * b % ell
    if c[1] != 0 or c[3] != 0 or c[4] != 1:
        raise FormMismatchError(f"reduction {c} is not biquadratic mod {ell}")
    return (c[2] + 2) % ell


# ---------------------------------------------------------------------------
# the block-diagonal group, its extension, and the Gaussian model


def block_diagonal_pair(a: Mat2, ell: int) -> Mat:
    """diag(A, A) for A in SL2(F_l)."""
    a = m2_reduce(a, ell)
    if m2_det(a, ell) != 1:
        raise ValueError("block must have determinant 1")
    return tuple(
        tuple(a[r % 2][c % 2] if r // 2 == c // 2 else 0 for c in range(4)) for r in range(4)
    )


def complex_structure(ell: int) -> Mat:
    """The matrix ((0, -I), (I, 0)); squares to -I and commutes with every
    block-diagonal pair."""
    return _kron(M2_IDENTITY, m2_reduce(B0, ell), ell)


class GaussianMat:
    """2x2 matrix over Z[i]/l, entries stored as (re, im) pairs."""

    __slots__ = ("ell", "entries")

    def __init__(self, ell: int, entries):
        self.ell = ell
        self.entries = tuple(
            tuple((re % ell, im % ell) for re, im in row) for row in entries
        )

    def __mul__(self, other: "GaussianMat") -> "GaussianMat":
        ell = self.ell
        out = []
        for r in range(2):
            row = []
            for c in range(2):
                re = im = 0
                for k in range(2):
                    ar, ai = self.entries[r][k]
                    br, bi = other.entries[k][c]
                    re += ar * br - ai * bi
                    im += ar * bi + ai * br
                row.append((re % ell, im % ell))
            out.append(tuple(row))
        return GaussianMat(ell, out)

    def __eq__(self, other):
        return (
            isinstance(other, GaussianMat)
            and self.ell == other.ell
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.ell, self.entries))

    def to_real(self) -> Mat:
        """The 4x4 matrix acting on (x1, x2, x3, x4) where column vectors
        split as (x1 + x3 i, x2 + x4 i)."""
        ell = self.ell
        re = [[self.entries[r][c][0] for c in range(2)] for r in range(2)]
        im = [[self.entries[r][c][1] for c in range(2)] for r in range(2)]
        rows = []
        for r in range(2):
            rows.append(tuple(re[r]) + tuple((-x) % ell for x in im[r]))
        for r in range(2):
            rows.append(tuple(im[r]) + tuple(re[r]))
        return tuple(rows)

    def __repr__(self):
        def fmt(e):
            re, im = e
            if im == 0:
                return str(re)
            return f"{re}+{im}i"

        return f"GaussianMat[{fmt(self.entries[0][0])}, {fmt(self.entries[0][1])}; {fmt(self.entries[1][0])}, {fmt(self.entries[1][1])}] mod {self.ell}"


def _equal_diagonal_blocks(mat: Mat, ell: int) -> Mat2 | None:
    a = ((mat[0][0], mat[0][1]), (mat[1][0], mat[1][1]))
    lower = ((mat[2][2], mat[2][3]), (mat[3][2], mat[3][3]))
    off_zero = all(
        mat[r][c] == 0
        for r in range(4)
        for c in range(4)
        if (r // 2) != (c // 2)
    )
    if off_zero and a == lower and m2_det(a, ell) == 1:
        return a
    return None


def to_gaussian(mat: Mat, ell: int) -> GaussianMat:
    """Write a member of the extended block-diagonal group as a 2x2 matrix
    over Z[i]/l, letting i act as the complex structure.

    Membership is checked by peeling: either the matrix is diag(A, A), or
    multiplying by the inverse complex structure makes it so.
    """
    mat = tuple(tuple(x % ell for x in row) for row in mat)
    gamma = complex_structure(ell)
    gamma_inv = tuple(tuple((-x) % ell for x in row) for row in gamma)  # gamma^3 = -gamma
    if _equal_diagonal_blocks(mat, ell) is None:
        peeled = mat_mul(mat, gamma_inv, ell)
        if _equal_diagonal_blocks(peeled, ell) is None:
            raise NotInGroupError("matrix is not in the extended block-diagonal group")
    return GaussianMat(
        ell,
        [[(mat[r][c], mat[r + 2][c]) for c in range(2)] for r in range(2)],
    )


def group_order_bfs(generators, ell: int, cap: int = 10_000_000) -> int:
    """Exact order of the matrix group generated over F_l, by breadth-first
    closure with packed-integer hashing."""
    if cap > 10_000_000:
        raise ValueError("cap above 10^7 refused")
    if not is_prime(ell):
        raise ValueError(f"{ell} is not prime")

    def pack(m: Mat) -> int:
        key = 0
        for row in m:
            for x in row:
                key = key * ell + x
        return key

    gens = [tuple(tuple(x % ell for x in row) for row in g) for g in generators]
    start = identity(len(gens[0]))
    seen = {pack(start)}
    frontier = [start]
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                prod = mat_mul(m, g, ell)
                key = pack(prod)
                if key not in seen:
                    seen.add(key)
                    if len(seen) > cap:
                        raise CapExceededError(f"group closure exceeded cap {cap}")
                    nxt.append(prod)
        frontier = nxt
    return len(seen)
