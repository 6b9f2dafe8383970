"""4x4 orthogonal group machinery over F_l: bilinear forms, reflections,
Cartan-Dieudonne factorization, the spinor norm, and Omega membership.

The spinor norm has two independent evaluation paths: det(I + A) when that
determinant is nonzero, and otherwise the product of the square classes
<v,v> over a reflection factorization.  Both are exposed so they can be
cross-checked against each other.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum

from .modarith import is_prime, legendre

Mat = tuple[tuple[int, ...], ...]
Vec = tuple[int, ...]

DIM = 4


def identity(n: int = DIM) -> Mat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul(a: Mat, b: Mat, ell: int) -> Mat:
    n = len(a)
    bt = tuple(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) % ell for col in bt) for row in a
    )


def mat_vec(a: Mat, v: Vec, ell: int) -> Vec:
    return tuple(sum(x * y for x, y in zip(row, v)) % ell for row in a)


def mat_add(a: Mat, b: Mat, ell: int) -> Mat:
    return tuple(tuple((x + y) % ell for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_neg(a: Mat, ell: int) -> Mat:
    return tuple(tuple((-x) % ell for x in row) for row in a)


def mat_transpose(a: Mat) -> Mat:
    return tuple(zip(*a))


def mat_det(a: Mat, ell: int) -> int:
    n = len(a)
    if n == 1:
        return a[0][0] % ell
    total = 0
    for j in range(n):
        if a[0][j]:
            minor = tuple(row[:j] + row[j + 1 :] for row in a[1:])
            sign = 1 if j % 2 == 0 else -1
            total += sign * a[0][j] * mat_det(minor, ell)
    return total % ell


def mat_pow(a: Mat, n: int, ell: int) -> Mat:
    result = identity(len(a))
    while n:
        if n & 1:
            result = mat_mul(result, a, ell)
        a = mat_mul(a, a, ell)
        n >>= 1
    return result


def mat_trace(a: Mat, ell: int) -> int:
    return sum(a[i][i] for i in range(len(a))) % ell


def reciprocal_charpoly(m: Mat, ell: int) -> tuple[int, ...]:
    """Coefficients of det(I - m T) for a 4x4 matrix over F_l, recovered
    from the traces of m, m^2, m^3, m^4 by Newton's identities."""
    powers = [m]
    for _ in range(3):
        powers.append(mat_mul(powers[-1], m, ell))
    s = [mat_trace(x, ell) for x in powers]
    e1 = s[0]
    e2 = (e1 * s[0] - s[1]) * pow(2, -1, ell) % ell
    e3 = (e2 * s[0] - e1 * s[1] + s[2]) * pow(3, -1, ell) % ell
    e4 = (e3 * s[0] - e2 * s[1] + e1 * s[2] - s[3]) * pow(4, -1, ell) % ell
    return (1, -e1 % ell, e2, -e3 % ell, e4)


class SquareClass(Enum):
    """F_l^x modulo squares; a group of order two."""

    SQUARE = 1
    NONSQUARE = -1

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        return SquareClass(self.value * other.value)


def square_class(x: int, ell: int) -> SquareClass:
    s = legendre(x, ell)
    if s == 0:
        raise ValueError("square class of zero is undefined")
    return SquareClass(s)


@dataclass(frozen=True)
class GramForm:
    """A nondegenerate symmetric bilinear form on F_l^4."""

    ell: int
    gram: Mat

    def __post_init__(self):
        if not is_prime(self.ell) or self.ell < 11:
            raise ValueError(f"l must be a prime >= 11, got {self.ell}")
        g = tuple(tuple(x % self.ell for x in row) for row in self.gram)
        object.__setattr__(self, "gram", g)
        if g != mat_transpose(g):
            raise ValueError("form matrix is not symmetric")
        if mat_det(g, self.ell) == 0:
            raise ValueError("form matrix is degenerate")

    def pair(self, v: Vec, w: Vec) -> int:
        ell = self.ell
        return sum(v[i] * self.gram[i][j] * w[j] for i in range(DIM) for j in range(DIM)) % ell

    def norm(self, v: Vec) -> int:
        return self.pair(v, v)


@dataclass(frozen=True)
class OrthMatrix:
    """A matrix known to preserve its attached form (checked eagerly)."""

    mat: Mat
    form: GramForm

    def __post_init__(self):
        ell = self.form.ell
        m = tuple(tuple(x % ell for x in row) for row in self.mat)
        object.__setattr__(self, "mat", m)
        g = self.form.gram
        if mat_mul(mat_mul(mat_transpose(m), g, ell), m, ell) != g:
            raise ValueError("matrix does not preserve the form")

    def __matmul__(self, other: "OrthMatrix") -> "OrthMatrix":
        if other.form is not self.form and other.form != self.form:
            raise ValueError("mismatched forms")
        return OrthMatrix(mat_mul(self.mat, other.mat, self.form.ell), self.form)

    def det(self) -> int:
        d = mat_det(self.mat, self.form.ell)
        return d if d == 1 else d - self.form.ell  # orthogonal: +-1


def reflection_matrix(v: Vec, form: GramForm) -> Mat:
    """Matrix of the reflection across v: w -> w - 2 <v,w>/<v,v> v."""
    ell = form.ell
    nv = form.norm(v)
    if nv == 0:
        raise ValueError(f"cannot reflect across the isotropic vector {v}")
    gv = mat_vec(form.gram, v, ell)  # row functional w -> <v, w>
    scale = 2 * pow(nv, -1, ell) % ell
    return tuple(
        tuple(((1 if i == j else 0) - scale * v[i] * gv[j]) % ell for j in range(DIM))
        for i in range(DIM)
    )


def reflection(v: Vec, form: GramForm) -> OrthMatrix:
    return OrthMatrix(reflection_matrix(tuple(x % form.ell for x in v), form), form)


def _candidate_vectors(ell: int):
    """Deterministic supply of nonzero vectors: basis vectors, signed pairs
    and triples first, then the whole projective space."""
    basis = [tuple(1 if i == j else 0 for j in range(DIM)) for i in range(DIM)]
    yield from basis
    for i, j in itertools.combinations(range(DIM), 2):
        for sign in (1, ell - 1):
            v = [0] * DIM
            v[i], v[j] = 1, sign
            yield tuple(v)
    for i, j, k in itertools.combinations(range(DIM), 3):
        for s1 in (1, ell - 1):
            for s2 in (1, ell - 1):
                v = [0] * DIM
                v[i], v[j], v[k] = 1, s1, s2
                yield tuple(v)
    for v in itertools.product(range(ell), repeat=DIM):
        for x in v:
            if x:
                break
        else:
            continue
        if x == 1:  # one representative per projective point
            yield v


def _direct_reflections(b: Mat, form: GramForm):
    """Vectors w = Bv - v with v and w both anisotropic; reflecting across
    such a w strictly grows the fixed space of B."""
    ell = form.ell
    seen = set()
    for v in _candidate_vectors(ell):
        if form.norm(v) == 0:
            continue
        bv = mat_vec(b, v, ell)
        if bv == v:
            continue
        w = tuple((x - y) % ell for x, y in zip(bv, v))
        if w in seen:
            continue
        seen.add(w)
        if form.norm(w) != 0:
            yield w


class _Budget:
    __slots__ = ("left",)

    def __init__(self, n: int):
        self.left = n

    def spend(self) -> bool:
        self.left -= 1
        return self.left >= 0


def _direct_path(b: Mat, form: GramForm, fuel: int, budget: _Budget) -> list[Vec] | None:
    """Depth-first search for a factorization of b into at most `fuel`
    direct reflections, backtracking across candidates."""
    if b == identity():
        return []
    if fuel == 0 or not budget.spend():
        return None
    ell = form.ell
    for w in _direct_reflections(b, form):
        rest = _direct_path(mat_mul(reflection_matrix(w, form), b, ell), form, fuel - 1, budget)
        if rest is not None:
            return [w] + rest
    return None


def cartan_dieudonne(m: OrthMatrix) -> list[Vec]:
    """Vectors v_1..v_r (r <= 5) with r_{v_1} ... r_{v_r} = m.

    Direct reduction steps suffice except when every difference vector is
    isotropic; that degenerate case is handled by one auxiliary reflection
    before recursing, hence the bound of 5 rather than the classical 4.
    """
    form = m.form
    ell = form.ell
    path = _direct_path(m.mat, form, 4, _Budget(50_000))
    if path is not None:
        return path
    attempts = 0
    for u in _candidate_vectors(ell):
        if form.norm(u) == 0:
            continue
        b2 = mat_mul(reflection_matrix(u, form), m.mat, ell)
        path = _direct_path(b2, form, 4, _Budget(50_000))
        if path is not None:
            return [u] + path
        attempts += 1
        if attempts >= 300:
            break
    raise RuntimeError("reflection factorization not found for orthogonal input")


def spinor_norm(m: OrthMatrix) -> SquareClass:
    """Spinor norm of an orthogonal matrix as a square class.

    Fast path: the class of det(I + m) whenever that is nonzero.  Fallback:
    the product of the classes <v,v> over a reflection factorization.
    """
    ell = m.form.ell
    d = mat_det(mat_add(identity(), m.mat, ell), ell)
    if d != 0:
        return square_class(d, ell)
    cls = SquareClass.SQUARE
    for v in cartan_dieudonne(m):
        cls = cls * square_class(m.form.norm(v), ell)
    return cls


def spinor_norm_by_reflections(m: OrthMatrix) -> SquareClass:
    """Reflection-product path only, for cross-checking the fast path."""
    cls = SquareClass.SQUARE
    for v in cartan_dieudonne(m):
        cls = cls * square_class(m.form.norm(v), m.form.ell)
    return cls


def in_omega(m: OrthMatrix) -> bool:
    """Membership in the simultaneous kernel of det and spinor norm."""
    return m.det() == 1 and spinor_norm(m) is SquareClass.SQUARE
