"""Finite field contexts, quadratic characters, irreducible enumeration."""

import pytest

from psl2cert.gf import FieldCtx, enum_irreducibles, fq_ctx, poly_eval, quad_char


def brute_force_irreducible_quadratics(p):
    """Oracle: monic quadratics with no root, in lexicographic order."""
    out = []
    for c1 in range(p):
        for c0 in range(p):
            m = (c0, c1, 1)
            if all(poly_eval(m, x, p) != 0 for x in range(p)):
                out.append(m)
    return out


def test_ctx_f3_modulus_is_lex_smallest_irreducible_quadratic():
    oracle = brute_force_irreducible_quadratics(3)
    assert oracle[0] == (1, 0, 1)  # t^2 + 1
    assert fq_ctx(3, 2).modulus == oracle[0]


def test_ctx_prime_field_modulus_is_t():
    assert fq_ctx(3, 1).modulus == (0, 1)


def test_ctx_sizes():
    assert fq_ctx(5, 4).q == 625
    assert fq_ctx(7, 2).q == 49


def test_ctx_rejects_bad_input():
    with pytest.raises(ValueError):
        fq_ctx(9, 1)
    with pytest.raises(ValueError):
        fq_ctx(2, 1)
    with pytest.raises(ValueError):
        fq_ctx(5, 5)
    with pytest.raises(ValueError):
        FieldCtx(3, 2, (0, 0, 1))  # t^2 is reducible


def test_field_axioms_small():
    ctx = fq_ctx(3, 2)
    elems = list(ctx.elements())
    assert len(elems) == 9
    one = ctx.one()
    for a in elems:
        if not a.is_zero():
            assert a * a.inverse() == one
        assert a ** ctx.q == a  # Frobenius at full power fixes everything


def test_frobenius_fixes_exactly_prime_subfield():
    for (p, k) in [(3, 2), (5, 2)]:
        ctx = fq_ctx(p, k)
        fixed = [a for a in ctx.elements() if a.frobenius() == a]
        assert len(fixed) == p
        assert all(all(c == 0 for c in a.coeffs[1:]) for a in fixed)


def test_quad_char_conventions():
    ctx3 = fq_ctx(3, 1)
    assert quad_char(ctx3, 0) == 0
    assert quad_char(ctx3, 1) == 1
    # squares in F_3 are {0, 1}, exhaustively
    squares = {(x * x) % 3 for x in range(3)}
    assert 2 not in squares
    assert quad_char(ctx3, 2) == -1


@pytest.mark.parametrize("p,k", [(3, 1), (5, 1), (7, 1), (11, 1), (3, 2), (5, 2), (7, 2), (11, 2), (3, 4)])
def test_quad_char_multiplicative_exhaustive(p, k):
    ctx = fq_ctx(p, k)
    elems = list(ctx.elements())
    chi = {ctx.encode(a): quad_char(ctx, a) for a in elems}
    for a in elems:
        if a.is_zero():
            continue
        for b in elems:
            if b.is_zero():
                continue
            assert chi[ctx.encode(a)] * chi[ctx.encode(b)] == chi[ctx.encode(a * b)]


@pytest.mark.parametrize("p,k", [(3, 1), (7, 1), (3, 2), (5, 2)])
def test_quad_char_counts_square_roots(p, k):
    ctx = fq_ctx(p, k)
    elems = list(ctx.elements())
    for v in elems:
        solutions = sum(1 for y in elems if y * y == v)
        assert solutions == 1 + quad_char(ctx, v)


def test_enum_irreducibles_linear():
    # all linear monic polynomials: t - c for c in F_3
    assert enum_irreducibles(3, 1) == [(0, 1), (1, 1), (2, 1)]


def test_enum_irreducibles_against_brute_force():
    assert enum_irreducibles(3, 2) == brute_force_irreducible_quadratics(3)
    assert len(enum_irreducibles(3, 2)) == 3
    assert len(enum_irreducibles(5, 2)) == 10
    assert len(enum_irreducibles(5, 2)) == (5 * 5 - 5) // 2


def mobius_count(p, d):
    """(1/d) sum_{e | d} mu(e) p^(d/e)."""
    mu = {1: 1, 2: -1, 3: -1, 4: 0}
    total = sum(mu[e] * p ** (d // e) for e in range(1, d + 1) if d % e == 0)
    return total // d


@pytest.mark.parametrize("p", [3, 5, 7])
@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_enum_irreducibles_count_formula(p, d):
    assert len(enum_irreducibles(p, d)) == mobius_count(p, d)


@pytest.mark.parametrize("p,d", [(3, 3), (3, 4), (5, 3)])
def test_enumerated_polynomials_have_no_roots(p, d):
    for m in enum_irreducibles(p, d):
        assert all(poly_eval(m, x, p) != 0 for x in range(p))


def test_extension_arithmetic_matches_modulus():
    # in F_9 = F_3[t]/(t^2+1) the generator squares to -1
    ctx = fq_ctx(3, 2)
    t = ctx.gen()
    assert t * t == ctx.elem(-1)
    assert (t * t * t * t) == ctx.one()


def test_quad_char_power_path_above_table_bound():
    # q = 1031^2 > 2^20: no table, the Euler-criterion power is used
    ctx = fq_ctx(1031, 2)
    assert ctx.q > 1 << 20
    assert quad_char(ctx, 0) == 0
    assert quad_char(ctx, 1) == 1
    for coeffs in [(3, 5), (7, 1), (100, 900)]:
        v = ctx.elem(coeffs)
        assert quad_char(ctx, v * v) == 1
        assert quad_char(ctx, v) in (-1, 1)
    # multiplicativity on a few pairs
    a, b = ctx.elem((2, 3)), ctx.elem((11, 4))
    assert quad_char(ctx, a) * quad_char(ctx, b) == quad_char(ctx, a * b)
