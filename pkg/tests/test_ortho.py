"""Reflections, Cartan-Dieudonne factorization, spinor norms, Omega."""

import random

import pytest

from conftest import rand_anisotropic, rand_orthogonal
from psl2cert.ortho import (
    GramForm,
    OrthMatrix,
    SquareClass,
    cartan_dieudonne,
    identity,
    in_omega,
    mat_add,
    mat_det,
    mat_mul,
    mat_neg,
    reflection,
    reflection_matrix,
    spinor_norm,
    spinor_norm_by_reflections,
    square_class,
)
from psl2cert.tensor import tensor_action, tensor_form

LS = (11, 13, 19)


def recompose(vectors, form):
    m = identity()
    for v in vectors:
        m = mat_mul(m, reflection_matrix(v, form), form.ell)
    return m


def test_gram_form_validation():
    with pytest.raises(ValueError):
        GramForm(7, tensor_form(11).gram)  # below the certifiable range
    with pytest.raises(ValueError):
        GramForm(11, ((0, 1, 0, 0), (0, 0, 0, 0), (0, 0, 0, 1), (0, 1, 0, 0)))


def test_reflection_defining_properties():
    form = tensor_form(11)
    rng = random.Random(1)
    for _ in range(25):
        v = rand_anisotropic(form, rng)
        r = reflection(v, form)
        ell = form.ell
        assert tuple((-x) % ell for x in v) == tuple(
            sum(r.mat[i][j] * v[j] for j in range(4)) % ell for i in range(4)
        )
        assert mat_mul(r.mat, r.mat, ell) == identity()
        assert r.det() == -1


def test_reflection_fixes_orthogonal_complement():
    form = tensor_form(13)
    rng = random.Random(2)
    for _ in range(10):
        v = rand_anisotropic(form, rng)
        r = reflection(v, form)
        for _ in range(10):
            w = tuple(rng.randrange(13) for _ in range(4))
            if form.pair(v, w) == 0:
                assert tuple(
                    sum(r.mat[i][j] * w[j] for j in range(4)) % 13 for i in range(4)
                ) == w


def test_reflection_rejects_isotropic():
    form = tensor_form(11)
    with pytest.raises(ValueError):
        reflection((1, 0, 0, 0), form)  # basis vectors are isotropic here


def test_cartan_dieudonne_identity_and_single_reflection():
    form = tensor_form(11)
    assert cartan_dieudonne(OrthMatrix(identity(), form)) == []
    v = (1, 0, 0, 1)
    r = reflection(v, form)
    vecs = cartan_dieudonne(r)
    assert len(vecs) == 1
    assert recompose(vecs, form) == r.mat


def test_cartan_dieudonne_random_products():
    for ell in LS:
        form = tensor_form(ell)
        rng = random.Random(ell)
        for _ in range(40):
            m = rand_orthogonal(form, rng, rng.randint(1, 3))
            vecs = cartan_dieudonne(m)
            assert len(vecs) <= 5
            assert len(vecs) % 2 == (0 if m.det() == 1 else 1)
            assert recompose(vecs, form) == m.mat


def test_cartan_dieudonne_minus_identity():
    form = tensor_form(13)
    m = OrthMatrix(mat_neg(identity(), 13), form)
    vecs = cartan_dieudonne(m)
    assert len(vecs) == 4
    assert recompose(vecs, form) == m.mat


def test_cartan_dieudonne_isotropic_image_case():
    # A transvection-like element: every difference vector is isotropic, so
    # the factorization must take the auxiliary-reflection route.
    ell = 11
    form = tensor_form(ell)
    m = tensor_action(((1, 1), (0, 1)), ((1, 0), (0, 1)), ell)
    vecs = cartan_dieudonne(m)
    assert len(vecs) <= 5
    assert recompose(vecs, form) == m.mat


def test_spinor_norm_basics():
    form = tensor_form(11)
    assert spinor_norm(OrthMatrix(identity(), form)) is SquareClass.SQUARE
    rng = random.Random(3)
    for _ in range(20):
        v = rand_anisotropic(form, rng)
        expected = square_class(form.norm(v), 11)
        assert spinor_norm(reflection(v, form)) is expected


def test_spinor_norm_minus_identity_is_square():
    for ell in LS:
        form = tensor_form(ell)
        m = OrthMatrix(mat_neg(identity(), ell), form)
        assert spinor_norm(m) is SquareClass.SQUARE
        assert in_omega(m)


@pytest.mark.parametrize("ell", LS)
def test_spinor_norm_is_homomorphism(ell):
    form = tensor_form(ell)
    rng = random.Random(100 + ell)
    for _ in range(200):
        a = rand_orthogonal(form, rng, rng.randint(1, 4))
        b = rand_orthogonal(form, rng, rng.randint(1, 4))
        assert spinor_norm(a @ b) is spinor_norm(a) * spinor_norm(b)


@pytest.mark.parametrize("ell", LS)
def test_spinor_norm_dual_path_agreement(ell):
    form = tensor_form(ell)
    rng = random.Random(200 + ell)
    checked = 0
    while checked < 200:
        m = rand_orthogonal(form, rng, rng.randint(1, 4))
        if mat_det(mat_add(identity(), m.mat, ell), ell) == 0:
            continue  # fast path unavailable; nothing to compare
        assert spinor_norm(m) is spinor_norm_by_reflections(m)
        checked += 1


def test_spinor_norm_dual_path_on_unipotent():
    # det(I + M) != 0 for this transvection, so both paths apply
    ell = 13
    m = tensor_action(((1, 1), (0, 1)), ((1, 0), (0, 1)), ell)
    assert spinor_norm(m) is spinor_norm_by_reflections(m)


def test_in_omega_reflection_is_false():
    form = tensor_form(11)
    assert not in_omega(reflection((1, 0, 0, 1), form))


def test_omega_has_index_four():
    # all four (det, spin) classes occur among products of reflections
    ell = 11
    form = tensor_form(ell)
    rng = random.Random(11)
    seen = set()
    for _ in range(300):
        m = rand_orthogonal(form, rng, rng.randint(1, 5))
        seen.add((m.det(), spinor_norm(m)))
    assert seen == {
        (1, SquareClass.SQUARE),
        (1, SquareClass.NONSQUARE),
        (-1, SquareClass.SQUARE),
        (-1, SquareClass.NONSQUARE),
    }


def test_orth_matrix_validates_membership():
    form = tensor_form(11)
    bad = tuple(tuple(1 if (i, j) == (0, 1) else (1 if i == j else 0) for j in range(4)) for i in range(4))
    with pytest.raises(ValueError):
        OrthMatrix(bad, form)
