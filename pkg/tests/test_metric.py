import numpy as np
import pytest

from pentagon.directsum import (
    ALL_TRIANGLES,
    FLIP_NAMES,
    ZetaFamily,
    check_pentagon,
    flip_faces,
    kashaev_flips,
    random_zeta_family,
    triangle_basis,
)
from pentagon.errors import DegenerateGram, SingularMatrix
from pentagon.metric import (
    J4,
    SIGMA_X,
    QuadScalarProduct,
    cross_gram,
    flip_residuals,
    gram_three_forms,
    isotropic_change,
    isotropic_changes,
    isotropic_flips,
    j_matrix,
    orthonormal_factors,
    orthonormal_flips,
    quad_of_flip,
    rotate_degenerate_gram,
    scalar_product,
    triangle_gram,
)

from conftest import random_symmetric


def test_perpendicular_pairs(family2):
    zf = family2
    sp = QuadScalarProduct.for_quad(zf, (1, 2, 3, 4))
    b = lambda t: triangle_basis(zf, t).matrix  # noqa: E731
    assert np.max(np.abs(scalar_product(b((1, 2, 4)), b((2, 3, 4)), sp))) < 1e-12
    assert np.max(np.abs(scalar_product(b((1, 2, 3)), b((1, 3, 4)), sp))) < 1e-12


def test_cross_grams_vanish_for_every_flip(rng):
    for n in (1, 2, 3):
        zf = random_zeta_family(rng, n)
        for name in FLIP_NAMES:
            for which in ("in", "out"):
                assert np.max(np.abs(cross_gram(zf, name, which))) < 1e-10


def test_scalar_gram_124(scalar_family):
    f = triangle_basis(scalar_family, (1, 2, 4)).matrix[0]
    sp = QuadScalarProduct.for_quad(scalar_family, (1, 2, 3, 4))
    assert scalar_product(f, f, sp) == pytest.approx(-3)
    assert triangle_gram(scalar_family, (1, 2, 4))[0, 0] == pytest.approx(-3)


def test_scalar_product_symmetric(family2, rng):
    zf = family2
    sp = QuadScalarProduct.for_quad(zf, (1, 2, 3, 4))
    rows = np.vstack([triangle_basis(zf, t).matrix for t in [(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)]])
    for _ in range(10):
        f, g = rng.normal(size=8) @ rows, rng.normal(size=8) @ rows
        assert abs(scalar_product(f, g, sp) - scalar_product(g, f, sp)) < 1e-12


def test_scalar_product_accepts_restricted_rows(family2):
    sp = QuadScalarProduct.for_quad(family2, (1, 2, 3, 4))
    f = triangle_basis(family2, (1, 2, 4)).matrix
    restricted = f[:, :8]
    assert np.allclose(scalar_product(f, f, sp), scalar_product(restricted, restricted, sp))
    with pytest.raises(ValueError):
        scalar_product(f[:, :5], f[:, :5], sp)


def test_gram_matches_scalar_product_in_each_quad(family2):
    zf = family2
    for name in FLIP_NAMES:
        quad = quad_of_flip(name)
        sp = QuadScalarProduct.for_quad(zf, quad)
        for t in flip_faces(name):
            f = triangle_basis(zf, t).matrix
            assert np.max(np.abs(scalar_product(f, f, sp) - triangle_gram(zf, t))) < 1e-10


def test_three_forms_agree(rng):
    for _ in range(20):
        zf = random_zeta_family(rng, 2)
        for t in ALL_TRIANGLES:
            g1, g2, g3 = gram_three_forms(zf, t)
            g = triangle_gram(zf, t)
            scale = max(1.0, np.max(np.abs(g)))
            assert max(np.max(np.abs(g1 - g2)), np.max(np.abs(g2 - g3)), np.max(np.abs(g1 - g))) < 1e-10 * scale


def test_easy_exercise_identity(family2):
    zf = family2
    a, b, c = zf.diff(1, 2), zf.diff_inv(4, 2), zf.diff(1, 4)
    assert np.max(np.abs(2 * a @ b @ c - (a @ b @ c + c @ b @ a))) < 1e-10


def test_gram_is_symmetric(family2):
    for t in ALL_TRIANGLES:
        g = triangle_gram(family2, t)
        assert np.max(np.abs(g - g.T)) < 1e-10


def test_locality(rng):
    zf = random_zeta_family(rng, 2)
    for t in ALL_TRIANGLES:
        (m,) = [v for v in range(1, 6) if v not in t][:1]
        other = zf.replace(m, random_symmetric(rng, 2))
        assert np.array_equal(triangle_gram(zf, t), triangle_gram(other, t))


def test_orthonormal_scalar_reproduces_rotations(scalar_family):
    fs = orthonormal_flips(scalar_family)
    ref = kashaev_flips([5, 4, 3, 2, 1])
    for name in FLIP_NAMES:
        assert np.max(np.abs(fs[name] - ref[name])) < 1e-12
    assert fs.P[0, 0] == pytest.approx(np.sqrt(3) / 2)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_orthonormal_flips(rng, n):
    for _ in range(5):
        fs = orthonormal_flips(random_zeta_family(rng, n))
        assert max(flip_residuals(fs, "orthogonal").values()) <= 1e-9
        assert check_pentagon(fs) <= 1e-9


def test_orthonormal_block_scalar_reduction():
    z = [2 + 1j, -1, 0.5j, 1.5, -2j]
    big = orthonormal_flips(ZetaFamily(tuple(v * np.eye(2) for v in z)))
    small = orthonormal_flips(ZetaFamily.from_scalars(z))
    for name in FLIP_NAMES:
        assert np.max(np.abs(big[name] - np.kron(small[name], np.eye(2)))) < 1e-12


def test_orthonormal_custom_factors(family2, rng):
    # Any c with c c^T = G works; rotate the Takagi factor by a complex orthogonal matrix.
    th = 0.3 + 0.2j
    o = np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])
    base = orthonormal_factors(family2)
    custom = {t: base[t] @ o for t in ALL_TRIANGLES}
    fs = orthonormal_flips(family2, custom=custom)
    assert max(flip_residuals(fs, "orthogonal").values()) <= 1e-9
    assert check_pentagon(fs) <= 1e-9


def test_isotropic_change_identity():
    ch = isotropic_change(np.eye(2), c=1 / np.sqrt(2))
    expected = np.array([[1j, 1], [-1j, 1]]) / np.sqrt(2)
    assert np.allclose(ch.a, expected, atol=1e-15)
    assert np.allclose(ch.a @ ch.a.T, SIGMA_X)


def test_isotropic_change_properties(rng):
    for _ in range(20):
        g = random_symmetric(rng, 2)
        al, be, ga = g[0, 0], g[0, 1], g[1, 1]
        ch = isotropic_change(g)
        a = ch.a
        prod = a @ g @ a.T
        assert np.max(np.abs(prod - SIGMA_X)) < 1e-10
        assert ch.c * ch.cprime == pytest.approx(1 / (2 * al * (al * ga - be * be)))
        assert ch.c == pytest.approx(ch.cprime)
        t = 1.7 - 0.4j
        other = isotropic_change(g, c=ch.c * t)
        assert other.cprime == pytest.approx(ch.cprime / t)
        assert np.max(np.abs(other.a @ g @ other.a.T - SIGMA_X)) < 1e-10
        neg = isotropic_change(g, sign=-1)
        assert np.max(np.abs(neg.a @ g @ neg.a.T - SIGMA_X)) < 1e-10


def test_isotropic_change_degenerate():
    with pytest.raises(DegenerateGram):
        isotropic_change([[0, 1], [1, 2]])
    with pytest.raises(DegenerateGram):
        isotropic_change([[1, 1], [1, 1]])
    with pytest.raises(ValueError):
        isotropic_change(np.eye(3))


def test_rotate_degenerate_gram_workaround():
    g = np.array([[0, 1], [1, 2]], dtype=complex)
    rot, rg = rotate_degenerate_gram(g)
    a = isotropic_change(rg).a @ rot
    assert np.max(np.abs(a @ g @ a.T - SIGMA_X)) < 1e-12


def test_j_constant():
    assert np.array_equal(J4, np.array([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]))
    assert np.array_equal(j_matrix(2), J4)


def test_isotropic_rows_are_null(family2):
    zf = family2
    for name in FLIP_NAMES:
        sp = QuadScalarProduct.for_quad(zf, quad_of_flip(name))
        for t in flip_faces(name):
            a = isotropic_change(triangle_gram(zf, t)).a
            g = a @ triangle_basis(zf, t).matrix
            gram = scalar_product(g, g, sp)
            assert abs(gram[0, 0]) < 1e-10 and abs(gram[1, 1]) < 1e-10


def test_isotropic_flips(rng):
    for _ in range(10):
        zf = random_zeta_family(rng, 2)
        fs = isotropic_flips(zf)
        assert max(flip_residuals(fs, "j").values()) <= 1e-9
        assert check_pentagon(fs) <= 1e-9


def test_isotropic_flips_other_normalizations(family2, rng):
    ones = {t: 1.0 for t in ALL_TRIANGLES}
    signs = {t: int(rng.choice([-1, 1])) for t in ALL_TRIANGLES}
    for fs in (isotropic_flips(family2, norms=ones), isotropic_flips(family2, signs=signs)):
        assert max(flip_residuals(fs, "j").values()) <= 1e-9
        assert check_pentagon(fs) <= 1e-9


def test_isotropic_p_is_conjugated_p(family2):
    from pentagon.directsum import closed_form_p
    from pentagon.metric import conjugated_p

    amap = {t: ch.a for t, ch in isotropic_changes(family2).items()}
    fs = isotropic_flips(family2)
    assert np.max(np.abs(conjugated_p(family2, amap) - fs.block("P"))) < 1e-10
    assert closed_form_p(family2).shape == (4, 4)


def test_isotropic_needs_n2(rng):
    with pytest.raises(ValueError):
        isotropic_flips(random_zeta_family(rng, 3))


def test_orthonormal_singular_gram():
    # zeta_12 zeta_42^-1 zeta_14 singular is impossible for invertible differences,
    # so a singular Gramian only shows up through a bad custom factor.
    zf = ZetaFamily.from_scalars([5, 4, 3, 2, 1])
    with pytest.raises(SingularMatrix):
        orthonormal_flips(zf, custom={(1, 2, 3): [[0]]})
