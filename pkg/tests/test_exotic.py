import numpy as np
import pytest

from pentagon.directsum import ALL_TRIANGLES, check_pentagon
from pentagon.errors import DegenerateParameters
from pentagon.metric import flip_residuals, isotropic_flips, triangle_gram
from pentagon.weights import (
    GaussWeight,
    pentagon_grassmann,
    random_gauss_weight,
    scale_generators,
    weight_from_matrix,
    weights_from_flips,
)
from pentagon.exotic import (
    HAT_P_ZEROS,
    LambdaMuParams,
    check_constraint_u,
    diagonal_gauge,
    gram_lm,
    hat_flips,
    hat_p,
    lm_changes,
    lm_isotropic_change,
    lm_matrix,
    printed_constraint_u,
    random_lm,
    vandermonde_mu_det,
    zeta_from_lm,
)

A_ENTRIES = ((1, 0), (1, 2), (3, 0), (3, 2))


def test_params_validation():
    with pytest.raises(DegenerateParameters):
        LambdaMuParams((1, 1, 2, 3, 4), (0,) * 5)
    with pytest.raises(ValueError):
        LambdaMuParams((1, 2, 3), (0, 0, 0))
    p = LambdaMuParams((5, 4, 3, 2), (0, 0, 0, 0))
    with pytest.raises(ValueError):
        zeta_from_lm(p)


def test_zeta_family_properties(rng):
    p = random_lm(rng, real=False)
    zf = zeta_from_lm(p)
    for i in range(1, 6):
        for j in range(1, 6):
            assert np.max(np.abs(zf.z(i) @ zf.z(j) - zf.z(j) @ zf.z(i))) < 1e-12
            if i != j:
                assert abs(np.linalg.det(zf.diff(i, j)) - p.l(i, j) ** 2) < 1e-12


def test_mu_zero_is_scalar():
    p = LambdaMuParams((5, 4, 3, 2, 1), (0,) * 5)
    zf = zeta_from_lm(p)
    for i, lam in enumerate((5, 4, 3, 2, 1), start=1):
        assert np.array_equal(zf.z(i), lam * np.eye(2))


def test_hat_p_reference_entry():
    p = LambdaMuParams((5, 4, 3, 2), (0.1, 0.2, 0.3, 0.5))
    assert hat_p(p)[0, 0] == pytest.approx(0.75, abs=1e-15)


def test_hat_p_zero_pattern(rng):
    for _ in range(50):
        m = hat_p(random_lm(rng, real=False))
        for i, j in HAT_P_ZEROS:
            assert m[i, j] == 0


def test_equal_mu_kills_a(rng):
    for _ in range(50):
        p = random_lm(rng, real=False)
        mu = complex(rng.normal(), rng.normal())
        q = LambdaMuParams(p.lam, (mu,) * 5)
        assert vandermonde_mu_det(q) == 0
        m = hat_p(q)
        for i, j in A_ENTRIES:
            assert m[i, j] == 0


def test_a_is_the_determinant():
    p = LambdaMuParams((0, 1, 2, 3), (0, 0, 0, 1))
    # rows (1, l, l^2, mu); cofactor of the single nonzero mu entry is the 3x3 Vandermonde of 0, 1, 2
    assert vandermonde_mu_det(p) == pytest.approx(2.0)


def test_gram_lm_matches_metric(rng):
    p = random_lm(rng)
    zf = zeta_from_lm(p)
    for t in ALL_TRIANGLES:
        lam, mu = gram_lm(p, t)
        assert np.max(np.abs(lm_matrix(lam, mu) - triangle_gram(zf, t))) < 1e-10


def test_lm_change_is_isotropic(rng):
    p = random_lm(rng)
    zf = zeta_from_lm(p)
    for t in ALL_TRIANGLES:
        a = lm_isotropic_change(*gram_lm(p, t), c=1.3)
        g = triangle_gram(zf, t)
        assert np.max(np.abs(a @ g @ a.T - [[0, 1], [1, 0]])) < 1e-10
    with pytest.raises(DegenerateParameters):
        lm_isotropic_change(0, 1)


def test_hat_flips_reproduce_hat_p(rng):
    for _ in range(20):
        p = random_lm(rng)
        fs = hat_flips(p)
        assert np.max(np.abs(fs.block("P") - hat_p(p))) <= 1e-9
        assert check_pentagon(fs) <= 1e-9
        assert max(flip_residuals(fs, "j").values()) <= 1e-9


def test_cross_module_gauge(rng):
    for _ in range(20):
        p = random_lm(rng)
        consts = {t: complex(rng.uniform(0.5, 2.0), rng.uniform(-1, 1)) for t in ALL_TRIANGLES}
        fs = isotropic_flips(zeta_from_lm(p), changes=lm_changes(p, consts))
        left, right, res = diagonal_gauge(fs.block("P"), hat_p(p))
        assert res <= 1e-9
        # outgoing triangles 123, 134 sit on the left, incoming 124, 234 on the right
        c = consts
        assert left[0, 0] ** 2 == pytest.approx(c[(1, 2, 3)] ** 2)
        assert left[2, 2] ** 2 == pytest.approx(c[(1, 3, 4)] ** 2)
        assert right[0, 0] ** 2 == pytest.approx(1 / c[(1, 2, 4)] ** 2)
        assert right[2, 2] ** 2 == pytest.approx(1 / c[(2, 3, 4)] ** 2)


def test_constraint_u_on_exotic_weights(rng):
    for _ in range(20):
        p = random_lm(rng)
        w = weight_from_matrix(hat_p(p))
        assert check_constraint_u(w) <= 1e-9
        for w in weights_from_flips(hat_flips(p)).values():
            assert check_constraint_u(w) <= 1e-9


def test_printed_form_is_not_satisfied(rng):
    p = random_lm(rng)
    w = weight_from_matrix(hat_p(p))
    assert printed_constraint_u(w) > 1e-3


def test_constraint_u_identity_weight():
    assert check_constraint_u(GaussWeight(0, np.eye(2), 0)) == 1


def test_constraint_u_survives_scaling(rng):
    p = random_lm(rng)
    w = weight_from_matrix(hat_p(p))
    k = rng.uniform(0.5, 2.0, 4) + 1j * rng.uniform(-1, 1, 4)
    s = scale_generators(w, *k)
    assert check_constraint_u(s) <= 1e-9 * abs(np.prod(k))
    generic = random_gauss_weight(rng)
    assert check_constraint_u(scale_generators(generic, *k)) > 1e-6


def test_exotic_grassmann_pentagon(rng):
    p = random_lm(rng)
    dev, const = pentagon_grassmann(weights_from_flips(hat_flips(p)))
    assert dev <= 1e-9 and const != 0
