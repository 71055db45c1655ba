import numpy as np
import pytest

from conftest import ANNULUS, MULTIHOLE, THREE_MIXED, normal_matrix, random_points
from multidisk.agler import random_class_member
from multidisk.domain import annulus, gamma_values
from multidisk.errors import PreconditionError, SingularMatrixError
from multidisk.realize import (Colligation, OperatorArgument, defect_identity_residual, eval_realization_operator,
                               eval_realization_scalar, gain_bound_check, mobius_colligation, random_colligation,
                               sigma_state_check, transfer_apply, validate_colligation)
from multidisk.series import LaurentPoly


def test_shape_validation():
    with pytest.raises(ValueError):
        Colligation(2, 1, np.zeros((3, 3)), np.zeros((2, 1)), np.zeros((1, 2)), np.zeros((1, 1)))
    with pytest.raises(ValueError):
        Colligation(2, 1, np.zeros((2, 2)), np.zeros((2, 1)), np.zeros((1, 2)), np.zeros((2, 2)))


def test_gain_examples(rng):
    z = Colligation(2, 1, np.zeros((2, 2)), np.zeros((2, 1)), np.zeros((1, 2)), np.zeros((1, 1)))
    assert z.gain == 0.0 and validate_colligation(z).is_contraction
    P = np.roll(np.eye(3), 1, axis=0)
    p = Colligation(2, 1, P[:2, :2], P[:2, 2:], P[2:, :2], P[2:, 2:])
    assert p.gain == pytest.approx(1.0)
    for _ in range(5):
        c = random_colligation(2, 2, 1, 2, rng)
        assert c.gain == pytest.approx(1.0, abs=1e-12)
        assert validate_colligation(c).is_contraction
    assert not validate_colligation(random_colligation(2, 1, 1, 1, rng, gain=1.1)).is_contraction


def test_mobius_colligation_matches_gamma(rng):
    for spec in (ANNULUS, MULTIHOLE, THREE_MIXED):
        z = random_points(spec, 100, rng)
        for j in range(spec.k):
            c = mobius_colligation(spec, j)
            got = np.array([eval_realization_scalar(c, spec, zz)[0, 0] for zz in z])
            np.testing.assert_allclose(got, gamma_values(spec, z)[:, j], atol=1e-11)
    spec = annulus(2.0, 0.5)
    z = 1.2 + 0.3j
    assert eval_realization_scalar(mobius_colligation(spec, 0), spec, z)[0, 0] == pytest.approx(z / 2)
    assert eval_realization_scalar(mobius_colligation(spec, 1), spec, z)[0, 0] == pytest.approx(0.5 / z)


def test_scalar_outside_warns():
    with pytest.warns(RuntimeWarning):
        eval_realization_scalar(mobius_colligation(ANNULUS, 0), ANNULUS, 2.0)


def test_operator_agrees_with_scalar_at_1x1(rng):
    c = random_colligation(2, 2, 2, 1, rng)
    for z in random_points(ANNULUS, 10, rng):
        np.testing.assert_allclose(eval_realization_operator(c, ANNULUS, np.array([[z]])),
                                   eval_realization_scalar(c, ANNULUS, z), atol=1e-12)


def test_operator_normal_oracle(rng):
    # at a normal T = U diag(lam) U*, F(T) = (U (x) I) diag(F(lam)) (U* (x) I) in the ordering used here
    c = random_colligation(2, 2, 1, 1, rng)
    lam = random_points(ANNULUS, 3, rng)
    T = normal_matrix(rng, lam)
    w, U = np.linalg.eig(T)
    FT = eval_realization_operator(c, ANNULUS, T)
    D = np.linalg.solve(U, FT @ U)
    expected = [eval_realization_scalar(c, ANNULUS, x)[0, 0] for x in w]
    np.testing.assert_allclose(np.diag(D), expected, atol=1e-10)
    np.testing.assert_allclose(D - np.diag(np.diag(D)), 0, atol=1e-10)


def test_operator_mobius_exact(rng):
    T = random_class_member(ANNULUS, 3, 7, mode="rejection")
    np.testing.assert_allclose(eval_realization_operator(mobius_colligation(ANNULUS, 1), ANNULUS, T),
                               0.5 * np.linalg.inv(T), atol=1e-12)
    np.testing.assert_allclose(eval_realization_operator(mobius_colligation(ANNULUS, 0), ANNULUS, T), T,
                               atol=1e-12)


def test_operator_argument_singular():
    with pytest.raises(SingularMatrixError):
        OperatorArgument(ANNULUS, np.diag([0.0, 0.7]))


def test_operator_argument_Z_layout():
    T = np.diag([0.7, 0.8])
    Zp, Zm = OperatorArgument(ANNULUS, T).Z(2)
    np.testing.assert_allclose(np.diag(Zp), [1, 1, 1, 1, 0.7, 0.8, 0.7, 0.8])
    np.testing.assert_allclose(np.diag(Zm), [0.7, 0.8, 0.7, 0.8, 0.5, 0.5, 0.5, 0.5])


def test_require_strict():
    c = mobius_colligation(ANNULUS, 0)
    T = np.diag([1.0, 0.7])
    with pytest.raises(PreconditionError):
        eval_realization_operator(c, ANNULUS, T, require_strict=True)
    eval_realization_operator(c, ANNULUS, T)


def test_gain_bound_and_defect(rng):
    for s in range(20):
        c = random_colligation(2, 1 + s % 3, 1 + s % 2, 2 - s % 2, rng)
        T = random_class_member(ANNULUS, 1 + s % 4, s, mode="rejection")
        rep = gain_bound_check(c, ANNULUS, T)
        assert rep.passed and rep.lhs <= rep.rhs + 1e-9
        FT = eval_realization_operator(c, ANNULUS, T)
        assert defect_identity_residual(c, ANNULUS, T) <= 1e-8 * (1 + np.linalg.norm(FT, 2) ** 2)


def test_defect_zero_colligation():
    c = Colligation(2, 1, np.zeros((2, 2)), np.zeros((2, 1)), np.zeros((1, 2)), [[0.5]])
    T = np.diag([0.7, 0.9])
    assert defect_identity_residual(c, ANNULUS, T) <= 1e-15


def test_defect_identity_holds_without_contraction(rng):
    c = random_colligation(2, 2, 1, 1, rng, gain=3.0)
    T = random_class_member(ANNULUS, 2, 1)
    res = defect_identity_residual(c, ANNULUS, T)
    FT = eval_realization_operator(c, ANNULUS, T)
    assert res <= 1e-8 * (1 + np.linalg.norm(FT, 2) ** 2)


def test_gain_bound_needs_strict():
    with pytest.raises(PreconditionError):
        gain_bound_check(mobius_colligation(ANNULUS, 0), ANNULUS, np.diag([1.0, 0.7]))


def test_k_mismatch():
    with pytest.raises(ValueError):
        eval_realization_scalar(mobius_colligation(MULTIHOLE, 0), ANNULUS, 0.7)


def test_transfer_constant_and_shift():
    u = LaurentPoly(-2, [1.0, 2.0, 3.0])
    y = transfer_apply(lambda z: np.ones_like(z), u, (-3, 3), 1.0, 0.5)
    np.testing.assert_allclose(y.window(-3, 3), u.window(-3, 3), atol=1e-12)
    y = transfer_apply(lambda z: z, u, (-3, 3), 1.0, 0.5)
    np.testing.assert_allclose(y.window(-3, 3), LaurentPoly(-1, [1.0, 2.0, 3.0]).window(-3, 3), atol=1e-12)


def test_sigma_recursions(rng):
    for R, r in ((1.0, 0.5), (2.0, 0.3)):
        c = random_colligation(2, 2, 1, 1, rng)
        rep = sigma_state_check(c, R, r, LaurentPoly(-1, [1.0, 0.5, -2.0]), (-4, 4))
        assert rep.state_residual <= 1e-9
        assert rep.output_residual <= 1e-9


def test_sigma_needs_scalar_k2(rng):
    with pytest.raises(ValueError):
        sigma_state_check(random_colligation(2, 1, 2, 1, rng), 1.0, 0.5, LaurentPoly(0, [1.0]), (0, 2))
