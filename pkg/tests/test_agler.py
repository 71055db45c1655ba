import math

import numpy as np
import pytest

from conftest import ANNULUS, MULTIHOLE, annulus_corpus, normal_matrix, random_points, ratfun
from multidisk.agler import (agler_lower_bound, annulus_product_correction, in_class, perturb_interior,
                             psi_cb_bound, quotient_upper_bound, random_class_member, witness_kl)
from multidisk.domain import DomainSpec, annulus, boundary_samples, disk, halfplane, hole
from multidisk.errors import DomainError, PreconditionError
from multidisk.linalg import spectral_norm
from multidisk.ratfun import RatFun1, lift_to_polydisk, ratfun_eval_at_matrix
from multidisk.series import LaurentPoly

CONVEX = DomainSpec((disk(0, 1.0), halfplane(0.0, 0.5)))
DECENTERED = DomainSpec((disk(0, 1.0), hole(0.1, 0.3)))


def test_in_class_examples():
    rep = in_class(ANNULUS, np.diag([0.8, 0.6]))
    assert rep.member and rep.strict_member and rep.pencil_member
    rep = in_class(ANNULUS, witness_kl(1, 1, 0.5).M)
    assert rep.member and not rep.strict_member and rep.pencil_member
    rep = in_class(ANNULUS, np.zeros((2, 2)))
    assert not rep.member and not rep.pencil_member
    assert rep.pivots[1] == 0.0
    assert not in_class(ANNULUS, np.diag([1.1, 0.7])).member
    assert not in_class(ANNULUS, np.diag([0.4, 0.7])).member


def test_in_class_gamma_norms():
    rep = in_class(ANNULUS, np.diag([0.8, 0.6]))
    np.testing.assert_allclose(rep.gamma_norms, [0.8, 0.5 / 0.6])


def test_in_class_nonnormal_not_spectral():
    # eigenvalues inside the annulus but the norm is too large
    T = np.array([[0.75, 2.0], [0.0, 0.75]])
    rep = in_class(ANNULUS, T)
    assert not rep.member and not rep.pencil_member


def test_random_member_reproducible():
    A = random_class_member(ANNULUS, 3, 11)
    B = random_class_member(ANNULUS, 3, 11)
    np.testing.assert_array_equal(A, B)
    C = random_class_member(ANNULUS, 3, 11, mode="rejection")
    np.testing.assert_array_equal(C, random_class_member(ANNULUS, 3, 11, mode="rejection"))


def test_random_member_spectrum():
    for s in range(100):
        T = random_class_member(ANNULUS, 1 + s % 4, s, mode="rejection" if s % 2 else "normal")
        lam = np.abs(np.linalg.eigvals(T))
        assert np.all((lam > 0.5) & (lam < 1))
        assert in_class(ANNULUS, T).strict_member


def test_random_member_errors():
    with pytest.raises(ValueError):
        random_class_member(ANNULUS, 0, 1)
    with pytest.raises(ValueError):
        random_class_member(ANNULUS, 2, 1, mode="other")
    with pytest.raises(DomainError):
        random_class_member(DomainSpec((hole(0, 1),)), 2, 1)


@pytest.mark.parametrize("k,l,r", [(1, 1, 0.5), (2, 3, 0.3), (3, 1, 0.7), (2, 2, 0.6)])
def test_witness_kl(k, l, r):
    W = witness_kl(k, l, r)
    assert spectral_norm(W.M) == pytest.approx(1, abs=1e-12)
    assert spectral_norm(np.linalg.inv(W.M)) == pytest.approx(1 / r, rel=1e-12)
    F = RatFun1.from_laurent(LaurentPoly.from_dict({k: 1, -l: 1}))
    FM = ratfun_eval_at_matrix(F, W.M)
    assert spectral_norm(FM) == pytest.approx(1 + r ** -l, rel=1e-12)
    n = k + l
    for i, col in enumerate(W.shift(k)):
        assert FM[i, col] == pytest.approx(W.predicted[i], rel=1e-12)
        others = np.delete(FM[i], col)
        assert np.max(np.abs(others)) <= 1e-12 * (1 + r ** -l)
    assert len(W.predicted) == n


def test_witness_errors():
    with pytest.raises(ValueError):
        witness_kl(0, 1, 0.5)
    with pytest.raises(ValueError):
        witness_kl(1, 1, 1.0)


def test_bounds_on_kl():
    F = RatFun1.from_laurent(LaurentPoly.from_dict({2: 1, -3: 1}))
    spec = annulus(1.0, 0.3)
    lo = agler_lower_bound(F, spec, samples=4)
    hi = quotient_upper_bound(F, spec)
    assert lo.bound == pytest.approx(1 + 0.3 ** -3, rel=1e-10)
    assert hi.bound == pytest.approx(1 + 0.3 ** -3, rel=1e-10)
    assert not hi.surrogate


def test_lower_bound_at_least_boundary_sup():
    F = ratfun([-3.0], [1.5, -0.1])
    lo = agler_lower_bound(F, ANNULUS, samples=3)
    z = np.exp(2j * np.pi * np.arange(512) / 512)
    assert lo.bound >= max(np.max(np.abs(F(z))), np.max(np.abs(F(0.5 * z)))) - 1e-3
    assert lo.evaluated > 0


def test_lower_bound_deterministic():
    F = RatFun1([1, 1, 1], [0, 1])
    a = agler_lower_bound(F, ANNULUS, samples=3, seed=4)
    b = agler_lower_bound(F, ANNULUS, samples=3, seed=4)
    assert a.bound == b.bound
    np.testing.assert_array_equal(a.witness, b.witness)


def test_upper_bound_examples():
    F = RatFun1([1, 1, 1], [0, 1])
    ub = quotient_upper_bound(F, ANNULUS)
    assert ub.bound == 4.0
    G1 = lift_to_polydisk(F, ANNULUS).with_corrections(annulus_product_correction(ANNULUS, -0.5))
    ub1 = quotient_upper_bound(F, ANNULUS, lift=G1)
    assert ub1.bound <= 4 - 1e-3
    assert quotient_upper_bound(RatFun1([0, 2], [-0.25, 0, 1]), MULTIHOLE).surrogate


def test_product_correction_vanishes_on_image(rng):
    spec = annulus(2.0, 0.5)
    (e1, c1), (e0, c0) = annulus_product_correction(spec, 0.7)
    z = random_points(spec, 20, rng)
    val = c1 * (z / 2) * (0.5 / z) + c0
    np.testing.assert_allclose(val, 0, atol=1e-15)
    with pytest.raises(DomainError):
        annulus_product_correction(MULTIHOLE, 1.0)


def test_psi_cb_values():
    assert psi_cb_bound(1) == 1
    assert psi_cb_bound(2) == pytest.approx(2 + 2 / math.sqrt(3))
    assert psi_cb_bound(3) == pytest.approx(3 + 6 / math.sqrt(3))
    with pytest.raises(ValueError):
        psi_cb_bound(0)


def test_sandwich_small_corpus():
    for _, F in annulus_corpus()[:4]:
        lo = agler_lower_bound(F, ANNULUS, samples=3)
        hi = quotient_upper_bound(F, ANNULUS)
        assert lo.bound <= hi.bound + 1e-8


def _boundary_normal(spec, rng, dim):
    """A normal member with some eigenvalues on the boundary."""
    pts = random_points(spec, dim, rng)
    bd = [z for _, z in boundary_samples(spec, 64)]
    pts[0] = bd[rng.integers(len(bd))]
    return normal_matrix(rng, pts)


def test_perturb_convex(rng):
    for s in range(10):
        T = _boundary_normal(CONVEX, rng, 3)
        for eps in (1e-2, 1e-3):
            Te = perturb_interior(CONVEX, T, eps, p=0.2j)
            assert in_class(CONVEX, Te).strict_member
            assert spectral_norm(Te - T) <= 2 * eps * (spectral_norm(T) + 1)


def test_perturb_multihole(rng):
    for s in range(10):
        T = random_class_member(MULTIHOLE, 3, s) if s % 2 else _boundary_normal(MULTIHOLE, rng, 3)
        d = []
        for eps in (1e-2, 5e-3):
            Te = perturb_interior(MULTIHOLE, T, eps, mode="multihole")
            assert in_class(MULTIHOLE, Te).pencil_margin > 0
            d.append(spectral_norm(Te - T))
            assert d[-1] <= 2 * eps * (spectral_norm(T) + 1)
        assert d[1] <= 0.5 * d[0] * (1 + 1e-9)


def test_perturb_decentered_witness():
    M = witness_kl(1, 1, 0.5).M
    spec = annulus(1.0, 0.5)
    Te = perturb_interior(spec, M, 1e-3, mode="decentered")
    assert in_class(spec, Te).strict_member
    spec = DECENTERED
    T = np.diag([0.99, -0.5 + 0.0j])
    Te = perturb_interior(spec, T, 1e-2, mode="decentered")
    assert in_class(spec, Te).strict_member


def test_perturb_errors():
    T = np.diag([0.8, 0.7])
    with pytest.raises(DomainError):
        perturb_interior(ANNULUS, T, 0.1, mode="convex")
    with pytest.raises(PreconditionError):
        perturb_interior(CONVEX, T, 0.1, p=2.0)
    with pytest.raises(ValueError):
        perturb_interior(ANNULUS, T, 0.0, mode="multihole")
    with pytest.raises(ValueError):
        perturb_interior(ANNULUS, T, 0.1, mode="bogus")
    lopsided = DomainSpec((disk(0, 1.0), hole(0.5, 0.2), hole(-0.5, 0.1)))
    with pytest.raises(DomainError):
        perturb_interior(lopsided, T, 0.1, mode="multihole")
    with pytest.raises(DomainError):
        perturb_interior(DomainSpec((disk(0, 1.0), hole(0.5, 0.2))), T, 0.1, mode="decentered")
