import math

import numpy as np
import pytest

from conftest import ANNULUS, MULTIHOLE, THREE_MIXED, random_points
from multidisk.domain import (DomainSpec, MobiusMap, annulus, boundary_samples, check_domain, contains,
                              disk, empty_probe, eval_pencil, gamma_values, halfplane, hole,
                              interior_grid, mobius_gamma, validate_domain)
from multidisk.errors import DomainError


def test_validate_annulus_ok():
    assert validate_domain(ANNULUS) == []


def test_validate_hole_only_reports_no_disk():
    with pytest.raises(DomainError) as exc:
        validate_domain(DomainSpec((hole(0, 1),)))
    assert any("no disk" in m for _, m in exc.value.violations)


def test_validate_disjoint_disks_is_local():
    assert validate_domain(DomainSpec((disk(0, 1), disk(2, 1)))) == []


def test_validate_reports_each_violation():
    spec = DomainSpec((hole(0, 0.5), disk(0, 0.0), halfplane(0, -1)))
    v = validate_domain(spec, raise_on_error=False)
    idx = {j for j, _ in v}
    assert {1, 2} <= idx
    assert any("order" in m for _, m in v)


def test_theta_normalized():
    assert halfplane(-math.pi / 2, 0).theta == pytest.approx(1.5 * math.pi)


def test_gamma_annulus():
    g1, g2 = mobius_gamma(ANNULUS, 0), mobius_gamma(ANNULUS, 1)
    for z in (0.7, 0.6 + 0.3j, -0.9j):
        assert g1(z) == pytest.approx(z)
        assert g2(z) == pytest.approx(1 / (2 * z))


def test_gamma_halfplane_boundary():
    spec = DomainSpec((disk(0, 3), halfplane(0, 1)))
    assert mobius_gamma(spec, 1)(1.0) == pytest.approx(-1.0)
    assert abs(mobius_gamma(spec, 1)(1 + 2j)) == pytest.approx(1.0)


def test_gamma_index_error():
    with pytest.raises(IndexError):
        mobius_gamma(ANNULUS, 2)


def test_mobius_inverse_compose():
    m = MobiusMap(1 + 1j, 2, 0.5, 3)
    z = 0.3 - 0.2j
    assert m.inverse()(m(z)) == pytest.approx(z)
    assert m.compose(m.inverse())(z) == pytest.approx(z)


def test_pencil_annulus():
    P = eval_pencil(annulus(2.0, 0.5), 0.9)
    np.testing.assert_allclose(np.diag(P.pplus), [2.0, 0.9])
    np.testing.assert_allclose(np.diag(P.pminus), [0.9, 0.5])


def test_pencil_at_hole_center_is_singular():
    P = eval_pencil(ANNULUS, 0.0)
    assert P.pplus[1, 1] == 0


def test_pencil_ratio_matches_gamma():
    P = eval_pencil(ANNULUS, 0.7)
    ratio = np.diag(P.pminus @ np.linalg.inv(P.pplus))
    np.testing.assert_allclose(ratio, [0.7, 5 / 7], rtol=1e-12)
    np.testing.assert_allclose(gamma_values(ANNULUS, 0.7), [0.7, 5 / 7])


def test_contains_examples():
    assert contains(ANNULUS, 0.75)
    assert not contains(ANNULUS, 0.4)
    assert not contains(ANNULUS, 0.0)
    assert contains(ANNULUS, 1j) and not contains(ANNULUS, 1j, strict=True)


def test_check_domain_k2_unchanged():
    assert check_domain(ANNULUS) == ANNULUS


def test_check_domain_k3_disk_and_halfplane(rng):
    chk = check_domain(THREE_MIXED)
    assert chk.kinds() == ["disk", "disk", "hole"]
    assert chk[0].radius == pytest.approx(1 / math.sqrt(2))
    assert chk[2].radius == pytest.approx(0.25 * math.sqrt(2))
    # w-disk center -3, radius 2 sqrt 2 shifted back by the offset 1
    assert chk[1].center == pytest.approx(-2.0)
    assert chk[1].radius == pytest.approx(2 * math.sqrt(2))
    # sampling oracle: |gamma_hp(z)| <= c  iff  z in the produced disk
    c = 1 / math.sqrt(2)
    z = rng.uniform(-6, 2, 200) + 1j * rng.uniform(-4, 4, 200)
    g = np.abs(mobius_gamma(THREE_MIXED, 2)(z))
    inside = np.abs(z - chk[1].center) <= chk[1].radius
    far = np.abs(g - c) > 1e-9
    np.testing.assert_array_equal((g <= c)[far], inside[far])


def test_check_domain_rejects_k1():
    with pytest.raises(DomainError):
        check_domain(DomainSpec((disk(0, 1),)))


def test_check_domain_inclusion(rng):
    for spec in (ANNULUS, MULTIHOLE, THREE_MIXED):
        chk = check_domain(spec)
        z = rng.uniform(-1.2, 1.2, 2000) + 1j * rng.uniform(-1.2, 1.2, 2000)
        inside = contains(chk, z)
        assert np.all(contains(spec, z[inside]))


def test_boundary_samples_unit_circle():
    pts = [z for _, z in boundary_samples(DomainSpec((disk(0, 1),)), 4)]
    assert pts == [1, 1j, -1, -1j]


def test_boundary_samples_kept_and_unimodular():
    for spec in (ANNULUS, MULTIHOLE, THREE_MIXED):
        for j, z in boundary_samples(spec, 64):
            assert contains(spec, z)
            assert abs(abs(gamma_values(spec, z)[j]) - 1) <= 1e-10


def test_boundary_samples_minimum():
    with pytest.raises(ValueError):
        boundary_samples(ANNULUS, 3)


def test_gamma_bounded_inside(rng):
    for spec in (ANNULUS, MULTIHOLE, THREE_MIXED):
        z = random_points(spec, 300, rng, strict=True)
        g = np.max(np.abs(gamma_values(spec, z)), axis=-1)
        assert np.all(g < 1)


def test_empty_probe():
    assert empty_probe(ANNULUS) is not None
    assert contains(ANNULUS, empty_probe(ANNULUS), strict=True)
    assert empty_probe(DomainSpec((disk(0, 1), disk(10, 1)))) is None


def test_interior_grid_margin():
    pts = interior_grid(ANNULUS, 40, margin=0.1)
    assert pts.size > 0
    assert np.all(np.max(np.abs(gamma_values(ANNULUS, pts)), axis=-1) <= 0.9)
