import numpy as np
import pytest

from multidisk.domain import annulus, contains, disk, hole, halfplane, DomainSpec
from multidisk.ratfun import RatFun1
from multidisk.series import LaurentPoly

ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])


def poly_from_roots(roots, lead=1.0):
    return lead * np.polynomial.polynomial.polyfromroots(roots) if len(roots) else np.array([lead])


def ratfun(num_roots, den_roots, lead=1.0):
    return RatFun1(poly_from_roots(num_roots, lead), poly_from_roots(den_roots))


ANNULUS = annulus(1.0, 0.5)
MULTIHOLE = DomainSpec((disk(0, 1.0), hole(0.5, 0.2), hole(-0.5, 0.2)))
THREE_MIXED = DomainSpec((disk(0, 1.0), hole(0.5, 0.25), halfplane(0.0, 1.0)))


def annulus_corpus():
    """Rational functions analytic on A(1, 1/2), with a label each."""
    return [
        ("z+1/z+1", RatFun1([1, 1, 1], [0, 1])),
        ("z^2+z^-3", RatFun1.from_laurent(LaurentPoly(-3, [1, 0, 0, 0, 0, 1]))),
        ("1/(z-2)", ratfun([], [2.0])),
        ("1/(z-0.2)", ratfun([], [0.2])),
        ("(z+3)/((z-1.5)(z+0.1))", ratfun([-3.0], [1.5, -0.1])),
        ("z^3-2z+0.5i", RatFun1([0.5j, -2, 0, 1])),
        ("1/(z-0.1i)^2", ratfun([], [0.1j, 0.1j])),
        ("(2z^2+1)/(z^2-4)", RatFun1([1, 0, 2], [-4, 0, 1])),
        ("1/((z-0.3)(z+1.3i))", ratfun([], [0.3, -1.3j])),
        ("const 2.5", RatFun1([2.5])),
        ("(z-0.7)/(z+1.8)", ratfun([0.7], [-1.8])),
        ("z/(z^2-0.01)", ratfun([0.0], [0.1, -0.1])),
    ]


def multihole_corpus():
    return [
        ("1/(z-.5)+1/(z+.5)", RatFun1([0, 2], [-0.25, 0, 1])),
        ("z^2+1/(z-0.45)", ratfun([], [0.45]) + RatFun1([0, 0, 1])),
        ("1/(z+0.55)^2", ratfun([], [-0.55, -0.55])),
        ("(z+2)/((z-3)(z-0.5))", ratfun([-2.0], [3.0, 0.5])),
        ("const 1", RatFun1([1.0])),
    ]


def random_points(spec, n, rng, strict=True):
    """Uniform points of the domain by rejection from its smallest disk."""
    d = min((c for c in spec.components if c.kind == "disk"), key=lambda c: c.radius)
    out = []
    while len(out) < n:
        z = d.center + d.radius * np.sqrt(rng.uniform(0, 1, 4 * n)) * np.exp(2j * np.pi * rng.uniform(0, 1, 4 * n))
        out.extend(z[contains(spec, z, strict=strict)])
    return np.array(out[:n])


def random_unitary(rng, n):
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def normal_matrix(rng, eigs):
    U = random_unitary(rng, len(eigs))
    return (U * np.asarray(eigs)) @ U.conj().T


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
