"""Weighted l1 coefficient norms and Bohr-radius certificates.

Exact computations use :class:`fractions.Fraction`.  The bidisk certificate
expands the inner function ``n / q`` with

    q(z) = det(I - D diag(z1, z2)) = 1 - d11 z1 - d22 z2 + det(D) z1 z2,
    n(z) = z1 z2 q(1/z1, 1/z2) = det(D) - d22 z1 - d11 z2 + z1 z2,

and sums ``|c_a| rho^{|a|}`` over a box of exponents.  A sum above 1 shows
that ``rho`` exceeds the two-variable Bohr radius.
"""

from dataclasses import dataclass
from fractions import Fraction
import math
import time

import numpy as np
import scipy.optimize

from .errors import PreconditionError
from .linalg import as_cmatrix, inverse, spectral_norm
from .series import LaurentPoly, MultiPoly, laurent_eval, taylor_coeffs_ratio2

__all__ = [
    "REFERENCE_D",
    "K2_LOWER",
    "PSI_ANNULUS_UPPER",
    "parse_rational",
    "format_rational",
    "reference_D",
    "AnnulusCoeffs",
    "l1hat_polydisk",
    "l1hat_annulus",
    "inner_pair",
    "K2Certificate",
    "k2_certificate",
    "k2_series_float",
    "Pushforward",
    "k1k2_pushforward",
    "ChainReport",
    "banach_chain_check",
    "ImproveResult",
    "k2_improve",
]

REFERENCE_D = (("0.854373111798292", "-0.518782521594128"),
           ("0.518794363700548", "0.848187547437653"))
K2_LOWER = 0.3006
PSI_ANNULUS_UPPER = 1.0 + math.sqrt(2.0)


def parse_rational(s):
    """Exact rational from ``"p/q"``, a decimal string, an int or a Fraction."""
    if isinstance(s, Fraction):
        return s
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, float):
        raise TypeError("floats are not exact; pass a decimal string instead")
    return Fraction(str(s).strip())


def format_rational(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def reference_D():
    return [[parse_rational(x) for x in row] for row in REFERENCE_D]


@dataclass(frozen=True, eq=False)
class AnnulusCoeffs:
    """Laurent coefficients ``a_k`` (dict or :class:`LaurentPoly`) of a function on ``r <= |z| <= R``."""

    coeffs: object
    R: object
    r: object

    def __post_init__(self):
        if not 0 < self.r < self.R:
            raise ValueError("need 0 < r < R")

    def items(self):
        c = self.coeffs
        return c.items() if isinstance(c, (LaurentPoly, dict)) else list(c)


def _terms(c):
    if isinstance(c, MultiPoly):
        return c.terms.items()
    return dict(c).items()


def l1hat_polydisk(c, rho, box=None):
    """``sum |c_a| rho^{|a|}`` over exponents inside ``box`` (all when ``None``).

    Exact for rational coefficients and rational ``rho``.
    """
    if rho <= 0:
        raise ValueError("rho must be positive")
    if isinstance(box, int):
        box = (box,) * len(next(iter(_terms(c)), ((0, 0), 0))[0])
    total = 0
    for alpha, ca in _terms(c):
        if box is not None and any(a > b for a, b in zip(alpha, box)):
            continue
        total += abs(ca) * rho ** sum(alpha)
    return total


def l1hat_annulus(f, rho):
    """``sum_{k>=0} |a_k| R^k rho^k + sum_{k<0} |a_k| rho^{-k} r^k``."""
    if rho <= 0:
        raise ValueError("rho must be positive")
    total = 0
    for k, a in f.items():
        if k >= 0:
            total += abs(a) * (f.R * rho) ** k
        else:
            total += abs(a) * (rho / f.r) ** (-k)
    return total


def inner_pair(D):
    """``(n, q)`` as exact :class:`~multidisk.series.MultiPoly` objects."""
    (d11, d12), (d21, d22) = D
    det = d11 * d22 - d12 * d21
    q = MultiPoly(2, {(0, 0): Fraction(1), (1, 0): -d11, (0, 1): -d22, (1, 1): det})
    n = MultiPoly(2, {(0, 0): det, (1, 0): -d22, (0, 1): -d11, (1, 1): Fraction(1)})
    return n, q


@dataclass(frozen=True, eq=False)
class K2Certificate:
    D: list
    rho: Fraction
    deg: int
    S: Fraction
    certified: bool
    coeffs: MultiPoly
    seconds: float

    def to_json(self):
        return {
            "rho": format_rational(self.rho),
            "S": format_rational(self.S),
            "certified": self.certified,
            "deg": self.deg,
            "D": [[format_rational(x) for x in row] for row in self.D],
        }


def _float_D(D):
    return np.array([[float(x) for x in row] for row in D])


def k2_certificate(D, rho0, deg=12):
    """Exact Bohr sum of the inner function built from ``D`` at ``rho0``.

    ``certified`` is ``S > 1`` in exact arithmetic.

    Raises
    ------
    PreconditionError
        If ``||D|| >= 1`` (checked in floating point).
    """
    t0 = time.perf_counter()
    D = [[parse_rational(x) for x in row] for row in D]
    rho0 = parse_rational(rho0)
    if rho0 <= 0:
        raise ValueError("rho must be positive")
    if deg < 0:
        raise ValueError("deg must be non-negative")
    nrm = spectral_norm(_float_D(D))
    if nrm >= 1.0:
        raise PreconditionError(f"||D|| = {nrm} is not below 1", value=nrm)
    n, q = inner_pair(D)
    c = taylor_coeffs_ratio2(n, q, deg)
    S = l1hat_polydisk(c, rho0, (deg, deg))
    return K2Certificate(D, rho0, deg, S, S > 1, c, time.perf_counter() - t0)


def k2_series_float(D, deg=12):
    """Float Taylor coefficients ``|c_a|`` grouped by total degree ``|a|``.

    ``S(rho) = sum_t w[t] rho^t`` for the returned weights ``w``.
    """
    D = np.asarray(D, dtype=float)
    d11, d22 = D[0, 0], D[1, 1]
    det = d11 * d22 - D[0, 1] * D[1, 0]
    n = {(0, 0): det, (1, 0): -d22, (0, 1): -d11, (1, 1): 1.0}
    c = np.zeros((deg + 2, deg + 2))
    for a1 in range(deg + 1):
        for a2 in range(deg + 1):
            c[a1 + 1, a2 + 1] = (n.get((a1, a2), 0.0) + d11 * c[a1, a2 + 1]
                                 + d22 * c[a1 + 1, a2] - det * c[a1, a2])
    w = np.zeros(2 * deg + 1)
    ac = np.abs(c[1:, 1:])
    for a1 in range(deg + 1):
        w[a1:a1 + deg + 1] += ac[a1]
    return w


@dataclass(frozen=True, eq=False)
class Pushforward:
    a: dict
    s_plus: float
    s_minus: float
    s_plus_bound: float
    s_minus_bound: float
    s: float
    combined: float

    @property
    def chain_ok(self):
        return (self.s_plus <= self.s_plus_bound * (1 + 1e-12) + 1e-15
                and self.s_minus <= self.s_minus_bound * (1 + 1e-12) + 1e-15
                and self.s_plus_bound + self.s_minus_bound <= self.combined * (1 + 1e-12) + 1e-15)


def k1k2_pushforward(c, R, r, rho, box=None):
    """Laurent data of ``f(z) = g(z/R, r/z)`` from the Taylor data ``c`` of ``g``.

    ``a_k = sum_{a1 - a2 = k} c_a r^{a2} / R^{a1}``.  Also returns the weighted
    sums ``s_plus``, ``s_minus`` at ``rho``, their termwise bounds and the
    bound ``sum |c_a| s^{|a|}`` with ``s = max(rho, r/(R rho))``.
    """
    if not 0 < r < R:
        raise ValueError("need 0 < r < R")
    terms = [(a, ca) for a, ca in _terms(c)
             if box is None or (a[0] <= box[0] and a[1] <= box[1])]
    a = {}
    for (a1, a2), ca in terms:
        a[a1 - a2] = a.get(a1 - a2, 0) + ca * r ** a2 / R ** a1
    x = r / (R * rho)
    s = max(rho, x)
    plus_b = sum(abs(ca) * x ** a2 * rho ** a1 for (a1, a2), ca in terms if a1 >= a2)
    minus_b = sum(abs(ca) * x ** a1 * rho ** a2 for (a1, a2), ca in terms if a1 < a2)
    f = AnnulusCoeffs(a, R, r)
    s_plus = sum(abs(v) * (R * rho) ** k for k, v in f.items() if k >= 0)
    s_minus = sum(abs(v) * (rho / r) ** (-k) for k, v in f.items() if k < 0)
    combined = sum(abs(ca) * s ** (a1 + a2) for (a1, a2), ca in terms)
    return Pushforward(a, s_plus, s_minus, plus_b, minus_b, s, combined)


@dataclass(frozen=True)
class ChainReport:
    lhs: float
    middle: float
    rhs: float
    weights_apply: bool
    passed: bool
    psi_upper: float = PSI_ANNULUS_UPPER


def banach_chain_check(f, T, rho, R=1.0, r=0.5, k2=K2_LOWER):
    """Replay the estimate ``||f(T)|| <= sum |a_k| ||T||^k + sum |a_k| ||T^-1||^{-k}``.

    ``rhs`` is the weighted norm on ``A(R/k2, k2 r)`` at ``rho``.  The second
    comparison ``middle <= rhs`` is only required when ``||T|| <= R~ rho`` and
    ``||T^-1|| <= rho / r~``, which is when the weights dominate termwise.
    """
    T = as_cmatrix(T)
    Tinv = inverse(T)
    lhs = spectral_norm(laurent_eval(f, T))
    nT, nTi = spectral_norm(T), spectral_norm(Tinv)
    middle = sum(abs(a) * (nT ** k if k >= 0 else nTi ** (-k)) for k, a in f.items())
    Rt, rt = R / k2, k2 * r
    rhs = l1hat_annulus(AnnulusCoeffs(f, Rt, rt), rho)
    applies = nT <= Rt * rho and nTi <= rho / rt
    ok = lhs <= middle + 1e-9 and (not applies or middle <= rhs + 1e-9)
    return ChainReport(lhs, middle, rhs, applies, ok)


@dataclass(frozen=True, eq=False)
class ImproveResult:
    D: list
    rho: Fraction
    certificate: K2Certificate
    seed_certificate: K2Certificate
    evaluations: int

    @property
    def improved(self):
        return self.rho < self.seed_certificate.rho


def _threshold(w, target):
    """Smallest ``rho`` in ``(0, 1)`` with ``sum w[t] rho^t > target`` (bisection), or ``inf``."""
    S = np.polynomial.polynomial.polyval
    lo, hi = 0.0, 1.0
    if S(hi, w) <= target:
        return math.inf
    if S(lo, w) > target:
        return 0.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if S(mid, w) > target:
            hi = mid
        else:
            lo = mid
    return hi


def _project(D, cap=1.0 - 1e-7):
    nrm = spectral_norm(D)
    return D if nrm <= cap else D * (cap / nrm)


def _exact_decimal(D, digits=15):
    return [[Fraction(f"{x:.{digits}f}") for x in row] for row in D]


def _certify_on_grid(D, rho_float, deg, step, max_steps):
    k = max(1, math.ceil(rho_float / step)) if math.isfinite(rho_float) else None
    if k is None:
        return None
    for i in range(max_steps):
        cert = k2_certificate(D, step * (k + i), deg)
        if cert.certified:
            return cert
    return None


def k2_improve(seed_D, budget=200, deg=12, step=Fraction(1, 10000), margin=1e-6, max_steps=50):
    """Search for a matrix whose Bohr certificate holds at a smaller radius.

    A smaller certified radius is a better upper bound on the Bohr constant,
    since the sum grows with ``rho``.  Nelder-Mead minimizes the float
    threshold ``rho`` at which ``S(rho) > 1 + margin`` over the four real
    entries, with ``D`` projected to ``||D|| < 1``.  The winner is rounded to
    15-digit decimals and certified exactly on the grid ``step * N``.  The
    seed certificate is returned when no better one is certified.
    """
    step = parse_rational(step)
    if isinstance(seed_D[0][0], (str, Fraction)):
        seed_exact = [[parse_rational(x) for x in row] for row in seed_D]
        seed = _float_D(seed_exact)
    else:
        seed = np.asarray(seed_D, dtype=float)
        seed_exact = _exact_decimal(seed)
    if spectral_norm(seed) >= 1.0:
        raise PreconditionError("seed matrix must have norm below 1", value=spectral_norm(seed))
    seed_rho = _threshold(k2_series_float(seed, deg), 1.0)
    seed_cert = _certify_on_grid(seed_exact, seed_rho, deg, step, max_steps)
    if seed_cert is None:
        # the seed is not certifiable below rho = 1 at this degree; report its exact sum at the last grid point
        seed_cert = k2_certificate(seed_exact, Fraction(1, 3), deg)
    best = seed_cert
    evals = 0
    if budget > 0:
        def objective(x):
            nonlocal evals
            evals += 1
            D = _project(x.reshape(2, 2))
            t = _threshold(k2_series_float(D, deg), 1.0 + margin)
            return t if math.isfinite(t) else 2.0

        res = scipy.optimize.minimize(objective, seed.ravel(), method="Nelder-Mead",
                                      options={"maxfev": int(budget), "xatol": 1e-12, "fatol": 1e-12})
        cand = _project(res.x.reshape(2, 2))
        cand_exact = _exact_decimal(cand)
        if spectral_norm(_float_D(cand_exact)) < 1.0:
            rho_c = _threshold(k2_series_float(_float_D(cand_exact), deg), 1.0)
            cert = _certify_on_grid(cand_exact, rho_c, deg, step, max_steps)
            if cert is not None and (not best.certified or cert.rho < best.rho):
                best = cert
    return ImproveResult(best.D, best.rho, best, seed_cert, evals)
