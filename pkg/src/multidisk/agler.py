"""Operator classes attached to a domain and two-sided Agler-norm estimates.

An operator ``T`` belongs to the class of the domain when every ``p_j+(T)``
is invertible and ``||gamma_j(T)|| <= 1``; equivalently the block-diagonal
pencil inequality ``P+(T)* P+(T) - P-(T)* P-(T) >= 0`` holds.  Lower bounds
come from evaluating ``F`` at sampled members.  Upper bounds come from the
torus sup norm of a polydisk lift.
"""

from dataclasses import dataclass
import math
import warnings

import numpy as np

from .domain import DISK, HALFPLANE, HOLE, boundary_samples, contains, interior_grid, validate_domain
from .errors import DomainError, NumericError, PreconditionError
from .linalg import (as_cmatrix, hermitian_eigen, inverse, is_invertible, pivot_ratio,
                     polar_decompose, spectral_norm)
from .ratfun import RatFun1, as_matrat, lift_to_polydisk, ratfun_eval_at_matrix
from .realize import _operator_pencils, _random_unitary
from .series import LaurentPoly, Torus, sup_norm_boundary

__all__ = [
    "ClassReport",
    "in_class",
    "random_class_member",
    "witness_kl",
    "agler_lower_bound",
    "quotient_upper_bound",
    "annulus_product_correction",
    "psi_cb_bound",
    "perturb_interior",
]

MEMBER_TOL = 1e-12
STRICT_MARGIN = 1e-9


@dataclass(frozen=True)
class ClassReport:
    pivots: tuple
    gamma_norms: tuple
    pencil_margin: float
    member: bool
    strict_member: bool
    pencil_member: bool

    @property
    def agree(self):
        """Whether the gamma-norm and pencil characterizations give the same verdict."""
        return self.member == self.pencil_member


def in_class(spec, T):
    """Membership report computed by both characterizations.

    ``member`` uses the gamma norms.  ``pencil_member`` uses the sign of the
    smallest pencil eigenvalue, relative to ``max_j ||p_j+(T)||^2``.
    """
    T = as_cmatrix(T)
    blocks = [_operator_pencils(c, T) for c in spec.components]
    pivots = tuple(pivot_ratio(pp) for pp, _ in blocks)
    invertible = all(is_invertible(pp) for pp, _ in blocks)
    gnorms = []
    margins = []
    scale = 0.0
    for pp, pm in blocks:
        H = pp.conj().T @ pp - pm.conj().T @ pm
        margins.append(float(hermitian_eigen(0.5 * (H + H.conj().T))[0][0]))
        scale = max(scale, spectral_norm(pp) ** 2)
        gnorms.append(spectral_norm(pm @ inverse(pp)) if is_invertible(pp) else math.inf)
    margin = min(margins)
    member = invertible and max(gnorms) <= 1.0 + MEMBER_TOL
    pencil_member = invertible and margin >= -MEMBER_TOL * max(scale, 1.0)
    strict = invertible and margin >= STRICT_MARGIN
    return ClassReport(pivots, tuple(gnorms), margin, member, strict, pencil_member)


def _normal_member(spec, dim, rng, pts):
    lam = pts[rng.integers(pts.size, size=dim)]
    U = _random_unitary(rng, dim)
    return (U * lam) @ U.conj().T


def random_class_member(spec, dim, seed, mode="normal", density=64, max_tries=1000):
    """A seeded random strict member of size ``dim``.

    ``normal`` draws eigenvalues from interior grid points and conjugates by a
    random unitary.  ``rejection`` perturbs such a matrix by a random
    non-normal term and keeps it when it is still a strict member.  When the
    rejection budget runs out the normal draw is returned with a
    ``RuntimeWarning``.
    """
    if dim < 1:
        raise ValueError("dim must be at least 1")
    if mode not in ("normal", "rejection"):
        raise ValueError(f"unknown mode {mode!r}")
    validate_domain(spec)
    rng = np.random.default_rng(seed)
    pts = interior_grid(spec, density, margin=1e-3)
    if pts.size == 0:
        raise DomainError("no interior grid points found; the domain may be empty or too thin")
    for _ in range(max_tries):
        T = _normal_member(spec, dim, rng, pts)
        if in_class(spec, T).strict_member:
            break
    else:
        raise NumericError("could not draw a strict normal member")
    if mode == "normal":
        return T
    diam = float(np.ptp(pts.real) + np.ptp(pts.imag))
    for _ in range(max_tries):
        E = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        S = T + rng.uniform(0.0, 0.25) * diam * E / spectral_norm(E)
        if in_class(spec, S).strict_member:
            return S
    warnings.warn("rejection budget exhausted; returning the normal member", RuntimeWarning, stacklevel=2)
    return T


@dataclass(frozen=True, eq=False)
class KLWitness:
    M: np.ndarray
    predicted: np.ndarray

    def shift(self, k):
        """Column holding ``a_i`` in row ``i`` (0-based) of ``F(M)``."""
        n = self.M.shape[0]
        return [(i + k) % n for i in range(n)]


def witness_kl(k, l, r):
    """The ``(k+l)``-square boundary member on which ``z^k + z^{-l}`` attains its lift's sup norm.

    ``predicted`` lists ``a_1, ..., a_{k+l}``; row ``i`` of ``M^k + M^{-l}``
    carries ``a_i`` in column ``i + k`` (mod ``k + l``, 1-based rows).
    """
    if int(k) != k or int(l) != l or k < 1 or l < 1:
        raise ValueError("k and l must be positive integers")
    if not 0 < r < 1:
        raise ValueError("r must lie in (0, 1)")
    k, l = int(k), int(l)
    n = k + l
    M = np.zeros((n, n))
    for i in range(1, n):
        M[i - 1, i] = 1.0 if i <= k else r
    M[n - 1, 0] = r
    lo, hi = min(k, l), max(k, l)
    a = np.empty(n)
    for i in range(1, n + 1):
        if i <= lo:
            a[i - 1] = r ** (i - 1) + r ** -(l + 1 - i)
        elif i <= hi + 1:
            a[i - 1] = r ** lo + r ** -(l - lo)
        else:
            a[i - 1] = r ** (k + l + 1 - i) + r ** -(i - k - 1)
    return KLWitness(M, a)


def _kl_structure(F, spec):
    """``(k, l, r)`` when ``F = z^k + z^{-l}`` and the domain is ``A(1, r)``, else ``None``."""
    if isinstance(F, LaurentPoly):
        f = F
    else:
        F = as_matrat(F)
        if not isinstance(F, RatFun1):
            return None
        f = F.to_laurent()
        if f is None:
            return None
    items = [(kk, a) for kk, a in f.items() if abs(a) > 1e-14]
    if len(items) != 2 or items[0][0] >= 0 or items[1][0] <= 0:
        return None
    if any(abs(a - 1.0) > 1e-14 for _, a in items):
        return None
    comps = spec.components
    if (len(comps) != 2 or comps[0].kind != DISK or comps[1].kind != HOLE
            or comps[0].center != 0 or comps[1].center != 0 or comps[0].radius != 1.0):
        return None
    return items[1][0], -items[0][0], comps[1].radius


@dataclass(frozen=True, eq=False)
class LowerBound:
    bound: float
    witness: np.ndarray
    evaluated: int
    skipped: int


def _eval_F(F, T):
    if isinstance(F, LaurentPoly):
        F = RatFun1.from_laurent(F)
    return ratfun_eval_at_matrix(F, T)


def agler_lower_bound(F, spec, samples=20, dims=None, seed=0, n_boundary=256):
    """Largest ``||F(T)||`` found over sampled members.

    The sample set holds strict random members of every size in ``dims``,
    scalar boundary points, and the explicit witness when ``F = z^k + z^{-l}``
    on ``A(1, r)``.  Ties keep the first incumbent.  Failed evaluations are
    skipped and counted.
    """
    kl = _kl_structure(F, spec)
    if dims is None:
        dims = [1, 2, 3] + ([kl[0] + kl[1]] if kl else [])
    best, arg, ok, bad = -math.inf, None, 0, 0

    def consider(T):
        nonlocal best, arg, ok, bad
        try:
            v = spectral_norm(_eval_F(F, T))
        except (NumericError, ValueError):
            bad += 1
            return
        ok += 1
        if v > best:
            best, arg = v, as_cmatrix(T)

    for _, z in boundary_samples(spec, n_boundary):
        consider(np.array([[z]]))
    for d in dims:
        for s in range(samples):
            consider(random_class_member(spec, d, [seed, d, s]))
    if kl:
        W = witness_kl(*kl).M
        if in_class(spec, W).member:
            consider(W)
    if arg is None:
        raise NumericError("no sample could be evaluated")
    return LowerBound(best, arg, ok, bad)


@dataclass(frozen=True, eq=False)
class UpperBound:
    bound: float
    lift: object
    argmax: tuple
    surrogate: bool


def quotient_upper_bound(F, spec, grid=None, lift=None):
    """Torus sup norm of a polydisk lift of ``F``.

    For two components this bounds the Agler norm.  For three or more the
    torus sup only bounds the lift's sup norm, and ``surrogate`` is set.
    """
    G = lift if lift is not None else lift_to_polydisk(as_matrat(F) if isinstance(F, LaurentPoly) else F, spec)
    est = sup_norm_boundary(G, Torus(spec.k), grid)
    return UpperBound(est.value, G, est.argmax, spec.k >= 3)


def annulus_product_correction(spec, coef):
    """Correction monomials ``coef * (z1 z2 - r/R)``, which vanish on the image of a centered annulus."""
    comps = spec.components
    if (len(comps) != 2 or comps[0].kind != DISK or comps[1].kind != HOLE
            or comps[0].center != comps[1].center):
        raise DomainError("product correction needs a concentric annulus")
    return (((1, 1), coef), ((0, 0), -coef * comps[1].radius / comps[0].radius))


def psi_cb_bound(k):
    if k < 1:
        raise ValueError("k must be at least 1")
    return k + k * (k - 1) / math.sqrt(3.0)


def _rescale_modulus(T, factor):
    """``U f(|T|)`` where ``T = U |T|`` and ``f`` multiplies each eigenvalue ``w`` by ``factor(w)``."""
    U, _ = polar_decompose(T)
    w, V = hermitian_eigen(T.conj().T @ T)
    s = np.sqrt(np.clip(w, 0.0, None))
    return U @ ((V * (s * factor(s))) @ V.conj().T)


def perturb_interior(spec, T, eps, mode="convex", p=None):
    """Push a class member into the strict class.

    ``convex`` returns ``(1 - eps) T + eps p I`` for an interior point ``p``.
    ``multihole`` and ``decentered`` work with ``T - a I`` (``a`` the disk
    center) and rescale the spectral pieces of its modulus.  The cut points
    are ``d0 = sqrt(|a_j|^2 - r_j^2)`` and ``d1 = (R + max_j(r_j + |a_j|)) / 2``.
    """
    T = as_cmatrix(T)
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    validate_domain(spec)
    comps = spec.components
    I = np.eye(T.shape[0], dtype=complex)
    if mode == "convex":
        if any(c.kind == HOLE for c in comps):
            raise DomainError("convex mode needs a domain without holes")
        if p is None:
            p = comps[0].center
        if not contains(spec, p, strict=True):
            raise PreconditionError("p must be a strictly interior point", value=p)
        return (1 - eps) * T + eps * p * I
    if mode not in ("multihole", "decentered"):
        raise ValueError(f"unknown mode {mode!r}")
    if spec.k1 != 1 or any(c.kind == HALFPLANE for c in comps) or spec.k < 2:
        raise DomainError(f"{mode} mode needs one disk and at least one hole")
    a1, R = comps[0].center, comps[0].radius
    holes = [(c.center - a1, c.radius) for c in comps[1:]]
    if any(abs(a) + r >= R for a, r in holes):
        raise DomainError("every hole must lie inside the outer disk")
    d1 = 0.5 * (R + max(abs(a) + r for a, r in holes))
    S = T - a1 * I
    if mode == "multihole":
        ring = [abs(a) ** 2 - r ** 2 for a, r in holes]
        if ring[0] <= 0 or any(abs(x - ring[0]) > 1e-9 * max(abs(ring[0]), 1.0) for x in ring):
            raise DomainError("holes must share a positive tangent distance |a_j|^2 - r_j^2")
        d0 = math.sqrt(ring[0])

        def factor(s):
            return np.where((s > d0) & (s <= d1), 1 + eps, 1 - eps)
    else:
        if len(holes) != 1 or abs(holes[0][0]) >= holes[0][1]:
            raise DomainError("decentered mode needs one hole that contains the disk center")

        def factor(s):
            return np.where(s <= d1, 1 + eps, 1 - eps)
    return _rescale_modulus(S, factor) + a1 * I
