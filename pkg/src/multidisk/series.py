"""Laurent and bivariate power series, coefficient extraction and sup-norm sampling."""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
import math

import numpy as np

from .domain import _component_contains, _bounding_disk, HALFPLANE, validate_domain
from .errors import ConvergenceError, NumericError
from .linalg import as_cmatrix, inverse, spectral_norms

__all__ = [
    "LaurentPoly",
    "laurent_eval",
    "fejer_means",
    "MultiPoly",
    "taylor_coeffs_ratio2",
    "laurent_coeffs_of_realization",
    "Torus",
    "Circle",
    "SupEstimate",
    "sup_norm_boundary",
]


@dataclass(frozen=True, eq=False)
class LaurentPoly:
    """Finitely supported ``sum_k a_k z^k`` stored from ``kmin`` upward."""

    kmin: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        kmin = int(self.kmin)
        nz = np.flatnonzero(c)
        if nz.size == 0:
            c, kmin = np.zeros(1, dtype=complex), 0
        else:
            kmin += int(nz[0])
            c = c[nz[0]:nz[-1] + 1]
        object.__setattr__(self, "kmin", kmin)
        object.__setattr__(self, "coeffs", c.copy())

    @classmethod
    def from_dict(cls, d):
        if not d:
            return cls(0, [0])
        lo, hi = min(d), max(d)
        c = np.zeros(hi - lo + 1, dtype=complex)
        for k, v in d.items():
            c[k - lo] += v
        return cls(lo, c)

    @property
    def kmax(self):
        return self.kmin + self.coeffs.size - 1

    def coeff(self, k):
        i = k - self.kmin
        return complex(self.coeffs[i]) if 0 <= i < self.coeffs.size else 0j

    def items(self):
        return [(self.kmin + i, complex(c)) for i, c in enumerate(self.coeffs) if c != 0]

    def window(self, kmin, kmax):
        return np.array([self.coeff(k) for k in range(kmin, kmax + 1)])

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = z ** self.kmin * np.polynomial.polynomial.polyval(z, self.coeffs)
        return out if out.ndim else complex(out)

    def __add__(self, other):
        lo = min(self.kmin, other.kmin)
        hi = max(self.kmax, other.kmax)
        return LaurentPoly(lo, self.window(lo, hi) + other.window(lo, hi))

    def __mul__(self, other):
        if np.isscalar(other):
            return LaurentPoly(self.kmin, other * self.coeffs)
        return LaurentPoly(self.kmin + other.kmin, np.convolve(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __repr__(self):
        return f"LaurentPoly(kmin={self.kmin}, coeffs={self.coeffs!r})"


def laurent_eval(f, arg):
    """``f`` at a scalar or at an invertible matrix.

    Negative powers of a matrix use the inverse from
    :func:`~multidisk.linalg.solve_linear`.
    """
    if np.ndim(arg) < 2:
        return f(arg)
    T = as_cmatrix(arg)
    d = T.shape[0]
    out = np.zeros((d, d), dtype=complex)
    if f.kmax >= 0:
        P = np.eye(d, dtype=complex)
        for k in range(0, f.kmax + 1):
            if k >= f.kmin:
                out += f.coeff(k) * P
            P = P @ T
    if f.kmin < 0:
        Tinv = inverse(T)
        P = Tinv.copy()
        for k in range(-1, f.kmin - 1, -1):
            if k <= f.kmax:
                out += f.coeff(k) * P
            P = P @ Tinv
    return out


def fejer_means(f, n):
    """``f_n = sum_{|k| <= 2n} (1 - |k|/(2n+1)) a_k z^k``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    lo, hi = max(f.kmin, -2 * n), min(f.kmax, 2 * n)
    if lo > hi:
        return LaurentPoly(0, [0])
    ks = np.arange(lo, hi + 1)
    return LaurentPoly(lo, (1.0 - np.abs(ks) / (2 * n + 1)) * f.window(lo, hi))


@dataclass(frozen=True, eq=False)
class MultiPoly:
    """Sparse polynomial in ``nvars`` variables: exponent tuple -> coefficient.

    Coefficients may be ``complex`` or exact (:class:`fractions.Fraction`).
    """

    nvars: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for alpha, c in dict(self.terms).items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != self.nvars:
                raise ValueError(f"exponent {alpha} has wrong length")
            if c != 0:
                clean[alpha] = clean.get(alpha, 0) + c
        object.__setattr__(self, "terms", {a: c for a, c in clean.items() if c != 0})

    def __getitem__(self, alpha):
        return self.terms.get(tuple(alpha), 0)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape[:-1], dtype=complex)
        for alpha, c in self.terms.items():
            out = out + complex(c) * np.prod(z ** np.array(alpha), axis=-1)
        return out

    def degree_box(self):
        if not self.terms:
            return (0,) * self.nvars
        return tuple(max(a[i] for a in self.terms) for i in range(self.nvars))


def taylor_coeffs_ratio2(num, den, deg):
    """Taylor coefficients of ``num / den`` on the box ``[0, deg]^2``.

    Uses ``c_a = (num_a - sum_{0 < b <= a} den_b c_{a-b}) / den_0``, so exact
    coefficient types stay exact.
    """
    if isinstance(deg, int):
        deg = (deg, deg)
    d0 = den[(0, 0)]
    if d0 == 0:
        raise NumericError("denominator has zero constant term")
    den_terms = [(b, c) for b, c in den.terms.items() if b != (0, 0)]
    exact = isinstance(d0, (int, Fraction))
    c = {}
    for a1 in range(deg[0] + 1):
        for a2 in range(deg[1] + 1):
            acc = num[(a1, a2)]
            for (b1, b2), db in den_terms:
                if b1 <= a1 and b2 <= a2:
                    acc = acc - db * c[(a1 - b1, a2 - b2)]
            c[(a1, a2)] = acc / d0 if not exact else Fraction(acc) / d0
    return MultiPoly(2, c)


def _batch_eval(F, pts):
    """Evaluate ``F`` on a batch, falling back to a loop for scalar-only callables."""
    n = len(pts)
    try:
        out = np.asarray(F(pts))
        if out.shape[:1] == (n,):
            return out
    except (TypeError, ValueError, NumericError):
        pass
    return np.asarray([np.asarray(F(p)) for p in pts])


def laurent_coeffs_of_realization(F, R, r, window, samples=64, tol=1e-10, cap=2 ** 16):
    """Laurent coefficients of ``F`` analytic on ``r <= |z| <= R``.

    Trapezoid rule on ``|z| = sqrt(rR)`` computed by FFT; the number of nodes
    is doubled until two successive estimates agree to ``tol`` (relative to
    the largest coefficient, floor 1).  Matrix-valued ``F`` yields a list of
    coefficient arrays instead of a :class:`LaurentPoly`.

    Raises
    ------
    ConvergenceError
        If ``cap`` nodes are reached without agreement.
    """
    kmin, kmax = window
    rho = math.sqrt(r * R)
    span = kmax - kmin + 1
    N = max(int(samples), 1 << int(math.ceil(math.log2(max(4 * span, 8)))))
    ks = np.arange(kmin, kmax + 1)

    def estimate(N):
        z = rho * np.exp(2j * np.pi * np.arange(N) / N)
        vals = _batch_eval(F, z)
        spec = np.fft.fft(vals, axis=0) / N
        a = spec[np.mod(ks, N)]
        scale = rho ** (-ks.astype(float))
        return a * scale.reshape((-1,) + (1,) * (a.ndim - 1))

    prev = estimate(N)
    while True:
        N *= 2
        if N > cap:
            raise ConvergenceError(f"Laurent coefficients did not settle with {cap} nodes")
        cur = estimate(N)
        if np.max(np.abs(cur - prev)) <= tol * max(1.0, np.max(np.abs(cur))):
            break
        prev = cur
    if cur.ndim == 1:
        return LaurentPoly(kmin, cur)
    return [(int(k), cur[i]) for i, k in enumerate(ks)]


@dataclass(frozen=True)
class Torus:
    k: int


@dataclass(frozen=True)
class Circle:
    radius: float
    center: complex = 0j


@dataclass(frozen=True, eq=False)
class SupEstimate:
    """Lower estimate of a supremum together with where it was attained."""

    value: float
    argmax: object
    samples: int = 0

    def __float__(self):
        return float(self.value)


def _norms(F, pts):
    vals = _batch_eval(F, pts)
    return spectral_norms(vals)


def _argmax_first(v):
    return int(np.argmax(v))


def _sup_torus(F, k, grid):
    n = int(grid)
    h = 2 * np.pi / n
    axes = [2 * np.pi * np.arange(n) / n] * k
    thetas = np.array(list(product(*axes))) if k > 1 else axes[0][:, None]
    vals = _norms(F, np.exp(1j * thetas))
    i = _argmax_first(vals)
    best_t, best_v = thetas[i].copy(), float(vals[i])
    offs = np.array(list(product(range(-2, 3), repeat=k)), dtype=float)
    for rnd in range(1, 4):
        step = h / 2 ** rnd
        cand = best_t + offs * step
        v = _norms(F, np.exp(1j * cand))
        j = _argmax_first(v)
        if v[j] > best_v:
            best_v, best_t = float(v[j]), cand[j].copy()
    return SupEstimate(best_v, tuple(np.exp(1j * best_t)), len(thetas))


def _sup_circle(F, radius, center, grid):
    n = int(grid)
    t = 2 * np.pi * np.arange(n) / n
    vals = _norms(F, center + radius * np.exp(1j * t))
    i = _argmax_first(vals)
    best_t, best_v = t[i], float(vals[i])
    for rnd in range(1, 4):
        cand = best_t + np.arange(-2, 3) * (2 * np.pi / n) / 2 ** rnd
        v = _norms(F, center + radius * np.exp(1j * cand))
        j = _argmax_first(v)
        if v[j] > best_v:
            best_v, best_t = float(v[j]), cand[j]
    return SupEstimate(best_v, complex(center + radius * np.exp(1j * best_t)), n)


def _boundary_param(spec, j, c, s):
    """Point on the boundary of component ``c`` at parameter ``s``."""
    if c.kind != HALFPLANE:
        return c.center + c.radius * np.exp(1j * np.asarray(s))
    e = c.rotation
    return np.conj(e) * (c.offset + 1j * np.asarray(s))


def _sup_domain(F, spec, grid):
    validate_domain(spec)
    n = int(grid)
    best_v, best_z, total = -np.inf, None, 0
    bc, br = _bounding_disk(spec)
    for j, c in enumerate(spec.components):
        if c.kind != HALFPLANE:
            s = 2 * np.pi * np.arange(n) / n
            h = 2 * np.pi / n
        else:
            dist = abs(np.real(c.rotation * bc) - c.offset)
            if dist > br:
                continue
            half = math.sqrt(br * br - dist * dist)
            mid = np.imag(c.rotation * bc)
            s = mid + np.linspace(-half, half, n)
            h = 2 * half / max(n - 1, 1)
        pts = _boundary_param(spec, j, c, s)
        keep = np.ones(pts.shape, dtype=bool)
        for i, other in enumerate(spec.components):
            if i != j:
                keep &= _component_contains(other, pts, strict=False)
        if not keep.any():
            continue
        s, pts = s[keep], pts[keep]
        vals = _norms(F, pts)
        total += pts.size
        i = _argmax_first(vals)
        cur_s, cur_v = s[i], float(vals[i])
        for rnd in range(1, 4):
            cand_s = cur_s + np.arange(-2, 3) * h / 2 ** rnd
            cand = _boundary_param(spec, j, c, cand_s)
            ok = np.ones(cand.shape, dtype=bool)
            for o, other in enumerate(spec.components):
                if o != j:
                    ok &= _component_contains(other, cand, strict=False)
            if not ok.any():
                break
            v = np.where(ok, _norms(F, cand), -np.inf)
            m = _argmax_first(v)
            if v[m] > cur_v:
                cur_v, cur_s = float(v[m]), cand_s[m]
        if cur_v > best_v:
            best_v, best_z = cur_v, complex(_boundary_param(spec, j, c, cur_s))
    if best_z is None:
        raise NumericError("no boundary sample lies in the domain")
    return SupEstimate(best_v, best_z, total)


_MIN_GRID = 4


def default_torus_grid(k):
    return max(8, int(round(2e5 ** (1.0 / k))))


def sup_norm_boundary(F, region, grid=None):
    """Grid estimate of ``sup ||F||`` over a boundary, with local refinement.

    ``region`` is a :class:`Torus`, a :class:`Circle` or a
    :class:`~multidisk.domain.DomainSpec` (its boundary arcs).  ``F`` must
    accept a batch of points (shape ``(N, k)`` on a torus, ``(N,)`` otherwise)
    or a single point.  After the grid pass, three rounds of stencil search
    with halving step refine the incumbent.  An even grid also takes the
    estimate at half the density, so doubling ``grid`` never lowers the
    result.  The value is a lower estimate of the supremum.
    """
    if isinstance(region, Torus):
        n, raw = grid or default_torus_grid(region.k), lambda g: _sup_torus(F, region.k, g)
    elif isinstance(region, Circle):
        n, raw = grid or 1024, lambda g: _sup_circle(F, region.radius, region.center, g)
    else:
        n, raw = grid or 1024, lambda g: _sup_domain(F, region, g)
    n = int(n)
    # an even grid also folds in the estimate at half density, so doubling never lowers the result
    est = raw(n)
    total = est.samples
    while n % 2 == 0 and n // 2 >= _MIN_GRID:
        n //= 2
        try:
            coarse = raw(n)
        except NumericError:
            continue
        total += coarse.samples
        if coarse.value > est.value:
            est = coarse
    return SupEstimate(est.value, est.argmax, total)
