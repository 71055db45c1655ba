"""Rational functions of one variable and their lift to the polydisk.

Polynomials are plain coefficient arrays in ascending powers, handled with
:mod:`numpy.polynomial.polynomial`.  Matrix-valued functions share one monic
denominator.  Evaluating at a matrix ``T`` of size ``d`` uses the ordering
``(function matrix) (x) (state space)``: block ``(i, j)`` of the result is
``F_ij(T)``.
"""

from dataclasses import dataclass, field
from itertools import product

import numpy as np
from numpy.polynomial import polynomial as npoly

from .domain import contains, gamma_values, mobius_gamma
from .errors import PoleError, PreconditionError
from .linalg import as_cmatrix, commutator_ok, solve_linear

__all__ = [
    "trim",
    "poly_eval_matrix",
    "RatFun1",
    "MatRatFun1",
    "as_matrat",
    "cluster_roots",
    "compose_mobius",
    "partial_fractions_grouped",
    "LiftedFunction",
    "lift_to_polydisk",
    "eval_lifted",
    "ratfun_eval_at_matrix",
]

ROOT_CLUSTER_TOL = 1e-6
POLE_MARGIN = 1e-9


def trim(c, tol=1e-13):
    """Drop trailing (highest-degree) coefficients below ``tol * max|c|``."""
    c = np.atleast_1d(np.asarray(c, dtype=complex))
    if c.size == 0:
        return np.zeros(1, dtype=complex)
    scale = np.max(np.abs(c))
    if scale == 0.0:
        return np.zeros(1, dtype=complex)
    n = c.size
    while n > 1 and abs(c[n - 1]) <= tol * scale:
        n -= 1
    return c[:n].copy()


def poly_eval_matrix(c, T):
    """Horner evaluation of ``sum c_i T^i``."""
    T = as_cmatrix(T)
    d = T.shape[0]
    eye = np.eye(d, dtype=complex)
    out = np.zeros((d, d), dtype=complex)
    for coef in np.asarray(c, dtype=complex)[::-1]:
        out = out @ T + coef * eye
    return out


def _taylor_shift(c, p):
    """Coefficients of ``f(p + t)`` in ``t``."""
    out = np.zeros(1, dtype=complex)
    for coef in np.asarray(c, dtype=complex)[::-1]:
        out = npoly.polymul(out, [p, 1.0])
        out[0] += coef
    return out


def cluster_roots(c, tol=ROOT_CLUSTER_TOL):
    """Roots of a polynomial grouped into ``(root, multiplicity)`` pairs.

    Roots closer than ``tol`` are merged and replaced by their mean.  An
    ``m``-fold root is only located to about ``eps**(1/m)``, so a group of
    ``m`` roots may spread that far as well.
    """
    c = trim(c)
    if c.size <= 1:
        return []
    roots = list(npoly.polyroots(c))
    eps = np.finfo(float).eps
    clusters = []
    while roots:
        r0 = roots.pop(0)
        scale = max(1.0, abs(r0))
        roots.sort(key=lambda r: abs(r - r0))
        # largest m whose m nearest roots fit within the m-fold spread
        size = 1
        for m in range(len(roots) + 1, 1, -1):
            group = np.array([r0] + roots[:m - 1])
            if np.max(np.abs(group - group.mean())) <= max(tol, 8 * eps ** (1.0 / m)) * scale:
                size = m
                break
        group = [r0] + roots[:size - 1]
        del roots[:size - 1]
        clusters.append((complex(np.mean(group)), size))
    return clusters


def _from_clusters(clusters):
    out = np.ones(1, dtype=complex)
    for p, m in clusters:
        for _ in range(m):
            out = npoly.polymul(out, [-p, 1.0])
    return out


@dataclass(frozen=True, eq=False)
class MatRatFun1:
    """Matrix rational function ``N(z) / q(z)`` with a common monic denominator.

    ``num`` has shape ``(n_out, n_in, deg + 1)``.
    """

    num: np.ndarray
    den: np.ndarray

    def __post_init__(self):
        num = np.asarray(self.num, dtype=complex)
        if num.ndim == 1:
            num = num.reshape(1, 1, -1)
        if num.ndim != 3:
            raise ValueError("num must have shape (n_out, n_in, deg+1)")
        den = trim(self.den)
        if not np.any(den):
            raise ValueError("zero denominator")
        lead = den[-1]
        num = num / lead
        den = den / lead
        # drop numerator degrees that vanish in every entry
        scale = np.max(np.abs(num)) if num.size else 0.0
        n = num.shape[2]
        while n > 1 and np.all(np.abs(num[:, :, n - 1]) <= 1e-13 * max(scale, 1e-300)):
            n -= 1
        object.__setattr__(self, "num", num[:, :, :n].copy())
        object.__setattr__(self, "den", den)

    @property
    def shape(self):
        return self.num.shape[:2]

    @property
    def is_polynomial(self):
        return self.den.size == 1

    def entry(self, i, j):
        return RatFun1(self.num[i, j], self.den)

    def poles(self):
        return cluster_roots(self.den)

    def __call__(self, z):
        """Values at ``z``; the output has shape ``z.shape + (n_out, n_in)``."""
        z = np.asarray(z, dtype=complex)
        nz = npoly.polyval(z, np.moveaxis(self.num, 2, 0).reshape(self.num.shape[2], -1))
        nz = np.moveaxis(np.asarray(nz), 0, -1).reshape(z.shape + self.shape)
        dz = npoly.polyval(z, self.den)
        with np.errstate(divide="ignore", invalid="ignore"):
            return nz / np.asarray(dz)[..., None, None]

    def __add__(self, other):
        other = as_matrat(other, self.shape)
        den = npoly.polymul(self.den, other.den)
        num = _num_add(_num_mul_poly(self.num, other.den), _num_mul_poly(other.num, self.den))
        return self._like(num, den).reduce()

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-1.0) * as_matrat(other, self.shape)

    def __rmul__(self, scalar):
        return self._like(complex(scalar) * self.num, self.den)

    def _like(self, num, den):
        if isinstance(self, RatFun1):
            return RatFun1(np.asarray(num).reshape(-1), den)
        return MatRatFun1(num, den)

    def reduce(self, tol=1e-9):
        """Cancel denominator roots at which every numerator entry vanishes."""
        num, den = self.num, self.den
        changed = True
        while changed and den.size > 1:
            changed = False
            for p, _ in cluster_roots(den):
                vals = npoly.polyval(p, np.moveaxis(num, 2, 0).reshape(num.shape[2], -1))
                scale = np.sum(np.abs(num) * np.abs(p) ** np.arange(num.shape[2]))
                if np.max(np.abs(vals)) <= tol * max(scale, 1e-300):
                    den = npoly.polydiv(den, [-p, 1.0])[0]
                    num = np.stack([np.stack([npoly.polydiv(num[i, j], [-p, 1.0])[0]
                                              if num.shape[2] > 1 else np.zeros(1)
                                              for j in range(num.shape[1])])
                                    for i in range(num.shape[0])])
                    changed = True
                    break
        return self._like(num, den)

    def eval_matrix(self, T):
        return ratfun_eval_at_matrix(self, T)


def _num_mul_poly(num, p):
    n_out, n_in, _ = num.shape
    rows = [[npoly.polymul(num[i, j], p) for j in range(n_in)] for i in range(n_out)]
    deg = max(len(x) for row in rows for x in row)
    out = np.zeros((n_out, n_in, deg), dtype=complex)
    for i, j in product(range(n_out), range(n_in)):
        out[i, j, :len(rows[i][j])] = rows[i][j]
    return out


def _num_add(a, b):
    deg = max(a.shape[2], b.shape[2])
    out = np.zeros(a.shape[:2] + (deg,), dtype=complex)
    out[:, :, :a.shape[2]] += a
    out[:, :, :b.shape[2]] += b
    return out


class RatFun1(MatRatFun1):
    """Scalar rational function ``num / den`` (a 1x1 :class:`MatRatFun1`)."""

    def __init__(self, num, den=(1.0,)):
        num = np.asarray(num, dtype=complex).reshape(1, 1, -1)
        super().__init__(num, den)

    @property
    def numerator(self):
        return self.num[0, 0]

    def __call__(self, z):
        return super().__call__(z)[..., 0, 0]

    def to_laurent(self):
        """Convert to a Laurent polynomial when the denominator is ``z^l``.

        Returns ``None`` otherwise.
        """
        from .series import LaurentPoly

        den = self.den
        if np.any(np.abs(den[:-1]) > 1e-14):
            return None
        return LaurentPoly(-(den.size - 1), self.numerator)

    @classmethod
    def from_laurent(cls, f):
        if f.kmin >= 0:
            return cls(np.concatenate([np.zeros(f.kmin), f.coeffs]))
        den = np.zeros(-f.kmin + 1)
        den[-1] = 1.0
        return cls(f.coeffs, den)


def as_matrat(F, shape=None):
    """Coerce a scalar, :class:`RatFun1` or :class:`MatRatFun1` (or a
    :class:`~multidisk.series.LaurentPoly`) to :class:`MatRatFun1`."""
    if isinstance(F, MatRatFun1):
        return F
    if hasattr(F, "kmin") and hasattr(F, "coeffs"):
        return RatFun1.from_laurent(F)
    if np.isscalar(F) or np.ndim(F) == 0:
        shape = shape or (1, 1)
        if shape == (1, 1):
            return RatFun1([complex(F)])
        return MatRatFun1(complex(F) * np.eye(*shape, dtype=complex)[:, :, None], [1.0])
    A = np.asarray(F, dtype=complex)
    return MatRatFun1(A[:, :, None], [1.0])


def compose_mobius(F, m):
    """``F o m`` for a Moebius map ``m``, computed on coefficient lists."""
    F = as_matrat(F)
    a, b, c, d = m.a, m.b, m.c, m.d
    D = max(F.num.shape[2], F.den.size) - 1
    lin_top = np.array([b, a])
    lin_bot = np.array([d, c])
    basis = []
    for i in range(D + 1):
        basis.append(npoly.polymul(npoly.polypow(lin_top, i) if i else np.ones(1),
                                   npoly.polypow(lin_bot, D - i) if D - i else np.ones(1)))
    width = max(len(x) for x in basis)
    B = np.zeros((D + 1, width), dtype=complex)
    for i, x in enumerate(basis):
        B[i, :len(x)] = x
    numc = np.zeros(F.shape + (D + 1,), dtype=complex)
    numc[:, :, :F.num.shape[2]] = F.num
    denc = np.zeros(D + 1, dtype=complex)
    denc[:F.den.size] = F.den
    new_num = numc @ B
    new_den = denc @ B
    scale = max(np.max(np.abs(new_den)), 1e-300)
    new_den = trim(new_den)
    if np.max(np.abs(new_den)) <= 1e-13 * scale:
        raise PreconditionError("composition produced a vanishing denominator")
    if isinstance(F, RatFun1):
        return RatFun1(new_num[0, 0], new_den)
    return MatRatFun1(new_num, new_den)


def _principal_parts(num_entry, clusters):
    """Principal-part coefficients ``e[p][i]`` with term ``e_i / (z-p)^(m-i)``."""
    parts = {}
    for idx, (p, m) in enumerate(clusters):
        others = [cl for i, cl in enumerate(clusters) if i != idx]
        qp = _from_clusters(others)
        a = _taylor_shift(num_entry, p)
        b = _taylor_shift(qp, p)
        a = np.concatenate([a, np.zeros(max(0, m - a.size))])[:m]
        e = np.zeros(m, dtype=complex)
        for i in range(m):
            acc = a[i]
            for s in range(1, min(i, b.size - 1) + 1):
                acc -= b[s] * e[i - s]
            e[i] = acc / b[0]
        parts[idx] = e
    return parts


def _assign_pole(spec, p):
    """Component index receiving pole ``p`` (largest ``|gamma_j(p)| > 1``)."""
    if contains(spec, p):
        raise PoleError(f"pole {p} lies in the domain")
    g = np.abs(gamma_values(spec, p))
    best = int(np.argmax(g))
    if not g[best] > 1.0 + POLE_MARGIN:
        raise PoleError(f"pole {p} is within {POLE_MARGIN} of a component boundary; assignment ambiguous")
    return best


def partial_fractions_grouped(F, spec):
    """Split ``F = sum_j F_j`` with the poles of ``F_j`` outside component ``j``.

    The polynomial part goes to the first component (a disk).  Each pole is
    assigned to the component it is most safely outside of, measured by
    ``|gamma_j(pole)|``.

    Returns
    -------
    list of MatRatFun1
        One entry per component, in component order.
    """
    F = as_matrat(F).reduce()
    scalar = isinstance(F, RatFun1)
    clusters = cluster_roots(F.den)
    owner = [_assign_pole(spec, p) for p, _ in clusters]
    n_out, n_in = F.shape
    den_full = _from_clusters(clusters)

    poly_part = np.zeros((n_out, n_in, 1), dtype=complex)
    parts_per_entry = {}
    for i, j in product(range(n_out), range(n_in)):
        q, rem = npoly.polydiv(F.num[i, j], den_full) if den_full.size > 1 else (F.num[i, j], np.zeros(1))
        q = np.atleast_1d(q)
        if q.size > poly_part.shape[2]:
            poly_part = np.concatenate(
                [poly_part, np.zeros((n_out, n_in, q.size - poly_part.shape[2]), dtype=complex)], axis=2)
        poly_part[i, j, :q.size] = q
        parts_per_entry[i, j] = _principal_parts(rem, clusters) if clusters else {}

    out = []
    for comp in range(spec.k):
        mine = [idx for idx, o in enumerate(owner) if o == comp]
        den = _from_clusters([clusters[idx] for idx in mine])
        width = max(den.size, 1)
        num = np.zeros((n_out, n_in, width), dtype=complex)
        for idx in mine:
            p, m = clusters[idx]
            cof = _from_clusters([clusters[o] for o in mine if o != idx])
            for i, j in product(range(n_out), range(n_in)):
                e = parts_per_entry[i, j][idx]
                for s in range(m):
                    term = npoly.polymul(e[s] * npoly.polypow([-p, 1.0], s) if s else [e[s]], cof)
                    num[i, j, :term.size] += term
        if comp == 0:
            num = _num_add(num, _num_mul_poly(poly_part, den))
        piece = MatRatFun1(num, den)
        out.append(RatFun1(piece.num[0, 0], piece.den) if scalar else piece)
    return out


@dataclass(frozen=True, eq=False)
class LiftedFunction:
    """``G(z_1, ..., z_k) = sum_j H_j(z_j) + corrections``.

    ``corrections`` is a tuple of ``(exponent multi-index, coefficient)``
    monomials; the coefficient is a scalar or an ``(n_out, n_in)`` array.
    """

    k: int
    parts: tuple
    corrections: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        object.__setattr__(self, "corrections", tuple(
            (tuple(int(e) for e in alpha), coef) for alpha, coef in self.corrections))
        for j, H in self.parts:
            for p, _ in H.poles():
                if abs(p) <= 1.0 + POLE_MARGIN:
                    raise PoleError(f"lifted part {j} has a pole at {p} in the closed unit disk")
        for alpha, _ in self.corrections:
            if len(alpha) != self.k:
                raise ValueError(f"correction exponent {alpha} does not have {self.k} entries")

    @property
    def shape(self):
        return self.parts[0][1].shape if self.parts else (1, 1)

    @property
    def is_scalar(self):
        return self.shape == (1, 1) and all(isinstance(H, RatFun1) for _, H in self.parts)

    def with_corrections(self, corrections):
        return LiftedFunction(self.k, self.parts, tuple(self.corrections) + tuple(corrections))

    def part(self, j):
        for jj, H in self.parts:
            if jj == j:
                return H
        return None

    def __call__(self, z):
        """Evaluate at points of shape ``(..., k)``.

        Scalar lifts return shape ``(...)``, matrix lifts ``(..., n_out, n_in)``.
        """
        z = np.asarray(z, dtype=complex)
        if z.shape[-1] != self.k:
            raise ValueError(f"points must have trailing dimension {self.k}")
        batch = z.shape[:-1]
        out = np.zeros(batch + self.shape, dtype=complex)
        for j, H in self.parts:
            out += MatRatFun1.__call__(H, z[..., j])
        for alpha, coef in self.corrections:
            mono = np.prod(z ** np.array(alpha), axis=-1)
            out += mono[..., None, None] * np.broadcast_to(np.asarray(coef, dtype=complex), self.shape)
        return out[..., 0, 0] if self.is_scalar else out

    def eval_matrix(self, Ts):
        Ts = [as_cmatrix(T) for T in Ts]
        if len(Ts) != self.k:
            raise ValueError(f"expected {self.k} matrices, got {len(Ts)}")
        for a in range(self.k):
            for b in range(a + 1, self.k):
                if not commutator_ok(Ts[a], Ts[b]):
                    raise PreconditionError(f"arguments {a} and {b} do not commute")
        d = Ts[0].shape[0]
        n_out, n_in = self.shape
        out = np.zeros((n_out * d, n_in * d), dtype=complex)
        for j, H in self.parts:
            out += ratfun_eval_at_matrix(H, Ts[j])
        for alpha, coef in self.corrections:
            mono = np.eye(d, dtype=complex)
            for T, e in zip(Ts, alpha):
                mono = mono @ np.linalg.matrix_power(T, e)
            out += np.kron(np.broadcast_to(np.asarray(coef, dtype=complex), self.shape), mono)
        return out


def lift_to_polydisk(F, spec):
    """The polydisk lift ``G`` with ``G(gamma(z)) = F(z)`` on the domain."""
    pieces = partial_fractions_grouped(F, spec)
    parts = []
    for j, Fj in enumerate(pieces):
        if not np.any(Fj.num):
            continue
        parts.append((j, compose_mobius(Fj, mobius_gamma(spec, j).inverse())))
    if not parts:
        parts.append((0, pieces[0]))
    return LiftedFunction(spec.k, tuple(parts))


def eval_lifted(G, arg):
    """Evaluate a lift at a point of ``C^k`` or at a tuple of commuting matrices."""
    if isinstance(arg, (list, tuple)) and len(arg) and np.ndim(arg[0]) == 2:
        return G.eval_matrix(arg)
    val = G(np.asarray(arg, dtype=complex))
    return np.asarray(val)


def ratfun_eval_at_matrix(F, T):
    """``F(T)`` with block ``(i, j)`` equal to ``den(T)^{-1} num_ij(T)``."""
    F = as_matrat(F)
    T = as_cmatrix(T)
    d = T.shape[0]
    n_out, n_in = F.shape
    qT = poly_eval_matrix(F.den, T)
    out = np.zeros((n_out * d, n_in * d), dtype=complex)
    for i, j in product(range(n_out), range(n_in)):
        out[i * d:(i + 1) * d, j * d:(j + 1) * d] = solve_linear(qT, poly_eval_matrix(F.num[i, j], T))
    return out
