"""Transfer-function realizations over a domain's pencils.

A colligation ``[[A, B], [C, D]]`` with state space ``C^{k m}`` defines

    F(z) = D + C P-(z)_m (P+(z)_m - A P-(z)_m)^{-1} B,

where ``P(z)_m = P(z) (x) I_m``.  State index ``j * m + i`` belongs to
component ``j``.  At an operator ``T`` of size ``d`` every block matrix ``X``
is extended to ``X (x) I_d`` and the pencils become
``Z = blockdiag_j(I_m (x) p_j(T))``.
"""

from dataclasses import dataclass
from functools import cached_property
import warnings

import numpy as np

from .domain import DISK, HOLE, annulus, contains, eval_pencil
from .errors import PreconditionError, SingularMatrixError
from .linalg import as_cmatrix, hermitian_eigen, is_invertible, pivot_ratio, solve_linear, spectral_norm
from .series import LaurentPoly, laurent_coeffs_of_realization

__all__ = [
    "Colligation",
    "OperatorArgument",
    "ColligationReport",
    "GainReport",
    "validate_colligation",
    "eval_realization_scalar",
    "eval_realization_operator",
    "gain_bound_check",
    "defect_identity_residual",
    "mobius_colligation",
    "random_colligation",
    "transfer_apply",
    "SigmaReport",
    "sigma_state_check",
]

STRICT_MARGIN = 1e-9
CONTRACTION_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Colligation:
    k: int
    m: int
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        km = self.k * self.m
        for name in "ABCD":
            object.__setattr__(self, name, np.array(getattr(self, name), dtype=complex, ndmin=2))
        if self.k < 1 or self.m < 1:
            raise ValueError("k and m must be positive")
        if self.A.shape != (km, km):
            raise ValueError(f"A must be {km}x{km}, got {self.A.shape}")
        if self.B.shape[0] != km or self.C.shape[1] != km:
            raise ValueError(f"B needs {km} rows and C {km} columns, got {self.B.shape}, {self.C.shape}")
        if self.D.shape != (self.C.shape[0], self.B.shape[1]):
            raise ValueError(f"D must be {self.C.shape[0]}x{self.B.shape[1]}, got {self.D.shape}")

    @property
    def n_in(self):
        return self.B.shape[1]

    @property
    def n_out(self):
        return self.C.shape[0]

    @property
    def block(self):
        return np.block([[self.A, self.B], [self.C, self.D]])

    @cached_property
    def gain(self):
        return spectral_norm(self.block)

    def scaled(self, s):
        """The colligation with every block multiplied by ``s``."""
        return Colligation(self.k, self.m, s * self.A, s * self.B, s * self.C, s * self.D)


@dataclass(frozen=True)
class ColligationReport:
    gain: float
    is_contraction: bool


def validate_colligation(c):
    g = c.gain
    return ColligationReport(g, g <= 1.0 + CONTRACTION_TOL)


def _operator_pencils(comp, T):
    d = T.shape[0]
    I = np.eye(d, dtype=complex)
    if comp.kind == DISK:
        return comp.radius * I, T - comp.center * I
    if comp.kind == HOLE:
        return T - comp.center * I, comp.radius * I
    eT = comp.rotation * T
    return eT - (comp.offset + 1.0) * I, eT - (comp.offset - 1.0) * I


class OperatorArgument:
    """A matrix together with its pencil blocks ``p_j+(T), p_j-(T)``.

    Raises
    ------
    SingularMatrixError
        If some ``p_j+(T)`` is not invertible to tolerance.
    """

    def __init__(self, spec, T):
        self.spec = spec
        self.T = as_cmatrix(T)
        if self.T.shape[0] != self.T.shape[1]:
            raise ValueError("T must be square")
        blocks = [_operator_pencils(c, self.T) for c in spec.components]
        self.pplus = [b[0] for b in blocks]
        self.pminus = [b[1] for b in blocks]
        self.pivots = [pivot_ratio(p) for p in self.pplus]
        for j, p in enumerate(self.pplus):
            if not is_invertible(p):
                raise SingularMatrixError(f"p+ block of component {j} is singular at T")

    @property
    def dim(self):
        return self.T.shape[0]

    @cached_property
    def block_margins(self):
        """Smallest eigenvalue of ``p+* p+ - p-* p-`` for each component."""
        out = []
        for pp, pm in zip(self.pplus, self.pminus):
            H = pp.conj().T @ pp - pm.conj().T @ pm
            out.append(float(hermitian_eigen(0.5 * (H + H.conj().T))[0][0]))
        return out

    @property
    def pencil_margin(self):
        return min(self.block_margins)

    def Z(self, m):
        """``(Z+, Z-)`` for multiplicity ``m``."""
        d = self.dim
        n = len(self.pplus) * m * d
        Zp = np.zeros((n, n), dtype=complex)
        Zm = np.zeros((n, n), dtype=complex)
        for j, (pp, pm) in enumerate(zip(self.pplus, self.pminus)):
            for i in range(m):
                s = (j * m + i) * d
                Zp[s:s + d, s:s + d] = pp
                Zm[s:s + d, s:s + d] = pm
        return Zp, Zm


def _as_operator(spec, T):
    return T if isinstance(T, OperatorArgument) else OperatorArgument(spec, T)


def _check_k(c, spec):
    if c.k != spec.k:
        raise ValueError(f"colligation has k={c.k} but the domain has k={spec.k}")


def eval_realization_scalar(c, spec, z):
    """``F(z)`` as an ``n_out x n_in`` matrix.

    Points outside the domain trigger a warning; evaluation still proceeds
    when the resolvent is invertible.
    """
    _check_k(c, spec)
    z = complex(z)
    if not contains(spec, z):
        warnings.warn(f"z={z} lies outside the domain", RuntimeWarning, stacklevel=2)
    P = eval_pencil(spec, z)
    pp = np.repeat(np.diag(P.pplus), c.m)
    pm = np.repeat(np.diag(P.pminus), c.m)
    X = solve_linear(np.diag(pp) - c.A * pm[None, :], c.B)
    return c.D + c.C @ (pm[:, None] * X)


def _extended(c, d):
    I = np.eye(d, dtype=complex)
    return tuple(np.kron(X, I) for X in (c.A, c.B, c.C, c.D))


def _resolvent_parts(c, spec, T):
    """``(Ae, Be, Ce, De, Zp, Zm, X)`` with ``X = (Z+ - Ae Z-)^{-1} Be``."""
    Ae, Be, Ce, De = _extended(c, T.dim)
    Zp, Zm = T.Z(c.m)
    X = solve_linear(Zp - Ae @ Zm, Be)
    return Ae, Be, Ce, De, Zp, Zm, X


def eval_realization_operator(c, spec, T, require_strict=False):
    """``F(T) = De + Ce Z- (Z+ - Ae Z-)^{-1} Be``.

    With ``require_strict`` a contractive colligation also demands that ``T``
    satisfy the strict pencil inequality with margin ``1e-9``.  Otherwise only
    invertibility of the resolvent is needed.
    """
    _check_k(c, spec)
    T = _as_operator(spec, T)
    if require_strict and c.gain <= 1.0 + CONTRACTION_TOL and T.pencil_margin < STRICT_MARGIN:
        raise PreconditionError("T is not a strict class member", value=T.pencil_margin)
    _, _, Ce, De, _, Zm, X = _resolvent_parts(c, spec, T)
    return De + Ce @ (Zm @ X)


@dataclass(frozen=True)
class GainReport:
    lhs: float
    rhs: float
    passed: bool


def _require_strict(T):
    margin = T.pencil_margin
    if margin < STRICT_MARGIN:
        raise PreconditionError(
            f"pencil inequality not strict (smallest eigenvalue {margin:.3e})", value=margin)


def gain_bound_check(c, spec, T):
    """Compare ``||F(T)||`` with the colligation gain at a strict member ``T``."""
    _check_k(c, spec)
    T = _as_operator(spec, T)
    _require_strict(T)
    lhs = spectral_norm(eval_realization_operator(c, spec, T))
    return GainReport(lhs, c.gain, lhs <= c.gain + 1e-9)


def defect_identity_residual(c, spec, T):
    """Spectral norm of the difference between the two sides of the defect identity.

    ``I - F* F = V* J V + Be* W^{-*} (Z+* Z+ - Z-* Z-) W^{-1} Be`` with
    ``W = Z+ - Ae Z-``, ``V = [Z- W^{-1} Be; I]`` and ``J = I - G* G`` for the
    extended colligation ``G``.
    """
    _check_k(c, spec)
    T = _as_operator(spec, T)
    _require_strict(T)
    Ae, Be, Ce, De, Zp, Zm, X = _resolvent_parts(c, spec, T)
    F = De + Ce @ (Zm @ X)
    n_in = Be.shape[1]
    lhs = np.eye(n_in) - F.conj().T @ F
    G = np.block([[Ae, Be], [Ce, De]])
    J = np.eye(G.shape[1]) - G.conj().T @ G
    V = np.vstack([Zm @ X, np.eye(n_in)])
    rhs = V.conj().T @ J @ V + X.conj().T @ (Zp.conj().T @ Zp - Zm.conj().T @ Zm) @ X
    return spectral_norm(lhs - rhs)


def mobius_colligation(spec, j):
    """Exact realization of ``gamma_j``: ``m = 1``, ``A = 0``, ``B = e_j``, ``C = e_j^T``, ``D = 0``."""
    if not 0 <= j < spec.k:
        raise IndexError(f"component index {j} out of range for k={spec.k}")
    k = spec.k
    e = np.zeros((k, 1))
    e[j] = 1.0
    return Colligation(k, 1, np.zeros((k, k)), e, e.T, np.zeros((1, 1)))


def _random_unitary(rng, n):
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def random_colligation(k, m, n_in, n_out, rng, gain=1.0, unitary=False):
    """Gaussian colligation rescaled to the given gain, or a random unitary one."""
    rng = np.random.default_rng(rng)
    km = k * m
    if unitary:
        if n_in != n_out:
            raise ValueError("a unitary colligation needs n_in == n_out")
        G = _random_unitary(rng, km + n_in)
    else:
        G = rng.standard_normal((km + n_out, km + n_in)) + 1j * rng.standard_normal((km + n_out, km + n_in))
        G *= gain / spectral_norm(G)
    return Colligation(k, m, G[:km, :km], G[:km, km:], G[km:, :km], G[km:, km:])


def transfer_apply(F, u, window, R, r, samples=64):
    """Output ``y = F u`` restricted to ``window`` for a scalar ``F`` on the annulus ``r <= |z| <= R``."""
    kmin, kmax = window
    fwin = (kmin - u.kmax, kmax - u.kmin)
    f = laurent_coeffs_of_realization(F, R, r, fwin, samples)
    y = {}
    for i, ui in u.items():
        for k in range(kmin, kmax + 1):
            y[k] = y.get(k, 0j) + f.coeff(k - i) * ui
    return LaurentPoly.from_dict(y) if y else LaurentPoly(0, [0])


@dataclass(frozen=True, eq=False)
class SigmaReport:
    y: LaurentPoly
    states: list
    state_residual: float
    output_residual: float


def sigma_state_check(c, R, r, u, window, samples=64):
    """Run the difference system of an annulus colligation and check its recursions.

    On ``r <= |z| <= R`` the state ``(x, xt)`` solves

        (R x_{k+1}, xt_k) = A (x_k, r xt_{k+1}) + B u_k,
        y_k = C (x_k, r xt_{k+1}) + D u_k,

    and its generating function is ``z (P+ - A P-)^{-1} B u(z)``.  The state
    Laurent coefficients are extracted numerically and the two recursions are
    evaluated on ``window``; the residuals should be at extraction accuracy.
    """
    if c.k != 2 or c.n_in != 1 or c.n_out != 1:
        raise ValueError("the difference system needs a scalar colligation with k = 2")
    spec = annulus(R, r)
    m = c.m

    def X(z):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        out = np.empty(z.shape + (2 * m, 1), dtype=complex)
        for s, zz in enumerate(z):
            pp = np.repeat([R, zz], m)
            pm = np.repeat([zz, r], m)
            out[s] = zz * solve_linear(np.diag(pp) - c.A * pm[None, :], c.B) * u(zz)
        return out

    def F(z):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        return np.array([eval_realization_scalar(c, spec, zz)[0, 0] for zz in z])

    kmin, kmax = window
    coeffs = dict(laurent_coeffs_of_realization(X, R, r, (kmin - 1, kmax + 1), samples))
    top = slice(0, m)
    bot = slice(m, 2 * m)
    y = transfer_apply(F, u, window, R, r, samples)
    s_res, o_res = 0.0, 0.0
    for k in range(kmin, kmax):
        xk, xk1 = coeffs[k], coeffs[k + 1]
        mixed = np.concatenate([xk[top], r * xk1[bot]])
        lhs = np.concatenate([R * xk1[top], xk[bot]])
        rhs = c.A @ mixed + c.B * u.coeff(k)
        s_res = max(s_res, float(np.max(np.abs(lhs - rhs))))
        yk = (c.C @ mixed + c.D * u.coeff(k))[0, 0]
        o_res = max(o_res, abs(yk - y.coeff(k)))
    states = [(k, coeffs[k][:, 0]) for k in range(kmin, kmax + 1)]
    return SigmaReport(y, states, s_res, o_res)
