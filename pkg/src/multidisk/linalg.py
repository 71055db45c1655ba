"""Dense complex linear algebra kernels.

Everything here works on plain 2-D :class:`numpy.ndarray` objects.  The
single notion of "invertible to tolerance" used across the package is the
LU pivot test of :func:`pivot_ratio`: a matrix counts as singular when its
smallest LU pivot is below ``PIVOT_TOL * ||A||``.
"""

import warnings

import numpy as np
import scipy.linalg

from .errors import ConvergenceError, PreconditionError, SingularMatrixError

__all__ = [
    "PIVOT_TOL",
    "as_cmatrix",
    "solve_linear",
    "inverse",
    "pivot_ratio",
    "is_invertible",
    "spectral_norm",
    "spectral_norms",
    "power_iteration_norm",
    "hermitian_eigen",
    "polar_decompose",
    "commutator_ok",
]

PIVOT_TOL = 1e-13


def as_cmatrix(A):
    """Return ``A`` as a 2-D complex array (scalars become 1x1)."""
    A = np.asarray(A, dtype=complex)
    if A.ndim == 0:
        return A.reshape(1, 1)
    if A.ndim == 1:
        return A.reshape(1, -1)
    if A.ndim != 2:
        raise ValueError(f"expected a matrix, got array of shape {A.shape}")
    return A


def _lu(A):
    A = as_cmatrix(A)
    if A.shape[0] != A.shape[1]:
        raise ValueError(f"square matrix required, got {A.shape}")
    with warnings.catch_warnings():
        # exact zero pivots are reported through the pivot test instead
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(A, check_finite=True)
    return A, lu, piv


def pivot_ratio(A):
    """Smallest LU pivot magnitude divided by ``||A||`` (0 for the zero matrix)."""
    A = as_cmatrix(A)
    nrm = spectral_norm(A)
    if nrm == 0.0:
        return 0.0
    _, lu, _ = _lu(A)
    return float(np.min(np.abs(np.diag(lu)))) / nrm


def is_invertible(A):
    return pivot_ratio(A) >= PIVOT_TOL


def solve_linear(A, B, *, return_cond=False):
    """Solve ``A X = B`` by LU with partial pivoting.

    Parameters
    ----------
    A : (n, n) array_like
    B : (n, p) or (n,) array_like
    return_cond : bool
        Also return the 1-norm condition estimate ``||A||_1 ||A^-1||_1``.

    Raises
    ------
    SingularMatrixError
        If a pivot falls below ``PIVOT_TOL * ||A||``.
    """
    A, lu, piv = _lu(A)
    nrm = spectral_norm(A)
    pivots = np.abs(np.diag(lu))
    if nrm == 0.0 or pivots.min() < PIVOT_TOL * nrm:
        raise SingularMatrixError(
            f"matrix singular to tolerance (min pivot {pivots.min():.3e}, norm {nrm:.3e})")
    B = np.asarray(B, dtype=complex)
    X = scipy.linalg.lu_solve((lu, piv), B)
    if not return_cond:
        return X
    Ainv = scipy.linalg.lu_solve((lu, piv), np.eye(A.shape[0], dtype=complex))
    cond = np.linalg.norm(A, 1) * np.linalg.norm(Ainv, 1)
    return X, float(cond)


def inverse(A):
    A = as_cmatrix(A)
    return solve_linear(A, np.eye(A.shape[0], dtype=complex))


def spectral_norm(A):
    """Largest singular value of ``A`` (LAPACK SVD)."""
    A = np.asarray(A, dtype=complex)
    if A.ndim < 2:
        A = as_cmatrix(A)
    if A.size == 0:
        return 0.0
    return float(np.linalg.norm(A, 2))


def spectral_norms(stack):
    """Spectral norms of a stack of matrices with shape ``(N, p, q)``.

    A stack of shape ``(N,)`` is read as ``N`` scalars.
    """
    stack = np.asarray(stack)
    if stack.ndim == 1:
        return np.abs(stack)
    if stack.shape[-1] == 1 or stack.shape[-2] == 1:
        return np.sqrt(np.sum(np.abs(stack) ** 2, axis=(-2, -1)))
    return np.linalg.svd(stack, compute_uv=False)[..., 0]


def power_iteration_norm(A, tol=1e-12, maxiter=10000):
    """Largest singular value via power iteration on ``A* A``.

    The start vector is the normalized all-ones vector, so the result is
    deterministic.  Kept as an independent check on :func:`spectral_norm`.
    """
    A = as_cmatrix(A)
    n = A.shape[1]
    if A.size == 0 or not np.any(A):
        return 0.0
    AhA = A.conj().T @ A
    v = np.ones(n, dtype=complex) / np.sqrt(n)
    if np.linalg.norm(AhA @ v) == 0.0:
        # all-ones lies in the kernel; fall back to a fixed generic vector
        v = np.exp(1j * np.arange(1, n + 1)) * np.arange(1, n + 1)
        v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(maxiter):
        w = AhA @ v
        lam_new = float(np.real(np.vdot(v, w)))
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        v = w / nw
        if abs(lam_new - lam) <= tol * abs(lam_new):
            # the Rayleigh quotient of the normalized iterate is sharper
            return float(np.sqrt(max(np.real(np.vdot(v, AhA @ v)), 0.0)))
        lam = lam_new
    raise ConvergenceError(f"power iteration did not converge in {maxiter} steps")


def hermitian_eigen(H, max_sweeps=100):
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps.

    Returns
    -------
    w : (n,) ndarray
        Eigenvalues in ascending order.
    U : (n, n) ndarray
        Unitary matrix with ``H U = U diag(w)``.
    """
    H = as_cmatrix(H)
    n = H.shape[0]
    if H.shape != (n, n):
        raise ValueError(f"square matrix required, got {H.shape}")
    hnorm = spectral_norm(H)
    if spectral_norm(H - H.conj().T) > 1e-10 * max(hnorm, 1e-300):
        raise PreconditionError("matrix is not Hermitian",
                                value=spectral_norm(H - H.conj().T))
    A = 0.5 * (H + H.conj().T)
    V = np.eye(n, dtype=complex)
    scale = np.linalg.norm(A)
    if scale == 0.0:
        return np.zeros(n), V
    offmask = ~np.eye(n, dtype=bool)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.abs(A[offmask]) ** 2))
        if off <= 1e-14 * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                h = A[p, q]
                ah = abs(h)
                if ah <= 1e-17 * scale:
                    continue
                u = h / ah
                tau = (A[q, q].real - A[p, p].real) / (2.0 * ah)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                W = np.array([[c, s], [-s * np.conj(u), c * np.conj(u)]])
                idx = [p, q]
                A[:, idx] = A[:, idx] @ W
                A[idx, :] = W.conj().T @ A[idx, :]
                A[p, q] = A[q, p] = 0.0
                V[:, idx] = V[:, idx] @ W
    else:
        raise ConvergenceError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")
    w = np.real(np.diag(A))
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def polar_decompose(T):
    """Polar decomposition ``T = U P`` with ``P = (T* T)^{1/2}``.

    ``P`` comes from :func:`hermitian_eigen` of ``T* T``.  On the range of
    ``P`` the factor ``U`` is ``T P^+``; on the kernel it is completed to a
    unitary with the first admissible standard basis vectors, so the output
    is deterministic.
    """
    T = as_cmatrix(T)
    n = T.shape[0]
    if T.shape != (n, n):
        raise ValueError(f"square matrix required, got {T.shape}")
    lam, V = hermitian_eigen(T.conj().T @ T)
    sig = np.sqrt(np.clip(lam, 0.0, None))
    P = (V * sig) @ V.conj().T
    smax = sig.max() if n else 0.0
    in_range = sig > 1e-12 * smax if smax > 0 else np.zeros(n, dtype=bool)
    W = np.zeros((n, n), dtype=complex)
    W[:, in_range] = (T @ V[:, in_range]) / sig[in_range]
    basis = [W[:, i] for i in np.flatnonzero(in_range)]
    e = 0
    for i in np.flatnonzero(~in_range):
        while True:
            cand = np.zeros(n, dtype=complex)
            cand[e] = 1.0
            e += 1
            for b in basis:
                cand -= np.vdot(b, cand) * b
            nc = np.linalg.norm(cand)
            if nc > 1e-8:
                cand /= nc
                break
        basis.append(cand)
        W[:, i] = cand
    U = W @ V.conj().T
    return U, P


def commutator_ok(S, T, tol=1e-10):
    """Whether ``||ST - TS|| <= tol ||S|| ||T||``."""
    S, T = as_cmatrix(S), as_cmatrix(T)
    return spectral_norm(S @ T - T @ S) <= tol * spectral_norm(S) * spectral_norm(T)
