"""Dense symmetric eigensolver and linear solver used as reference routes.

Everything here is deliberately self-contained: the eigensolver is a cyclic
Jacobi iteration and the linear solver is Gaussian elimination with partial
pivoting.  They serve as independent cross-checks for the structured
(Fourier / tridiagonal) routes in :mod:`smoothgd.smoothing`.
"""

from dataclasses import dataclass

import numpy as np

from . import smoothing

__all__ = [
    "EigenPair",
    "ConvergenceError",
    "SingularMatrixError",
    "sym_eigendecompose",
    "eig_preconditioned_hessian",
    "dense_solve",
    "sign_normalize",
]


class ConvergenceError(RuntimeError):
    """An iterative routine failed to reach its tolerance.

    Carries the last residual in ``residual``.
    """

    def __init__(self, message, residual):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


class SingularMatrixError(ValueError):
    """Elimination hit a pivot too small to trust.

    ``pivot_index`` is the elimination step at which it happened.
    """

    def __init__(self, pivot_index, pivot_value, threshold):
        super().__init__(
            f"matrix is singular to working precision: pivot {pivot_index} "
            f"has magnitude {abs(pivot_value):.3e} <= {threshold:.3e}")
        self.pivot_index = pivot_index
        self.pivot_value = pivot_value


@dataclass(frozen=True)
class EigenPair:
    """One eigenvalue with a unit-norm eigenvector."""

    value: float
    vector: np.ndarray


def _as_square(m, name="matrix"):
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValueError(f"{name} must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite entries")
    return a


def _require_symmetric(a, name="matrix"):
    norm = np.linalg.norm(a)
    if np.linalg.norm(a - a.T) > 1e-12 * max(norm, 1e-300):
        raise ValueError(f"{name} is not symmetric within 1e-12 relative")


def sign_normalize(v, tol=1e-10):
    """Flip v so its first entry with magnitude above tol is positive."""
    for entry in v:
        if abs(entry) > tol:
            return v if entry > 0 else -v
    return v


def _off_norm(a):
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    return np.linalg.norm(off)


def sym_eigendecompose(m, tol=1e-10, max_sweeps=30):
    """Full eigendecomposition of a symmetric matrix by cyclic Jacobi sweeps.

    Parameters
    ----------
    m : (n, n) array_like, symmetric
    tol : float
        Convergence threshold: sweeps stop once the off-diagonal Frobenius
        mass drops below ``tol * ||m||_F``.
    max_sweeps : int
        Sweep budget; exceeding it raises :class:`ConvergenceError`.

    Returns
    -------
    list of EigenPair
        Sorted by descending eigenvalue.  Vectors are orthonormal, and each
        is sign-fixed so its first non-negligible entry is positive.
        Numerically tied eigenvalues (gap below 1e-9 * ||m||_F) get their
        vectors re-orthonormalized as a block, so ties still yield an
        orthonormal basis of the shared eigenspace.
    """
    a = _as_square(m).copy()
    _require_symmetric(a)
    n = a.shape[0]
    norm = np.linalg.norm(a)
    if norm == 0.0:
        return [EigenPair(0.0, np.eye(n)[:, i].copy()) for i in range(n)]
    v = np.eye(n)
    # Rotations below this size cannot push the off-diagonal mass past the
    # convergence threshold, so they are skipped.
    skip = tol * norm / (2.0 * n * n)
    converged = False
    off = _off_norm(a)
    for _ in range(max_sweeps):
        if off <= tol * norm:
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= skip:
                    continue
                d = (a[q, q] - a[p, p]) / (2.0 * apq)
                if d >= 0.0:
                    t = 1.0 / (d + np.sqrt(d * d + 1.0))
                else:
                    t = 1.0 / (d - np.sqrt(d * d + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # A <- J^T A J applied as a column mix then a row mix.
                aip = a[:, p].copy()
                aiq = a[:, q]
                a[:, p] = c * aip - s * aiq
                a[:, q] = s * aip + c * aiq
                arp = a[p, :].copy()
                arq = a[q, :]
                a[p, :] = c * arp - s * arq
                a[q, :] = s * arp + c * arq
                a[p, q] = 0.0
                a[q, p] = 0.0
                vip = v[:, p].copy()
                viq = v[:, q]
                v[:, p] = c * vip - s * viq
                v[:, q] = s * vip + c * viq
        off = _off_norm(a)
    if not converged and off > tol * norm:
        raise ConvergenceError(
            f"Jacobi sweeps did not converge within {max_sweeps} sweeps",
            off / norm)
    values = np.diag(a).copy()
    order = np.argsort(-values)
    values = values[order]
    vectors = v[:, order]
    _reorthonormalize_ties(values, vectors, 1e-9 * norm)
    pairs = []
    for i in range(n):
        vec = sign_normalize(vectors[:, i].copy())
        vec /= np.linalg.norm(vec)
        pairs.append(EigenPair(float(values[i]), vec))
    return pairs


def _reorthonormalize_ties(values, vectors, gap):
    """Gram-Schmidt each run of eigenvalues closer than ``gap``, in place."""
    n = len(values)
    start = 0
    while start < n:
        stop = start + 1
        while stop < n and abs(values[stop] - values[stop - 1]) <= gap:
            stop += 1
        if stop - start > 1:
            block = vectors[:, start:stop]
            for j in range(block.shape[1]):
                for i in range(j):
                    block[:, j] -= (block[:, i] @ block[:, j]) * block[:, i]
                block[:, j] /= np.linalg.norm(block[:, j])
        start = stop


def eig_preconditioned_hessian(b, sigma, tol=1e-10):
    """Eigenpairs of A(sigma)^(-1) B for a symmetric matrix B.

    The product itself is not symmetric, but it is similar to the symmetric
    matrix A^(-1/2) B A^(-1/2), which is what actually gets decomposed; the
    eigenvectors are mapped back through A^(-1/2) and renormalized.  Each
    returned pair satisfies ||A^(-1) B v - lambda v|| <= 1e-8.

    Returns a list of EigenPair sorted by descending eigenvalue.
    """
    b = _as_square(b, "hessian")
    _require_symmetric(b, "hessian")
    n = b.shape[0]
    op = smoothing.CirculantSmoother(n, sigma)
    half = np.empty_like(b)
    for j in range(n):
        half[:, j] = op.inv_sqrt_apply(b[:, j])
    sym = np.empty_like(b)
    for i in range(n):
        sym[i, :] = op.inv_sqrt_apply(half[i, :])
    sym = 0.5 * (sym + sym.T)
    pairs = []
    for pair in sym_eigendecompose(sym, tol=tol):
        vec = op.inv_sqrt_apply(pair.vector)
        vec /= np.linalg.norm(vec)
        vec = sign_normalize(vec)
        residual = np.linalg.norm(op.solve(b @ vec) - pair.value * vec)
        if residual > 1e-8:
            raise ConvergenceError(
                "back-transformed eigenpair failed its residual check",
                residual)
        pairs.append(EigenPair(pair.value, vec))
    return pairs


def dense_solve(m, y):
    """Solve m @ x = y by Gaussian elimination with partial pivoting.

    Raises :class:`SingularMatrixError` when the best available pivot has
    magnitude at most 1e-13 * ||m||_F.  On success the residual satisfies
    ||m @ x - y|| <= 1e-10 * (||m|| * ||x|| + ||y||) for reasonably
    conditioned systems.
    """
    a = _as_square(m).copy()
    n = a.shape[0]
    b = np.asarray(y, dtype=float).copy()
    if b.shape != (n,):
        raise ValueError(f"right-hand side must have shape ({n},), got {b.shape}")
    if not np.all(np.isfinite(b)):
        raise ValueError("right-hand side has non-finite entries")
    norm = np.linalg.norm(a)
    threshold = 1e-13 * norm
    for k in range(n):
        piv = k + int(np.argmax(np.abs(a[k:, k])))
        if abs(a[piv, k]) <= threshold:
            raise SingularMatrixError(k, a[piv, k], threshold)
        if piv != k:
            a[[k, piv], k:] = a[[piv, k], k:]
            b[[k, piv]] = b[[piv, k]]
        if k + 1 < n:
            factors = a[k + 1:, k] / a[k, k]
            a[k + 1:, k:] -= np.outer(factors, a[k, k:])
            b[k + 1:] -= factors * b[k]
    x = np.empty(n)
    for k in range(n - 1, -1, -1):
        x[k] = (b[k] - a[k, k + 1:] @ x[k + 1:]) / a[k, k]
    return x
