"""Eigenstructure and attraction subspaces of smoothed descent on quadratics.

For f(x) = (scale/2) x^T B x the smoothed iteration is linear, driven by
A(sigma)^(-1) B.  When B is the canonical saddle matrix diag(1, ..., 1, -1)
that operator keeps exactly one negative eigenvalue, and its eigenvectors
split into three families distinguished by their behavior under the index
reflection i -> n-2-i that fixes the last coordinate:

* antisymmetric vectors (reversed head is the negated head, last entry 0),
* symmetric vectors with a nonzero last entry and a positive eigenvalue,
* one symmetric vector with the negative eigenvalue, the escape mode.

The span of the antisymmetric family does not depend on sigma, which makes
it the attraction region of the saddle under smoothed descent: iterates
started in it contract to the saddle, while any component outside of it
eventually feeds the escape mode.  This module computes those subspaces,
both from the closed-form basis available in the canonical case and from a
general symmetric matrix by intersecting its positive eigenspaces with the
eigenspaces of the ring second-difference operator.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import linalg
from .linalg import EigenPair, sign_normalize
from .smoothing import CirculantSmoother

__all__ = [
    "QuadraticObjective",
    "canonical_objective",
    "ModeClass",
    "EigenStructure",
    "ClassificationError",
    "SubspaceBasis",
    "CanonicalSplit",
    "eigen_structure",
    "canonical_attraction_basis",
    "general_attraction_basis",
    "laplacian_eigenspaces",
    "positive_eigvec_ratio",
    "negative_mode_overlap",
    "kernel_direction_fixed",
    "principal_angle",
]


class ClassificationError(RuntimeError):
    """An eigenvector fit neither symmetry pattern.

    ``residuals`` maps eigenvalue -> (antisymmetric residual, symmetric
    residual, last-entry magnitude) for every vector left unclassified.
    """

    def __init__(self, message, residuals):
        detail = "; ".join(
            f"value {val:.6g}: anti {a:.2e}, sym {s:.2e}, last {last:.2e}"
            for val, (a, s, last) in residuals.items())
        super().__init__(f"{message}: {detail}")
        self.residuals = residuals


@dataclass(frozen=True, eq=False)
class QuadraticObjective:
    """f(x) = (scale / 2) * x^T matrix x with a symmetric matrix."""

    matrix: np.ndarray
    scale: float = 1.0

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise ValueError(f"matrix must be square, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("matrix has non-finite entries")
        norm = np.linalg.norm(m)
        if np.linalg.norm(m - m.T) > 1e-12 * max(norm, 1e-300):
            raise ValueError("matrix is not symmetric within 1e-12 relative")
        scale = float(self.scale)
        if not np.isfinite(scale) or scale <= 0.0:
            raise ValueError(f"scale must be finite and > 0, got {scale}")
        m = 0.5 * (m + m.T)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "scale", scale)

    @property
    def dim(self):
        return self.matrix.shape[0]

    @property
    def is_canonical(self):
        ref = np.ones(self.dim)
        ref[-1] = -1.0
        return bool(np.max(np.abs(self.matrix - np.diag(ref))) <= 1e-12)

    def value(self, x):
        x = np.asarray(x, dtype=float)
        return 0.5 * self.scale * float(x @ (self.matrix @ x))

    def gradient(self, x):
        x = np.asarray(x, dtype=float)
        return self.scale * (self.matrix @ x)

    def gradient_lipschitz(self):
        """scale * spectral radius of the matrix."""
        pairs = linalg.sym_eigendecompose(self.matrix)
        return self.scale * max(abs(p.value) for p in pairs)

    def describe(self):
        kind = "canonical" if self.is_canonical else "matrix"
        return f"{kind}(n={self.dim}, scale={self.scale:g})"


def canonical_objective(n, scale=1.0):
    """The n-dimensional saddle with Hessian scale * diag(1, ..., 1, -1)."""
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {n!r}")
    d = np.ones(int(n))
    d[-1] = -1.0
    return QuadraticObjective(np.diag(d), scale)


class ModeClass(Enum):
    ANTISYMMETRIC_SINE = "antisymmetric_sine"
    SYMMETRIC = "symmetric"
    NEGATIVE_MODE = "negative_mode"


def _pattern_residuals(v):
    head = v[:-1]
    rev = head[::-1]
    anti = float(np.max(np.abs(head + rev))) if len(head) else 0.0
    sym = float(np.max(np.abs(head - rev))) if len(head) else 0.0
    return anti, sym, abs(float(v[-1]))


def _classify(value, vector, tol):
    anti, sym, last = _pattern_residuals(vector)
    if anti <= tol and last <= tol:
        return ModeClass.ANTISYMMETRIC_SINE
    if sym <= tol and last > tol:
        return ModeClass.NEGATIVE_MODE if value < 0 else ModeClass.SYMMETRIC
    return None


@dataclass(frozen=True)
class EigenStructure:
    """Classified eigenpairs of A(sigma)^(-1) B, descending by eigenvalue.

    ``labels[i]`` is the :class:`ModeClass` of ``pairs[i]`` or None when the
    vector fits no pattern (possible for non-canonical matrices, and for the
    degenerate sigma = 0 limit where the symmetric family collapses).
    """

    sigma: float
    pairs: tuple
    labels: tuple

    def count(self, label):
        return sum(1 for item in self.labels if item is label)

    def vectors(self, label):
        cols = [p.vector for p, l in zip(self.pairs, self.labels) if l is label]
        return np.array(cols) if cols else np.empty((0, self.dim))

    @property
    def dim(self):
        return len(self.pairs[0].vector)

    def span(self, label):
        """Orthonormal basis (rows) of the span of one family."""
        return SubspaceBasis(_orthonormalize(self.vectors(label)))


def _orthonormalize(rows, drop_tol=1e-8):
    """Modified Gram-Schmidt over row vectors, dropping dependent ones."""
    kept = []
    for row in np.asarray(rows, dtype=float):
        w = row.copy()
        for b in kept:
            w -= (b @ w) * b
        # second pass for re-orthogonalization stability
        for b in kept:
            w -= (b @ w) * b
        norm = np.linalg.norm(w)
        if norm > drop_tol * max(1.0, np.linalg.norm(row)):
            kept.append(w / norm)
    n = rows.shape[1] if getattr(rows, "ndim", 0) == 2 else len(kept[0])
    return np.array(kept) if kept else np.empty((0, n))


@dataclass(frozen=True)
class SubspaceBasis:
    """Orthonormal row vectors spanning a subspace."""

    rows: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.rows, dtype=float)
        if r.ndim != 2:
            raise ValueError(f"basis must be a 2-d array, got shape {r.shape}")
        if r.shape[0]:
            gram = r @ r.T
            if np.max(np.abs(gram - np.eye(r.shape[0]))) > 1e-10:
                raise ValueError("basis rows are not orthonormal within 1e-10")
        r = r.copy()
        r.setflags(write=False)
        object.__setattr__(self, "rows", r)

    @property
    def dim(self):
        return self.rows.shape[0]

    @property
    def ambient(self):
        return self.rows.shape[1]

    def project(self, x):
        """Orthogonal projection of x onto the subspace."""
        if self.dim == 0:
            return np.zeros_like(np.asarray(x, dtype=float))
        return self.rows.T @ (self.rows @ np.asarray(x, dtype=float))

    def contains(self, x, tol=1e-9):
        x = np.asarray(x, dtype=float)
        return bool(np.linalg.norm(x - self.project(x)) <= tol * max(1.0, np.linalg.norm(x)))


@dataclass(frozen=True)
class CanonicalSplit:
    """The reflection-even / reflection-odd split of the canonical saddle."""

    antisymmetric: SubspaceBasis
    symmetric: SubspaceBasis


def eigen_structure(objective, sigma, tol=1e-8):
    """Eigenpairs of A(sigma)^(-1) B with symmetry classification.

    The positive ``scale`` of the objective only multiplies eigenvalues, so
    the decomposition is taken of the bare matrix: for a canonical objective
    all eigenvalues lie in [-1, 1] and exactly one is negative.

    The index reflection commutes with the smoothing operator (a circulant
    is unchanged by reversing the ring) and with the canonical matrix, so
    for canonical objectives the similar symmetric matrix is decomposed
    blockwise on the reflection-even and reflection-odd subspaces.  That
    keeps eigenvectors of nearby eigenvalues from different families from
    mixing, no matter how small the gap.  General matrices go through the
    plain route and vectors that fit no pattern get label None; for a
    canonical objective with sigma > 0 an unclassified vector, or family
    counts different from (floor((n-1)/2), floor(n/2), 1), raise
    :class:`ClassificationError` instead.
    """
    sigma = float(sigma)
    if not np.isfinite(sigma) or sigma < 0.0:
        raise ValueError(f"sigma must be finite and >= 0, got {sigma}")
    b = objective.matrix
    if objective.is_canonical:
        pairs = _reflection_adapted_pairs(b, sigma)
    else:
        pairs = linalg.eig_preconditioned_hessian(b, sigma, tol=min(tol, 1e-10))
    labels = [_classify(p.value, p.vector, tol) for p in pairs]
    strict = objective.is_canonical and sigma > 0.0
    if strict:
        bad = {
            p.value: _pattern_residuals(p.vector)
            for p, l in zip(pairs, labels) if l is None
        }
        if bad:
            raise ClassificationError(
                "eigenvectors fit neither symmetry pattern", bad)
        n = objective.dim
        expected = {
            ModeClass.ANTISYMMETRIC_SINE: (n - 1) // 2,
            ModeClass.SYMMETRIC: n // 2,
            ModeClass.NEGATIVE_MODE: 1,
        }
        got = {m: labels.count(m) for m in expected}
        if got != expected:
            raise ClassificationError(
                f"family counts {got} differ from {expected}",
                {p.value: _pattern_residuals(p.vector) for p in pairs})
    return EigenStructure(sigma, tuple(pairs), tuple(labels))


def _reflection_adapted_pairs(b, sigma):
    """Eigenpairs of A^(-1) B computed per reflection-parity block.

    Builds the similar symmetric matrix A^(-1/2) B A^(-1/2), restricts it
    to the reflection-odd and reflection-even subspaces (both invariant
    when B is canonical), decomposes each restriction on its own, and maps
    the vectors back through A^(-1/2), which preserves parity.  Each pair
    is verified to satisfy ||A^(-1) B v - lambda v|| <= 1e-8.
    """
    n = b.shape[0]
    op = CirculantSmoother(n, sigma)
    half = np.empty_like(b)
    for j in range(n):
        half[:, j] = op.inv_sqrt_apply(b[:, j])
    sym = np.empty_like(b)
    for i in range(n):
        sym[i, :] = op.inv_sqrt_apply(half[i, :])
    sym = 0.5 * (sym + sym.T)
    split = canonical_attraction_basis(n)
    pairs = []
    for block in (split.antisymmetric.rows, split.symmetric.rows):
        if block.shape[0] == 0:
            continue
        restricted = block @ sym @ block.T
        restricted = 0.5 * (restricted + restricted.T)
        for small in linalg.sym_eigendecompose(restricted, tol=1e-12):
            vec = op.inv_sqrt_apply(block.T @ small.vector)
            vec /= np.linalg.norm(vec)
            vec = sign_normalize(vec)
            residual = np.linalg.norm(op.solve(b @ vec) - small.value * vec)
            if residual > 1e-8:
                raise linalg.ConvergenceError(
                    "block eigenpair failed its residual check", residual)
            pairs.append(EigenPair(small.value, vec))
    pairs.sort(key=lambda p: -p.value)
    return pairs


def canonical_attraction_basis(n):
    """Closed-form attraction/escape split for the canonical saddle.

    The antisymmetric part (the attraction region) is spanned by
    (e_k - e_{n-2-k}) / sqrt(2) for k < (n-1)/2; the symmetric complement
    adds the matching plus-combinations, the last coordinate axis, and for
    even n the middle axis e_{n/2-1}.  Dimensions are floor((n-1)/2) and
    n - floor((n-1)/2).
    """
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {n!r}")
    n = int(n)
    eye = np.eye(n)
    half = 1.0 / np.sqrt(2.0)
    anti = [half * (eye[k] - eye[n - 2 - k]) for k in range((n - 1) // 2)]
    sym = [half * (eye[k] + eye[n - 2 - k]) for k in range((n - 1) // 2)]
    if n % 2 == 0:
        sym.append(eye[n // 2 - 1].copy())
    sym.append(eye[n - 1].copy())
    empty = np.empty((0, n))
    return CanonicalSplit(
        antisymmetric=SubspaceBasis(np.array(anti) if anti else empty),
        symmetric=SubspaceBasis(np.array(sym) if sym else empty),
    )


def ring_second_difference(v):
    """The periodic second difference used by the smoothing operator.

    For n >= 3 this is v_{i-1} - 2 v_i + v_{i+1} on the ring; for n = 2 the
    single-coupling convention gives (v_1 - v_0, v_0 - v_1).
    """
    v = np.asarray(v, dtype=float)
    if len(v) == 2:
        return np.array([v[1] - v[0], v[0] - v[1]])
    return np.roll(v, 1) + np.roll(v, -1) - 2.0 * v


def laplacian_eigenspaces(n):
    """Analytic orthonormal eigenspaces of the ring second difference.

    Returns a list of (eigenvalue, basis) with basis rows orthonormal.  For
    n >= 3 the eigenvalues are 2 cos(2 pi m / n) - 2 for the frequencies
    m = 0 .. floor(n/2), with two-dimensional spaces at the interior
    frequencies; n = 2 uses the single-coupling form with eigenvalues
    {0, -2}.
    """
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {n!r}")
    n = int(n)
    if n == 2:
        inv = 1.0 / np.sqrt(2.0)
        return [
            (0.0, np.array([[inv, inv]])),
            (-2.0, np.array([[inv, -inv]])),
        ]
    spaces = [(0.0, np.full((1, n), 1.0 / np.sqrt(n)))]
    idx = np.arange(n)
    for m in range(1, (n - 1) // 2 + 1):
        angle = 2.0 * np.pi * m * idx / n
        basis = np.array([np.cos(angle), np.sin(angle)]) / np.sqrt(n / 2.0)
        spaces.append((2.0 * np.cos(2.0 * np.pi * m / n) - 2.0, basis))
    if n % 2 == 0:
        alt = np.where(idx % 2 == 0, 1.0, -1.0) / np.sqrt(n)
        spaces.append((-4.0, alt.reshape(1, -1)))
    return spaces


def _kernel_coefficients(m_map, tol):
    """Coefficient vectors alpha with m_map @ alpha ~ 0.

    The kernel is the orthogonal complement of the row space, found with
    two Gram-Schmidt passes: one over the rows to get a row-space basis,
    one extending it by coordinate vectors.  No SVD involved.
    """
    width = m_map.shape[1]
    row_basis = _orthonormalize(m_map, drop_tol=tol)
    extended = list(row_basis)
    kernel = []
    for i in range(width):
        w = np.eye(width)[i]
        for b in extended:
            w -= (b @ w) * b
        for b in extended:
            w -= (b @ w) * b
        norm = np.linalg.norm(w)
        if norm > tol:
            w /= norm
            extended.append(w)
            kernel.append(w)
    return kernel


def general_attraction_basis(objective, tol=1e-8):
    """Attraction region of smoothed descent for a general symmetric matrix.

    A direction p belongs to it iff p is an eigenvector of the matrix with a
    positive eigenvalue whose second difference stays in span{p}; the span
    of all such directions is then invariant under A(sigma)^(-1) B for every
    sigma at once.  Simple positive eigenvalues are checked directly.  A
    repeated positive eigenvalue contributes the intersection of its
    eigenspace with each eigenspace of the ring second difference, computed
    by composing the two projections and extracting the kernel with
    Gram-Schmidt passes; every candidate is verified against both operators
    before being accepted.

    The matrix must have no zero eigenvalue (relative to 1e-10 * ||B||);
    degenerate saddles are the domain of :func:`kernel_direction_fixed`.
    """
    b = objective.matrix
    n = objective.dim
    norm = np.linalg.norm(b)
    pairs = linalg.sym_eigendecompose(b)
    if any(abs(p.value) <= 1e-10 * norm for p in pairs):
        raise ValueError(
            "matrix has a zero eigenvalue; use kernel_direction_fixed for "
            "degenerate saddles")
    positive = [p for p in pairs if p.value > 0]
    spaces = laplacian_eigenspaces(n)
    accepted = []
    start = 0
    gap = 1e-9 * norm
    while start < len(positive):
        stop = start + 1
        while (stop < len(positive)
               and abs(positive[stop].value - positive[stop - 1].value) <= gap):
            stop += 1
        cluster = positive[start:stop]
        mean = float(np.mean([p.value for p in cluster]))
        if len(cluster) == 1:
            p = cluster[0].vector
            lp = ring_second_difference(p)
            if np.linalg.norm(lp - (p @ lp) * p) <= tol:
                accepted.append(p)
        else:
            basis = np.column_stack([p.vector for p in cluster])
            for _, lap_rows in spaces:
                proj = lap_rows.T @ (lap_rows @ basis)
                residual_map = basis - proj
                for alpha in _kernel_coefficients(residual_map, tol):
                    cand = basis @ alpha
                    cand /= np.linalg.norm(cand)
                    lp = ring_second_difference(cand)
                    in_lap = np.linalg.norm(lp - lap_rows.T @ (lap_rows @ lp))
                    eig_res = np.linalg.norm(b @ cand - mean * cand)
                    if in_lap <= 10 * tol and eig_res <= 10 * tol * max(1.0, norm):
                        accepted.append(cand)
        start = stop
    rows = _orthonormalize(np.array(accepted)) if accepted else np.empty((0, n))
    return SubspaceBasis(rows)


def positive_eigvec_ratio(sigma):
    """Component ratio of the slow eigenvector of the 2-d canonical saddle.

    For n = 2 the positive-eigenvalue eigenvector of A(sigma)^(-1) B is
    proportional to (ratio, 1) with ratio = (sigma + 1 + sqrt(2 sigma + 1))
    / sigma.  It decreases from infinity (sigma -> 0, the x-axis) toward 1,
    so growing sigma rotates the attracting direction away from every fixed
    line through the origin.
    """
    sigma = float(sigma)
    if not np.isfinite(sigma) or sigma <= 0.0:
        raise ValueError(f"sigma must be finite and > 0, got {sigma}")
    return (sigma + 1.0 + np.sqrt(2.0 * sigma + 1.0)) / sigma


def negative_mode_overlap(objective, sigma1, sigma2):
    """Inner product of sign-fixed escape modes at two smoothing strengths.

    The escape mode (the eigenvector with the negative eigenvalue) has
    entries of a single sign, so after sign normalization the overlap is
    strictly positive no matter how far apart sigma1 and sigma2 are; the
    modes at different strengths are never orthogonal.
    """
    vecs = []
    for sigma in (sigma1, sigma2):
        pairs = linalg.eig_preconditioned_hessian(objective.matrix, sigma)
        last = pairs[-1]
        if last.value >= 0:
            raise ValueError(
                "objective has no negative-curvature mode to compare")
        vecs.append(sign_normalize(last.vector))
    return float(vecs[0] @ vecs[1])


def kernel_direction_fixed(objective, p, schedule, steps, eta=0.1):
    """Whether smoothed descent started at a kernel vector stays put.

    Requires ||B p|| <= 1e-10 * ||B|| * ||p|| (p must lie in the kernel of
    the Hessian).  Runs ``steps`` smoothed-descent steps from p and returns
    True iff every iterate stays within 1e-10 of p.  With an exact kernel
    vector the gradient vanishes identically and the point never moves,
    regardless of the schedule or step size.
    """
    p = np.asarray(p, dtype=float)
    b = objective.matrix
    norm = np.linalg.norm(b)
    pnorm = np.linalg.norm(p)
    if pnorm == 0.0:
        raise ValueError("p must be a nonzero vector")
    if np.linalg.norm(b @ p) > 1e-10 * norm * pnorm:
        raise ValueError(
            "p is not in the kernel of the matrix (||B p|| too large)")
    x = p.copy()
    drift = 0.0
    for k in range(steps):
        grad = objective.gradient(x)
        op = CirculantSmoother(objective.dim, float(schedule(k)))
        x = x - eta * op.solve(grad)
        drift = max(drift, float(np.max(np.abs(x - p))))
        if drift > 1e-10:
            return False
    return drift <= 1e-10


def principal_angle(a, b):
    """Largest principal angle between two equal-dimension subspaces, radians.

    Zero means the spans coincide.  Computed from the smallest singular
    value of the basis overlap matrix, obtained through the symmetric
    eigensolver on its Gram matrix.
    """
    ra, rb = a.rows, b.rows
    if ra.shape[0] != rb.shape[0]:
        raise ValueError(
            f"subspace dimensions differ: {ra.shape[0]} vs {rb.shape[0]}")
    if ra.shape[0] == 0:
        return 0.0
    overlap = ra @ rb.T
    gram = overlap @ overlap.T
    smallest = min(p.value for p in linalg.sym_eigendecompose(gram))
    cosine = np.sqrt(max(smallest, 0.0))
    return float(np.arccos(np.clip(cosine, -1.0, 1.0)))
