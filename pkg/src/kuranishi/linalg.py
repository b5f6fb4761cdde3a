"""Linear algebra in two flavors: exact over the rationals, tolerance-based over floats.

Structural facts about stored matrices (column ranks, additivity block
inversions, subspace identities) are decided exactly with Fraction Gaussian
elimination.  Pointwise facts about Jacobians go through numpy SVD with a
relative rank cutoff.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from ._util import as_fraction, frac_vec

# ---------------------------------------------------------------------------
# Exact rational matrices, represented as tuples of row tuples.
# ---------------------------------------------------------------------------


def frac_matrix(rows) -> tuple:
    return tuple(frac_vec(r) for r in rows)


def mat_shape(A) -> tuple:
    return (len(A), len(A[0]) if A else 0)


def mat_mul(A, B) -> tuple:
    m, k = mat_shape(A)
    k2, n = mat_shape(B)
    if k != k2:
        raise ValueError("matrix shape mismatch")
    return tuple(
        tuple(sum((A[i][t] * B[t][j] for t in range(k)), Fraction(0)) for j in range(n))
        for i in range(m)
    )


def mat_vec(A, v) -> tuple:
    m, k = mat_shape(A)
    if len(v) != k:
        raise ValueError("matrix/vector shape mismatch")
    return tuple(sum((A[i][t] * v[t] for t in range(k)), Fraction(0)) for i in range(m))


def mat_float(A) -> np.ndarray:
    m, n = mat_shape(A)
    return np.array([[float(x) for x in row] for row in A], dtype=float).reshape(m, n)


def _rref(rows: list) -> tuple:
    """Reduced row echelon form; returns (rref rows, pivot column list)."""
    rows = [list(r) for r in rows]
    m = len(rows)
    n = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if rows[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return rows, pivots


def rank_exact(A) -> int:
    m, n = mat_shape(A)
    if m == 0 or n == 0:
        return 0
    _, pivots = _rref(list(A))
    return len(pivots)


def kernel_exact(A) -> list:
    """Basis of the exact nullspace of A (list of Fraction tuples)."""
    m, n = mat_shape(A)
    if n == 0:
        return []
    if m == 0:
        return [tuple(Fraction(1) if j == i else Fraction(0) for j in range(n)) for i in range(n)]
    rref, pivots = _rref(list(A))
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -rref[r][f]
        basis.append(tuple(v))
    return basis


def columns(A) -> list:
    m, n = mat_shape(A)
    return [tuple(A[i][j] for i in range(m)) for j in range(n)]


def from_columns(cols, m=None) -> tuple:
    if not cols:
        return tuple(() for _ in range(m or 0))
    m = len(cols[0])
    return tuple(tuple(c[i] for c in cols) for i in range(m))


def hstack(A, B) -> tuple:
    mA, _ = mat_shape(A)
    mB, _ = mat_shape(B)
    if mA != mB and mA and mB:
        raise ValueError("row count mismatch in hstack")
    m = max(mA, mB)
    return tuple(
        tuple(A[i] if i < mA else ()) + tuple(B[i] if i < mB else ()) for i in range(m)
    )


def full_column_rank_exact(A) -> bool:
    _, n = mat_shape(A)
    return rank_exact(A) == n


def same_column_space(A, B) -> bool:
    return (
        rank_exact(A) == rank_exact(B) == rank_exact(hstack(A, B))
    )


def column_space_contains(A, v) -> bool:
    col = tuple((x,) for x in v)
    return rank_exact(A) == rank_exact(hstack(A, col))


def column_space_intersection(A, B) -> list:
    """Exact basis of im(A) ∩ im(B)."""
    mA, nA = mat_shape(A)
    mB, nB = mat_shape(B)
    if nA == 0 or nB == 0:
        return []
    stacked = hstack(A, tuple(tuple(-x for x in row) for row in B))
    inter = []
    for w in kernel_exact(stacked):
        u = w[:nA]
        vec = mat_vec(A, u)
        if any(x != 0 for x in vec):
            inter.append(vec)
    # independent subset
    basis: list = []
    for v in inter:
        cand = from_columns(basis + [v], m=mA)
        if rank_exact(cand) > len(basis):
            basis.append(v)
    return basis


def invert_exact(A) -> tuple:
    m, n = mat_shape(A)
    if m != n:
        raise ValueError("only square matrices invert")
    aug = [list(A[i]) + [Fraction(1) if j == i else Fraction(0) for j in range(n)] for i in range(n)]
    rref, pivots = _rref(aug)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return tuple(tuple(rref[i][n:]) for i in range(n))


def det_exact(A) -> Fraction:
    m, n = mat_shape(A)
    if m != n:
        raise ValueError("determinant of a nonsquare matrix")
    rows = [list(r) for r in A]
    det = Fraction(1)
    for c in range(n):
        piv = None
        for i in range(c, n):
            if rows[i][c] != 0:
                piv = i
                break
        if piv is None:
            return Fraction(0)
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det = -det
        det *= rows[c][c]
        inv = 1 / rows[c][c]
        for i in range(c + 1, n):
            if rows[i][c] != 0:
                f = rows[i][c] * inv
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
    return det


# ---------------------------------------------------------------------------
# Float-side rank revealing decompositions.
# ---------------------------------------------------------------------------


def svd_rank(M: np.ndarray, rank_rel: float) -> tuple:
    """(rank, singular values) with cutoff rank_rel * s_max."""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if M.size == 0:
        return 0, np.zeros(0)
    s = np.linalg.svd(M, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0, s
    cutoff = rank_rel * s[0]
    return int(np.sum(s > cutoff)), s


@dataclass
class DifferentialData:
    jacobian: np.ndarray
    kernel: np.ndarray  # n x k, orthonormal columns
    cokernel: np.ndarray  # m x g, orthonormal columns
    sigma_min: float

    @property
    def rank(self) -> int:
        return self.jacobian.shape[1] - self.kernel.shape[1]


def kernel_cokernel(M: np.ndarray, rank_rel: float) -> DifferentialData:
    M = np.atleast_2d(np.asarray(M, dtype=float))
    m, n = M.shape
    if n == 0:
        coker = np.eye(m)
        return DifferentialData(M, np.zeros((0, 0)), coker, 0.0 if m else 0.0)
    U, s, Vt = np.linalg.svd(M)
    smax = s[0] if s.size else 0.0
    cutoff = rank_rel * smax
    r = int(np.sum(s > cutoff)) if s.size else 0
    kernel = Vt[r:].T  # n x (n - r)
    cokernel = U[:, r:]  # m x (m - r)
    sigma_min = float(s[min(m, n) - 1]) if s.size else 0.0
    return DifferentialData(M, kernel, cokernel, sigma_min)


def differential_data(f, x, rank_rel: float = 1e-8) -> DifferentialData:
    """Jacobian with kernel/cokernel bases and the minimal singular value.

    The Jacobian is assembled from exact symbolic derivatives of the
    polynomial part and exact derivative formulas for bump terms, then
    factorized with a relative rank cutoff.
    """
    jac = f.jacobian(x)
    return kernel_cokernel(jac, rank_rel)


def orthonormal_complement(B: np.ndarray, dim: int, rank_rel: float = 1e-12) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of the column span of B in R^dim."""
    B = np.asarray(B, dtype=float).reshape(dim, -1)
    if B.shape[1] == 0:
        return np.eye(dim)
    U, s, _ = np.linalg.svd(B, full_matrices=True)
    r = int(np.sum(s > (s[0] * rank_rel if s.size and s[0] else 0)))
    return U[:, r:]


def subspace_distance(v: np.ndarray, B: np.ndarray) -> float:
    """Euclidean distance from v to the column span of B (orthonormal not required)."""
    v = np.asarray(v, dtype=float)
    B = np.asarray(B, dtype=float).reshape(len(v), -1)
    if B.shape[1] == 0:
        return float(np.linalg.norm(v))
    x, *_ = np.linalg.lstsq(B, v, rcond=None)
    return float(np.linalg.norm(B @ x - v))
