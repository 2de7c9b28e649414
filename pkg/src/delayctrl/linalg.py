"""Dense linear algebra over exact rational-complex and floating scalars.

Exact matrices are numpy object arrays of :class:`delayctrl.scalars.QC`;
numeric matrices are ``complex128`` arrays.  Ranks in exact mode come from
Gaussian elimination over the rationals; in numeric mode from singular
values against a relative threshold.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import MixedScalarMode
from .scalars import EXACT, NUMERIC, QC


def is_exact_matrix(mat: np.ndarray) -> bool:
    return mat.dtype == object


def zeros(rows: int, cols: int, mode: str) -> np.ndarray:
    if mode == EXACT:
        return np.array([[QC(0)] * cols for _ in range(rows)], dtype=object)
    return np.zeros((rows, cols), dtype=complex)


def eye(d: int, mode: str) -> np.ndarray:
    if mode == EXACT:
        return np.array([[QC(1 if i == j else 0) for j in range(d)]
                         for i in range(d)], dtype=object)
    return np.eye(d, dtype=complex)


def zero_vector(d: int, mode: str) -> np.ndarray:
    if mode == EXACT:
        return np.array([QC(0)] * d, dtype=object)
    return np.zeros(d, dtype=complex)


def to_numeric(mat: np.ndarray) -> np.ndarray:
    if not is_exact_matrix(mat):
        return np.asarray(mat, dtype=complex)
    return np.array([[complex(x) for x in row] for row in np.atleast_2d(mat)],
                    dtype=complex) if mat.ndim == 2 else \
        np.array([complex(x) for x in mat], dtype=complex)


def matrices_equal(a: np.ndarray, b: np.ndarray, tol: float = 0.0) -> bool:
    if a.shape != b.shape:
        return False
    if is_exact_matrix(a) and is_exact_matrix(b):
        return all(x == y for x, y in zip(a.flat, b.flat))
    return bool(np.max(np.abs(to_numeric(a) - to_numeric(b)), initial=0.0) <= tol)


def hstack(blocks, rows: int, mode: str) -> np.ndarray:
    """Horizontally stack matrix blocks; empty list gives a rows x 0 matrix."""
    blocks = list(blocks)
    if not blocks:
        return zeros(rows, 0, mode)
    modes = {EXACT if is_exact_matrix(b) else NUMERIC for b in blocks}
    if len(modes) > 1:
        raise MixedScalarMode("cannot stack exact and numeric blocks")
    return np.hstack(blocks)


def default_rank_tolerance(shape) -> float:
    return max(shape[0], shape[1], 1) * np.finfo(float).eps


def rank_and_pivots(mat: np.ndarray, mode: str, rel_tol: float | None = None):
    """Rank of ``mat`` and a list of ``rank`` independent column indices."""
    rows, cols = mat.shape
    if cols == 0 or rows == 0:
        return 0, []
    if mode == EXACT:
        if not is_exact_matrix(mat):
            raise MixedScalarMode("exact rank requested on a numeric matrix")
        return _rank_pivots_exact(mat)
    num = to_numeric(mat)
    sigma = np.linalg.svd(num, compute_uv=False)
    smax = sigma[0] if len(sigma) else 0.0
    if smax == 0.0:
        return 0, []
    tol = (rel_tol if rel_tol is not None else default_rank_tolerance(mat.shape))
    rank = int(np.sum(sigma > tol * smax))
    _, _, perm = scipy.linalg.qr(num, pivoting=True, mode="economic")
    return rank, sorted(int(p) for p in perm[:rank])


def _rank_pivots_exact(mat: np.ndarray):
    rows, cols = mat.shape
    work = [[mat[i, j] for j in range(cols)] for i in range(rows)]
    pivots = []
    piv_r = 0
    for c in range(cols):
        # pick the remaining row whose entry in this column has the largest
        # magnitude, to keep intermediate numerators moderate
        best, best_mag = None, -1.0
        for r in range(piv_r, rows):
            v = work[r][c]
            if v:
                mag = abs(v)
                if mag > best_mag:
                    best, best_mag = r, mag
        if best is None:
            continue
        if best != piv_r:
            work[piv_r], work[best] = work[best], work[piv_r]
        pv = work[piv_r][c]
        for r in range(piv_r + 1, rows):
            f = work[r][c]
            if f:
                ratio = f / pv
                for cc in range(c, cols):
                    work[r][cc] = work[r][cc] - work[piv_r][cc] * ratio
        pivots.append(c)
        piv_r += 1
        if piv_r == rows:
            break
    return len(pivots), pivots


def rank(mat: np.ndarray, mode: str, rel_tol: float | None = None) -> int:
    return rank_and_pivots(mat, mode, rel_tol)[0]


def invert_exact(mat: np.ndarray) -> np.ndarray:
    """Exact inverse of a square QC matrix by Gauss-Jordan elimination."""
    d = mat.shape[0]
    if mat.shape[1] != d:
        raise ValueError("matrix is not square")
    work = [[mat[i, j] for j in range(d)] + [QC(1 if j == i else 0) for j in range(d)]
            for i in range(d)]
    for c in range(d):
        piv = next((r for r in range(c, d) if work[r][c]), None)
        if piv is None:
            raise ValueError("matrix is singular")
        if piv != c:
            work[c], work[piv] = work[piv], work[c]
        pv = work[c][c]
        work[c] = [x / pv for x in work[c]]
        for r in range(d):
            if r != c and work[r][c]:
                f = work[r][c]
                work[r] = [x - y * f for x, y in zip(work[r], work[c])]
    return np.array([row[d:] for row in work], dtype=object)


def right_inverse(mat: np.ndarray, mode: str, rel_tol: float | None = None) -> np.ndarray:
    """A right inverse of a full-row-rank d x c matrix.

    Numeric mode returns the minimum-norm right inverse (pseudoinverse);
    exact mode inverts on a set of pivot columns and is zero elsewhere.
    """
    d, cols = mat.shape
    if mode == NUMERIC:
        return np.linalg.pinv(to_numeric(mat))
    rk, pivots = rank_and_pivots(mat, EXACT, rel_tol)
    if rk < d:
        raise ValueError("matrix does not have full row rank")
    sub = mat[:, pivots]
    inv = invert_exact(sub)
    out = zeros(cols, d, EXACT)
    for i, p in enumerate(pivots):
        out[p, :] = inv[i, :]
    return out


def solve_steering(mat: np.ndarray, target: np.ndarray, mode: str,
                   rel_tol: float | None = None) -> np.ndarray:
    """Solve ``mat @ u = target`` for a full-row-rank matrix."""
    return right_inverse(mat, mode, rel_tol) @ target
