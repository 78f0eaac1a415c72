"""Discrete homotopy inverse of the Rumin differential.

The sampled differentials only compose to zero up to O(h), so the complex is
first made exact around degree k: the outgoing differential is precomposed with
the orthogonal projector onto (im D_{k-1})^perp. On an exact complex the
Moore-Penrose inverses satisfy D K + K D = Id - H with H the projector onto the
kernel of the normal-equations operator D_{k-1} D_{k-1}^T + D_k^T D_k.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ..rumin import RuminComplex
from .grid import Grid
from .norms import dc_operator
from .operators import DiscreteOperator

SVD_RTOL = 1e-10


class HomotopyError(RuntimeError):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


def _pinv(m: np.ndarray) -> tuple[np.ndarray, int]:
    if m.size == 0:
        return m.T.copy(), 0
    u, s, vt = np.linalg.svd(m, full_matrices=False)
    keep = s > SVD_RTOL * (s[0] if s.size else 0.0)
    return (vt[keep].T / s[keep]) @ u[:, keep].T, int(keep.sum())


def _as_operator(grid: Grid, degree: int, src: int, dst: int, mat: np.ndarray, note: str) -> DiscreteOperator:
    return DiscreteOperator(grid, degree, src, dst, 0, sp.csr_matrix(mat),
                            np.ones(grid.npoints, dtype=bool), provenance=note)


@dataclass
class DiscreteHomotopy:
    """Homotopy data around degree k.

    ``K`` maps degree k to k-1 and ``K_next`` maps degree k+1 to k; either is None
    at the ends of the complex. ``harmonic`` holds an orthonormal basis (columns)
    of the discrete harmonic space in degree k.
    """

    grid: Grid
    degree: int
    K: DiscreteOperator | None
    K_next: DiscreteOperator | None
    D_prev: np.ndarray | None
    D_next: np.ndarray | None
    harmonic: np.ndarray
    ranks: tuple[int, int]

    @property
    def ndof(self) -> int:
        return self.harmonic.shape[0]

    def project_off_harmonics(self, w: np.ndarray) -> np.ndarray:
        w = np.asarray(w, dtype=float).reshape(-1)
        return w - self.harmonic @ (self.harmonic.T @ w)

    def homotopy_terms(self, w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(D K w, K D w) for a flattened degree-k form."""
        w = np.asarray(w, dtype=float).reshape(-1)
        dk = self.D_prev @ (self.K.matrix @ w) if self.K is not None else np.zeros_like(w)
        kd = self.K_next.matrix @ (self.D_next @ w) if self.K_next is not None else np.zeros_like(w)
        return dk, kd

    def residual(self, w: np.ndarray) -> float:
        """max |w - D K w - K D w|."""
        w = np.asarray(w, dtype=float).reshape(-1)
        dk, kd = self.homotopy_terms(w)
        return float(np.max(np.abs(w - dk - kd), initial=0.0))


def discrete_homotopy(rc: RuminComplex, grid: Grid, k: int, tol: float = 1e-6) -> DiscreteHomotopy:
    if not 0 <= k <= rc.n:
        raise ValueError(f"degree {k} outside 0..{rc.n}")
    ndof = grid.npoints * rc.dim(k)
    eye = np.eye(ndof)
    A = dc_operator(rc, grid, k - 1).matrix.toarray() if k > 0 else None
    B = dc_operator(rc, grid, k).matrix.toarray() if k < rc.n else None

    K = K_next = None
    image = np.zeros((ndof, ndof))
    rank_a = rank_b = 0
    if A is not None:
        A_pinv, rank_a = _pinv(A)
        image = A @ A_pinv
        K = _as_operator(grid, k, rc.dim(k), rc.dim(k - 1), A_pinv, f"pseudo-inverse of D_c^{k - 1}")
    if B is not None:
        B = B @ (eye - image)
        B_pinv, rank_b = _pinv(B)
        K_next = _as_operator(grid, k + 1, rc.dim(k + 1), rc.dim(k), B_pinv,
                              f"pseudo-inverse of exactified D_c^{k}")

    normal = np.zeros((ndof, ndof))
    if A is not None:
        normal += A @ A.T
    if B is not None:
        normal += B.T @ B
    evals, evecs = np.linalg.eigh(normal)
    scale = max(float(evals[-1]), 1.0) if evals.size else 1.0
    harmonic = evecs[:, evals <= SVD_RTOL * scale]

    out = DiscreteHomotopy(grid, k, K, K_next, A, B, harmonic, (rank_a, rank_b))
    # D K + K D + H must be the identity; anything else is a rank decision gone wrong
    total = harmonic @ harmonic.T
    if A is not None:
        total = total + image
    if B is not None:
        total = total + B_pinv @ B
    err = float(np.max(np.abs(total - eye), initial=0.0))
    if err > tol:
        raise HomotopyError("discrete homotopy identity failed; rank threshold or conditioning", err)
    return out
