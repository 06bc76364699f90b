"""Dense symmetric eigensolver: cyclic Jacobi rotations.

Matrices in this package are small (at most 65x65 for the spectral basis,
at most 16x16 for composite operators), so a classic cyclic Jacobi sweep is
plenty and keeps the reference pipeline self-contained. Off-diagonal mass is
driven below a tolerance relative to the Frobenius norm of the input; for
matrices of order-one entries that is an absolute 1e-12.
"""

from __future__ import annotations

import numpy as np

OFFDIAG_TOL = 1e-12


def _offdiag_norm(a: np.ndarray) -> float:
    return float(np.sqrt(np.sum(np.tril(a, -1) ** 2) * 2.0))


def jacobi_eigh(matrix: np.ndarray, tol: float = OFFDIAG_TOL, max_sweeps: int = 100):
    """Eigenvalues and eigenvectors of a real symmetric matrix.

    Returns (w, v) with v[:, i] the eigenvector for w[i], in no particular
    order. Raises ValueError if the input is not square/symmetric or if the
    sweep limit is exceeded.
    """
    a = np.array(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n == 0:
        raise ValueError("empty matrix")
    if not np.allclose(a, a.T, rtol=0.0, atol=1e-10 * max(1.0, np.abs(a).max())):
        raise ValueError("matrix is not symmetric")
    a = 0.5 * (a + a.T)

    scale = float(np.linalg.norm(a))
    if scale == 0.0:
        return np.zeros(n), np.eye(n)
    thresh = tol * scale

    v = np.eye(n)
    # rotations below this are pointless at double precision
    skip = thresh / max(n, 2)
    for _ in range(max_sweeps):
        if _offdiag_norm(a) <= thresh:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= skip:
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(tau) / (abs(tau) + np.sqrt(1.0 + tau * tau)) if tau != 0.0 else 1.0
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c

                app, aqq = a[p, p], a[q, q]
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = a[q, p] = 0.0

                rows = np.arange(n)
                mask = (rows != p) & (rows != q)
                arp = a[mask, p].copy()
                arq = a[mask, q].copy()
                a[mask, p] = c * arp - s * arq
                a[mask, q] = s * arp + c * arq
                a[p, mask] = a[mask, p]
                a[q, mask] = a[mask, q]

                vp = v[:, p].copy()
                v[:, p] = c * vp - s * v[:, q]
                v[:, q] = s * vp + c * v[:, q]
    else:
        raise ValueError(
            f"Jacobi sweep limit ({max_sweeps}) exceeded; "
            f"residual off-diagonal norm {_offdiag_norm(a):.3e}"
        )
    return np.diag(a).copy(), v


def canonical_sign(vec: np.ndarray) -> np.ndarray:
    """Flip an eigenvector so its largest-magnitude entry is positive.

    Deterministic tie-break: the first entry attaining the maximum decides.
    """
    idx = int(np.argmax(np.abs(vec)))
    return -vec if vec[idx] < 0.0 else vec.copy()
