"""Cyclic Jacobi eigensolver for small complex Hermitian matrices."""

import numpy as np

from .errors import TangleError

OFF_TOL = 1e-13
MAX_SWEEPS = 100
HERMITIAN_TOL = 1e-10


def _off_norm(a):
    # summed directly: total minus diagonal cancels to ~sqrt(eps)
    off = a[~np.eye(a.shape[0], dtype=bool)]
    return np.sqrt(np.sum(np.abs(off) ** 2))


def hermitian_eig(m, tol=OFF_TOL, max_sweeps=MAX_SWEEPS):
    """Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Returns ``(w, v)`` with ``w`` sorted in descending order and the columns
    of ``v`` the matching orthonormal eigenvectors, so ``m @ v[:, k] == w[k] * v[:, k]``.
    """
    a = np.array(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if np.max(np.abs(a - a.conj().T), initial=0.0) > HERMITIAN_TOL:
        raise ValueError("matrix is not Hermitian within 1e-10")
    a = 0.5 * (a + a.conj().T)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    threshold = tol * max(1.0, np.linalg.norm(a))

    for _ in range(max_sweeps):
        if _off_norm(a) < threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = a[p, q]
                mag = abs(b)
                if mag < 1e-300:
                    continue
                phase = b / mag
                theta = 0.5 * np.arctan2(2.0 * mag, a[p, p].real - a[q, q].real)
                c, s = np.cos(theta), np.sin(theta)
                # columns p, q of the unitary rotation
                rot = np.array([[c, -s], [s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ rot
                a[idx, :] = rot.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ rot
    else:
        if _off_norm(a) >= threshold:
            raise TangleError(f"Jacobi did not converge in {max_sweeps} sweeps")

    w = np.diag(a).real.copy()
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def psd_sqrt(m, clamp=1e-12):
    """Square root of a positive semidefinite Hermitian matrix.

    Eigenvalues in ``[-clamp, 0)``, and positive ones at rounding level, are
    set to zero; anything more negative is rejected.
    """
    w, v = hermitian_eig(m)
    if w[-1] < -clamp:
        raise ValueError(f"matrix is not positive semidefinite (eigenvalue {w[-1]:.3e})")
    w = np.sqrt(drop_dust(w))
    return (v * w) @ v.conj().T


def drop_dust(w, ulps=64):
    """Zero eigenvalues that are rounding noise relative to the largest one.

    A square root turns noise of size eps into sqrt(eps), so it has to go first.
    """
    w = np.asarray(w, dtype=float)
    floor = ulps * np.finfo(float).eps * max(float(np.max(np.abs(w), initial=0.0)), 1e-300)
    return np.where(w > floor, w, 0.0)
