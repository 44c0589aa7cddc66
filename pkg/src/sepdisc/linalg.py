"""Dense Hermitian matrix kernel for bipartite operators.

Everything here works on small complex matrices (a few hundred rows at
most).  The partial transpose always acts on the second (B) factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

HERMITIAN_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
JACOBI_OFF_TOL = 1e-14
# Cyclic Jacobi is used up to this size; larger inputs go to LAPACK.
JACOBI_MAX_DIM = 64


class NotHermitianError(ValueError):
    pass


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class HermitianMatrix:
    """Square complex Hermitian matrix with optional bipartite dimensions.

    Inputs whose asymmetry is at most ``HERMITIAN_TOL`` are symmetrized as
    ``(X + X^H) / 2``; anything further from Hermitian is rejected.
    """

    data: np.ndarray
    dims: tuple[int, int] | None = None

    def __post_init__(self):
        x = np.array(self.data, dtype=complex)
        if x.ndim != 2 or x.shape[0] != x.shape[1] or x.shape[0] == 0:
            raise ValueError(f"expected a nonempty square matrix, got shape {x.shape}")
        if not np.all(np.isfinite(x)):
            raise ValueError("matrix entries must be finite")
        asym = np.max(np.abs(x - x.conj().T))
        if asym > HERMITIAN_TOL:
            raise NotHermitianError(f"matrix is not Hermitian (max asymmetry {asym:.3e})")
        x = (x + x.conj().T) / 2
        x.setflags(write=False)
        object.__setattr__(self, "data", x)
        if self.dims is not None:
            d_a, d_b = (int(d) for d in self.dims)
            if d_a < 1 or d_b < 1 or d_a * d_b != x.shape[0]:
                raise ValueError(f"bipartite dims {self.dims} do not match size {x.shape[0]}")
            object.__setattr__(self, "dims", (d_a, d_b))

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    def with_dims(self, dims: tuple[int, int] | None) -> "HermitianMatrix":
        return HermitianMatrix(self.data, dims)

    def _merged_dims(self, other: "HermitianMatrix"):
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        return self.dims if self.dims is not None else other.dims

    def __add__(self, other: "HermitianMatrix") -> "HermitianMatrix":
        return HermitianMatrix(self.data + other.data, self._merged_dims(other))

    def __sub__(self, other: "HermitianMatrix") -> "HermitianMatrix":
        return HermitianMatrix(self.data - other.data, self._merged_dims(other))

    def __neg__(self) -> "HermitianMatrix":
        return HermitianMatrix(-self.data, self.dims)

    def __mul__(self, scalar: float) -> "HermitianMatrix":
        if np.iscomplexobj(scalar) and np.imag(scalar) != 0:
            raise TypeError("Hermitian matrices only scale by real numbers")
        return HermitianMatrix(self.data * float(np.real(scalar)), self.dims)

    __rmul__ = __mul__

    def __truediv__(self, scalar: float) -> "HermitianMatrix":
        return self * (1.0 / scalar)

    def __repr__(self):
        return f"HermitianMatrix(dim={self.dim}, dims={self.dims})"


def as_hermitian(x, dims=None) -> HermitianMatrix:
    if isinstance(x, HermitianMatrix):
        return x if dims is None else x.with_dims(dims)
    return HermitianMatrix(np.asarray(x), dims)


def identity(d_a: int, d_b: int | None = None) -> HermitianMatrix:
    """Identity on ``d_a`` (or on ``d_a * d_b`` with bipartite dims)."""
    if d_b is None:
        return HermitianMatrix(np.eye(d_a))
    return HermitianMatrix(np.eye(d_a * d_b), (d_a, d_b))


def frobenius_norm(x: HermitianMatrix) -> float:
    return float(np.linalg.norm(x.data))


def tensor(x: HermitianMatrix, y: HermitianMatrix) -> HermitianMatrix:
    """Kronecker product ``x ⊗ y`` tagged with bipartite dims ``(dim x, dim y)``."""
    return HermitianMatrix(np.kron(x.data, y.data), (x.dim, y.dim))


def partial_transpose(x: HermitianMatrix) -> HermitianMatrix:
    """Transpose the B factor: block (i, j) of the result is block (i, j) of ``x`` transposed."""
    if x.dims is None:
        raise ValueError("partial_transpose needs bipartite dims")
    d_a, d_b = x.dims
    t = x.data.reshape(d_a, d_b, d_a, d_b).transpose(0, 3, 2, 1)
    return HermitianMatrix(t.reshape(x.dim, x.dim), x.dims)


def _off_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def _jacobi(a: np.ndarray, max_sweeps: int, off_tol: float):
    n = a.shape[0]
    a = a.copy()
    v = np.eye(n, dtype=complex)
    scale = np.linalg.norm(a)
    if n == 1 or scale == 0.0:
        return np.real(np.diag(a)).copy(), v
    threshold = off_tol * scale
    for _ in range(max_sweeps):
        off = _off_norm(a)
        if off <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                phase = apq / r
                app = a[p, p].real
                aqq = a[q, q].real
                theta = (aqq - app) / (2.0 * r)
                t = 1.0 / (abs(theta) + np.hypot(theta, 1.0))
                if theta < 0:
                    t = -t
                c = 1.0 / np.hypot(t, 1.0)
                s = t * c
                # u = diag(1, conj(phase)) @ [[c, s], [-s, c]]
                u = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ u
                a[idx, :] = u.conj().T @ a[idx, :]
                v[:, idx] = v[:, idx] @ u
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
    else:
        off = _off_norm(a)
        if off > threshold:
            raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps (off={off:.3e})")
    return np.real(np.diag(a)).copy(), v


def eig_hermitian(x, method: str = "auto"):
    """Eigendecomposition of a Hermitian matrix.

    Parameters
    ----------
    x : HermitianMatrix or array_like
        Hermitian input.
    method : {"auto", "jacobi", "lapack"}
        ``auto`` runs cyclic Jacobi rotations up to ``JACOBI_MAX_DIM`` rows and
        LAPACK (``numpy.linalg.eigh``) above that.

    Returns
    -------
    w : ndarray
        Eigenvalues in ascending order.
    v : ndarray
        Orthonormal eigenvectors as columns, matching ``w``.
    """
    a = as_hermitian(x).data
    if method == "auto":
        method = "jacobi" if a.shape[0] <= JACOBI_MAX_DIM else "lapack"
    if method == "jacobi":
        w, v = _jacobi(a, JACOBI_MAX_SWEEPS, JACOBI_OFF_TOL)
    elif method == "lapack":
        w, v = np.linalg.eigh(a)
    else:
        raise ValueError(f"unknown method {method!r}")
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def min_eigenvalue(x) -> float:
    return float(eig_hermitian(x)[0][0])


def is_psd(x, tol: float | None = None) -> bool:
    """True iff the smallest eigenvalue is at least ``-tol``.

    The default tolerance is ``1e-9 * max(1, ||x||_F)``.
    """
    x = as_hermitian(x)
    if tol is None:
        tol = 1e-9 * max(1.0, frobenius_norm(x))
    if tol < 0:
        raise ValueError("tol must be non-negative")
    return min_eigenvalue(x) >= -tol


def principal_submatrix(x, indices: Sequence[int]) -> HermitianMatrix:
    """Rows and columns of ``x`` restricted to ``indices`` (0-based, order kept)."""
    x = as_hermitian(x)
    idx = list(indices)
    if not idx:
        raise ValueError("index set must be nonempty")
    for i in idx:
        if not 0 <= i < x.dim:
            raise IndexError(f"index {i} out of range for dimension {x.dim}")
    return HermitianMatrix(x.data[np.ix_(idx, idx)])


def _cofactor_det(a: np.ndarray) -> complex:
    n = a.shape[0]
    if n == 1:
        return a[0, 0]
    if n == 2:
        return a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
    total = 0j
    for j in range(n):
        if a[0, j] == 0:
            continue
        minor = np.delete(np.delete(a, 0, axis=0), j, axis=1)
        total += (-1) ** j * a[0, j] * _cofactor_det(minor)
    return total


def _lu_det(a: np.ndarray) -> complex:
    a = np.array(a, dtype=complex)
    n = a.shape[0]
    det = 1.0 + 0j
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if a[p, k] == 0:
            return 0j
        if p != k:
            a[[k, p]] = a[[p, k]]
            det = -det
        det *= a[k, k]
        a[k + 1:, k:] -= np.outer(a[k + 1:, k] / a[k, k], a[k, k:])
    return det


def det(x) -> float:
    """Determinant (real for Hermitian input).

    Cofactor expansion up to 4x4, LU with partial pivoting above.
    """
    a = as_hermitian(x).data
    d = _cofactor_det(a) if a.shape[0] <= 4 else _lu_det(a)
    return float(np.real(d))


def minor_psd_check(x, rank: int) -> bool:
    """Leading-minor PSD criterion for a Hermitian matrix of rank at most ``rank``.

    Returns True iff ``det X(1..k) > 0`` for every ``1 <= k <= rank``.  The
    caller is responsible for the rank bound; the check says nothing useful
    when the asserted rank is too small.
    """
    x = as_hermitian(x)
    if not 1 <= rank <= x.dim:
        raise ValueError(f"rank must lie in [1, {x.dim}]")
    return all(det(principal_submatrix(x, range(k))) > 0 for k in range(1, rank + 1))


def trace_product(x, y) -> float:
    """``Re Tr(x y)``; the imaginary part must vanish for Hermitian inputs."""
    x = as_hermitian(x)
    y = as_hermitian(y)
    if x.dim != y.dim:
        raise ValueError(f"dimension mismatch: {x.dim} vs {y.dim}")
    t = np.sum(x.data * y.data.T)
    scale = max(1.0, np.linalg.norm(x.data) * np.linalg.norm(y.data))
    if abs(t.imag) > 1e-10 * scale:
        raise ValueError(f"Tr XY has imaginary part {t.imag:.3e}")
    return float(t.real)


def random_hermitian(rng: np.random.Generator, d: int, dims=None) -> HermitianMatrix:
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return HermitianMatrix((g + g.conj().T) / 2, dims)


def random_psd(rng: np.random.Generator, d: int, rank: int | None = None, dims=None) -> HermitianMatrix:
    k = d if rank is None else rank
    g = rng.normal(size=(k, d)) + 1j * rng.normal(size=(k, d))
    return HermitianMatrix(g.conj().T @ g, dims)
