"""
Dense complex linear algebra for small bipartite problems.

Matrices are plain ``numpy`` complex128 arrays of shape (n, n). Bipartite
indices follow |i, j> = |i>_A (x) |j>_B with the A index major, so the
flat index of |i, j> is ``i * dim_b + j``.

Hermitian spectra come from a cyclic Jacobi eigensolver compiled with
numba; every entropy, trace norm and positivity check in the package goes
through it.
"""

from __future__ import annotations

import numba
import numpy as np

from .errors import DimensionError, NotHermitianError, NumericalError

HERMITIAN_TOL = 1e-10
JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100


def as_matrix(m) -> np.ndarray:
    """Coerce ``m`` to a finite square complex128 array."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DimensionError(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def hermiticity_defect(m: np.ndarray) -> float:
    """Largest entry of |m - m^dagger| (over the trailing two axes)."""
    return float(np.max(np.abs(m - dagger(m)))) if m.size else 0.0


def symmetrize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + dagger(m))


def matmul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"matmul of {a.shape} and {b.shape}")
    return a @ b


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product with ``a`` as the slow (outer) factor."""
    return np.kron(as_matrix(a), as_matrix(b))


def _split(m, dim_a: int, dim_b: int) -> np.ndarray:
    m = as_matrix(m)
    if dim_a < 1 or dim_b < 1 or m.shape[0] != dim_a * dim_b:
        raise DimensionError(
            f"matrix of size {m.shape[0]} does not factor as {dim_a} x {dim_b}"
        )
    return m.reshape(dim_a, dim_b, dim_a, dim_b)


def partial_transpose_b(m, dim_a: int, dim_b: int) -> np.ndarray:
    """Transpose the B indices: <i,j|M^T_B|k,l> = <i,l|M|k,j>."""
    t = _split(m, dim_a, dim_b)
    return t.transpose(0, 3, 2, 1).reshape(dim_a * dim_b, dim_a * dim_b).copy()


def partial_trace_b(m, dim_a: int, dim_b: int) -> np.ndarray:
    t = _split(m, dim_a, dim_b)
    return np.einsum("ijkj->ik", t)


@numba.njit(cache=True)
def _jacobi_eigvalsh(a, tol, max_sweeps):
    # Cyclic Jacobi on a Hermitian matrix. Each (p, q) rotation first removes
    # the phase of a[p, q], then applies the real symmetric Jacobi rotation.
    n = a.shape[0]
    a = a.copy()
    norm2 = 0.0
    for i in range(n):
        for j in range(n):
            norm2 += a[i, j].real ** 2 + a[i, j].imag ** 2
    thresh = tol * max(1.0, np.sqrt(norm2))
    out = np.empty(n)
    for sweep in range(max_sweeps + 1):
        off2 = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off2 += a[i, j].real ** 2 + a[i, j].imag ** 2
        if np.sqrt(off2) < thresh:
            for i in range(n):
                out[i] = a[i, i].real
            return np.sort(out), True
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                g = abs(apq)
                if g == 0.0:
                    continue
                ph = apq / g
                phc = ph.conjugate()
                app = a[p, p].real
                aqq = a[q, q].real
                theta = (aqq - app) / (2.0 * g)
                t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * phc * akq
                    a[k, q] = s * akp + c * phc * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * ph * aqk
                    a[q, k] = s * apk + c * ph * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = app - t * g
                a[q, q] = aqq + t * g
    for i in range(n):
        out[i] = a[i, i].real
    return np.sort(out), False


@numba.njit(cache=True)
def _jacobi_eigvalsh_batch(stack, tol, max_sweeps):
    b, n, _ = stack.shape
    out = np.empty((b, n))
    converged = True
    for i in range(b):
        w, ok = _jacobi_eigvalsh(stack[i], tol, max_sweeps)
        out[i] = w
        converged = converged and ok
    return out, converged


def _eigvalsh_unchecked(m: np.ndarray) -> np.ndarray:
    """Jacobi spectrum of an already-symmetrized matrix or stack of matrices."""
    m = np.ascontiguousarray(m, dtype=np.complex128)
    if m.ndim == 2:
        w, ok = _jacobi_eigvalsh(m, JACOBI_TOL, JACOBI_MAX_SWEEPS)
    else:
        w, ok = _jacobi_eigvalsh_batch(m, JACOBI_TOL, JACOBI_MAX_SWEEPS)
    if not ok:
        raise NumericalError(f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps")
    return w


def hermitian_eigenvalues(m) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix.

    Raises:
        NotHermitianError: if any entry of m - m^dagger exceeds 1e-10.
        NumericalError: if Jacobi fails to converge within 100 sweeps.
    """
    m = as_matrix(m)
    defect = hermiticity_defect(m)
    if defect > HERMITIAN_TOL:
        raise NotHermitianError("matrix is not Hermitian", defect)
    return _eigvalsh_unchecked(symmetrize(m))


def hermitian_eigenvalues_batch(stack) -> np.ndarray:
    """Row-wise ascending spectra of a (batch, n, n) stack of Hermitian matrices."""
    stack = np.asarray(stack, dtype=np.complex128)
    if stack.ndim != 3 or stack.shape[1] != stack.shape[2]:
        raise DimensionError(f"expected a (batch, n, n) stack, got shape {stack.shape}")
    defect = hermiticity_defect(stack)
    if defect > HERMITIAN_TOL:
        raise NotHermitianError("stack contains a non-Hermitian matrix", defect)
    return _eigvalsh_unchecked(symmetrize(stack))


def trace_norm_hermitian(m) -> float:
    return float(np.sum(np.abs(hermitian_eigenvalues(m))))
