"""Minimal dense complex linear algebra for small Hilbert spaces.

Everything here operates on plain ``numpy.ndarray`` values of complex dtype
and is sized for matrices of dimension up to ~64: a cyclic Jacobi Hermitian
eigensolver, Kronecker products, the field partial trace, the single-qubit
partial transpose, and density-matrix sanity predicates. All functions are
pure and thread-safe.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._backend import jacobi_sweeps

#: Maximum allowed |M - M^dag| entry for a matrix passed off as Hermitian.
HERMITICITY_TOL = 1e-10

#: Positive-semidefiniteness slack used for density-matrix checks.
DENSITY_PSD_SLACK = 1e-9

_MAX_JACOBI_SWEEPS = 100


class NotHermitianError(ValueError):
    """Matrix fails the Hermiticity precondition."""


class NoConvergenceError(RuntimeError):
    """Jacobi iteration did not reach the off-diagonal threshold."""


class BadDimensionError(ValueError):
    """Matrix has the wrong shape for the requested operation."""


@dataclass(frozen=True)
class EigenDecomposition:
    """Real spectrum and orthonormal eigenvectors of a Hermitian matrix.

    ``values`` is ascending (ties keep their pre-sort order); column k of
    ``vectors`` is the unit eigenvector for ``values[k]``.
    """

    values: np.ndarray
    vectors: np.ndarray


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product; the composite-system operator builder."""
    return np.kron(np.asarray(a), np.asarray(b))


def hermiticity_defect(m: np.ndarray) -> float:
    """Largest entrywise deviation of ``m`` from its conjugate transpose."""
    m = np.asarray(m)
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def hermitian_eig(m: np.ndarray) -> EigenDecomposition:
    """Full eigendecomposition of a Hermitian matrix via cyclic Jacobi.

    Parameters
    ----------
    m : array_like
        Square matrix, Hermitian to within ``HERMITICITY_TOL``.

    Returns
    -------
    EigenDecomposition
        Ascending eigenvalues and orthonormal eigenvector columns
        reconstructing ``m`` to ~1e-14 relative.

    Raises
    ------
    NotHermitianError
        If ``m`` is not square or not Hermitian within tolerance.
    NoConvergenceError
        If 100 cyclic sweeps do not converge (never observed for the
        matrix sizes this package produces).
    """
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotHermitianError(f"expected a square matrix, got shape {m.shape}")
    defect = hermiticity_defect(m)
    if defect > HERMITICITY_TOL:
        raise NotHermitianError(f"matrix is not Hermitian: |M - M^dag| = {defect:.3e}")
    n = m.shape[0]
    a = np.ascontiguousarray(m)
    # symmetrize so rounding in the input cannot bias the rotations
    a = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=np.complex128)
    scale = max(1.0, float(np.max(np.abs(a))))
    sweeps = jacobi_sweeps(a, v, 1e-14 * scale, _MAX_JACOBI_SWEEPS)
    if sweeps < 0:
        raise NoConvergenceError(f"Jacobi did not converge in {_MAX_JACOBI_SWEEPS} sweeps")
    values = np.real(np.diag(a))
    order = np.argsort(values, kind="stable")
    return EigenDecomposition(values=values[order], vectors=v[:, order])


def partial_transpose_b(rho: np.ndarray) -> np.ndarray:
    """Transpose the second qubit's indices of a two-qubit operator.

    ``<i j|out|k l> = <i l|rho|k j>``; involutive, trace- and
    Hermiticity-preserving. The input must be 4x4.
    """
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (4, 4):
        raise BadDimensionError(f"expected 4x4, got shape {rho.shape}")
    return rho.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)


def partial_trace_field(rho_full: np.ndarray, field_dim: int) -> np.ndarray:
    """Trace out the field mode of an (atom A x atom B x field) operator.

    ``rho_full`` must be square with dimension ``4 * field_dim``, ordered
    with the field index fastest. Returns the 4x4 atom-pair operator.
    """
    rho_full = np.asarray(rho_full, dtype=np.complex128)
    if field_dim < 1:
        raise BadDimensionError("field_dim must be positive")
    dim = 4 * field_dim
    if rho_full.shape != (dim, dim):
        raise BadDimensionError(
            f"expected shape {(dim, dim)} for field_dim={field_dim}, got {rho_full.shape}"
        )
    blocks = rho_full.reshape(4, field_dim, 4, field_dim)
    return np.einsum("ifjf->ij", blocks)


def is_density_matrix(rho: np.ndarray, tol: float) -> bool:
    """True iff ``rho`` is Hermitian, unit-trace and PSD, all within ``tol``."""
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise BadDimensionError(f"expected a square matrix, got shape {rho.shape}")
    if hermiticity_defect(rho) > tol:
        return False
    if abs(np.trace(rho).real - 1.0) > tol or abs(np.trace(rho).imag) > tol:
        return False
    sym = 0.5 * (rho + rho.conj().T)
    eig = hermitian_eig(sym)
    return bool(eig.values[0] >= -tol)
