"""Entanglement negativity and maximal Bell-CHSH violation.

Each quantity is computed two independent ways: a closed form over the
six reduced-state entries, and a generic matrix route valid for any
two-qubit density matrix (partial-transpose spectrum for the negativity;
the two largest eigenvalues of T^T T for the CHSH maximum, where T is the
3x3 Pauli correlation matrix). The two routes agreeing to ~1e-12 on every
state the dynamics produces is one of the package's core self-checks.

Pauli convention, fixed globally: sigma_z |e> = +|e>, sigma_x |g> = |e>,
standard sigma_y, written in the (|g>, |e>) basis used everywhere else.
The CHSH value is convention-independent (the T^T T spectrum is invariant
under local rotations), which the tests assert.
"""

from __future__ import annotations

import math

import numpy as np

from .closedform import AtomPairState
from .qmath import (
    BadDimensionError,
    hermitian_eig,
    is_density_matrix,
    partial_transpose_b,
)

TSIRELSON_BOUND = 2.0 * math.sqrt(2.0)

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, 1j], [-1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[-1, 0], [0, 1]], dtype=np.complex128)
_PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)
_PAULI_PAIRS = tuple(tuple(np.kron(sa, sb) for sb in _PAULIS) for sa in _PAULIS)


class NotDensityMatrixError(ValueError):
    """Input fails the density-matrix predicate."""


def _clamp01(x):
    return np.clip(x, 0.0, 1.0) + 0.0  # + 0.0 normalizes -0.0


def negativity_from_entries(a1, a3, a6):
    """Negativity from reduced-state entries; broadcasts over arrays.

    Only the outer populations and the surviving coherence enter: the
    partially transposed matrix has eigenvalues a2, a5 and
    (a1 + a6 +- sqrt((a1 - a6)^2 + 4 |a3|^2)) / 2, of which only the
    minus root can go negative.
    """
    root = np.sqrt((np.asarray(a1) - np.asarray(a6)) ** 2 + 4.0 * np.abs(a3) ** 2)
    return _clamp01(root - (np.asarray(a1) + np.asarray(a6)))


def negativity_closed(a: AtomPairState) -> float:
    """Closed-form negativity of a reduced two-atom state, in [0, 1]."""
    return float(negativity_from_entries(a.a1, a.a3, a.a6))


def negativity_generic(rho: np.ndarray) -> float:
    """Negativity of any 4x4 density matrix: -2 sum of the negative
    eigenvalues of the B-side partial transpose, clamped to [0, 1]."""
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (4, 4):
        raise BadDimensionError(f"expected 4x4, got shape {rho.shape}")
    if not is_density_matrix(rho, 1e-8):
        raise NotDensityMatrixError("input is not a density matrix (tol 1e-8)")
    values = hermitian_eig(partial_transpose_b(rho)).values
    return float(_clamp01(-2.0 * values[values < 0].sum()))


def correlation_matrix(rho: np.ndarray) -> np.ndarray:
    """Pauli correlation matrix T[n, m] = Re Tr(rho sigma_n x sigma_m)."""
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (4, 4):
        raise BadDimensionError(f"expected 4x4, got shape {rho.shape}")
    t = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            t[i, j] = np.einsum("ij,ji->", rho, _PAULI_PAIRS[i][j]).real
    return t


def bell_generic(rho: np.ndarray) -> float:
    """Maximal CHSH expectation 2 sqrt(sum of two largest eig(T^T T))."""
    t = correlation_matrix(rho)
    values = hermitian_eig(t.T @ t).values
    return float(2.0 * math.sqrt(max(0.0, values[-1] + values[-2])))


def bell_from_entries(a1, a2, a3, a5, a6):
    """Closed-form maximal CHSH value from reduced-state entries;
    broadcasts over arrays.

    The correlation matrix of this state family is block diagonal: a
    2x2 block of Frobenius norm 2|a3| duplicated across the two planar
    singular values, plus the population difference on the z axis.
    """
    four_a3sq = 4.0 * np.abs(a3) ** 2
    zz = (np.asarray(a1) + np.asarray(a6) - np.asarray(a2) - np.asarray(a5)) ** 2
    return 2.0 * np.sqrt(four_a3sq + np.maximum(four_a3sq, zz))


def bell_closed(a: AtomPairState) -> float:
    """Closed-form maximal CHSH value of a reduced two-atom state."""
    return float(bell_from_entries(a.a1, a.a2, a.a3, a.a5, a.a6))


def assemble_rho(a: AtomPairState) -> np.ndarray:
    """4x4 density matrix for a reduced state, basis |gg>,|ge>,|eg>,|ee>."""
    rho = np.zeros((4, 4), dtype=np.complex128)
    rho[0, 0] = a.a1
    rho[1, 1] = a.a2
    rho[2, 2] = a.a5
    rho[3, 3] = a.a6
    rho[1, 2] = a.a3
    rho[2, 1] = a.a4
    return rho
