"""Brute-force evolution of the full atom-atom-field density matrix.

Three mutually independent routes integrate the phase-decoherence master
equation  drho/dt = -i[H, rho] - (gamma/2)[H, [H, rho]]:

* ``spectral_evolve`` — exact: in the H eigenbasis every entry just picks
  up exp(-i dE t) exp(-(gamma t / 2) dE^2) with dE the energy gap. This
  is the oracle of record for validating the closed forms.
* ``series_evolve`` — the operator-sum form
  sum_k (gamma t)^k / k!  M^k rho(0) M^k{\\dag}  with
  M^k = H^k exp(-iHt) exp(-gamma t H^2 / 2), truncated with a rigorous
  factorial tail bound.
* ``rk4_evolve`` — direct fourth-order time stepping of the master
  equation itself.

Agreement of all three, and of their reduced two-atom states with the
analytic module, is asserted by the verification battery.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._backend import rk4_steps, spectral_reduced_batch
from .closedform import AtomPairState
from .model import ModelParams, build_hamiltonian, initial_state
from .qmath import EigenDecomposition, hermitian_eig, partial_trace_field

#: Off-pattern coherences above this trip UnexpectedCoherenceError.
COHERENCE_TOL = 1e-8

#: Truncation target for the operator-sum tail bound.
SERIES_TAIL_BOUND = 1e-12

SERIES_K_CAP = 500


class TailNotConvergedError(RuntimeError):
    """Operator-sum tail bound cannot be met within the term cap."""


class StepTooLargeError(ValueError):
    """RK4 step exceeds the stability-safe bound for this Hamiltonian."""


class UnexpectedCoherenceError(RuntimeError):
    """Reduced state has coherences the model forbids; indicates a basis
    ordering or model-construction bug upstream."""


@dataclass(frozen=True)
class SpectralPropagator:
    """Eigenbasis data needed to evolve one initial state exactly."""

    decomposition: EigenDecomposition
    rho0_eigenbasis: np.ndarray

    @property
    def dim(self) -> int:
        return self.decomposition.values.shape[0]


def spectral_propagator(h: np.ndarray, rho0: np.ndarray) -> SpectralPropagator:
    """Diagonalize ``h`` and rotate ``rho0`` into its eigenbasis."""
    eig = hermitian_eig(h)
    rho0_eig = eig.vectors.conj().T @ np.asarray(rho0, dtype=np.complex128) @ eig.vectors
    return SpectralPropagator(decomposition=eig, rho0_eigenbasis=rho0_eig)


def propagator_for(p: ModelParams, n_max: int | None = None) -> SpectralPropagator:
    """Propagator for the model's Hamiltonian and initial state."""
    n_max = p.default_n_max if n_max is None else n_max
    return spectral_propagator(build_hamiltonian(p, n_max), initial_state(p, n_max))


def _gap_factors(energies: np.ndarray, gamma: float, t: float) -> np.ndarray:
    d = energies[:, None] - energies[None, :]
    return np.exp(-1j * d * t - 0.5 * gamma * t * d * d)


def spectral_evolve(prop: SpectralPropagator, gamma: float, t: float) -> np.ndarray:
    """Exact full-space state at time ``t >= 0``, in the bare basis."""
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    if gamma < 0:
        raise ValueError(f"gamma must be nonnegative, got {gamma}")
    v = prop.decomposition.vectors
    factors = _gap_factors(prop.decomposition.values, gamma, t)
    return v @ (prop.rho0_eigenbasis * factors) @ v.conj().T


def series_terms_needed(x: float, cap: int = SERIES_K_CAP) -> int:
    """Smallest K with x^(K+1)/(K+1)! below the tail target, or -1.

    ``x = gamma * t * (spectral radius)^2`` bounds every term ratio, so
    truncating after K terms leaves an entrywise error below the target.
    """
    term = 1.0
    for k in range(cap + 1):
        term *= x / (k + 1)
        if term < SERIES_TAIL_BOUND:
            return k
    return -1


def _series_partial(
    eig: EigenDecomposition, rho0: np.ndarray, gamma: float, t: float, k_terms: int
) -> np.ndarray:
    """Operator-sum evolution truncated after the k_terms-th term,
    without any convergence guarantee (``series_evolve`` adds that)."""
    energies = eig.values
    v = eig.vectors
    rho_eig = v.conj().T @ np.asarray(rho0, dtype=np.complex128) @ v
    # k-th term in the eigenbasis: (gamma t E_m E_n)^k / k! times the
    # common damping/phase prefactor of M and M^dag
    base = np.exp(-1j * energies * t - 0.5 * gamma * t * energies**2)
    weighted = rho_eig * np.outer(base, base.conj())
    ratio = gamma * t * np.outer(energies, energies)
    term = weighted.copy()
    total = weighted.copy()
    for k in range(1, k_terms + 1):
        term = term * ratio / k
        total += term
    return v @ total @ v.conj().T


def series_evolve(
    h: np.ndarray, rho0: np.ndarray, gamma: float, t: float, k_max: int = SERIES_K_CAP
) -> np.ndarray:
    """Truncated operator-sum evolution, literal term by term.

    Raises TailNotConvergedError when the factorial tail bound cannot
    reach ``SERIES_TAIL_BOUND`` within ``min(k_max, SERIES_K_CAP)`` terms.
    ``gamma * t = 0`` reduces to the single unitary k = 0 term.
    """
    if t < 0 or gamma < 0:
        raise ValueError("t and gamma must be nonnegative")
    eig = hermitian_eig(h)
    radius = float(np.max(np.abs(eig.values))) if eig.values.size else 0.0
    x = gamma * t * radius * radius
    needed = series_terms_needed(x, min(k_max, SERIES_K_CAP))
    if needed < 0:
        raise TailNotConvergedError(
            f"tail bound {SERIES_TAIL_BOUND} unreachable within k_max for "
            f"gamma*t*radius^2 = {x:.3g}"
        )
    return _series_partial(eig, rho0, gamma, t, needed)


def rk4_max_step(h: np.ndarray, gamma: float) -> float:
    """Largest allowed RK4 step for this Hamiltonian and gamma."""
    hmax = float(np.max(np.abs(h)))
    return 0.01 / max(1.0, hmax * (1.0 + gamma * hmax))


def rk4_evolve(
    h: np.ndarray, rho0: np.ndarray, gamma: float, t: float, dt: float
) -> np.ndarray:
    """Fourth-order integration of the master equation up to time ``t``.

    The step actually used is ``t / ceil(t / dt)`` so the horizon is hit
    exactly; ``dt`` itself must satisfy :func:`rk4_max_step`.
    """
    if t < 0 or gamma < 0:
        raise ValueError("t and gamma must be nonnegative")
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    limit = rk4_max_step(h, gamma)
    if dt > limit:
        raise StepTooLargeError(f"dt={dt:.3g} exceeds stability bound {limit:.3g}")
    rho0 = np.ascontiguousarray(rho0, dtype=np.complex128)
    if t == 0:
        return rho0.copy()
    n_steps = int(math.ceil(t / dt))
    return rk4_steps(
        np.ascontiguousarray(h, dtype=np.complex128), rho0, gamma, t / n_steps, n_steps
    )


def _entries_from_reduced(r: np.ndarray) -> AtomPairState:
    off = max(
        abs(r[0, 1]), abs(r[0, 2]), abs(r[0, 3]), abs(r[1, 3]), abs(r[2, 3]),
        abs(r[0, 0].imag), abs(r[1, 1].imag), abs(r[2, 2].imag), abs(r[3, 3].imag),
    )
    if off > COHERENCE_TOL:
        raise UnexpectedCoherenceError(
            f"reduced state has forbidden coherences up to {off:.3e}"
        )
    return AtomPairState(
        a1=float(r[0, 0].real),
        a2=float(r[1, 1].real),
        a3=complex(r[1, 2]),
        a5=float(r[2, 2].real),
        a6=float(r[3, 3].real),
    )


def reduced_atoms(rho_full: np.ndarray, field_dim: int) -> AtomPairState:
    """Trace out the field and extract the six allowed entries.

    Raises UnexpectedCoherenceError if any coherence other than
    <ge|rho|eg> survives above ``COHERENCE_TOL``.
    """
    return _entries_from_reduced(partial_trace_field(rho_full, field_dim))


def reduced_trajectory(
    prop: SpectralPropagator, gamma: float, ts: np.ndarray, field_dim: int
) -> np.ndarray:
    """Reduced 4x4 states at every time in ``ts`` (exact spectral route).

    Same arithmetic as ``spectral_evolve`` + ``partial_trace_field`` per
    sample, fused over the grid; returns shape (len(ts), 4, 4).
    """
    ts = np.ascontiguousarray(ts, dtype=np.float64)
    if np.any(ts < 0):
        raise ValueError("times must be nonnegative")
    eig = prop.decomposition
    v = np.ascontiguousarray(eig.vectors)
    return spectral_reduced_batch(
        np.ascontiguousarray(eig.values),
        v,
        np.ascontiguousarray(v.conj().T),
        np.ascontiguousarray(prop.rho0_eigenbasis),
        float(gamma),
        ts,
        int(field_dim),
    )


def oracle_entries(
    p: ModelParams, ts: np.ndarray, n_max: int | None = None
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Oracle counterparts of ``closedform.atom_pair_entries``.

    Returns ``(a1, a2, a3, a5, a6)`` arrays from the spectral route,
    after checking that no forbidden coherence appears anywhere on the
    grid.
    """
    n_max = p.default_n_max if n_max is None else n_max
    prop = propagator_for(p, n_max)
    reduced = reduced_trajectory(prop, p.gamma, np.asarray(ts, dtype=np.float64), n_max + 1)
    forbidden = (
        np.abs(reduced[:, 0, 1]), np.abs(reduced[:, 0, 2]), np.abs(reduced[:, 0, 3]),
        np.abs(reduced[:, 1, 3]), np.abs(reduced[:, 2, 3]),
        np.abs(reduced[:, [0, 1, 2, 3], [0, 1, 2, 3]].imag).max(axis=1),
    )
    worst = max(float(f.max()) for f in forbidden)
    if worst > COHERENCE_TOL:
        raise UnexpectedCoherenceError(
            f"reduced trajectory has forbidden coherences up to {worst:.3e}"
        )
    return (
        reduced[:, 0, 0].real.copy(),
        reduced[:, 1, 1].real.copy(),
        reduced[:, 1, 2].copy(),
        reduced[:, 2, 2].real.copy(),
        reduced[:, 3, 3].real.copy(),
    )
