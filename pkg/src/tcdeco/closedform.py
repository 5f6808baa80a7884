"""Analytic time evolution of the reduced two-atom state.

Because the initial state lives in one conserved-excitation block, the
exact solution of the phase-decoherence master equation involves only
three dressed levels. Every reduced-state entry is a sum of constants and
damped oscillations at the three level gaps

    w21 = (3 big_omega - delta) / 2      (anti <-> lower dressed)
    w31 = (3 big_omega + delta) / 2      (anti <-> upper dressed)
    w32 = delta                          (lower <-> upper dressed)

each oscillation carrying the factor exp(-(gap)^2 gamma t / 2). A gap can
vanish (w21 at big_omega = sqrt(1+2n) g, w31 at the negative of that), in
which case the corresponding coherence survives decoherence forever; the
stationary state keeps such terms. None of this depends on ``omega``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import ModelParams, level_splitting

#: A gap of magnitude <= ZERO_GAP_RTOL * g is treated as exactly zero.
ZERO_GAP_RTOL = 1e-12


class NotDecayingError(ValueError):
    """A long-time limit was requested with gamma = 0."""


@dataclass(frozen=True)
class EvolutionCoefficients:
    """Dressed-basis coefficients of the evolved full density operator.

    ``c1, c2, c3`` are the (constant) dressed populations; ``c4, c6, c8``
    the dressed coherences anti/lower, anti/upper and lower/upper, whose
    mirror images are the complex conjugates. Populations sum to one and
    every coherence obeys |c|^2 <= product of its two populations, with
    equality at t = 0 (pure state).
    """

    c1: float
    c2: float
    c3: float
    c4: complex
    c6: complex
    c8: complex

    @property
    def c5(self) -> complex:
        return self.c4.conjugate()

    @property
    def c7(self) -> complex:
        return self.c6.conjugate()

    @property
    def c9(self) -> complex:
        return self.c8.conjugate()


@dataclass(frozen=True)
class AtomPairState:
    """The six independent entries of the reduced two-atom density matrix.

    a1 : |gg> population        a2 : |ge> population
    a5 : |eg> population        a6 : |ee> population
    a3 : coherence <ge|rho|eg>; its mirror entry is conj(a3)

    All other coherences vanish identically for this model's initial
    states. Populations are nonnegative and sum to one; |a3|^2 <= a2 a5.
    """

    a1: float
    a2: float
    a3: complex
    a5: float
    a6: float

    @property
    def a4(self) -> complex:
        return self.a3.conjugate()

    @property
    def populations(self) -> tuple[float, float, float, float]:
        return (self.a1, self.a2, self.a5, self.a6)


def _gaps(p: ModelParams) -> tuple[float, float, float]:
    delta = level_splitting(p)
    return (
        0.5 * (3.0 * p.big_omega - delta),
        0.5 * (3.0 * p.big_omega + delta),
        delta,
    )


def coefficients(p: ModelParams, t: float) -> EvolutionCoefficients:
    """Dressed-basis populations and damped coherences at time ``t >= 0``."""
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    s = math.sin(2.0 * p.theta)
    c = math.cos(2.0 * p.theta)
    delta = level_splitting(p)
    bo = p.big_omega
    w21, w31, w32 = _gaps(p)

    def damped(w: float) -> complex:
        return math.exp(-0.5 * w * w * p.gamma * t) * complex(math.cos(w * t), math.sin(w * t))

    c1 = 0.5 * (1.0 - s)
    c2 = 0.25 * (1.0 + s) * (delta - bo) / delta
    c3 = 0.25 * (1.0 + s) * (delta + bo) / delta
    c4 = c / (2.0 * math.sqrt(2.0)) * math.sqrt((delta - bo) / delta) * damped(w21)
    c6 = -c / (2.0 * math.sqrt(2.0)) * math.sqrt((delta + bo) / delta) * damped(w31)
    c8 = (1.0 + s) / math.sqrt(2.0) * p.g * math.sqrt(1.0 + 2 * p.n) / delta * damped(w32)
    return EvolutionCoefficients(c1=c1, c2=c2, c3=c3, c4=c4, c6=c6, c8=c8)


def atom_pair_entries(
    p: ModelParams, ts: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized reduced-state entries over an array of times.

    Returns ``(a1, a2, a3, a5, a6)`` with ``a3`` complex, one value per
    entry of ``ts``. This is the hot path for trajectories and sweeps;
    :func:`atom_pair_state` is the scalar wrapper.
    """
    ts = np.asarray(ts, dtype=np.float64)
    if np.any(ts < 0):
        raise ValueError("times must be nonnegative")
    s = math.sin(2.0 * p.theta)
    c = math.cos(2.0 * p.theta)
    delta = level_splitting(p)
    bo = p.big_omega
    w21, w31, w32 = _gaps(p)
    half_gamma = 0.5 * p.gamma

    d21 = np.exp(-w21 * w21 * half_gamma * ts)
    d31 = np.exp(-w31 * w31 * half_gamma * ts)
    d32 = np.exp(-w32 * w32 * half_gamma * ts)

    g_over_d2 = p.g**2 / delta**2
    ring = d32 * np.cos(w32 * ts)  # the lower/upper dressed-gap oscillation
    a1 = (1.0 + s) * 2.0 * (p.n + 1) * g_over_d2 * (1.0 - ring)
    a6 = (1.0 + s) * 2.0 * p.n * g_over_d2 * (1.0 - ring)
    shared = (1.0 + s) * (1 + 2 * p.n) * g_over_d2 * (ring - 1.0)
    q21 = 0.25 * c * (delta - bo) / delta * d21
    q31 = 0.25 * c * (delta + bo) / delta * d31
    a2 = 0.5 + shared - q21 * np.cos(w21 * ts) - q31 * np.cos(w31 * ts)
    a5 = 0.5 + shared + q21 * np.cos(w21 * ts) + q31 * np.cos(w31 * ts)
    a3 = (0.5 * s + shared) - 1j * (q21 * np.sin(w21 * ts) + q31 * np.sin(w31 * ts))
    return a1, a2, a3, a5, a6


def atom_pair_state(p: ModelParams, t: float) -> AtomPairState:
    """Reduced two-atom state at a single time ``t >= 0``."""
    a1, a2, a3, a5, a6 = atom_pair_entries(p, np.array([float(t)]))
    return AtomPairState(
        a1=float(a1[0]), a2=float(a2[0]), a3=complex(a3[0]), a5=float(a5[0]), a6=float(a6[0])
    )


def stationary_state(p: ModelParams) -> AtomPairState:
    """Long-time limit of the reduced state for ``gamma > 0``.

    Every damped oscillation vanishes except at an exactly-zero gap
    (within ``ZERO_GAP_RTOL * g``), where the undamped cos(0) = 1 term is
    retained: that coherence is between degenerate levels and never
    decays.
    """
    if p.gamma <= 0:
        raise NotDecayingError("stationary state requires gamma > 0")
    s = math.sin(2.0 * p.theta)
    c = math.cos(2.0 * p.theta)
    delta = level_splitting(p)
    bo = p.big_omega
    w21, w31, w32 = _gaps(p)
    tol = ZERO_GAP_RTOL * p.g

    keep21 = 1.0 if abs(w21) <= tol else 0.0
    keep31 = 1.0 if abs(w31) <= tol else 0.0
    # w32 = delta >= sqrt(8) g > 0: that oscillation always dies out

    g_over_d2 = p.g**2 / delta**2
    a1 = (1.0 + s) * 2.0 * (p.n + 1) * g_over_d2
    a6 = (1.0 + s) * 2.0 * p.n * g_over_d2
    shared = -(1.0 + s) * (1 + 2 * p.n) * g_over_d2
    q21 = 0.25 * c * (delta - bo) / delta * keep21
    q31 = 0.25 * c * (delta + bo) / delta * keep31
    a2 = 0.5 + shared - q21 - q31
    a5 = 0.5 + shared + q21 + q31
    a3 = complex(0.5 * s + shared)  # the sin(0) terms vanish either way
    return AtomPairState(a1=a1, a2=a2, a3=a3, a5=a5, a6=a6)


def stationary_negativity_formula(p: ModelParams) -> float:
    """Published single-expression long-time entanglement value.

    Evaluated literally as printed, for cross-checking against
    ``negativity(stationary_state)`` only: the two agree when
    ``big_omega = 0`` or ``sin(2 theta) = 0`` but differ otherwise (the
    printed dipole term carries a factor that the long-time limit of the
    entries does not reproduce), and the printed form is not clamped at
    zero. The verification report surfaces both numbers side by side.
    """
    g2 = p.g**2
    s = math.sin(2.0 * p.theta)
    plus = (math.sin(p.theta) + math.cos(p.theta)) ** 2
    one2n = 1 + 2 * p.n
    num = -2.0 * one2n * g2 * plus + math.sqrt(
        4.0 * g2**2 * plus**2 + one2n**2 * (-2.0 * g2 + 6.0 * (g2 + p.big_omega**2) * s) ** 2
    )
    return num / (8.0 * one2n * g2 + p.big_omega**2)
