"""Physical model: parameters, operators, initial state, dressed levels.

Two identical two-level atoms exchange excitation with one cavity mode
(coupling ``g``, rotating-wave form) and with each other through a direct
dipole-dipole term ``big_omega``; both transition frequencies equal the
cavity frequency ``omega``. Phase decoherence strength ``gamma`` enters
only the evolution modules, never the Hamiltonian.

Conventions fixed here and shared by every other module:

* energies in units of ``g``, times in ``1/g``, ``gamma`` in ``1/g``;
* atom basis ``(|g>, |e>)``, pair index order ``|gg>, |ge>, |eg>, |ee>``;
* full space ordered atom A x atom B x field, field index fastest, Fock
  levels ``|0> .. |n_max>``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qmath import kron

# pair-basis indices
GG, GE, EG, EE = 0, 1, 2, 3


class TruncationTooSmallError(ValueError):
    """Fock cutoff leaves no room above the populated excitation sector."""


@dataclass(frozen=True)
class ModelParams:
    """All physical knobs, in units of the atom-cavity coupling.

    g : atom-cavity coupling (> 0, the unit scale)
    omega : common atomic/cavity frequency (reduced dynamics are
        independent of it; kept to let tests assert exactly that)
    big_omega : dipole-dipole coupling, any sign
    gamma : phase-decoherence coefficient, >= 0, units 1/g
    n : initial cavity Fock occupation, >= 0
    theta : initial two-atom superposition angle, radians, for the
        state cos(theta)|eg> + sin(theta)|ge>
    """

    g: float = 1.0
    omega: float = 0.0
    big_omega: float = 1.0
    gamma: float = 0.0
    n: int = 0
    theta: float = 0.0

    def __post_init__(self):
        if not (self.g > 0 and math.isfinite(self.g)):
            raise ValueError(f"g must be positive and finite, got {self.g}")
        if not (self.gamma >= 0 and math.isfinite(self.gamma)):
            raise ValueError(f"gamma must be nonnegative and finite, got {self.gamma}")
        if self.n < 0 or int(self.n) != self.n:
            raise ValueError(f"n must be a nonnegative integer, got {self.n}")
        for name in ("omega", "big_omega", "theta"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    @property
    def default_n_max(self) -> int:
        """Smallest cutoff admitting the |n+1> sector with one spare level."""
        return self.n + 2


@dataclass(frozen=True)
class DressedBasis:
    """Eigensystem of the conserved-excitation block containing the
    initial state.

    ``energies[k]`` and row k of ``states`` belong together; rows are unit
    coefficient vectors over the ordered block basis
    ``(|n-1, ee>, |n, eg>, |n, ge>, |n+1, gg>)``. For ``n = 0`` the
    doubly-excited member does not exist, the block is 3-dimensional, and
    the listed order starts at ``|0, eg>``.

    ``energies`` keeps the level labels in a fixed order (upper branch
    absent for n=0, then antisymmetric level, lower and upper dressed
    levels); it is *not* sorted and may contain degeneracies.
    """

    delta: float
    energies: np.ndarray
    states: np.ndarray
    n: int

    @property
    def dim(self) -> int:
        return 3 if self.n == 0 else 4


def _atom_ops():
    lower = np.array([[0, 1], [0, 0]], dtype=np.complex128)  # |g><e|
    raise_ = lower.conj().T
    s_z = np.diag([-0.5, 0.5]).astype(np.complex128)
    return lower, raise_, s_z


def _check_cutoff(p: ModelParams, n_max: int):
    if n_max < p.n + 2:
        raise TruncationTooSmallError(
            f"n_max={n_max} too small for n={p.n}; need at least n + 2"
        )


def build_hamiltonian(p: ModelParams, n_max: int) -> np.ndarray:
    """Full Hamiltonian on atom A x atom B x {|0>..|n_max>}.

    H = omega (S1z + S2z) + omega a^dag a
        + g sum_j (a^dag Sj^- + a Sj^+)
        + big_omega (S1^+ S2^- + S2^+ S1^-)

    Hermitian, dimension 4(n_max+1), commutes with the excitation
    operator to rounding.
    """
    _check_cutoff(p, n_max)
    lower, raise_, s_z = _atom_ops()
    eye2 = np.eye(2, dtype=np.complex128)
    fdim = n_max + 1
    eye_f = np.eye(fdim, dtype=np.complex128)
    a = np.diag(np.sqrt(np.arange(1, fdim)), 1).astype(np.complex128)
    number = a.conj().T @ a

    h = p.omega * (kron(kron(s_z, eye2), eye_f) + kron(kron(eye2, s_z), eye_f))
    h += p.omega * kron(kron(eye2, eye2), number)
    h += p.g * (
        kron(kron(lower, eye2), a.conj().T)
        + kron(kron(raise_, eye2), a)
        + kron(kron(eye2, lower), a.conj().T)
        + kron(kron(eye2, raise_), a)
    )
    h += p.big_omega * (kron(kron(raise_, lower), eye_f) + kron(kron(lower, raise_), eye_f))
    return h


def excitation_operator(n_max: int) -> np.ndarray:
    """Conserved excitation number: a^dag a + S1z + S2z (spin-1/2 Sz)."""
    _, _, s_z = _atom_ops()
    eye2 = np.eye(2, dtype=np.complex128)
    fdim = n_max + 1
    number = np.diag(np.arange(fdim)).astype(np.complex128)
    return (
        kron(kron(eye2, eye2), number)
        + kron(kron(s_z, eye2), np.eye(fdim, dtype=np.complex128))
        + kron(kron(eye2, s_z), np.eye(fdim, dtype=np.complex128))
    )


def initial_state(p: ModelParams, n_max: int) -> np.ndarray:
    """Pure initial density matrix (cos(theta)|eg> + sin(theta)|ge>) x |n><n|."""
    _check_cutoff(p, n_max)
    fdim = n_max + 1
    psi = np.zeros(4 * fdim, dtype=np.complex128)
    psi[EG * fdim + p.n] = np.cos(p.theta)
    psi[GE * fdim + p.n] = np.sin(p.theta)
    return np.outer(psi, psi.conj())


def level_splitting(p: ModelParams) -> float:
    """Dressed-level splitting sqrt(8 (1+2n) g^2 + big_omega^2)."""
    return math.sqrt(8.0 * (1 + 2 * p.n) * p.g**2 + p.big_omega**2)


def dressed_basis(p: ModelParams) -> DressedBasis:
    """Analytic eigensystem of the excitation-n block.

    Block basis order is ``(|n-1, ee>, |n, eg>, |n, ge>, |n+1, gg>)``
    (first member dropped for n = 0). Levels:

    * upper-branch dark level at ``n omega`` (n >= 1 only),
    * antisymmetric level at ``n omega - big_omega``,
    * lower/upper dressed levels at ``n omega + (big_omega -+ delta)/2``.
    """
    n, g, om, bo = p.n, p.g, p.omega, p.big_omega
    delta = level_splitting(p)
    e_anti = n * om - bo
    e_low = n * om + 0.5 * (bo - delta)
    e_high = n * om + 0.5 * (bo + delta)
    sq = 1.0 / math.sqrt(2.0)

    if n == 0:
        # basis (|0, eg>, |0, ge>, |1, gg>)
        energies = np.array([e_anti, e_low, e_high])
        states = np.zeros((3, 3))
        states[0] = (-sq, sq, 0.0)
        pre_low = 0.5 * math.sqrt((delta - bo) / delta)
        pre_high = 0.5 * math.sqrt((delta + bo) / delta)
        states[1] = (-pre_low, -pre_low, pre_low * 4.0 * g / (delta - bo))
        states[2] = (pre_high, pre_high, pre_high * 4.0 * g / (delta + bo))
        return DressedBasis(delta=delta, energies=energies, states=states, n=n)

    # basis (|n-1, ee>, |n, eg>, |n, ge>, |n+1, gg>)
    energies = np.array([n * om, e_anti, e_low, e_high])
    states = np.zeros((4, 4))
    states[0] = (
        -math.sqrt((1.0 + n) / (1.0 + 2 * n)),
        0.0,
        0.0,
        math.sqrt(n / (1.0 + 2 * n)),
    )
    states[1] = (0.0, -sq, sq, 0.0)
    pre_low = 0.5 * math.sqrt((delta - bo) / delta)
    states[2] = (
        pre_low * 4.0 * math.sqrt(n) * g / (delta - bo),
        -pre_low,
        -pre_low,
        pre_low * 4.0 * math.sqrt(n + 1.0) * g / (delta - bo),
    )
    pre_high = 0.5 * math.sqrt((delta + bo) / delta)
    states[3] = (
        pre_high * 4.0 * math.sqrt(n) * g / (delta + bo),
        pre_high,
        pre_high,
        pre_high * 4.0 * math.sqrt(n + 1.0) * g / (delta + bo),
    )
    return DressedBasis(delta=delta, energies=energies, states=states, n=n)


def excitation_subspace_indices(n: int, n_max: int) -> np.ndarray:
    """Flat full-space indices of the excitation-n block basis, in the
    same order as :class:`DressedBasis` rows."""
    if n_max < n + 2:
        raise TruncationTooSmallError(
            f"n_max={n_max} too small for n={n}; need at least n + 2"
        )
    fdim = n_max + 1
    cells = []
    if n >= 1:
        cells.append(EE * fdim + (n - 1))
    cells.append(EG * fdim + n)
    cells.append(GE * fdim + n)
    cells.append(GG * fdim + (n + 1))
    return np.array(cells, dtype=np.intp)


def embed_dressed_states(basis: DressedBasis, n_max: int) -> np.ndarray:
    """Dressed states as full-space column vectors (one per basis row)."""
    idx = excitation_subspace_indices(basis.n, n_max)
    fdim = n_max + 1
    out = np.zeros((4 * fdim, basis.dim), dtype=np.complex128)
    for k in range(basis.dim):
        out[idx, k] = basis.states[k]
    return out
