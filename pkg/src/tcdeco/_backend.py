"""Hot numeric kernels: numba-jitted by default, pure numpy on request.

Setting the environment variable ``TCDECO_NO_NUMBA=1`` (or any of
``true``/``yes``/``on``) before import selects the pure-numpy fallback;
the fallback is also used automatically when numba is not installed.
Both paths implement the same arithmetic, so results agree to rounding.
``benchmarks/benchmark_kernels.py`` times one against the other.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLE_VALUES = ("1", "true", "yes", "on")


def _numba_disabled() -> bool:
    return os.environ.get("TCDECO_NO_NUMBA", "").strip().lower() in _DISABLE_VALUES


# ---------------------------------------------------------------------------
# Kernel bodies. Written with vectorized row/column arithmetic that is valid
# both as plain numpy and inside numba's nopython mode.
# ---------------------------------------------------------------------------


def _jacobi_sweeps(a, v, tol, max_sweeps):
    """Cyclic complex Jacobi sweeps on Hermitian ``a``, accumulating ``v``.

    Mutates ``a`` toward diagonal and ``v`` toward the eigenvector matrix
    (columns). Returns the number of sweeps used, or -1 if the largest
    off-diagonal magnitude is still above ``tol`` after ``max_sweeps``.
    """
    n = a.shape[0]
    for sweep in range(max_sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                m = abs(a[p, q])
                if m > off:
                    off = m
        if off <= tol:
            return sweep
        for p in range(n - 1):
            for q in range(p + 1, n):
                beta = a[p, q]
                b = abs(beta)
                if b <= 0.01 * tol:
                    continue
                phase = beta / b
                zeta = a[p, p].real - a[q, q].real
                root = np.sqrt(zeta * zeta + 4.0 * b * b)
                # smaller-magnitude root of b*t^2 - zeta*t - b = 0
                if zeta >= 0.0:
                    t = -2.0 * b / (zeta + root)
                else:
                    t = 2.0 * b / (-zeta + root)
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c * phase
                sc = np.conj(s)
                # A <- J^H A J, unitary J = [[c, s], [-conj(s), c]] in (p, q)
                colp = a[:, p].copy()
                colq = a[:, q].copy()
                a[:, p] = c * colp - sc * colq
                a[:, q] = s * colp + c * colq
                rowp = a[p, :].copy()
                rowq = a[q, :].copy()
                a[p, :] = c * rowp - s * rowq
                a[q, :] = sc * rowp + c * rowq
                a[p, q] = 0.0
                a[q, p] = 0.0
                colp = v[:, p].copy()
                colq = v[:, q].copy()
                v[:, p] = c * colp - sc * colq
                v[:, q] = s * colp + c * colq
    return -1


def _milburn_rhs(h, rho, gamma):
    """Right-hand side -i[H, rho] - (gamma/2)[H, [H, rho]]."""
    comm = h @ rho - rho @ h
    return -1j * comm - 0.5 * gamma * (h @ comm - comm @ h)


def _rk4_steps(h, rho0, gamma, dt, n_steps):
    """Classic RK4 integration of the phase-decoherence master equation.

    Re-Hermitizes after every step; the equation preserves Hermiticity
    exactly, so this only suppresses rounding drift.
    """
    rho = rho0.copy()
    for _ in range(n_steps):
        k1 = _milburn_rhs(h, rho, gamma)
        k2 = _milburn_rhs(h, rho + 0.5 * dt * k1, gamma)
        k3 = _milburn_rhs(h, rho + 0.5 * dt * k2, gamma)
        k4 = _milburn_rhs(h, rho + dt * k3, gamma)
        rho = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        rho = 0.5 * (rho + np.conj(rho.T))
    return rho


def _spectral_reduced_loop(energies, vectors, vectors_h, rho0_eig, gamma, ts, field_dim):
    """Reduced atom-pair matrices at many times from eigenbasis data.

    For each t: apply the exact energy-basis damping/phase factors, rotate
    back to the bare basis, and trace out the field. Returns an array of
    shape (len(ts), 4, 4).
    """
    dim = energies.shape[0]
    n_t = ts.shape[0]
    z = np.empty((dim, dim), np.complex128)
    for m in range(dim):
        for k in range(dim):
            d = energies[m] - energies[k]
            z[m, k] = -1j * d - 0.5 * gamma * d * d
    out = np.empty((n_t, 4, 4), np.complex128)
    for it in range(n_t):
        rho_t = vectors @ (rho0_eig * np.exp(z * ts[it])) @ vectors_h
        for i in range(4):
            for j in range(4):
                acc = 0.0 + 0.0j
                for f in range(field_dim):
                    acc += rho_t[i * field_dim + f, j * field_dim + f]
                out[it, i, j] = acc
    return out


def _spectral_reduced_numpy(energies, vectors, vectors_h, rho0_eig, gamma, ts, field_dim):
    """Vectorized numpy version of :func:`_spectral_reduced_loop`."""
    d = energies[:, None] - energies[None, :]
    z = -1j * d - 0.5 * gamma * d * d
    phases = np.exp(ts[:, None, None] * z[None, :, :])
    rho_t = vectors @ (rho0_eig[None, :, :] * phases) @ vectors_h
    n_t = ts.shape[0]
    blocks = rho_t.reshape(n_t, 4, field_dim, 4, field_dim)
    return np.einsum("tifjf->tij", blocks)


# ---------------------------------------------------------------------------
# Backend selection.
# ---------------------------------------------------------------------------

USING_NUMBA = False

if not _numba_disabled():
    try:
        from numba import njit
    except ImportError:
        njit = None
    if njit is not None:
        _milburn_rhs = njit(cache=True)(_milburn_rhs)  # must precede _rk4_steps
        jacobi_sweeps = njit(cache=True)(_jacobi_sweeps)
        rk4_steps = njit(cache=True)(_rk4_steps)
        spectral_reduced_batch = njit(cache=True)(_spectral_reduced_loop)
        USING_NUMBA = True

if not USING_NUMBA:
    jacobi_sweeps = _jacobi_sweeps
    rk4_steps = _rk4_steps
    spectral_reduced_batch = _spectral_reduced_numpy


def backend_name() -> str:
    return "numba" if USING_NUMBA else "numpy"
