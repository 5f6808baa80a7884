import math

import numpy as np
import pytest

from tcdeco.closedform import AtomPairState, atom_pair_state
from tcdeco.measures import (
    TSIRELSON_BOUND,
    NotDensityMatrixError,
    assemble_rho,
    bell_closed,
    bell_generic,
    correlation_matrix,
    negativity_closed,
    negativity_generic,
)
from tcdeco.model import ModelParams
from tcdeco.qmath import BadDimensionError, kron

from conftest import random_density, random_pair_state

SINGLET = AtomPairState(a1=0.0, a2=0.5, a3=-0.5, a5=0.5, a6=0.0)


def bell_state_rho():
    psi = np.array([1.0, 0.0, 0.0, 1.0]) / math.sqrt(2)
    return np.outer(psi, psi)


def initial_pair(theta):
    return AtomPairState(
        a1=0.0,
        a2=math.sin(theta) ** 2,
        a3=math.sin(2 * theta) / 2,
        a5=math.cos(theta) ** 2,
        a6=0.0,
    )


class TestNegativity:
    def test_initial_states(self):
        for theta in np.linspace(0.0, 2 * math.pi, 41):
            expected = abs(math.sin(2 * theta))
            assert negativity_closed(initial_pair(theta)) == pytest.approx(expected, abs=1e-14)

    def test_singlet_is_maximal(self):
        assert negativity_closed(SINGLET) == pytest.approx(1.0, abs=1e-15)

    def test_maximally_mixed(self):
        assert negativity_generic(np.eye(4) / 4) == 0.0

    def test_bell_state(self):
        assert negativity_generic(bell_state_rho()) == pytest.approx(1.0, abs=1e-12)

    def test_rejects_non_density_matrix(self):
        with pytest.raises(NotDensityMatrixError):
            negativity_generic(np.diag([1.5, -0.5, 0.0, 0.0]))
        with pytest.raises(BadDimensionError):
            negativity_generic(np.eye(2) / 2)

    def test_product_states_are_separable(self, rng):
        for _ in range(30):
            rho = kron(random_density(rng, 2), random_density(rng, 2))
            assert negativity_generic(rho) == pytest.approx(0.0, abs=1e-12)


class TestCorrelationMatrix:
    def test_maximally_mixed_vanishes(self):
        assert np.allclose(correlation_matrix(np.eye(4) / 4), 0.0, atol=1e-15)

    def test_singlet_correlations(self):
        t = correlation_matrix(assemble_rho(SINGLET))
        assert np.allclose(t, -np.eye(3), atol=1e-14)

    def test_pair_family_block_structure(self, rng):
        for _ in range(25):
            a = random_pair_state(rng)
            t = correlation_matrix(assemble_rho(a))
            re, im = a.a3.real, a.a3.imag
            expected = np.array(
                [
                    [2 * re, -2 * im, 0.0],
                    [2 * im, 2 * re, 0.0],
                    [0.0, 0.0, a.a1 + a.a6 - a.a2 - a.a5],
                ]
            )
            assert np.allclose(t, expected, atol=1e-13)

    def test_entries_bounded(self, rng):
        for _ in range(20):
            t = correlation_matrix(random_density(rng, 4))
            assert np.max(np.abs(t)) <= 1.0 + 1e-12

    def test_rejects_wrong_shape(self):
        with pytest.raises(BadDimensionError):
            correlation_matrix(np.eye(8) / 8)


class TestBell:
    def test_maximally_mixed(self):
        assert bell_generic(np.eye(4) / 4) == pytest.approx(0.0, abs=1e-12)

    def test_bell_state_reaches_quantum_bound(self):
        assert bell_generic(bell_state_rho()) == pytest.approx(TSIRELSON_BOUND, abs=1e-12)

    def test_product_state_at_classical_bound(self):
        rho = np.zeros((4, 4), dtype=complex)
        rho[2, 2] = 1.0  # |eg><eg|
        assert bell_generic(rho) == pytest.approx(2.0, abs=1e-12)

    def test_mixed_product_states_never_violate(self, rng):
        for _ in range(30):
            rho = kron(random_density(rng, 2), random_density(rng, 2))
            assert bell_generic(rho) <= 2.0 + 1e-12

    def test_initial_states_closed_form(self):
        for theta in np.linspace(0.0, 2 * math.pi, 41):
            expected = 2 * math.sqrt(1 + math.sin(2 * theta) ** 2)
            assert bell_closed(initial_pair(theta)) == pytest.approx(expected, abs=1e-14)

    def test_singlet(self):
        assert bell_closed(SINGLET) == pytest.approx(TSIRELSON_BOUND, abs=1e-15)

    def test_invariant_under_local_rotations(self, rng):
        def haar_su2():
            z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            q, r = np.linalg.qr(z)
            return q * (np.diag(r) / np.abs(np.diag(r)))

        base = assemble_rho(random_pair_state(rng))
        reference = bell_generic(base)
        for _ in range(10):
            u = kron(haar_su2(), haar_su2())
            rotated = u @ base @ u.conj().T
            assert bell_generic(rotated) == pytest.approx(reference, abs=1e-10)

    def test_max_branch_tie_is_continuous(self):
        # populations tuned so 4|a3|^2 equals the z-correlation squared
        base = AtomPairState(a1=0.3, a2=0.2, a3=0.1, a5=0.2, a6=0.3)
        assert 4 * abs(base.a3) ** 2 == pytest.approx(
            (base.a1 + base.a6 - base.a2 - base.a5) ** 2
        )
        value = bell_closed(base)
        for eps in (1e-9, -1e-9):
            nudged = AtomPairState(a1=0.3, a2=0.2, a3=0.1 + eps, a5=0.2, a6=0.3)
            assert abs(bell_closed(nudged) - value) < 1e-6


class TestDualPath:
    def test_random_states_agree(self, rng):
        worst_neg = worst_bell = 0.0
        for _ in range(10_000):
            a = random_pair_state(rng)
            rho = assemble_rho(a)
            worst_neg = max(worst_neg, abs(negativity_closed(a) - negativity_generic(rho)))
            worst_bell = max(worst_bell, abs(bell_closed(a) - bell_generic(rho)))
        assert worst_neg <= 1e-10
        assert worst_bell <= 1e-10

    def test_ranges(self, rng):
        for _ in range(200):
            a = random_pair_state(rng)
            assert 0.0 <= negativity_closed(a) <= 1.0
            assert 0.0 <= bell_closed(a) <= TSIRELSON_BOUND + 1e-9

    def test_pure_state_relation_at_t0(self):
        # for this family the t=0 negativity equals the concurrence, and
        # the maximal CHSH value is 2 sqrt(1 + C^2)
        for theta in np.linspace(0.0, 2 * math.pi, 33):
            a = initial_pair(theta)
            neg = negativity_closed(a)
            assert bell_closed(a) == pytest.approx(2 * math.sqrt(1 + neg**2), abs=1e-12)

    def test_trajectory_samples_agree(self):
        p = ModelParams(big_omega=0.8, gamma=0.05, n=1, theta=0.6)
        for t in np.linspace(0.0, 20.0, 41):
            a = atom_pair_state(p, float(t))
            rho = assemble_rho(a)
            assert negativity_closed(a) == pytest.approx(negativity_generic(rho), abs=1e-10)
            assert bell_closed(a) == pytest.approx(bell_generic(rho), abs=1e-10)


class TestAssembleRho:
    def test_singlet_matrix(self):
        rho = assemble_rho(SINGLET)
        psi = np.array([0.0, 1.0, -1.0, 0.0]) / math.sqrt(2)
        assert np.allclose(rho, np.outer(psi, psi), atol=1e-15)

    def test_bare_state(self):
        rho = assemble_rho(initial_pair(0.0))
        expected = np.zeros((4, 4))
        expected[2, 2] = 1.0
        assert np.array_equal(rho, expected)

    def test_round_trip(self, rng):
        a = random_pair_state(rng)
        rho = assemble_rho(a)
        assert rho[0, 0].real == a.a1
        assert rho[1, 1].real == a.a2
        assert rho[1, 2] == a.a3
        assert rho[2, 1] == a.a4
        assert rho[2, 2].real == a.a5
        assert rho[3, 3].real == a.a6
