"""Acceptance criteria, one test (or parametrized case) per criterion.

Each test prints one ``ACCEPTANCE <k> ...: PASS/FAIL`` line with the
observed deviation and its tolerance (run with ``pytest -s`` to see the
lines for passing tests too).
"""

import math
import time

import numpy as np
import pytest

from tcdeco import closedform, measures, verify
from tcdeco.closedform import atom_pair_entries, stationary_negativity_formula, stationary_state
from tcdeco.measures import TSIRELSON_BOUND, bell_from_entries, negativity_from_entries
from tcdeco.model import ModelParams
from tcdeco.verify import standard_combos

GRID = np.linspace(0.0, 20.0, 2001)
FROZEN_THETA = 3 * math.pi / 4


def report(num: int, name: str, passed: bool, detail: str) -> None:
    status = "PASS" if passed else "FAIL"
    print(f"ACCEPTANCE {num} {name}: {status} ({detail})")


def trajectory_measures(p: ModelParams, ts: np.ndarray):
    a1, a2, a3, a5, a6 = atom_pair_entries(p, ts)
    neg = negativity_from_entries(a1, a3, a6)
    bell = bell_from_entries(a1, a2, a3, a5, a6)
    return neg, bell


@pytest.fixture(scope="module")
def battery():
    start = time.perf_counter()
    checks = verify.check_closed_vs_oracle(standard_combos(), t_max=20.0, steps=2000)
    elapsed = time.perf_counter() - start
    return {c.name: c for c in checks}, elapsed


def test_criterion_1_frozen_maximal_entanglement():
    worst_neg = worst_bell = 0.0
    combos = 0
    for n in (0, 1, 2, 3):
        for gamma in (0.0, 0.01, 0.1, 1.0, 10.0):
            for bo in (0.0, 0.5, 1.0, 5.0):
                p = ModelParams(big_omega=bo, gamma=gamma, n=n, theta=FROZEN_THETA)
                neg, bell = trajectory_measures(p, GRID)
                worst_neg = max(worst_neg, float(np.max(np.abs(neg - 1.0))))
                worst_bell = max(worst_bell, float(np.max(np.abs(bell - TSIRELSON_BOUND))))
                combos += 1
    dev = max(worst_neg, worst_bell)
    passed = dev <= 1e-10
    report(1, "frozen maximal entanglement", passed,
           f"{combos} combos, max_dev={dev:.3e}, tol=1e-10")
    assert passed


def test_criterion_2_initial_value_anchors():
    thetas = np.linspace(0.0, 2.0 * math.pi, 100)
    worst = 0.0
    for theta in thetas:
        p = ModelParams(big_omega=1.3, gamma=0.7, n=1, theta=float(theta))
        neg, bell = trajectory_measures(p, np.array([0.0]))
        s = math.sin(2 * theta)
        worst = max(worst, abs(float(neg[0]) - abs(s)))
        worst = max(worst, abs(float(bell[0]) - 2.0 * math.sqrt(1.0 + s * s)))
    passed = worst <= 1e-12
    report(2, "initial-value anchors", passed,
           f"100-point theta grid, max_dev={worst:.3e}, tol=1e-12")
    assert passed


def test_criterion_3_closed_form_vs_oracle_battery(battery):
    checks, elapsed = battery
    entry = checks["closed-form vs oracle entries"]
    neg = checks["closed-form vs oracle negativity"]
    bell = checks["closed-form vs oracle CHSH value"]
    passed = entry.passed and neg.passed and bell.passed
    report(3, "closed form vs oracle battery", passed,
           f"entries={entry.max_dev:.3e} negativity={neg.max_dev:.3e} "
           f"bell={bell.max_dev:.3e}, tol=1e-9, runtime={elapsed:.1f}s (target <60s)")
    assert passed


def _refined_minimum(p: ModelParams, t_lo: float, t_hi: float, rounds: int = 5):
    for _ in range(rounds):
        ts = np.linspace(t_lo, t_hi, 1001)
        neg, _ = trajectory_measures(p, ts)
        k = int(np.argmin(neg))
        lo, hi = max(0, k - 2), min(len(ts) - 1, k + 2)
        t_lo, t_hi = float(ts[lo]), float(ts[hi])
    return float(ts[k]), float(neg[k])


def test_criterion_4_first_peak_and_revival():
    p = ModelParams(g=1.0, big_omega=1.0, gamma=0.0, n=0, theta=0.0)
    neg, _ = trajectory_measures(p, GRID)
    first_max_idx = None
    for i in range(1, len(GRID) - 1):
        if neg[i] >= neg[i - 1] and neg[i] >= neg[i + 1] and neg[i] > 0.05:
            first_max_idx = i
            break
    assert first_max_idx is not None
    peak = float(neg[first_max_idx])
    # locate the deepest later sample, then refine: the revival dip is a
    # square-root cusp, far narrower than the 0.01 grid spacing
    tail = slice(first_max_idx + 1, len(GRID))
    k = first_max_idx + 1 + int(np.argmin(neg[tail]))
    t_zero, neg_zero = _refined_minimum(p, GRID[max(k - 1, 0)], GRID[min(k + 1, len(GRID) - 1)])
    peak_ok = 0.4 <= peak <= 0.6
    revival_ok = neg_zero < 1e-6 and t_zero < 20.0
    report(4, "first peak and revival", peak_ok and revival_ok,
           f"first_max={peak:.4f} in [0.4,0.6]; min {neg_zero:.2e} at t={t_zero:.4f} < 20")
    assert peak_ok
    assert revival_ok


def test_criterion_5_no_violation_from_separable_start():
    p = ModelParams(g=1.0, big_omega=1.0, gamma=0.0, n=0, theta=0.0)
    _, bell = trajectory_measures(p, GRID)
    worst = float(np.max(bell))
    passed = worst <= 2.0 + 1e-9
    report(5, "separable start never violates CHSH", passed,
           f"max_bell={worst:.12f}, bound 2+1e-9")
    assert passed


@pytest.mark.parametrize("bo,theta_label,theta", [
    (0.5, "0", 0.0),
    (0.5, "pi/8", math.pi / 8),
    (5.0, "0", 0.0),
    (5.0, "pi/8", math.pi / 8),
])
def test_criterion_6_decoherence_decay(bo, theta_label, theta):
    p = ModelParams(g=1.0, big_omega=bo, gamma=0.1, n=0, theta=theta)
    neg, _ = trajectory_measures(p, GRID)
    early = neg[(GRID >= 0.0) & (GRID <= 5.0)]
    late = neg[(GRID >= 15.0) & (GRID <= 20.0)]
    amp_early = float(early.max() - early.min())
    amp_late = float(late.max() - late.min())
    ratio = amp_late / amp_early
    neg200, _ = trajectory_measures(p, np.array([200.0]))
    stat_dev = abs(float(neg200[0]) - measures.negativity_closed(stationary_state(p)))
    ratio_ok = ratio < 0.10
    stat_ok = stat_dev <= 1e-6
    report(6, f"decoherence decay (big_omega={bo}, theta={theta_label})",
           ratio_ok and stat_ok,
           f"amp_ratio={ratio:.3f} (<0.10); |neg(200)-stationary|={stat_dev:.3e} (tol 1e-6)")
    assert ratio_ok, f"oscillation amplitude ratio {ratio:.3f} not below 10%"
    assert stat_ok, f"t=200 value misses stationary negativity by {stat_dev:.3e}"


def test_criterion_7_stationary_formula_cross_check():
    worst = 0.0
    for n in (0, 1, 2):
        for theta in np.linspace(0.0, 2.0 * math.pi, 101):
            p = ModelParams(big_omega=0.0, gamma=1.0, n=n, theta=float(theta))
            via_state = measures.negativity_closed(stationary_state(p))
            via_formula = max(0.0, stationary_negativity_formula(p))
            worst = max(worst, abs(via_state - via_formula))
    passed = worst <= 1e-9
    lines = []
    for bo in (0.5, 1.0, 5.0):
        for theta in (math.pi / 8, math.pi / 4):
            p = ModelParams(big_omega=bo, gamma=1.0, n=0, theta=theta)
            via_state = measures.negativity_closed(stationary_state(p))
            via_formula = stationary_negativity_formula(p)
            lines.append(f"bo={bo},th={theta:.3f}: state={via_state:.6f} printed={via_formula:.6f}")
    report(7, "stationary-entanglement formula cross-check", passed,
           f"big_omega=0 max_dev={worst:.3e} tol=1e-9; nonzero-dipole record: " + "; ".join(lines))
    assert passed


def test_criterion_8_three_way_concordance():
    series_check, rk4_check = verify.check_concordance(n_points=20)
    passed = series_check.passed and rk4_check.passed
    report(8, "three-way oracle concordance", passed,
           f"spectral-vs-series={series_check.max_dev:.3e} (tol 1e-10), "
           f"spectral-vs-RK4={rk4_check.max_dev:.3e} (tol 1e-6), 20 random points")
    assert passed


def test_criterion_9_structural_invariants(battery):
    checks, _ = battery
    struct = checks["trajectory structural invariants"]
    conservation = verify.check_conservation()
    extras = []
    # the specific trajectories exercised by criteria 1 and 4-6
    for p in (
        ModelParams(big_omega=1.0, gamma=0.0, n=0, theta=FROZEN_THETA),
        ModelParams(big_omega=1.0, gamma=0.0, n=0, theta=0.0),
        ModelParams(big_omega=0.5, gamma=0.1, n=0, theta=0.0),
        ModelParams(big_omega=5.0, gamma=0.1, n=0, theta=math.pi / 8),
    ):
        extras.append(verify._trajectory_structure_dev(p, GRID))
    worst_extra = max(extras)
    passed = struct.passed and all(c.passed for c in conservation) and worst_extra <= 1e-9
    detail = (
        f"battery_struct={struct.max_dev:.3e}; "
        + "; ".join(f"{c.name}={c.max_dev:.3e}" for c in conservation)
        + f"; criterion-trajectories={worst_extra:.3e}"
    )
    report(9, "structural invariants", passed, detail)
    assert passed
