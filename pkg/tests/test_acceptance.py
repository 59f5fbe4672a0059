"""End-to-end acceptance suite.

One test per headline claim, each at its pinned tolerance; the verbose test
names double as the pass/fail report lines.
"""

import math
import time

import numpy as np
from scipy.linalg import expm
from scipy.signal import find_peaks

import ioncats as ic
from ioncats import validation
from ioncats.motional import coherent_state, fock_distribution
from ioncats.spin import build_spin_operators


def x_basis(N):
    """Columns are |j,m>_x ordered by ascending m, phases fixed by the rotation."""
    ops = build_spin_operators(N)
    return expm(1j * (math.pi / 2) * np.asarray(ops.jy))


def report(name, ok, detail):
    print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    assert ok, detail


def test_criterion_01_resonant_engine_matches_fullspace_integration():
    t0 = time.time()
    rows = validation.oracle_equivalence_rows(Ns=(1, 2, 3, 4), ks=(1, 2), trials=3)
    elapsed = time.time() - t0
    worst = min(r["fidelity"] for r in rows)
    report(
        "criterion 1 (closed-form vs brute-force resonant evolution)",
        worst >= 1 - 1e-6 and elapsed < 60,
        f"{len(rows)} cases, worst fidelity {worst:.3e} vs 1-1e-6, {elapsed:.1f}s < 60s",
    )


def test_criterion_02_line_cat_coefficients_and_vacuum_parity():
    res = ic.run_protocol("multi_cat", 3, 3.0)
    cond = res.conditional_state("all_excited")
    ms = [-1.5, -0.5, 0.5, 1.5]
    basis = [coherent_state(m * res.alpha, cond.space).amplitudes for m in ms]
    gram = np.array([[np.vdot(a, b) for b in basis] for a in basis])
    proj = np.array([np.vdot(b, cond.amplitudes) for b in basis])
    coeff = np.linalg.solve(gram, proj)
    ratios = coeff / coeff[-1]
    j = 1.5
    expected = np.array(
        [
            (-1) ** round(j - m) / (math.factorial(round(j - m)) * math.factorial(round(j + m)))
            for m in ms
        ]
    )
    expected = expected / expected[-1]
    rel = np.abs(ratios - expected).max() / np.abs(expected).max()
    vacuum_ok = True
    for N in (2, 3, 4):
        w0 = abs(ic.run_protocol("multi_cat", N, 2.0).conditional_state("all_excited").amplitudes[0]) ** 2
        vacuum_ok = vacuum_ok and ((w0 > 1e-4) == (N % 2 == 0))
    report(
        "criterion 2 (N=3 line-cat coefficient ratios; vacuum iff N even)",
        rel < 1e-8 and vacuum_ok,
        f"coefficient ratio error {rel:.3e} vs 1e-8; vacuum parity pattern {vacuum_ok}",
    )


def test_criterion_03_single_ion_odd_cat_has_no_even_fock_weight():
    res = ic.run_protocol("multi_cat", 1, 2.0)
    p = fock_distribution(res.conditional_state("all_excited"))
    even_weight = p[::2].sum()
    report(
        "criterion 3 (single-ion postselected state is an odd coherent state)",
        even_weight <= 1e-12,
        f"even-Fock weight {even_weight:.3e} vs 1e-12",
    )


def test_criterion_04_dispersive_pulse_splits_ground_state():
    worst = 1.0
    for N in (1, 3, 5):
        space = ic.FockSpace(4)
        state = ic.ground_state(N, space)
        out = ic.apply_dispersive(
            state, ic.PulseSpec(kind="dispersive_bichromatic", lam=1.0, duration=math.pi / 2)
        )
        r = x_basis(N)
        target = np.zeros_like(out.amplitudes)
        target[:, 0] = (r[:, -1] - r[:, 0]) / math.sqrt(2)
        fid = abs(np.vdot(target, out.amplitudes)) ** 2
        worst = min(worst, fid)
    report(
        "criterion 4 (pi/(2 lambda) pulse makes the x-basis superposition, N=1,3,5)",
        worst >= 1 - 1e-10,
        f"worst fidelity {worst:.12f} vs 1-1e-10",
    )


def test_criterion_05_entangled_cat_branch_norms_and_parity():
    worst = 0.0
    parity_ok = True
    for N in (1, 3):
        for amag in (1.0, 3.0):
            res = ic.run_protocol("cat_postselect", N, amag)
            overlap = math.exp(-((N * amag) ** 2) / 2)
            for target, sign in (("all_ground", +1), ("all_excited", -1)):
                norm_sq = res.probability(target) * 2 ** (N + 1)
                worst = max(worst, abs(norm_sq - (2 + sign * 2 * overlap)))
                p = fock_distribution(res.conditional_state(target))
                bad = p[1::2].sum() if sign > 0 else p[::2].sum()
                parity_ok = parity_ok and bad <= 1e-12
    report(
        "criterion 5 (conditional cat norms sqrt(2 +- 2e^{-|Na|^2/2}); parity-pure support)",
        worst <= 1e-8 and parity_ok,
        f"worst squared-norm error {worst:.3e} vs 1e-8; parity purity {parity_ok}",
    )


def test_criterion_06_postselection_probability_scales_as_two_to_minus_n():
    worst_exact = 0.0
    band_ok = True
    for N, amag in ((1, 6.6), (2, 3.3), (3, 3.0), (4, 3.0), (5, 3.0)):
        res = ic.run_protocol("cat_postselect", N, amag)
        prob = res.probability("all_excited")
        # independent construction of the entangled state from the rotation
        # matrix and the coherent-state series
        r = x_basis(N)
        beta = (N / 2) * res.alpha
        cp = coherent_state(beta, res.final.space).amplitudes
        cm = coherent_state(-beta, res.final.space).amplitudes
        psi = (np.outer(r[:, -1], cp) - np.outer(r[:, 0], cm)) / math.sqrt(2)
        exact = float(np.sum(np.abs(psi[-1]) ** 2))
        worst_exact = max(worst_exact, abs(prob - exact))
        band_ok = band_ok and 0.9 * 2.0**-N <= prob <= 1.1 * 2.0**-N
    report(
        "criterion 6 (all-excited probability = exact value, within 10% of 2^-N, N=1..5)",
        worst_exact <= 1e-9 and band_ok,
        f"worst |engine - exact| {worst_exact:.3e} vs 1e-9; 10% band {band_ok}",
    )


def test_criterion_07_deterministic_protocol_branch_probabilities():
    worst_sum = 0.0
    worst_val = 0.0
    for N in (1, 2, 3, 4):
        res = ic.run_protocol("cat_deterministic", N, 1.0)
        pg, pe = res.probability("all_ground"), res.probability("all_excited")
        worst_sum = max(worst_sum, abs(pg + pe - 1))
        corr = math.exp(-(N**2) / 2)
        worst_val = max(worst_val, abs(pg - (1 + corr) / 2), abs(pe - (1 - corr) / 2))
    report(
        "criterion 7 (deterministic branches sum to 1, each (1 -+ e^{-|Na|^2/2})/2, N=1..4)",
        worst_sum <= 1e-9 and worst_val <= 1e-9,
        f"worst sum error {worst_sum:.3e}; worst branch error {worst_val:.3e} vs 1e-9",
    )


def test_criterion_08_dispersive_approximation_improves_at_small_eta():
    fids = [validation.dispersive_fidelity(eta) for eta in (0.2, 0.1, 0.05)]
    monotone = fids[0] < fids[1] < fids[2]
    report(
        "criterion 8 (detuned integration vs J_y^2 gate: fidelity rises as eta falls)",
        monotone and fids[-1] >= 0.98,
        f"fidelities at eta=0.2,0.1,0.05: {fids[0]:.6f} < {fids[1]:.6f} < {fids[2]:.6f}",
    )


def test_criterion_09_wigner_vacuum_and_four_lobe_interference():
    vac = coherent_state(0, ic.FockSpace(20))
    axes = np.linspace(-4.5, 4.5, 161)
    gv = ic.wigner(vac, axes, axes)
    vac_ok = abs(gv.integral() - 1) <= 1e-3 and abs(gv.values.max() - 1 / math.pi) <= 1e-4

    t0 = time.time()
    res = ic.run_protocol("multi_cat", 3, 3.0)
    xs = np.linspace(-4, 4, 201)
    ps = np.linspace(-8, 8, 201)
    grid = ic.wigner(res.conditional_state("all_excited"), xs, ps)
    elapsed = time.time() - t0
    # the lobes sit on the displacement axis (x = 0 here), at m*|alpha|*sqrt(2)
    slc = grid.values[int(np.argmin(np.abs(xs)))]
    peaks, _ = find_peaks(slc)
    positions = np.sort(ps[peaks])
    expected = np.sort([m * 3.0 * math.sqrt(2) for m in (-1.5, -0.5, 0.5, 1.5)])
    lobes_ok = len(peaks) == 4 and np.abs(positions - expected).max() < 0.2
    fringe_min = slc[np.abs(ps) < 6.0].min()
    report(
        "criterion 9 (vacuum Wigner normalization; four lobes + negative fringes)",
        vac_ok and lobes_ok and fringe_min < -0.05 and elapsed < 120,
        f"vacuum ok {vac_ok}; {len(peaks)} lobes at {np.round(positions, 2)} "
        f"(expect {np.round(expected, 2)}); fringe min {fringe_min:.3f} < -0.05; "
        f"{elapsed:.1f}s < 120s",
    )
