"""Engine-vs-oracle equivalence checks, shared by tests and the validate command."""

from __future__ import annotations

import math

import numpy as np

from . import engine, oracle
from .motional import FockSpace

FIDELITY_THRESHOLD = 1.0 - 1e-6


def oracle_equivalence_rows(
    Ns=(1, 2, 3, 4),
    ks=(1, 2),
    trials: int = 3,
    seed: int = 20260823,
    n_max: int = 32,
    apply_fn=None,
):
    """Compare apply_resonant with full-space integration over random pulses.

    Returns one dict per case with the achieved fidelity.  apply_fn can be
    swapped out (e.g. deliberately corrupted) for negative controls.
    """
    if apply_fn is None:
        apply_fn = engine.apply_resonant
    rng = np.random.default_rng(seed)
    space = FockSpace(n_max)
    rows = []
    for N in Ns:
        for k in ks:
            for trial in range(trials):
                rabi = rng.uniform(0.5, 1.5)
                eta = rng.uniform(0.05, 0.15)
                phi = rng.uniform(0.0, 2 * math.pi)
                target_disp = rng.uniform(0.3, 1.5)
                # duration giving the largest branch (|m|=j) that displacement
                t = target_disp / ((N / 2) * 2 * rabi * eta**k / math.factorial(k))
                pulse = engine.PulseSpec(
                    kind="resonant_bichromatic", k=k, rabi=rabi, eta=eta, duration=t, phase=phi
                )
                reduced = apply_fn(engine.ground_state(N, space), pulse)
                full0 = oracle.embed(engine.ground_state(N, space))
                full = oracle.integrate_resonant(full0, k, rabi, eta, t, phi)
                fid = oracle.fullspace_fidelity(oracle.embed(reduced), full)
                rows.append(
                    {"N": N, "k": k, "trial": trial, "fidelity": fid, "rabi": rabi,
                     "eta": eta, "t": t, "phi": phi}
                )
    return rows


def dispersive_fidelity(
    eta: float,
    rabi: float = 2.0,
    detuning: float = 20.0,
    N: int = 2,
    n_max: int = 14,
    steps_per_period: int = 50,
) -> float:
    """Fidelity of the detuned integration against exp(-i lambda t Jy^2) at lambda*t = pi/2."""
    lam = 4 * (rabi * eta) ** 2 / detuning
    t = math.pi / (2 * lam)
    space = FockSpace(n_max)
    start = engine.ground_state(N, space)
    period = 2 * math.pi / abs(detuning)
    substeps = max(1000, int(math.ceil(t / period)) * steps_per_period)
    num = oracle.integrate_detuned(oracle.embed(start), rabi, eta, detuning, t, substeps)
    pulse = engine.PulseSpec(kind="dispersive_bichromatic", lam=lam, duration=t)
    closed = oracle.embed(engine.apply_dispersive(start, pulse))
    return oracle.fullspace_fidelity(num, closed)
