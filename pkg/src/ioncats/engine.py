"""Vibronic state and the pulse protocols.

The joint state lives on (Dicke ladder, dim N+1) x (truncated Fock space).
Four elementary operations -- resonant bichromatic pulse, dispersive
bichromatic pulse, carrier rotation, electronic post-selection -- compose
into the cat-state preparation protocols.

Sign conventions (certified against the brute-force oracle module):
the resonant pulse implements exp(-iHt) for
H = (2 Omega eta^k / k!) J_T (a^k + a^dag^k), which in the J_T eigenbasis
displaces the m-branch by m * alpha_k(t) with alpha_k(t) = -2i Omega t eta^k / k!,
and J_T points along the in-plane axis at angle (phase - k*pi/2) from J_x.
The dispersive pulse implements exp(-i lambda t J_y^2) with
lambda = 4 (Omega eta)^2 / delta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
import warnings

import numpy as np

from . import motional, spin
from .errors import DegenerateOutcome, IonCatsError, TruncationError
from .motional import FockSpace, MotionalState, coherent_state, displacement_matrix, required_n_max
from .spin import SpinOperators, axis_eigenbasis, build_spin_operators

PROTOCOLS = ("multi_cat", "entangled_cat", "cat_postselect", "cat_deterministic")
TARGETS = ("all_excited", "all_ground")

HBAR = 1.0  # natural units throughout; see lamb_dicke_si for SI inputs


@dataclass(frozen=True)
class PhysicalParams:
    """Trap parameters entering the Lamb-Dicke coupling."""

    q: float            # effective wavenumber of the Raman pair
    mass: float
    trap_frequency: float
    N: int

    def __post_init__(self):
        if min(self.q, self.mass, self.trap_frequency) <= 0 or self.N < 1:
            raise IonCatsError("physical parameters must all be positive")


def lamb_dicke(params: PhysicalParams, hbar: float = HBAR) -> float:
    """Lamb-Dicke parameter of the N-ion center-of-mass mode.

    eta = q sqrt(hbar / (2 N m nu)); note the 1/sqrt(N) scaling.
    """
    return params.q * math.sqrt(hbar / (2 * params.N * params.mass * params.trap_frequency))


def lamb_dicke_si(q: float, mass: float, trap_frequency: float, N: int) -> float:
    """Same formula with SI inputs (uses the CODATA hbar)."""
    from scipy.constants import hbar as hbar_si

    return lamb_dicke(PhysicalParams(q, mass, trap_frequency, N), hbar=hbar_si)


def dispersive_rate(rabi: float, eta: float, detuning: float) -> float:
    """Effective J_y^2 rate of the detuned bichromatic drive: 4 (Omega eta)^2 / delta.

    Warns outside the dispersive regime (eta > 0.2 or strong drive).
    """
    if detuning == 0:
        raise IonCatsError("dispersive rate undefined at zero detuning")
    lam = 4 * (rabi * eta) ** 2 / detuning
    if eta > 0.2:
        warnings.warn(f"eta={eta} is outside the Lamb-Dicke regime", stacklevel=2)
    if abs(lam / detuning) > 0.1:
        warnings.warn("drive too strong for the dispersive approximation", stacklevel=2)
    return lam


@dataclass(frozen=True)
class PulseSpec:
    """One protocol step.

    kind selects which parameters are meaningful:
      resonant_bichromatic: k, rabi, eta, duration, phase
      dispersive_bichromatic: duration plus either lam or (rabi, eta, detuning)
      carrier: theta, phase
      postselect: target
    """

    kind: str
    k: int = 1
    rabi: float | None = None
    eta: float | None = None
    duration: float | None = None
    phase: float = 0.0
    detuning: float | None = None
    lam: float | None = None
    theta: float | None = None
    target: str | None = None

    def __post_init__(self):
        kinds = ("resonant_bichromatic", "dispersive_bichromatic", "carrier", "postselect")
        if self.kind not in kinds:
            raise IonCatsError(f"unknown pulse kind {self.kind!r}")
        for name in ("rabi", "eta", "duration", "phase", "detuning", "lam", "theta"):
            v = getattr(self, name)
            if v is not None and not math.isfinite(v):
                raise IonCatsError(f"non-finite pulse parameter {name}")
        if self.duration is not None and self.duration < 0:
            raise IonCatsError("pulse duration must be >= 0")
        if self.eta is not None and self.eta <= 0:
            raise IonCatsError("eta must be > 0")
        if self.kind == "postselect" and self.target not in TARGETS:
            raise IonCatsError(f"postselect target must be one of {TARGETS}")

    def dispersive_angle(self) -> float:
        """lambda * t for a dispersive pulse."""
        lam = self.lam
        if lam is None:
            if None in (self.rabi, self.eta, self.detuning):
                raise IonCatsError("dispersive pulse needs lam or (rabi, eta, detuning)")
            lam = dispersive_rate(self.rabi, self.eta, self.detuning)
        return lam * self.duration


@dataclass(frozen=True)
class VibronicState:
    """Joint electronic-motional pure state.

    amplitudes[i, n] multiplies |j, m_i>_z (x) |n>, with m_i = -j + i.
    """

    N: int
    space: FockSpace
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.amplitudes.shape != (self.N + 1, self.space.dim):
            raise IonCatsError("vibronic amplitude array has the wrong shape")
        self.amplitudes.setflags(write=False)

    @property
    def j(self) -> float:
        return self.N / 2

    @property
    def vector(self) -> np.ndarray:
        """Flat amplitude vector, (m, n) index raveled row-major."""
        return self.amplitudes.ravel()

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def ops(self) -> SpinOperators:
        return build_spin_operators(self.N)

    def with_amplitudes(self, amps: np.ndarray) -> "VibronicState":
        return VibronicState(N=self.N, space=self.space, amplitudes=amps)


def ground_state(N: int, space: FockSpace) -> VibronicState:
    """|j, -j>_z (x) |0>: all ions in |g>, motion in the vacuum."""
    amps = np.zeros((N + 1, space.dim), dtype=complex)
    amps[0, 0] = 1.0
    return VibronicState(N=N, space=space, amplitudes=amps)


def vibronic_fidelity(a: VibronicState, b: VibronicState) -> float:
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)


def spin_reduced_density(state: VibronicState) -> np.ndarray:
    """Reduced density matrix of the electronic (Dicke) sector."""
    c = state.amplitudes
    return c @ c.conj().T


def spin_expectation(state: VibronicState, op: np.ndarray) -> complex:
    c = state.amplitudes
    return complex(np.einsum("mn,mk,kn->", c.conj(), op, c))


def motional_mean_n(state: VibronicState) -> float:
    pn = np.sum(np.abs(state.amplitudes) ** 2, axis=0)
    return float(np.sum(np.arange(state.space.dim) * pn))


def motional_a_expectation(state: VibronicState) -> complex:
    a = state.space.annihilation()
    c = state.amplitudes
    return complex(np.einsum("mn,nk,mk->", c.conj(), a, c))


def resonant_alpha(k: int, rabi: float, eta: float, duration: float) -> complex:
    """Branch displacement per unit m for a resonant pulse: -2i Omega t eta^k / k!."""
    return -2j * rabi * duration * eta**k / math.factorial(k)


def apply_resonant(state: VibronicState, pulse: PulseSpec) -> VibronicState:
    """Resonant bichromatic pulse: branch-dependent displacement in the J_T basis."""
    if pulse.kind != "resonant_bichromatic":
        raise IonCatsError("apply_resonant requires a resonant_bichromatic pulse")
    if None in (pulse.rabi, pulse.eta, pulse.duration):
        raise IonCatsError("resonant pulse needs rabi, eta and duration")
    alpha = resonant_alpha(pulse.k, pulse.rabi, pulse.eta, pulse.duration)
    if pulse.k == 1 and required_n_max(state.j * abs(alpha)) > state.space.n_max:
        raise TruncationError(
            f"largest branch displacement {state.j * abs(alpha):.3g} needs n_max >= "
            f"{required_n_max(state.j * abs(alpha))}, space has {state.space.n_max}"
        )
    ops = state.ops()
    v = axis_eigenbasis(ops, pulse.phase - pulse.k * math.pi / 2)
    c = v.conj().T @ state.amplitudes
    for i, m in enumerate(ops.m_values):
        if m == 0:
            continue
        d = displacement_matrix(pulse.k, m * alpha, state.space)
        c[i] = d @ c[i]
    return state.with_amplitudes(v @ c)


def apply_dispersive(state: VibronicState, pulse: PulseSpec) -> VibronicState:
    """Dispersive bichromatic pulse exp(-i lambda t J_y^2); motional sector untouched."""
    if pulse.kind != "dispersive_bichromatic":
        raise IonCatsError("apply_dispersive requires a dispersive_bichromatic pulse")
    angle = pulse.dispersive_angle()
    ops = state.ops()
    u = spin.squared_axis_phase_gate(ops, ops.jy, angle)
    return state.with_amplitudes(u @ state.amplitudes)


def apply_carrier(state: VibronicState, theta: float, phi: float) -> VibronicState:
    """Carrier rotation exp(-i theta (cos phi J_x + sin phi J_y))."""
    ops = state.ops()
    gen = np.cos(phi) * ops.jx + np.sin(phi) * ops.jy
    w, v = np.linalg.eigh(gen)
    u = (v * np.exp(-1j * theta * w)) @ v.conj().T
    return state.with_amplitudes(u @ state.amplitudes)


def postselect(state: VibronicState, target: str) -> tuple[MotionalState, float]:
    """Project the electronic sector onto |j,+j>_z or |j,-j>_z.

    Returns the renormalized conditional motional state and the outcome
    probability.  Raises DegenerateOutcome below probability 1e-14.
    """
    if target not in TARGETS:
        raise IonCatsError(f"target must be one of {TARGETS}")
    row = state.amplitudes[-1] if target == "all_excited" else state.amplitudes[0]
    prob = float(np.vdot(row, row).real)
    if prob < 1e-14:
        raise DegenerateOutcome(f"outcome {target} has probability {prob:.3g}")
    cond = MotionalState(amplitudes=(row / math.sqrt(prob)).copy(), space=state.space)
    return cond, prob


def apply_pulse(state: VibronicState, pulse: PulseSpec) -> VibronicState:
    if pulse.kind == "resonant_bichromatic":
        return apply_resonant(state, pulse)
    if pulse.kind == "dispersive_bichromatic":
        return apply_dispersive(state, pulse)
    if pulse.kind == "carrier":
        return apply_carrier(state, pulse.theta, pulse.phase)
    raise IonCatsError(f"apply_pulse cannot handle kind {pulse.kind!r}")


@dataclass(frozen=True)
class ProtocolResult:
    """Final joint state, conditional motional states, and the applied pulse trace."""

    name: str
    N: int
    alpha: complex                  # realized branch displacement per unit m
    final: VibronicState
    conditionals: dict = field(default_factory=dict)   # target -> (MotionalState|None, prob)
    trace: tuple = ()
    options: dict = field(default_factory=dict)

    def probability(self, target: str) -> float:
        return self.conditionals[target][1]

    def conditional_state(self, target: str) -> MotionalState:
        st = self.conditionals[target][0]
        if st is None:
            raise DegenerateOutcome(f"no conditional state for {target}")
        return st


def _protocol_sequence(
    name: str, N: int, alpha_mag: float, rabi: float, eta: float, lam: float
) -> list[PulseSpec]:
    tau = alpha_mag / (2 * rabi * eta)
    resonant = PulseSpec(
        kind="resonant_bichromatic", k=1, rabi=rabi, eta=eta, duration=tau, phase=math.pi / 2
    )
    dispersive = PulseSpec(kind="dispersive_bichromatic", lam=lam, duration=math.pi / (2 * lam))
    carrier = PulseSpec(kind="carrier", theta=math.pi / 2, phase=math.pi / 2)
    split = [dispersive] + ([carrier] if N % 2 == 0 else [])
    if name == "multi_cat":
        return [resonant]
    if name in ("entangled_cat", "cat_postselect"):
        return split + [resonant]
    if name == "cat_deterministic":
        return split + [resonant] + split
    raise IonCatsError(f"unknown protocol {name!r}")


def run_protocol(
    name: str,
    N: int,
    alpha_target: complex,
    *,
    rabi: float = 1.0,
    eta: float = 0.1,
    lam: float = 1.0,
    detuning: float | None = None,
    n_max: int | None = None,
) -> ProtocolResult:
    """Run one of the named preparation protocols from the vibronic ground state.

    alpha_target sets the magnitude of the per-unit-m branch displacement;
    the resonant pulse duration is solved as tau = |alpha| / (2 Omega eta).
    The realized displacement is alpha = -2i Omega eta tau (imaginary axis).
    For even N the dispersive steps are followed by a carrier pi/2 rotation
    about J_y, which restores the odd-N behaviour of the cat protocols.
    n_max defaults to the truncation rule for the largest amplitude in play.
    """
    if name not in PROTOCOLS:
        raise IonCatsError(f"unknown protocol {name!r}; choose from {PROTOCOLS}")
    if N < 1:
        raise IonCatsError("N must be >= 1")
    alpha_mag = abs(alpha_target)
    if alpha_mag <= 0:
        raise IonCatsError("alpha_target must be nonzero")
    if detuning is not None:
        lam = dispersive_rate(rabi, eta, detuning)
    beta_max = (N / 2) * alpha_mag
    needed = required_n_max(beta_max)
    if n_max is None:
        n_max = needed
    elif n_max < needed:
        raise TruncationError(
            f"protocol needs n_max >= {needed} for |alpha|={alpha_mag:.3g}, N={N}; got {n_max}"
        )
    space = FockSpace(n_max)
    state = ground_state(N, space)
    seq = _protocol_sequence(name, N, alpha_mag, rabi, eta, lam)
    for pulse in seq:
        state = apply_pulse(state, pulse)
    conditionals = {}
    for target in TARGETS:
        try:
            cond, prob = postselect(state, target)
        except DegenerateOutcome:
            row = state.amplitudes[-1 if target == "all_excited" else 0]
            cond, prob = None, float(np.vdot(row, row).real)
        conditionals[target] = (cond, prob)
    return ProtocolResult(
        name=name,
        N=N,
        alpha=-1j * alpha_mag,
        final=state,
        conditionals=conditionals,
        trace=tuple(seq),
        options={"rabi": rabi, "eta": eta, "lam": lam, "n_max": n_max},
    )


def sample_outcomes(result: ProtocolResult, shots: int, seed: int) -> dict:
    """Simulate repeated collective-fluorescence measurements of J_z.

    Returns counts keyed by 'all_ground', 'all_excited' or 'm=<value>'.
    """
    c = result.final.amplitudes
    probs = np.sum(np.abs(c) ** 2, axis=1)
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    draws = rng.choice(len(probs), size=shots, p=probs)
    j = result.final.j
    labels = []
    for i in range(len(probs)):
        m = -j + i
        if i == 0:
            labels.append("all_ground")
        elif i == len(probs) - 1:
            labels.append("all_excited")
        else:
            labels.append(f"m={m:g}")
    counts: dict = {}
    for d in draws:
        counts[labels[d]] = counts.get(labels[d], 0) + 1
    return counts
