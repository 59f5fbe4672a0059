"""Brute-force validation on the full 2^N electronic space.

Everything here is deliberately independent of the engine's closed forms:
spin operators are explicit tensor products of single-ion flip operators,
and evolution is dense matrix exponentiation or fixed-step integration.
Used by the test suite and the `validate` CLI command.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .engine import VibronicState
from .errors import ConvergenceError, IonCatsError, TruncationError
from .motional import FockSpace, required_n_max

MAX_FULL_IONS = 6


@dataclass(frozen=True)
class FullSpaceState:
    """Joint state with the electronic factor in the 2^N computational z-basis.

    amplitudes[s, n]: bit b of s set means ion b is excited; n is the Fock index.
    """

    N: int
    space: FockSpace
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.N > MAX_FULL_IONS:
            raise IonCatsError(f"full-space representation capped at N={MAX_FULL_IONS}")
        if self.amplitudes.shape != (2**self.N, self.space.dim):
            raise IonCatsError("full-space amplitude array has the wrong shape")
        self.amplitudes.setflags(write=False)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def flip_operators(N: int) -> list[np.ndarray]:
    """sigma_{j+} = |e_j><g_j| for each ion, as 2^N matrices."""
    sp = np.array([[0, 0], [1, 0]], dtype=complex)  # basis order (g, e) per ion
    eye = np.eye(2, dtype=complex)
    ops = []
    for target in range(N):
        m = np.eye(1, dtype=complex)
        for b in range(N):
            m = np.kron(sp if b == target else eye, m)
        ops.append(m)
    return ops


def collective_jt(N: int, k: int, phi: float) -> np.ndarray:
    """J_T = (i^k e^{-i phi} / 2) sum_j sigma_{j+} + h.c. on the full space."""
    half = (1j**k * np.exp(-1j * phi) / 2) * sum(flip_operators(N))
    return half + half.conj().T


def dicke_embedding(N: int) -> np.ndarray:
    """2^N x (N+1) isometry from the symmetric ladder to the computational basis.

    Column i (m = -j + i) spreads uniformly over the basis states with i
    excitations, with binomial normalization.
    """
    e = np.zeros((2**N, N + 1))
    for idx in range(2**N):
        nexc = bin(idx).count("1")
        e[idx, nexc] = 1.0 / math.sqrt(math.comb(N, nexc))
    return e


def embed(state: VibronicState) -> FullSpaceState:
    if state.N > MAX_FULL_IONS:
        raise IonCatsError(f"embed capped at N={MAX_FULL_IONS}")
    e = dicke_embedding(state.N)
    return FullSpaceState(N=state.N, space=state.space, amplitudes=e @ state.amplitudes)


def project(full: FullSpaceState) -> tuple[VibronicState, float]:
    """Project back to the symmetric ladder; returns (state, out-of-subspace residual)."""
    e = dicke_embedding(full.N)
    reduced = e.T @ full.amplitudes
    residual = float(np.linalg.norm(full.amplitudes - e @ reduced))
    return VibronicState(N=full.N, space=full.space, amplitudes=reduced), residual


def fullspace_fidelity(a: FullSpaceState, b: FullSpaceState) -> float:
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)


def integrate_resonant(
    psi0: FullSpaceState, k: int, rabi: float, eta: float, t: float, phi: float
) -> FullSpaceState:
    """Exact exp(-iHt) for H = (2 Omega eta^k / k!) J_T (a^k + a^dag^k)."""
    space = psi0.space
    if k == 1:
        disp = (psi0.N / 2) * 2 * rabi * abs(t) * eta
        if required_n_max(disp) > space.n_max:
            raise TruncationError(
                f"displacement {disp:.3g} needs n_max >= {required_n_max(disp)}"
            )
    a = space.annihilation()
    ak = np.linalg.matrix_power(a, k)
    jt = collective_jt(psi0.N, k, phi)
    h = (2 * rabi * eta**k / math.factorial(k)) * np.kron(jt, ak + ak.conj().T)
    u = expm(-1j * h * t)
    out = (u @ psi0.amplitudes.ravel()).reshape(psi0.amplitudes.shape)
    return FullSpaceState(N=psi0.N, space=space, amplitudes=out)


def _rk4(c0: np.ndarray, rhs, t0: float, t1: float, steps: int) -> np.ndarray:
    c = c0
    h = (t1 - t0) / steps
    t = t0
    for _ in range(steps):
        k1 = rhs(c, t)
        k2 = rhs(c + (h / 2) * k1, t + h / 2)
        k3 = rhs(c + (h / 2) * k2, t + h / 2)
        k4 = rhs(c + h * k3, t + h)
        c = c + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        t += h
    return c


def integrate_detuned(
    psi0: FullSpaceState,
    rabi: float,
    eta: float,
    detuning: float,
    t: float,
    substeps: int,
    check_convergence: bool = False,
    convergence_tol: float = 1e-8,
) -> FullSpaceState:
    """Fixed-step RK4 for the detuned first-sideband drive.

    H(t) = 2 Omega eta J_T(phi=0) (a^dag e^{-i delta t} + a e^{+i delta t}),
    with J_T built from individual flip operators.  With check_convergence
    the run is repeated at half the step and must agree to convergence_tol.
    """
    if psi0.N > 4:
        raise IonCatsError("detuned integration capped at N=4")
    space = psi0.space
    a = space.annihilation()
    ad = a.conj().T
    # (J_T (x) A(t)) Psi = J_T @ Psi @ A(t).T ; A.T = a e^{-i d t} + ad e^{+i d t}
    at_lo = a
    at_hi = ad
    jt = collective_jt(psi0.N, 1, 0.0)
    g = 2 * rabi * eta

    def rhs(c, tt):
        atT = at_lo * np.exp(-1j * detuning * tt) + at_hi * np.exp(1j * detuning * tt)
        return -1j * g * (jt @ c @ atT)

    out = _rk4(psi0.amplitudes.astype(complex), rhs, 0.0, t, substeps)
    if check_convergence:
        out2 = _rk4(psi0.amplitudes.astype(complex), rhs, 0.0, t, 2 * substeps)
        if np.linalg.norm(out - out2) > convergence_tol:
            raise ConvergenceError(
                f"step halving changed the result by {np.linalg.norm(out - out2):.3g}"
            )
        out = out2
    drift = abs(np.linalg.norm(out) - 1.0)
    if drift > 1e-7:
        raise ConvergenceError(f"norm drift {drift:.3g} exceeds 1e-7; increase substeps")
    return FullSpaceState(N=psi0.N, space=space, amplitudes=out)
