"""Collective spin-j operators and rotation matrices on the symmetric (Dicke) subspace.

All matrices act on the (2j+1)-dimensional ladder |j,m>_z with m ordered
ascending, m = -j ... +j.  Ladder phases follow the Condon-Shortley
convention, so d-matrices agree with the usual angular-momentum tables.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import IonCatsError

# Memory guard: a (MAX_IONS+1)^2 dense complex matrix is still tiny, but the
# engine's joint space scales as (N+1)*(n_max+1) and the oracle as 2^N.
MAX_IONS = 64

_ATOL = 1e-12


@dataclass(frozen=True)
class SpinOperators:
    """Dense J_x, J_y, J_z for total spin j = N/2 in the |j,m>_z basis."""

    N: int
    jx: np.ndarray
    jy: np.ndarray
    jz: np.ndarray

    @property
    def j(self) -> float:
        return self.N / 2

    @property
    def dim(self) -> int:
        return self.N + 1

    @property
    def m_values(self) -> np.ndarray:
        return np.arange(-self.j, self.j + 1)


@dataclass(frozen=True)
class RotationMatrix:
    """Real Wigner small-d matrix d^j_{m',m}(theta), indices ascending in m."""

    j: float
    theta: float
    d: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return round(2 * self.j + 1)


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def build_spin_operators(N: int) -> SpinOperators:
    """Collective spin operators for N ions restricted to the j = N/2 ladder.

    Raises IonCatsError for N < 1 or N > MAX_IONS.
    """
    if not isinstance(N, (int, np.integer)) or N < 1:
        raise IonCatsError(f"ion count must be a positive integer, got {N!r}")
    if N > MAX_IONS:
        raise IonCatsError(f"N={N} exceeds the configured maximum {MAX_IONS}")
    j = N / 2
    m = np.arange(-j, j + 1)
    dim = N + 1
    jz = np.diag(m).astype(complex)
    jp = np.zeros((dim, dim), dtype=complex)
    # J+|j,m> = sqrt(j(j+1) - m(m+1)) |j,m+1>
    for i in range(dim - 1):
        jp[i + 1, i] = np.sqrt(j * (j + 1) - m[i] * (m[i] + 1))
    jm = jp.conj().T
    jx = (jp + jm) / 2
    jy = (jp - jm) / 2j
    return SpinOperators(N=N, jx=_freeze(jx), jy=_freeze(jy), jz=_freeze(jz))


def wigner_small_d(j: float, theta: float) -> RotationMatrix:
    """Rotation matrix elements <j,m'| exp(-i theta J_y) |j,m>.

    Built by spectral decomposition of J_y; the result is real up to
    roundoff and the residual imaginary part is discarded.
    """
    two_j = round(2 * j)
    if two_j < 1 or abs(2 * j - two_j) > 1e-12:
        raise IonCatsError(f"j must be a positive half-integer, got {j!r}")
    if theta == 0.0:
        return RotationMatrix(j=j, theta=0.0, d=_freeze(np.eye(two_j + 1)))
    ops = build_spin_operators(two_j)
    w, v = np.linalg.eigh(ops.jy)
    d = (v * np.exp(-1j * theta * w)) @ v.conj().T
    if np.abs(d.imag).max() > 1e-9:
        raise IonCatsError("small-d matrix came out non-real; broken J_y spectrum")
    return RotationMatrix(j=j, theta=theta, d=_freeze(d.real.copy()))


def axis_eigenbasis(ops: SpinOperators, axis_angle: float) -> np.ndarray:
    """Unitary V whose columns are the eigenvectors of the in-plane spin component.

    The operator diagonalized is cos(a) J_x + sin(a) J_y.  Columns are
    ordered by ascending eigenvalue m = -j ... +j.  Each eigenvector's
    phase is fixed by making its largest-magnitude component real
    positive, so the output is deterministic across platforms.
    """
    g = np.cos(axis_angle) * ops.jx + np.sin(axis_angle) * ops.jy
    _, v = np.linalg.eigh(g)
    v = v.copy()
    for c in range(v.shape[1]):
        k = np.argmax(np.abs(v[:, c]))
        phase = v[k, c] / abs(v[k, c])
        v[:, c] *= phase.conjugate()
    return _freeze(v)


def squared_axis_phase_gate(ops: SpinOperators, generator: np.ndarray, angle: float) -> np.ndarray:
    """exp(-i * angle * G^2) for a Hermitian spin generator G, via eigendecomposition."""
    w, v = np.linalg.eigh(generator)
    return (v * np.exp(-1j * angle * w**2)) @ v.conj().T


def check_invariants(ops: SpinOperators, atol: float = _ATOL) -> None:
    """Assert the algebra invariants; raises IonCatsError on violation."""
    j = ops.j
    eye = np.eye(ops.dim)
    comm = ops.jx @ ops.jy - ops.jy @ ops.jx - 1j * ops.jz
    if np.abs(comm).max() > atol:
        raise IonCatsError("[Jx, Jy] != i Jz")
    casimir = ops.jx @ ops.jx + ops.jy @ ops.jy + ops.jz @ ops.jz - j * (j + 1) * eye
    if np.abs(casimir).max() > atol:
        raise IonCatsError("J^2 != j(j+1) I")
    for mat in (ops.jx, ops.jy, ops.jz):
        if np.abs(mat - mat.conj().T).max() > atol:
            raise IonCatsError("spin operator not Hermitian")
