"""Truncated Fock space: coherent states, generalized displacements, Wigner functions.

Conventions: dimensionless quadratures with [x, p] = i, so x = (a + a^dag)/sqrt(2).
Wigner functions are normalized to integrate to 1 over dx dp and obey |W| <= 1/pi.
"""

from __future__ import annotations

import csv
import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .errors import IonCatsError, TruncationError, UnsupportedOrder

WIGNER_CONVENTION = "quadratures x=(a+ad)/sqrt2, [x,p]=i; integral W dx dp = 1"

# k=2 displacements are squeezing-like and already sit at the edge of what a
# truncated space represents faithfully; k >= 3 generates unbounded growth.
DEFAULT_MAX_DISPLACEMENT_ORDER = 2


def required_n_max(beta: float) -> int:
    """Truncation level needed to hold a coherent amplitude of magnitude beta.

    Rule: n_max >= |beta|^2 + 6|beta| + 10 (a ~6-sigma Poisson tail), which
    keeps the lost norm below ~1e-9.
    """
    b = abs(beta)
    return math.ceil(b * b + 6 * b + 10)


@dataclass(frozen=True)
class FockSpace:
    """Fock space truncated at occupation n_max (dimension n_max + 1)."""

    n_max: int

    def __post_init__(self):
        if self.n_max < 1:
            raise IonCatsError(f"n_max must be >= 1, got {self.n_max}")

    @property
    def dim(self) -> int:
        return self.n_max + 1

    def annihilation(self) -> np.ndarray:
        return np.diag(np.sqrt(np.arange(1, self.dim, dtype=float)), 1).astype(complex)

    def creation(self) -> np.ndarray:
        return self.annihilation().conj().T

    def parity_diagonal(self) -> np.ndarray:
        return (-1.0) ** np.arange(self.dim)


@dataclass(frozen=True)
class MotionalState:
    """Pure state on a truncated Fock space (unit norm)."""

    amplitudes: np.ndarray
    space: FockSpace
    truncation_loss: float = 0.0

    def __post_init__(self):
        if self.amplitudes.shape != (self.space.dim,):
            raise IonCatsError("amplitude vector does not match the Fock space")
        self.amplitudes.setflags(write=False)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True)
class MotionalDensity:
    """Density matrix on a truncated Fock space."""

    matrix: np.ndarray
    space: FockSpace

    def __post_init__(self):
        if self.matrix.shape != (self.space.dim, self.space.dim):
            raise IonCatsError("density matrix does not match the Fock space")
        self.matrix.setflags(write=False)

    @classmethod
    def from_state(cls, state: MotionalState) -> "MotionalDensity":
        v = state.amplitudes
        return cls(matrix=np.outer(v, v.conj()), space=state.space)


def coherent_state(alpha: complex, space: FockSpace) -> MotionalState:
    """Coherent state |alpha> with amplitudes e^{-|a|^2/2} a^n / sqrt(n!)."""
    if required_n_max(abs(alpha)) > space.n_max:
        raise TruncationError(
            f"|alpha|={abs(alpha):.3g} needs n_max >= {required_n_max(abs(alpha))}, "
            f"space has {space.n_max}"
        )
    amps = np.zeros(space.dim, dtype=complex)
    amps[0] = 1.0
    for n in range(1, space.dim):
        amps[n] = amps[n - 1] * alpha / math.sqrt(n)
    amps *= math.exp(-abs(alpha) ** 2 / 2)
    norm = np.linalg.norm(amps)
    loss = max(0.0, 1.0 - float(norm) ** 2)
    return MotionalState(amplitudes=amps / norm, space=space, truncation_loss=loss)


def displacement_matrix(
    k: int,
    alpha_k: complex,
    space: FockSpace,
    max_order: int = DEFAULT_MAX_DISPLACEMENT_ORDER,
    allow_high_order: bool = False,
) -> np.ndarray:
    """Generalized displacement D_k(alpha) = exp(alpha a^dag^k - alpha* a^k).

    Exactly unitary on the truncated space (the truncated generator is
    anti-Hermitian).  For k = 1 this is the ordinary displacement operator.
    k >= 3 is refused unless allow_high_order is set, because truncation
    falsifies the unbounded growth those generators produce.
    """
    if k < 1:
        raise IonCatsError(f"displacement order must be >= 1, got {k}")
    if k > max_order:
        if not allow_high_order:
            raise UnsupportedOrder(
                f"k={k} exceeds the configured maximum {max_order}; "
                "pass allow_high_order=True if you accept truncation artifacts"
            )
        warnings.warn(
            f"displacement order k={k}: truncated-space results are unreliable",
            stacklevel=2,
        )
    if k == 1 and required_n_max(abs(alpha_k)) > space.n_max:
        raise TruncationError(
            f"displacement |alpha|={abs(alpha_k):.3g} needs n_max >= "
            f"{required_n_max(abs(alpha_k))}, space has {space.n_max}"
        )
    a = space.annihilation()
    adk = np.linalg.matrix_power(a.conj().T, k)
    gen = alpha_k * adk - np.conj(alpha_k) * adk.conj().T
    return expm(gen)


def fock_distribution(state: MotionalState) -> np.ndarray:
    """Occupation probabilities p_n = |c_n|^2."""
    return np.abs(state.amplitudes) ** 2


def mean_occupation(state: MotionalState) -> float:
    return float(np.sum(np.arange(state.space.dim) * fock_distribution(state)))


def annihilation_expectation(state: MotionalState) -> complex:
    return complex(np.vdot(state.amplitudes, state.space.annihilation() @ state.amplitudes))


def suggest_bounds(state: MotionalState, n_sigma: float = 6.0) -> tuple[float, float]:
    """Symmetric (x_half_range, p_half_range) covering n_sigma std devs of the state."""
    v = state.amplitudes
    a = state.space.annihilation()
    av = a @ v
    ea = np.vdot(v, av)
    x_mean = math.sqrt(2) * ea.real
    p_mean = math.sqrt(2) * ea.imag
    # <x^2> = (  <a^2> + <ad^2> + 2<n> + 1 ) / 2
    ea2 = np.vdot(v, a @ av)
    en = np.vdot(av, av).real
    x2 = (2 * ea2.real + 2 * en + 1) / 2
    p2 = (-2 * ea2.real + 2 * en + 1) / 2
    sx = math.sqrt(max(x2 - x_mean**2, 0.25))
    sp = math.sqrt(max(p2 - p_mean**2, 0.25))
    return (abs(x_mean) + n_sigma * sx, abs(p_mean) + n_sigma * sp)


@dataclass(frozen=True)
class WignerGrid:
    """Real Wigner samples W(x, p) on a rectangular grid.

    values[i, j] = W(x_axis[i], p_axis[j]).
    """

    x_axis: np.ndarray
    p_axis: np.ndarray
    values: np.ndarray
    convention: str = WIGNER_CONVENTION
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.values.shape != (len(self.x_axis), len(self.p_axis)):
            raise IonCatsError("Wigner values shape does not match the axes")
        for arr in (self.x_axis, self.p_axis, self.values):
            arr.setflags(write=False)

    def integral(self) -> float:
        dx = self.x_axis[1] - self.x_axis[0]
        dp = self.p_axis[1] - self.p_axis[0]
        return float(self.values.sum() * dx * dp)

    def to_csv(self, path) -> None:
        """CSV: '#'-prefixed metadata, header x,p,w, rows row-major in x then p."""
        with open(path, "w", newline="") as fh:
            fh.write("# wigner-grid v1\n")
            fh.write(f"# convention: {self.convention}\n")
            for key in sorted(self.meta):
                fh.write(f"# {key}: {self.meta[key]}\n")
            writer = csv.writer(fh)
            writer.writerow(["x", "p", "w"])
            for i, x in enumerate(self.x_axis):
                for jj, p in enumerate(self.p_axis):
                    writer.writerow([f"{x:.15g}", f"{p:.15g}", f"{self.values[i, jj]:.15g}"])

    @classmethod
    def from_csv(cls, path) -> "WignerGrid":
        meta: dict = {}
        convention = ""
        rows = []
        with open(path) as fh:
            for line in fh:
                line = line.rstrip("\n")
                if line.startswith("#"):
                    body = line[1:].strip()
                    if ":" in body:
                        key, _, val = body.partition(":")
                        key = key.strip()
                        if key == "convention":
                            convention = val.strip()
                        else:
                            meta[key] = val.strip()
                    continue
                if line.strip() == "" or line.startswith("x,"):
                    continue
                parts = line.split(",")
                if len(parts) != 3:
                    raise IonCatsError(f"malformed wigner CSV row: {line!r}")
                rows.append(tuple(float(t) for t in parts))
        if not rows:
            raise IonCatsError("wigner CSV contains no data rows")
        xs = sorted({r[0] for r in rows})
        ps = sorted({r[1] for r in rows})
        if len(rows) != len(xs) * len(ps):
            raise IonCatsError("wigner CSV is not a complete rectangular grid")
        vals = np.empty((len(xs), len(ps)))
        xi = {x: i for i, x in enumerate(xs)}
        pi_ = {p: i for i, p in enumerate(ps)}
        for x, p, w in rows:
            vals[xi[x], pi_[p]] = w
        return cls(
            x_axis=np.asarray(xs),
            p_axis=np.asarray(ps),
            values=vals,
            convention=convention or WIGNER_CONVENTION,
            meta=meta,
        )

    def to_json(self) -> str:
        doc = {
            "convention": self.convention,
            "meta": self.meta,
            "x_axis": [float(v) for v in self.x_axis],
            "p_axis": [float(v) for v in self.p_axis],
            "values": [[float(v) for v in row] for row in self.values],
        }
        return json.dumps(doc, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "WignerGrid":
        doc = json.loads(text)
        return cls(
            x_axis=np.asarray(doc["x_axis"], dtype=float),
            p_axis=np.asarray(doc["p_axis"], dtype=float),
            values=np.asarray(doc["values"], dtype=float),
            convention=doc.get("convention", WIGNER_CONVENTION),
            meta=doc.get("meta", {}),
        )


def _laguerre_clenshaw(order: int, x: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    """Clenshaw sum of sqrt-normalized associated Laguerre polynomials.

    Evaluates sum_n coeffs[n] * (-1)^n sqrt(order! n! / (order+n)!) L_n^order(x)
    elementwise over x, via the backward three-term recurrence.  Keeping the
    dominant Gaussian envelope exp(-x/2) outside this sum is what makes the
    displaced-parity Wigner evaluation numerically stable.
    """
    if len(coeffs) == 1:
        return coeffs[0] * np.ones_like(x, dtype=complex)
    y0 = coeffs[-2] * np.ones_like(x, dtype=complex)
    y1 = coeffs[-1] * np.ones_like(x, dtype=complex)
    k = len(coeffs) - 1
    for n in range(len(coeffs) - 2, 0, -1):
        y0, y1 = (
            coeffs[n - 1] - y1 * math.sqrt((k - 1) * (order + k - 1) / ((order + k) * k)),
            y0 - y1 * (order + 2 * k - 1 - x) / math.sqrt((order + k) * k),
        )
        k -= 1
    return y0 - y1 * (order + 1 - x) / math.sqrt(order + 1)


def wigner(
    rho: "MotionalState | MotionalDensity",
    xs: np.ndarray,
    ps: np.ndarray,
    meta: dict | None = None,
) -> WignerGrid:
    """Wigner function W(x,p) = (1/pi) Tr[rho D(a) P D(a)^dag], a = (x+ip)/sqrt2.

    The displaced-parity trace is summed in closed form: the L-th density
    matrix diagonal contributes a Laguerre series in |2a|^2, evaluated by
    Clenshaw recurrence with the Gaussian envelope factored out.  Exact for
    the truncated state at every grid point, O(dim^2) per point, vectorized
    over the whole grid.
    """
    xs = np.asarray(xs, dtype=float)
    ps = np.asarray(ps, dtype=float)
    space = rho.space
    r_max = math.sqrt(np.max(np.abs(xs)) ** 2 + np.max(np.abs(ps)) ** 2) / math.sqrt(2)
    # the evaluation below is exact for the truncated state, so the guard only
    # rejects grids far outside anything the space can represent (a few vacuum
    # widths past amplitude sqrt(n_max) the true W would be structureless)
    r_ok = math.sqrt(space.n_max) + 4.0
    if r_max > r_ok:
        raise TruncationError(
            f"grid reaches |alpha|={r_max:.3g}, beyond the reliable radius "
            f"sqrt(n_max)+4={r_ok:.3g}"
        )
    if isinstance(rho, MotionalState):
        mat = np.outer(rho.amplitudes, rho.amplitudes.conj())
    else:
        mat = rho.matrix
    dim = space.dim
    x_grid, p_grid = np.meshgrid(xs, ps, indexing="ij")
    a2 = math.sqrt(2) * (x_grid + 1j * p_grid)    # 2 alpha
    b = np.abs(a2) ** 2
    # double the off-diagonals once; the trailing .real then counts each
    # (n, n+L) pair together with its conjugate as 2 Re(...)
    work = mat * (2.0 - np.eye(dim))
    acc = 2 * mat[0, dim - 1] * np.ones_like(a2)
    for order in range(dim - 2, -1, -1):
        acc = _laguerre_clenshaw(order, b, np.diagonal(work, order)) + acc * a2 / math.sqrt(
            order + 1
        )
    values = acc.real * np.exp(-b / 2) / math.pi
    return WignerGrid(x_axis=xs, p_axis=ps, values=values, meta=dict(meta or {}))
