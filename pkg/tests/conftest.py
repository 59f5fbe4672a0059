"""Shared reference implementations, deliberately independent of the package code."""

import math

import numpy as np
import pytest


def small_d_reference(j: float, theta: float) -> np.ndarray:
    """Rotation matrix elements from the explicit factorial sum.

    d^j_{m',m}(theta) = sum_s (-1)^s sqrt(...)/(...) * cos^... * sin^...,
    the standard closed form, summed termwise.  Indices ascending in m.
    """
    two_j = round(2 * j)
    dim = two_j + 1
    ms = [-j + i for i in range(dim)]
    c = math.cos(theta / 2)
    s = math.sin(theta / 2)
    out = np.zeros((dim, dim))
    for a, mp in enumerate(ms):
        for b, m in enumerate(ms):
            pref = math.sqrt(
                math.factorial(round(j + mp))
                * math.factorial(round(j - mp))
                * math.factorial(round(j + m))
                * math.factorial(round(j - m))
            )
            total = 0.0
            for k in range(0, two_j + 1):
                if j + m - k < 0 or j - mp - k < 0 or k + mp - m < 0:
                    continue
                denom = (
                    math.factorial(round(j + m - k))
                    * math.factorial(k)
                    * math.factorial(round(j - mp - k))
                    * math.factorial(round(k + mp - m))
                )
                total += (
                    (-1) ** (k + mp - m)
                    * c ** round(2 * j - 2 * k - mp + m)
                    * s ** round(2 * k + mp - m)
                    / denom
                )
            out[a, b] = pref * total
    return out


def hermite_position_density(amplitudes: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """|psi(x)|^2 from the Hermite-function expansion (m = omega = hbar = 1)."""
    xs = np.asarray(xs, dtype=float)
    phi_prev = np.zeros_like(xs)
    phi = math.pi ** -0.25 * np.exp(-xs**2 / 2)
    wave = amplitudes[0] * phi
    for n in range(1, len(amplitudes)):
        phi, phi_prev = (
            math.sqrt(2 / n) * xs * phi - math.sqrt((n - 1) / n) * phi_prev,
            phi,
        )
        wave = wave + amplitudes[n] * phi
    return np.abs(wave) ** 2


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    return float(abs(np.vdot(np.ravel(a), np.ravel(b))) ** 2)


@pytest.fixture
def rng():
    return np.random.default_rng(20260823)
