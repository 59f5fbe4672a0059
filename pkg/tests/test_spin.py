import math

import numpy as np
import pytest
from scipy.linalg import expm

from ioncats.errors import IonCatsError
from ioncats.spin import (
    MAX_IONS,
    axis_eigenbasis,
    build_spin_operators,
    check_invariants,
    squared_axis_phase_gate,
    wigner_small_d,
)

from conftest import small_d_reference


@pytest.mark.parametrize("N", [1, 2, 3, 4, 5, 8])
def test_algebra_invariants(N):
    ops = build_spin_operators(N)
    check_invariants(ops)
    comm = ops.jx @ ops.jy - ops.jy @ ops.jx
    assert np.abs(comm - 1j * ops.jz).max() < 1e-12


def test_single_ion_operators():
    ops = build_spin_operators(1)
    assert np.allclose(ops.jz, np.diag([-0.5, 0.5]))
    assert np.allclose(ops.jx, np.array([[0, 0.5], [0.5, 0]]))
    assert np.allclose(ops.jy, np.array([[0, 0.5j], [-0.5j, 0]]))


def test_two_ion_operators():
    ops = build_spin_operators(2)
    assert np.allclose(ops.jz, np.diag([-1.0, 0.0, 1.0]))
    s = 1 / math.sqrt(2)
    assert np.allclose(np.abs(ops.jx), np.array([[0, s, 0], [s, 0, s], [0, s, 0]]))


def test_build_rejects_bad_counts():
    with pytest.raises(IonCatsError):
        build_spin_operators(0)
    with pytest.raises(IonCatsError):
        build_spin_operators(MAX_IONS + 1)


def test_small_d_zero_angle_is_exact_identity():
    rot = wigner_small_d(3 / 2, 0.0)
    assert np.array_equal(rot.d, np.eye(4))


def test_small_d_halfspin_quarter_turn():
    rot = wigner_small_d(0.5, math.pi / 2)
    c = math.cos(math.pi / 4)
    ref = expm(-1j * (math.pi / 2) * np.asarray(build_spin_operators(1).jy))
    assert np.abs(rot.d - ref).max() < 1e-12
    assert abs(abs(rot.d[0, 0]) - c) < 1e-12


@pytest.mark.parametrize("two_j", [1, 2, 3, 5, 8])
@pytest.mark.parametrize("theta", [0.1, math.pi / 4, math.pi / 2, 2.3])
def test_small_d_matches_factorial_formula(two_j, theta):
    j = two_j / 2
    got = wigner_small_d(j, theta).d
    assert np.abs(got - small_d_reference(j, theta)).max() < 1e-10


@pytest.mark.parametrize("two_j", [1, 3, 6])
def test_small_d_orthogonal_and_transpose(two_j):
    j = two_j / 2
    d = wigner_small_d(j, 1.3).d
    assert np.abs(d @ d.T - np.eye(two_j + 1)).max() < 1e-12
    assert np.abs(wigner_small_d(j, -1.3).d - d.T).max() < 1e-12


def test_small_d_composition():
    d1 = wigner_small_d(2, 0.7).d
    d2 = wigner_small_d(2, 1.1).d
    d12 = wigner_small_d(2, 1.8).d
    assert np.abs(d1 @ d2 - d12).max() < 1e-10


@pytest.mark.parametrize("N", [1, 2, 3, 4, 6, 8])
def test_small_d_corner_element_scaling(N):
    # <j,j| e^{-i pi/2 Jy} |j,j> = 2^{-j}, the root of the 1/2^N postselection cost
    j = N / 2
    d = wigner_small_d(j, math.pi / 2).d
    assert abs(d[-1, -1] - 2.0**-j) < 1e-12


@pytest.mark.parametrize("N", [1, 2, 4])
@pytest.mark.parametrize("angle", [0.0, 0.4, math.pi / 2, 2.0])
def test_axis_eigenbasis_diagonalizes(N, angle):
    ops = build_spin_operators(N)
    v = axis_eigenbasis(ops, angle)
    assert np.abs(v.conj().T @ v - np.eye(N + 1)).max() < 1e-12
    gen = math.cos(angle) * ops.jx + math.sin(angle) * ops.jy
    diag = v.conj().T @ gen @ v
    assert np.abs(diag - np.diag(ops.m_values)).max() < 1e-12


def test_axis_eigenbasis_single_ion_x():
    v = axis_eigenbasis(build_spin_operators(1), 0.0)
    s = 1 / math.sqrt(2)
    # m=-1/2 then m=+1/2 columns of the Jx eigenbasis
    assert np.abs(np.abs(v) - s).max() < 1e-12
    assert abs(np.vdot(v[:, 0], np.array([s, -s]))) > 1 - 1e-12


def test_axis_eigenbasis_phase_is_deterministic():
    ops = build_spin_operators(3)
    v1 = axis_eigenbasis(ops, 1.234)
    v2 = axis_eigenbasis(ops, 1.234)
    assert np.array_equal(v1, v2)
    for col in v1.T:
        k = np.argmax(np.abs(col))
        assert col[k].real > 0 and abs(col[k].imag) < 1e-12


@pytest.mark.parametrize("N", [1, 3, 5])
def test_squared_jy_gate_splits_ground_state(N):
    # e^{-i(pi/2)Jy^2}|j,-j>_z = (|j,j>_x - |j,-j>_x)/sqrt(2) up to global phase
    ops = build_spin_operators(N)
    u = squared_axis_phase_gate(ops, ops.jy, math.pi / 2)
    out = u[:, 0]
    r = expm(1j * (math.pi / 2) * np.asarray(ops.jy))
    target = (r[:, -1] - r[:, 0]) / math.sqrt(2)
    assert abs(np.vdot(target, out)) ** 2 > 1 - 1e-10


def test_squared_gate_unitary():
    ops = build_spin_operators(4)
    u = squared_axis_phase_gate(ops, ops.jy, 0.77)
    assert np.abs(u @ u.conj().T - np.eye(5)).max() < 1e-12
