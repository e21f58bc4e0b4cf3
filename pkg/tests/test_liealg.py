"""Lie closures, Cartan-like splits, and controllability conditions."""

from __future__ import annotations

import numpy as np
import pytest

from liewedge.channels import (ChannelSpec, H_X, H_Y, H_Z, P_X, P_Y, P_Z,
                               build_system, sigma, sigma2)
from liewedge.liealg import (cartan_split, check_conditions, lie_closure,
                             orthocomplement, subspace_equal, subspace_leq)
from liewedge.matcore import comm, orthonormal_span

RNG = np.random.default_rng(911)

E11 = np.diag([1.0, 0.0, 0.0])
GAMMA_PHASE = np.diag([1.0, 0.0, 1.0])
GAMMA_AMP = np.diag([1.0, 1.0, 2.0])


def test_rotation_generators_close_cyclically():
    assert np.allclose(comm(H_X, H_Y), H_Z)
    assert np.allclose(comm(H_Y, H_Z), H_X)
    assert np.allclose(comm(H_Z, H_X), H_Y)


def test_rotation_acts_on_relaxation_diagonals():
    assert np.allclose(comm(H_X, GAMMA_PHASE), -P_X)
    assert np.allclose(comm(H_Z, GAMMA_PHASE), P_Z)
    assert np.allclose(comm(H_Y, GAMMA_AMP), P_Y)
    assert np.allclose(comm(H_Z, P_Z), -2.0 * np.diag([1.0, -1.0, 0.0]))
    assert np.allclose(comm(H_Y, P_Y), -2.0 * np.diag([-1.0, 0.0, 1.0]))
    assert np.allclose(comm(E11, P_Z), -H_Z)


def test_closure_of_two_rotations_is_so3():
    sub = lie_closure([H_X, H_Y])
    assert sub.dim == 3
    assert sub.contains(H_Z)


def test_closure_of_qubit_pair():
    hx, hy, hz = (sigma(a) / 2.0 for a in "xyz")
    assert lie_closure([1j * hx, 1j * hy]).dim == 3
    assert lie_closure([1j * hy, 1j * hz]).dim == 3
    assert lie_closure([1j * hy]).dim == 1


def test_two_qubit_closure_dims():
    full = [1j * sigma2(p) / 2.0 for p in ("x1", "y1", "1x", "1y", "zz")]
    assert lie_closure(full).dim == 15
    local = [1j * sigma2(p) / 2.0 for p in ("x1", "y1", "1x", "1y")]
    assert lie_closure(local).dim == 6


def test_closure_rejects_empty_and_mismatched():
    with pytest.raises(ValueError):
        lie_closure([])
    with pytest.raises(ValueError):
        lie_closure([np.eye(2), np.eye(3)])


def test_cartan_split_reconstructs():
    a = RNG.normal(size=(4, 4))
    k, p = cartan_split(a)
    assert np.allclose(k, -k.T)
    assert np.allclose(p, p.T)
    assert np.allclose(k + p, a)


def test_subspace_comparisons():
    so3 = orthonormal_span([H_X, H_Y, H_Z], shape=(3, 3), complex_field=False)
    plane = orthonormal_span([H_X, H_Y], shape=(3, 3), complex_field=False)
    assert subspace_leq(plane, so3)
    assert not subspace_leq(so3, plane)
    assert subspace_equal(so3, lie_closure([H_X, H_Y]))
    assert not subspace_equal(so3, plane)


def test_orthocomplement_dimension_and_orthogonality():
    sub = orthonormal_span([H_X, H_Y], shape=(3, 3), complex_field=False)
    perp = orthocomplement(sub)
    assert perp.dim == 9 - 2
    for g in perp.mats:
        assert abs(np.sum(g * H_X)) < 1e-12
        assert abs(np.sum(g * H_Y)) < 1e-12


CONDITION_TABLE = {
    # name -> (dim_kc, dim_kd, dim_s, holds_H, holds_WH, holds_A)
    "example1": (3, 3, 9, True, False, True),
    "example2": (1, 3, 9, False, True, True),
    "example3": (1, 3, 9, False, True, True),
    "two_qubit_A": (15, 15, 15, True, False, False),
    "two_qubit_B": (6, 15, 15, False, True, False),
    "two_qubit_C": (2, 15, 225, False, True, True),
}


def test_condition_report_reference_values():
    for name, expected in CONDITION_TABLE.items():
        rep = check_conditions(build_system(ChannelSpec(name=name)))
        got = (rep.dim_kc, rep.dim_kd, rep.dim_s,
               rep.holds_H, rep.holds_WH, rep.holds_A)
        assert got == expected, f"{name}: {got} != {expected}"


def test_condition_hierarchy_h_implies_wh_never_strict():
    """holds_H demands the control-only closure already fills the target,
    in which case the drift adds nothing and WH is reported as the weaker
    non-exclusive variant."""
    for name in CONDITION_TABLE:
        rep = check_conditions(build_system(ChannelSpec(name=name)))
        assert rep.dim_kc <= rep.dim_kd <= rep.dim_target_k
        if rep.holds_H:
            assert rep.dim_kd == rep.dim_target_k
