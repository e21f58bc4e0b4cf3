"""Core linear-algebra helpers: inner products, closures, subspaces."""

from __future__ import annotations

import numpy as np
import pytest

from liewedge.matcore import (RANK_TOL, Subspace, comm, eig_sym, expm, fro,
                              inner, orthonormal_span, realify, unrealify)

RNG = np.random.default_rng(20260825)


def test_inner_is_real_trace_pairing():
    a = RNG.normal(size=(4, 4)) + 1j * RNG.normal(size=(4, 4))
    b = RNG.normal(size=(4, 4)) + 1j * RNG.normal(size=(4, 4))
    assert np.isclose(inner(a, b), np.real(np.trace(a.conj().T @ b)))
    assert np.isclose(fro(a) ** 2, inner(a, a))


def test_comm_antisymmetry_and_jacobi():
    a, b, c = (RNG.normal(size=(3, 3)) for _ in range(3))
    assert np.allclose(comm(a, b), -comm(b, a))
    jac = comm(a, comm(b, c)) + comm(b, comm(c, a)) + comm(c, comm(a, b))
    assert np.max(np.abs(jac)) < 1e-12


def test_expm_matches_series_on_nilpotent():
    n = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]])
    exact = np.eye(3) + n + n @ n / 2.0
    assert np.allclose(expm(n), exact, atol=1e-14)


def test_eig_sym_descending():
    s = RNG.normal(size=(5, 5))
    s = (s + s.T) / 2.0
    w, v = eig_sym(s)
    assert np.all(np.diff(w) <= 1e-12)
    assert np.allclose(v @ np.diag(w) @ v.T, s, atol=1e-12)


def test_realify_round_trip():
    m = RNG.normal(size=(3, 3)) + 1j * RNG.normal(size=(3, 3))
    vec = realify(m, True)
    assert vec.dtype.kind == "f"
    assert np.allclose(unrealify(vec, (3, 3), True), m)
    r = RNG.normal(size=(3, 3))
    assert np.allclose(unrealify(realify(r, complex_field=False), (3, 3), False), r)


def test_subspace_projection_and_membership():
    basis = [np.diag([1.0, 0.0, 0.0]), np.diag([0.0, 1.0, 0.0])]
    sub = orthonormal_span(basis, shape=(3, 3), complex_field=False)
    assert sub.dim == 2
    x = np.diag([2.0, -3.0, 0.0])
    assert sub.contains(x)
    assert np.allclose(sub.project(x), x)
    y = np.diag([0.0, 0.0, 1.0])
    assert not sub.contains(y)
    assert fro(sub.project(y)) < 1e-12
    assert np.isclose(sub.residual(y), 1.0)


def test_orthonormal_span_deduplicates_dependent_inputs():
    a = RNG.normal(size=(3, 3))
    sub = orthonormal_span([a, 2.0 * a, a + 1e-14 * np.eye(3)],
                           shape=(3, 3), complex_field=False)
    assert sub.dim == 1


def test_orthonormal_span_empty():
    sub = orthonormal_span([], shape=(3, 3), complex_field=False)
    assert sub.dim == 0
    z = RNG.normal(size=(3, 3))
    assert fro(sub.project(z)) == 0.0


def test_rank_tol_default():
    assert RANK_TOL == 1e-9


def test_complex_subspace_real_span_distinguishes_i_multiples():
    h = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
    sub = orthonormal_span([h], shape=(2, 2), complex_field=True)
    assert sub.contains(2.0 * h)
    assert not sub.contains(1j * h)
