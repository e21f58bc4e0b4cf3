"""BCH products, tangent cones, and the Lie-semialgebra obstruction."""

from __future__ import annotations

import numpy as np
import pytest
from scipy.linalg import logm

from liewedge.channels import (H_X, H_Y, H_Z, P_X, P_Y, P_Z, example2,
                               example3)
from liewedge.liealg import subspace_leq
from liewedge.matcore import comm, expm, fro, inner, orthonormal_span
from liewedge.semialgebra import (bch, bch_witness, expected_tangent,
                                  orbit_wedge, semialgebra_case,
                                  semialgebra_probe, tangent_space)
from liewedge.wedge import initial_wedge, saturate

RNG = np.random.default_rng(2718)

GAMMA2 = np.diag([1.0, 0.0, 1.0])
GAMMA3 = np.diag([1.0, 1.0, 2.0])


def _true_log_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.real(logm(expm(a) @ expm(b)))


def test_bch_low_orders():
    a, b = RNG.normal(size=(2, 3, 3))
    assert np.allclose(bch(a, b, order=1), a + b)
    assert np.allclose(bch(a, b, order=2), a + b + comm(a, b) / 2.0)
    with pytest.raises(ValueError):
        bch(a, b, order=5)
    with pytest.raises(ValueError):
        bch(a, np.eye(4))


def test_bch_order4_truncation_error_scales_as_t5():
    a, b = 0.5 * RNG.normal(size=(2, 3, 3))
    ts = np.array([0.2, 0.1, 0.05, 0.025])
    errs = [fro(bch(t * a, t * b, order=4) - _true_log_product(t * a, t * b))
            for t in ts]
    slopes = np.diff(np.log(errs)) / np.diff(np.log(ts))
    assert abs(np.mean(slopes) - 5.0) < 0.35


def test_bch_canonical_product_example2_pair():
    a = GAMMA2 + H_Z
    b = GAMMA2 + H_X
    expected = (2.0 * GAMMA2 + H_X + H_Z + 0.5 * (H_Y + P_X + P_Z))
    assert fro(bch(a, b, order=2) - expected) < 1e-14


def test_bch_canonical_product_example3_pair():
    a = GAMMA3 + H_Z
    b = np.asarray(H_Y)
    expected = GAMMA3 + H_Y + H_Z - 0.5 * (H_X + P_Y)
    assert fro(bch(a, b, order=2) - expected) < 1e-14


def test_witness_on_example2_wedge():
    w = saturate(initial_wedge(example2()), orbit_samples=360)
    a = GAMMA2 + H_Z
    b = GAMMA2 + H_X
    wit = bch_witness(w, a, b, t_grid=(1e-3,))
    assert wit is not None
    off = wit.offending_component
    ref = (P_X + P_Z) / fro(P_X + P_Z)
    cos = inner(off, ref) / fro(off)
    assert cos >= 1.0 - 1e-4


def test_witness_on_example3_wedge():
    w = saturate(initial_wedge(example3()), orbit_samples=360)
    a = GAMMA3 + H_Z
    wit = bch_witness(w, a, np.asarray(H_Y), t_grid=(1e-3,))
    assert wit is not None
    off = wit.offending_component
    ref = (H_X + P_Y) / fro(H_X + P_Y)
    cos = inner(off, ref) / fro(off)
    # the curved cone absorbs part of the tail, flipping the leftover sign
    assert abs(cos) >= 0.85
    assert cos < 0.0


def test_probe_finds_witness_on_example2():
    w = saturate(initial_wedge(example2()), orbit_samples=360)
    wit = semialgebra_probe(w, pair_samples=60, t_grid=(1e-2,), seed=0)
    assert wit is not None
    assert wit.residual > 0.0


def test_probe_clears_isotropic_orbit_wedge():
    w = orbit_wedge((1.0, 1.0, 1.0), hull_samples=96, seed=0)
    assert semialgebra_probe(w, pair_samples=150, t_grid=(1e-2,), seed=1) is None


def test_tangent_space_requires_membership():
    w = orbit_wedge((3.0, 2.0, 1.0), hull_samples=96, seed=0)
    with pytest.raises(ValueError):
        tangent_space(w, np.asarray(H_X) * 50.0 - np.diag([9.0, 0.0, 0.0]))


CASE_TABLE = {
    # case -> (tangent dim, is_semialgebra)
    "i": (4, True),
    "ii": (6, False),
    "iii": (6, False),
    "iv": (7, False),
}


def test_semialgebra_cases_reference_dims_and_verdicts():
    for cid, (dim, is_sa) in CASE_TABLE.items():
        r = semialgebra_case(cid)
        assert r["tangent_dim"] == dim
        assert r["expected_dim"] == dim
        assert r["tangent_matches_closed_form"]
        assert r["is_semialgebra"] == is_sa
        assert r["verdict"] == ("semialgebra" if is_sa else "not-semialgebra")


def test_semialgebra_case_ii_witness_is_exact():
    r = semialgebra_case("ii")
    expected = -np.asarray(H_Z) + np.diag([-2.0, 2.0, 0.0])
    assert np.allclose(r["witness"], expected, atol=1e-12)
    assert r["witness_residual"] > 0.5


def test_semialgebra_case_iii_witness_bracket():
    r = semialgebra_case("iii")
    expected = np.asarray(H_Y) + 2.0 * np.diag([1.0, 0.0, -1.0])
    assert np.allclose(r["witness"], expected, atol=1e-12)


def test_tangent_contains_edge_and_generator_line():
    """The tangent cone at an interior-of-face point always carries the
    edge and the ray through the point itself."""
    for cid in CASE_TABLE:
        r = semialgebra_case(cid)
        w = orbit_wedge(r["rates"])
        t = tangent_space(w, np.asarray(r["A"]))
        need = orthonormal_span([H_X, H_Y, H_Z, np.asarray(r["A"])],
                                shape=(3, 3), complex_field=False)
        assert subspace_leq(need, t)


def test_expected_tangent_matches_case_dims():
    for cid, (dim, _) in CASE_TABLE.items():
        rates = semialgebra_case(cid)["rates"]
        assert expected_tangent(cid, rates).dim == dim


def test_general_rate_patterns_give_six_dim_tangents():
    for rates in ((2.0, 1.0, 1.0), (2.0, 2.0, 1.0)):
        w = orbit_wedge(rates, hull_samples=192, seed=0)
        a = np.diag(sorted(rates, reverse=True)) + np.asarray(H_Z)
        assert tangent_space(w, a).dim == 6


def test_orbit_wedge_validates_rates():
    with pytest.raises(ValueError):
        orbit_wedge((1.0, -2.0, 0.5))
