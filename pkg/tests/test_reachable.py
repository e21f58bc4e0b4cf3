"""Piecewise-constant schedules, reachable samples, steering."""

from __future__ import annotations

import numpy as np
import pytest

from liewedge.channels import example2, sigma
from liewedge.lindblad import ControlSystem, Superop, cptp_audit, lindbladian
from liewedge.matcore import expm, fro
from liewedge.reachable import (Schedule, contraction_audit, propagate,
                                sample_reachable, steer)

RNG = np.random.default_rng(62)


def _qubit_system(gamma: float = 0.4) -> ControlSystem:
    return ControlSystem(rep="qubit", drift_H=sigma("z") / 2.0,
                         controls=(sigma("x") / 2.0,),
                         lindblad_ops=((sigma("z") / 2.0, gamma),))


def test_schedule_validation_and_totals():
    s = Schedule(((0.5, (1.0,)), (0.25, (-2.0,))))
    assert s.n_segments == 2
    assert np.isclose(s.total_duration, 0.75)
    with pytest.raises(ValueError):
        Schedule(((-0.1, (1.0,)),))


def test_propagate_matches_manual_product():
    sys = _qubit_system()
    sched = Schedule(((0.3, (0.7,)), (0.2, (-1.1,))))
    t = np.asarray(propagate(sys, sched).matrix)
    l1 = np.asarray(lindbladian(sys, (0.7,)).matrix)
    l2 = np.asarray(lindbladian(sys, (-1.1,)).matrix)
    manual = expm(-0.2 * l2) @ expm(-0.3 * l1)
    assert np.max(np.abs(t - manual)) < 1e-12


def test_propagate_validates_amplitude_count():
    sys = _qubit_system()
    with pytest.raises(ValueError):
        propagate(sys, Schedule(((0.1, (1.0, 2.0)),)))


def test_sample_reachable_reproducible_and_cptp():
    sys = _qubit_system()
    a = sample_reachable(sys, 6, 3, seed=5)
    b = sample_reachable(sys, 6, 3, seed=5)
    for s, t in zip(a, b):
        assert np.array_equal(np.asarray(s.matrix), np.asarray(t.matrix))
    c = sample_reachable(sys, 6, 3, seed=6)
    assert not np.array_equal(np.asarray(a[0].matrix), np.asarray(c[0].matrix))
    for s in a:
        audit = cptp_audit(s)
        assert audit["is_tp"] and audit["is_cp"]


def test_sample_reachable_r3_shapes_and_contraction():
    sys = example2()
    samples = sample_reachable(sys, 5, 4, seed=2)
    for s in samples:
        m = np.asarray(s.matrix)
        assert m.shape == (3, 3)
        assert np.linalg.norm(m, 2) <= 1.0 + 1e-10


def test_sample_reachable_validates_depth():
    with pytest.raises(ValueError):
        sample_reachable(_qubit_system(), 3, 0)


def test_contraction_audit_monotone():
    sys = _qubit_system()
    sched = Schedule(((0.4, (0.9,)), (0.6, (-0.3,))))
    audit = contraction_audit(sys, sched, grid=80)
    assert audit["monotone"]
    assert audit["max_increment"] <= 1e-9
    assert audit["final"] <= audit["initial"] + 1e-12
    assert len(audit["times"]) == len(audit["s"]) == 80


def test_contraction_audit_closed_system_is_constant():
    sys = ControlSystem(rep="qubit", drift_H=sigma("z") / 2.0,
                        controls=(sigma("x") / 2.0,), lindblad_ops=())
    sched = Schedule(((1.0, (0.5,)),))
    audit = contraction_audit(sys, sched, grid=40)
    svals = np.asarray(audit["s"])
    assert np.max(np.abs(svals - svals[0])) < 1e-10


def _strang_schedule(n: int, dt: float) -> Schedule:
    """n symmetrized steps (+1 half, -1 full, +1 half) as a flat schedule."""
    segs = [(dt / 2.0, (1.0,))]
    for k in range(n):
        segs.append((dt, (-1.0,)))
        if k < n - 1:
            segs.append((dt, (1.0,)))
    segs.append((dt / 2.0, (1.0,)))
    return Schedule(tuple(segs))


def test_trotter_defect_scales_second_order():
    """Symmetrized control switching between u = +1 and u = -1 converges to
    the averaged (drift-only) generator at second order in the step size."""
    sys = _qubit_system()
    # each symmetrized step covers 2*dt, so n steps of dt = 1/n cover t = 2
    target = np.asarray(expm(-2.0 * np.asarray(lindbladian(sys).matrix)))
    counts = (4, 8, 16, 32)
    defects = []
    for n in counts:
        total = np.asarray(propagate(sys, _strang_schedule(n, 1.0 / n)).matrix)
        defects.append(np.max(np.abs(total - target)))
    slopes = np.diff(np.log(defects)) / np.diff(np.log(1.0 / np.asarray(counts)))
    assert abs(np.mean(slopes) - 2.0) < 0.2


def test_sampled_products_stay_in_the_channel_semigroup():
    """Products of reachable samples are again CPTP: the sampled set sits
    inside a semigroup, not just a star-shaped neighborhood of identity."""
    sys = _qubit_system()
    samples = sample_reachable(sys, 4, 2, seed=9)
    for s in samples:
        for t in samples:
            product = np.asarray(s.matrix) @ np.asarray(t.matrix)
            audit = cptp_audit(Superop(matrix=product, rep="qubit"))
            assert audit["is_tp"] and audit["is_cp"]


def test_steer_zero_switches_reports_identity_distance():
    sys = _qubit_system()
    target = propagate(sys, Schedule(((0.5, (0.3,)),)))
    sched, dist = steer(sys, target, 0)
    assert sched.n_segments == 0
    diff = np.asarray(target.matrix) - np.eye(4)
    assert np.isclose(dist, np.linalg.norm(diff))


def test_steer_recovers_single_switch_target():
    sys = _qubit_system()
    truth = Schedule(((0.37, (0.8,)),))
    target = propagate(sys, truth)
    sched, dist = steer(sys, target, 1, budget=8, seed=3)
    assert dist < 1e-6
    assert sched.n_segments == 1


def test_steer_validates_inputs():
    sys = _qubit_system()
    target = propagate(sys, Schedule(((0.1, (0.0,)),)))
    with pytest.raises(ValueError):
        steer(sys, target, -1)
    bad = Superop(matrix=np.eye(3), rep="r3")
    with pytest.raises(ValueError):
        steer(sys, bad, 1)
