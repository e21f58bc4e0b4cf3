"""Reachable channel sets of controlled Lindblad systems.

Propagates piecewise-constant control schedules as time-ordered products
of segment exponentials, samples the semigroup of reachable channels,
audits the contraction witness s(t) = sum_k ||X(t)B_k||^2 along
trajectories of unital dynamics, and steers toward target channels with
a derivative-free heuristic over a fixed number of switches.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .lindblad import ControlSystem, Superop, coherence_rep, lindbladian, vec
from .matcore import expm, fro

U_MAX = 5.0


@dataclass(frozen=True)
class Schedule:
    """Piecewise-constant control schedule: (duration, amplitudes) segments."""

    segments: tuple

    def __post_init__(self):
        segs = []
        for dur, u in self.segments:
            dur = float(dur)
            if dur < 0:
                raise ValueError(f"segment duration must be nonnegative, got {dur}")
            segs.append((dur, tuple(float(v) for v in np.atleast_1d(u))))
        object.__setattr__(self, "segments", tuple(segs))

    @property
    def n_segments(self) -> int:
        return len(self.segments)

    @property
    def total_duration(self) -> float:
        return float(sum(d for d, _ in self.segments))


def _segment_generators(sys: ControlSystem, sched: Schedule) -> list:
    gens = []
    for _, u in sched.segments:
        if len(u) != sys.n_controls:
            raise ValueError(f"segment has {len(u)} amplitudes for "
                             f"{sys.n_controls} controls")
        gens.append(np.asarray(lindbladian(sys, u).matrix))
    return gens


def propagate(sys: ControlSystem, sched: Schedule) -> Superop:
    """Time-ordered product of segment propagators.

    Earlier segments act first, so their exponentials sit on the right of
    the matrix product; an empty schedule gives the identity channel.
    """
    gens = _segment_generators(sys, sched)
    dim = np.asarray(lindbladian(sys, np.zeros(sys.n_controls)).matrix).shape[0]
    out = np.eye(dim, dtype=complex if sys.rep != "r3" else float)
    for (dur, _), gen in zip(sched.segments, gens):
        out = expm(-dur * gen) @ out
    return Superop(matrix=out, rep=sys.rep)


def sample_reachable(sys: ControlSystem, n: int, depth: int,
                     horizon: float = 1.0, seed: int = 0,
                     u_max: float = U_MAX) -> list:
    """n random reachable channels as products of `depth` exponentials.

    Segment durations are uniform on (0, horizon/depth], amplitudes
    uniform on [-u_max, u_max].  Each sample draws from its own child
    stream spawned from `seed`, so results are reproducible regardless
    of evaluation order.
    """
    if depth < 1:
        raise ValueError(f"depth must be at least 1, got {depth}")
    m = sys.n_controls
    out = []
    for child in np.random.SeedSequence(seed).spawn(n):
        rng = np.random.default_rng(child)
        segs = []
        for _ in range(depth):
            dur = (horizon / depth) * (1.0 - rng.uniform(0.0, 1.0))
            segs.append((dur, rng.uniform(-u_max, u_max, size=m)))
        out.append(propagate(sys, Schedule(tuple(segs))))
    return out


def _coherence_matrix(t: Superop) -> np.ndarray:
    """Coherence-sector matrix of a channel (identity map for r3 carriers)."""
    if t.rep == "r3":
        return np.asarray(t.matrix, dtype=float)
    return coherence_rep(t)


def contraction_audit(sys: ControlSystem, sched: Schedule,
                      grid: int = 50, tol: float = 1e-9) -> dict:
    """Contraction witness s(t) = ||X(t)||_F^2 along a schedule.

    X(t) is the coherence-sector matrix of the propagated channel, so
    s(t) = sum_k ||X(t)B_k||^2 over the orthonormal traceless basis; for
    unital dissipative dynamics it never increases, and for closed
    systems it is constant.  Reports the values on a uniform time grid
    and the largest positive increment.
    """
    if sys.rep != "r3":
        drift = lindbladian(sys, np.zeros(sys.n_controls))
        n = drift.hilbert_dim
        defect = np.linalg.norm(np.asarray(drift.matrix) @ vec(np.eye(n)))
        if defect > 1e-10 * max(1.0, float(np.linalg.norm(drift.matrix))):
            raise ValueError("contraction audit requires unital dynamics")
    if grid < 2:
        raise ValueError(f"grid must have at least 2 points, got {grid}")
    gens = _segment_generators(sys, sched)
    total = sched.total_duration
    times = np.linspace(0.0, total, int(grid))
    bounds = np.cumsum([0.0] + [d for d, _ in sched.segments])
    dim = gens[0].shape[0] if gens else 3
    vals = []
    for t in times:
        x = np.eye(dim, dtype=complex if sys.rep != "r3" else float)
        for k, gen in enumerate(gens):
            lo, hi = bounds[k], bounds[k + 1]
            if t <= lo:
                break
            x = expm(-(min(t, hi) - lo) * gen) @ x
        s = float(np.linalg.norm(_coherence_matrix(Superop(matrix=x, rep=sys.rep)),
                                 "fro") ** 2)
        vals.append(s)
    diffs = np.diff(vals)
    return {
        "times": [float(t) for t in times],
        "s": vals,
        "initial": vals[0],
        "final": vals[-1],
        "max_increment": float(max(0.0, diffs.max())) if len(diffs) else 0.0,
        "monotone": bool(np.all(diffs <= tol)) if len(diffs) else True,
        "tol": tol,
    }


def steer(sys: ControlSystem, target, switches: int, budget: int = 20,
          seed: int = 0, u_max: float = U_MAX) -> tuple:
    """Heuristic schedule search toward a target channel.

    Minimizes the Frobenius distance between the propagated channel and
    the target over switches*(1 + n_controls) parameters (square-root
    durations plus raw amplitudes) using derivative-free simplex descent
    from `budget` seeded random restarts.  Best-so-far bookkeeping makes
    the returned distance monotone in the evaluation history.  This is a
    heuristic: no optimality claim is made.
    """
    if isinstance(target, Superop) and target.rep != sys.rep:
        raise ValueError(f"target representation {target.rep!r} does not "
                         f"match system {sys.rep!r}")
    tmat = np.asarray(target.matrix if isinstance(target, Superop) else target)
    if switches < 0:
        raise ValueError(f"switches must be nonnegative, got {switches}")
    m = sys.n_controls
    dim = tmat.shape[0]
    if switches == 0:
        sched = Schedule(())
        return sched, float(fro(np.eye(dim) - tmat))
    width = 1 + m
    best = {"val": np.inf, "params": None}

    def unpack(p):
        segs = []
        for j in range(switches):
            block = p[j * width:(j + 1) * width]
            segs.append((block[0] ** 2, block[1:]))
        return Schedule(tuple(segs))

    def objective(p):
        d = float(fro(np.asarray(propagate(sys, unpack(p)).matrix) - tmat))
        if d < best["val"]:
            best["val"] = d
            best["params"] = np.array(p, dtype=float)
        return d

    for child in np.random.SeedSequence(seed).spawn(budget):
        rng = np.random.default_rng(child)
        x0 = np.empty(switches * width)
        for j in range(switches):
            x0[j * width] = np.sqrt(rng.uniform(0.05, 1.0))
            x0[j * width + 1:(j + 1) * width] = rng.uniform(-u_max, u_max, size=m)
        minimize(objective, x0, method="Nelder-Mead",
                 options={"maxiter": 400 * switches * width,
                          "xatol": 1e-10, "fatol": 1e-13})
    return unpack(best["params"]), float(best["val"])
