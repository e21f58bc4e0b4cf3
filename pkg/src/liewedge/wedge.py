"""Lie wedges of controlled semigroups and their inner-approximation loop.

A wedge is stored as ``edge + (-cone)``: the edge is a Lie subalgebra kept
as an orthonormal `Subspace`, and the cone is the *positive* convex cone
spanned by conjugated drift generators (so the physical wedge consists of
the edge plus the negatives of the cone elements).  Cones carry finitely
many unit-norm sampled generators plus, where available, an analytic
conjugation family; every membership oracle is an inner approximation and
is documented as such.

The saturation loop follows the inner-approximation procedure: grow the
edge by the cone's lineality and Lie-close it, conjugate the cone by
exponentials of edge elements, append member-novel generators, and stop
once a full round adds nothing while the edge dimension is stable.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import minimize, minimize_scalar, nnls

from .liealg import lie_closure
from .lindblad import (ControlSystem, ad_hat, coherence_rep, control_directions,
                       drift_direction, pauli_basis, superop_from_coherence)
from .matcore import Subspace, eig_sym, expm, fro, inner, orthonormal_span, realify, unrealify

_CG_MAX_NEW = 60


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("LIEWEDGE_THREADS", "1")))
    except ValueError:
        return 1


# ---------------------------------------------------------------------------
# analytic conjugation families
# ---------------------------------------------------------------------------

def _period(seed: np.ndarray) -> float:
    """Period of theta -> expm(theta*seed) for a skew/anti-Hermitian seed."""
    w = np.linalg.eigvals(np.asarray(seed, dtype=complex))
    omega = float(np.abs(np.imag(w)).max()) if w.size else 0.0
    return 2.0 * np.pi / omega if omega > 1e-9 else 2.0 * np.pi


@dataclass(frozen=True)
class ConjugationFamily:
    """Parameterized family theta -> Ad_{expm(sum theta_i seed_i)}(base).

    ``kind`` selects the sampling/support strategy: 'grid1' (periodic
    one-parameter sweep), 'grid2' (commuting two-parameter torus), or
    'orbit' (random exponentials of the whole edge).  The base is stored
    orthogonal to the edge; since edge conjugation is an isometry fixing
    the edge, every family element stays orthogonal to it.
    """

    kind: str
    seeds: tuple
    base: np.ndarray
    edge: Subspace
    rep: str
    periods: tuple = None

    def __post_init__(self):
        if self.periods is None:
            object.__setattr__(self, "periods", tuple(_period(s) for s in self.seeds))

    @property
    def n_params(self) -> int:
        return len(self.seeds)

    def _phase_data(self):
        """Co-diagonalization of the (commuting, anti-Hermitian) seeds.

        Lets grid support functions evaluate f(theta) = <element(theta), D>
        as a short exponential sum instead of repeated expm calls.  Returns
        None when a seed is not anti-Hermitian (expm fallback is used).
        """
        cached = getattr(self, "_phase_cache", False)
        if cached is not False:
            return cached
        data = None
        hs = [1j * np.asarray(s, dtype=complex) for s in self.seeds]
        if all(np.linalg.norm(h - h.conj().T) <= 1e-10 * max(1.0, np.linalg.norm(h))
               for h in hs):
            if len(hs) == 1:
                w0, q = np.linalg.eigh(hs[0])
                ws = [w0]
            else:
                # commuting seeds: a generic combination separates the joint
                # eigenbasis, then each seed is diagonal in it
                _, q = np.linalg.eigh(hs[0] + np.sqrt(2.0) * hs[1])
                ws = [np.real(np.diag(q.conj().T @ h @ q)) for h in hs]
                ok = all(np.linalg.norm(q.conj().T @ h @ q - np.diag(w)) < 1e-8
                         for h, w in zip(hs, ws))
                if not ok:
                    object.__setattr__(self, "_phase_cache", None)
                    return None
            m = q.conj().T @ np.asarray(self.base, dtype=complex) @ q
            deltas = [w[:, None] - w[None, :] for w in ws]
            data = (q, m, deltas)
        object.__setattr__(self, "_phase_cache", data)
        return data

    def _phase_values(self, thetas: np.ndarray, direction: np.ndarray) -> np.ndarray:
        """f(theta) on a batch of parameter vectors via the eigenphase sum."""
        q, m, deltas = self._phase_data()
        nmat = q.conj().T @ np.asarray(direction, dtype=complex) @ q
        coeff = (np.conj(m) * nmat).ravel()
        thetas = np.atleast_2d(np.asarray(thetas, dtype=float))
        phase = sum(np.multiply.outer(thetas[:, i], d.ravel())
                    for i, d in enumerate(deltas))
        return np.real(np.exp(1j * phase) @ coeff)

    def conjugate(self, g: np.ndarray, params) -> np.ndarray:
        params = np.atleast_1d(np.asarray(params, dtype=float))
        a = sum(p * s for p, s in zip(params, self.seeds))
        u = expm(a)
        return u @ g @ expm(-a)

    def element(self, params) -> np.ndarray:
        return self.conjugate(self.base, params)

    def sweep(self, count: int, rng: np.random.Generator):
        """Deterministic grid (grid kinds) or random exponentials (orbit)."""
        if self.kind == "grid1":
            thetas = np.arange(count) * (self.periods[0] / count)
            return [(np.array([t]), self.element([t])) for t in thetas]
        if self.kind == "grid2":
            n = max(2, int(np.ceil(np.sqrt(count))))
            t1 = np.arange(n) * (self.periods[0] / n)
            t2 = np.arange(n) * (self.periods[1] / n)
            out = []
            u1 = [expm(t * self.seeds[0]) for t in t1]
            u2 = [expm(t * self.seeds[1]) for t in t2]
            u1i = [expm(-t * self.seeds[0]) for t in t1]
            u2i = [expm(-t * self.seeds[1]) for t in t2]
            for i in range(n):
                for j in range(n):
                    g = u1[i] @ u2[j] @ self.base @ u2i[j] @ u1i[i]
                    out.append((np.array([t1[i], t2[j]]), g))
            return out
        params = rng.normal(scale=np.pi / np.sqrt(self.n_params),
                            size=(count, self.n_params))
        workers = _threads()
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as ex:
                elems = list(ex.map(self.element, params))
        else:
            elems = [self.element(p) for p in params]
        return list(zip(params, elems))

    # -- support function -------------------------------------------------

    def _value(self, params, direction) -> float:
        return inner(self.element(params), direction)

    def support(self, direction: np.ndarray, rng: np.random.Generator = None):
        """Family element maximizing the inner product against `direction`.

        Exact by eigenvector alignment for full-rotation orbits on the
        3-dimensional carrier (real or via the coherence representation);
        dense-grid plus local refinement otherwise, which can only
        under-estimate the true support (inner approximation).
        """
        if self.kind == "orbit":
            exact = self._support_aligned(direction)
            if exact is not None:
                return exact
            return self._support_random(direction, rng)
        if self.kind == "grid1":
            return self._support_grid1(direction)
        return self._support_grid2(direction)

    def _support_grid1(self, direction):
        period = self.periods[0]
        n = 2048
        thetas = np.arange(n) * (period / n)
        if self._phase_data() is not None:
            vals = self._phase_values(thetas[:, None], direction)
            f = lambda t: -float(self._phase_values([[t]], direction)[0])
        else:
            vals = np.array([self._value([t], direction) for t in thetas])
            f = lambda t: -self._value([t], direction)
        k = int(np.argmax(vals))
        res = minimize_scalar(f, bounds=(thetas[k] - period / n,
                                         thetas[k] + period / n),
                              method="bounded", options={"xatol": 1e-12})
        t_best, v_best = float(res.x), float(-res.fun)
        if v_best < vals[k]:
            t_best, v_best = float(thetas[k]), float(vals[k])
        return self.element([t_best]), v_best

    def _support_grid2(self, direction):
        n = 64
        t1 = np.arange(n) * (self.periods[0] / n)
        t2 = np.arange(n) * (self.periods[1] / n)
        grid = np.stack([np.repeat(t1, n), np.tile(t2, n)], axis=1)
        if self._phase_data() is not None:
            vals = self._phase_values(grid, direction)
            f = lambda p: -float(self._phase_values([p], direction)[0])
        else:
            vals = np.array([self._value(p, direction) for p in grid])
            f = lambda p: -self._value(p, direction)
        k = int(np.argmax(vals))
        res = minimize(f, x0=grid[k], method="Nelder-Mead",
                       options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 400})
        params, v_best = np.asarray(res.x), float(-res.fun)
        if v_best < vals[k]:
            params, v_best = grid[k], float(vals[k])
        return self.element(params), v_best

    def _support_aligned(self, direction):
        """Closed-form support for full-rotation orbits of a symmetric base."""
        if self.rep == "r3" and self.edge.dim == 3:
            base_sym = (self.base + self.base.T) / 2
            if fro(base_sym - self.base) > 1e-10 * max(1.0, fro(self.base)):
                return None
            d_sym = (direction + direction.T) / 2
            w_b, _ = eig_sym(base_sym)
            w_d, v_d = eig_sym(d_sym)
            g = v_d @ np.diag(w_b) @ v_d.T
            return g, float(np.dot(w_b, w_d))
        if self.rep == "qubit" and self.edge.dim == 3:
            try:
                 cr_b = coherence_rep(self.base, rep="qubit")
                 cr_d = coherence_rep(direction, rep="qubit")
            except ValueError:
                return None
            cr_bs = (cr_b + cr_b.T) / 2
            if fro(cr_bs - cr_b) > 1e-10 * max(1.0, fro(cr_b)):
                return None
            d_sym = (cr_d + cr_d.T) / 2
            w_b, _ = eig_sym(cr_bs)
            w_d, v_d = eig_sym(d_sym)
            g_cr = v_d @ np.diag(w_b) @ v_d.T
            g = superop_from_coherence(g_cr, rep="qubit").matrix
            return g, float(np.dot(w_b, w_d))
        return None

    def _support_random(self, direction, rng):
        rng = np.random.default_rng(0) if rng is None else rng
        best, best_params = -np.inf, np.zeros(self.n_params)
        for p, g in self.sweep(128, rng):
            v = inner(g, direction)
            if v > best:
                best, best_params = v, p
        res = minimize(lambda p: -self._value(p, direction), x0=best_params,
                       method="Nelder-Mead",
                       options={"xatol": 1e-9, "fatol": 1e-13, "maxiter": 300})
        params = res.x if -res.fun > best else best_params
        return self.element(params), max(float(-res.fun), best)


# ---------------------------------------------------------------------------
# cones
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Cone:
    """Finitely sampled convex cone with optional analytic parameterization.

    Generators are normalized to unit norm under the trace inner product.
    `pointed` is None until established (by certificate or lineality run).
    """

    generators: tuple
    shape: tuple
    complex_field: bool
    analytic: ConjugationFamily = None
    pointed: bool = None
    tol: float = 1e-8
    stack: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        gens = []
        for g in self.generators:
            g = np.asarray(g)
            n = fro(g)
            if n > 0:
                gens.append(g / n)
        object.__setattr__(self, "generators", tuple(gens))
        if self.stack is None:
            d = int(np.prod(self.shape)) * (2 if self.complex_field else 1)
            cols = [realify(g, self.complex_field) for g in self.generators]
            object.__setattr__(
                self, "stack",
                np.stack(cols, axis=1) if cols else np.zeros((d, 0)))

    @property
    def n_generators(self) -> int:
        return len(self.generators)

    def span(self) -> Subspace:
        return orthonormal_span(list(self.generators), shape=self.shape,
                                complex_field=self.complex_field)


def _cone_fit(c: Cone, x: np.ndarray, max_new: int = _CG_MAX_NEW,
              rng: np.random.Generator = None,
              target: float = None) -> tuple:
    """Nonnegative fit of x by the cone; returns (residual norm, fit).

    Solves nonnegative least squares over the stored generators; while the
    residual stays above `target` (default: cone tolerance, relative) and
    an analytic family is attached, support elements of the family are
    appended (to a working copy only) and the problem re-solved.  The
    residual can only over-estimate the true distance (inner
    approximation); the fit is always a genuine cone member.
    """
    b = realify(x, c.complex_field)
    nb = np.linalg.norm(b)
    zero = np.zeros(c.shape, dtype=complex if c.complex_field else float)
    if c.stack.shape[1] == 0 and c.analytic is None:
        return float(nb), zero
    a = c.stack
    if target is None:
        target = c.tol * max(1.0, nb)
    coef, rnorm = nnls(a, b) if a.shape[1] else (np.zeros(0), nb)
    if c.analytic is None:
        fit = a @ coef if a.shape[1] else b * 0.0
        return float(rnorm), unrealify(fit, c.shape, c.complex_field)
    added = 0
    # Boundary shortcut: for x on an extreme ray the residual-driven gain
    # vanishes quadratically with the angular error, so column generation
    # stalls; aligning the family against x itself certifies such points
    # with a single extra column.
    if rnorm > target:
        g, _val = c.analytic.support(x, rng)
        ng = fro(g)
        if ng > 0.0:
            a = np.concatenate([a, realify(g / ng, c.complex_field)[:, None]],
                               axis=1)
            coef, rnorm = nnls(a, b)
            added += 1
    while rnorm > target and added < max_new:
        r = b - (a @ coef if a.shape[1] else 0.0)
        direction = unrealify(r, c.shape, c.complex_field)
        g, _val = c.analytic.support(direction, rng)
        ng = fro(g)
        if ng == 0.0:
            break
        col = realify(g / ng, c.complex_field)
        gain = float(col @ r)
        if gain <= 1e-14 * max(1.0, np.linalg.norm(r)):
            break
        a = np.concatenate([a, col[:, None]], axis=1)
        coef, new_rnorm = nnls(a, b)
        stalled = new_rnorm > rnorm - 1e-15
        rnorm = new_rnorm
        if stalled:
            break
        added += 1
    fit = a @ coef if a.shape[1] else b * 0.0
    return float(rnorm), unrealify(fit, c.shape, c.complex_field)


def cone_residual(c: Cone, x: np.ndarray, max_new: int = _CG_MAX_NEW,
                  rng: np.random.Generator = None) -> float:
    """Distance from x to the sampled cone (see `_cone_fit`)."""
    return _cone_fit(c, x, max_new, rng)[0]


def cone_contains(c: Cone, x: np.ndarray, tol: float = None,
                  rng: np.random.Generator = None) -> bool:
    """Inner-approximate membership test (see `cone_residual`)."""
    tol = c.tol if tol is None else tol
    return cone_residual(c, x, rng=rng) <= tol * max(1.0, fro(x))


def lineality(c: Cone, tol: float = None) -> Subspace:
    """Directions g with both g and -g in the cone.

    A strictly positive mean functional certifies pointedness cheaply;
    otherwise each generator's negative is tested for membership.
    """
    tol = c.tol if tol is None else tol
    if c.n_generators == 0:
        return orthonormal_span([], shape=c.shape, complex_field=c.complex_field)
    h = c.stack.mean(axis=1)
    nh = np.linalg.norm(h)
    if nh > 0 and (c.stack.T @ (h / nh)).min() > 10 * tol:
        return orthonormal_span([], shape=c.shape, complex_field=c.complex_field)
    two_sided = [g for g in c.generators if cone_contains(c, -g, tol)]
    return orthonormal_span(two_sided, shape=c.shape, complex_field=c.complex_field)


# ---------------------------------------------------------------------------
# wedges
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Wedge:
    """edge + (-cone) with bookkeeping from the saturation loop."""

    edge: Subspace
    cone: Cone
    rep: str
    edge_seeds: tuple = ()
    drift: np.ndarray = None
    saturation: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        """Linear dimension of edge plus cone span (edge-orthogonal part)."""
        perp = [g - self.edge.project(g) for g in self.cone.generators]
        extra = orthonormal_span(perp, shape=self.cone.shape,
                                 complex_field=self.cone.complex_field)
        return self.edge.dim + extra.dim


def wedge_contains(w: Wedge, x: np.ndarray, tol: float = None,
                   rng: np.random.Generator = None) -> bool:
    """Membership of x in edge + cone (positive picture): the edge component
    is unconstrained, the edge-orthogonal part must lie in the cone."""
    perp = x - w.edge.project(x)
    if fro(perp) <= (w.cone.tol if tol is None else tol) * max(1.0, fro(x)):
        return True
    return cone_contains(w.cone, perp, tol, rng)


def initial_wedge(sys: ControlSystem) -> Wedge:
    """Step one of the inner approximation: control span plus the drift ray."""
    seeds = tuple(np.asarray(d) for d in control_directions(sys))
    drift = np.asarray(drift_direction(sys))
    shape = drift.shape
    complex_field = sys.rep != "r3"
    edge = orthonormal_span(list(seeds), shape=shape, complex_field=complex_field)
    gens = (drift,) if fro(drift) > 1e-12 else ()
    cone = Cone(generators=gens, shape=shape, complex_field=complex_field)
    return Wedge(edge=edge, cone=cone, rep=sys.rep, edge_seeds=seeds, drift=drift)


def _dedupe_append(stack: np.ndarray, cols: list):
    """Append columns not already present (cosine within 1e-12 of an old one)."""
    kept = []
    cur = stack
    for col in cols:
        if cur.shape[1]:
            if (cur.T @ col).max() > 1.0 - 1e-12:
                continue
        kept.append(col)
        cur = np.concatenate([cur, col[:, None]], axis=1)
    return cur, kept


def _build_family(edge: Subspace, base: np.ndarray, rep: str) -> ConjugationFamily:
    if edge.dim == 0 or fro(base) == 0.0:
        return None
    seeds = tuple(np.asarray(m) for m in edge.mats)
    if edge.dim == 1:
        kind = "grid1"
    elif edge.dim == 2:
        e1, e2 = seeds
        commuting = fro(e1 @ e2 - e2 @ e1) <= 1e-10
        kind = "grid2" if commuting else "orbit"
    else:
        kind = "orbit"
    return ConjugationFamily(kind=kind, seeds=seeds, base=base, edge=edge, rep=rep)


def saturate(w: Wedge, orbit_samples: int = 720, max_rounds: int = 10,
             tol: float = 1e-8, seed: int = 0) -> Wedge:
    """Inner-approximation loop: close the edge, conjugate, update the hull.

    Each round: (a) absorb the cone's lineality into the edge and Lie-close
    it; (b) re-project stored generators orthogonal to the (possibly grown)
    edge; (c) sweep conjugations of the drift base and of sampled stored
    generators by exponentials of edge elements; (d) append member-novel
    candidates.  Terminates when a round after a stable edge adds nothing:
    exhaustively for small candidate sets, else by a membership spot-check
    of a freshly offset sweep (the family group property guarantees swept
    candidates stay in the analytic cone).  If max_rounds is exhausted the
    partial result is returned with ``converged: False`` in the report.
    """
    rng = np.random.default_rng(seed)
    shape = w.cone.shape
    complex_field = w.cone.complex_field
    edge = w.edge
    gens = [np.asarray(g) for g in w.cone.generators]
    drift = w.drift if w.drift is not None else np.zeros(shape)
    report = {"rounds": 0, "converged": False, "termination": None,
              "edge_dims": [], "novel_counts": [], "tol": tol,
              "orbit_samples": orbit_samples}
    family = None
    cone = w.cone

    for rnd in range(1, max_rounds + 1):
        report["rounds"] = rnd
        # (a) lineality into edge, Lie closure
        lin = lineality(cone, tol)
        closure_gens = list(edge.mats) + list(lin.mats)
        prev_edge_dim = edge.dim
        if closure_gens:
            edge = lie_closure(closure_gens, tol=1e-9)
        edge_changed = edge.dim != prev_edge_dim or rnd == 1
        report["edge_dims"].append(edge.dim)

        # (b) re-project generators orthogonal to the edge
        base = drift - edge.project(drift)
        projected = []
        for g in gens:
            p = g - edge.project(g)
            if fro(p) > 1e-12:
                projected.append(p / fro(p))
        gens = projected
        family = _build_family(edge, base, w.rep)
        cone = Cone(generators=tuple(gens), shape=shape, complex_field=complex_field,
                    analytic=family, tol=tol)
        if family is None:
            if fro(base) > 1e-12:
                cone = Cone(generators=(base,), shape=shape,
                            complex_field=complex_field, tol=tol)
            report["novel_counts"].append(0)
            report["converged"] = True
            report["termination"] = "no-family"
            break

        # (c) conjugation sweep: fresh base sweep + conjugated stored samples
        if edge_changed:
            swept = [g for _, g in family.sweep(orbit_samples, rng)]
            extra = []
            if gens:
                picks = rng.choice(len(gens), size=min(8, len(gens)), replace=False)
                for i in picks:
                    for _ in range(4):
                        p = rng.normal(scale=np.pi / np.sqrt(family.n_params),
                                       size=family.n_params)
                        extra.append(family.conjugate(gens[i], p))
            cands = []
            for g in swept + extra:
                p = g - edge.project(g)
                n = fro(p)
                if n > 1e-12:
                    cands.append(p / n)
            cols = [realify(g, complex_field) for g in cands]
            new_stack, kept = _dedupe_append(cone.stack, cols)
            gens = gens + [unrealify(k, shape, complex_field) for k in kept]
            cone = Cone(generators=tuple(gens), shape=shape,
                        complex_field=complex_field, analytic=family, tol=tol)
            report["novel_counts"].append(len(kept))
            continue

        # (d) stable edge: novelty by membership of a freshly offset sweep
        n_spot = min(32, max(8, orbit_samples // 32))
        if family.kind == "grid1":
            offs = rng.uniform(0, family.periods[0], size=n_spot)
            spot = [family.element([t]) for t in offs]
        elif family.kind == "grid2":
            offs = np.stack([rng.uniform(0, family.periods[0], size=n_spot),
                             rng.uniform(0, family.periods[1], size=n_spot)], axis=1)
            spot = [family.element(p) for p in offs]
        else:
            spot = [g for _, g in family.sweep(n_spot, rng)]
        novel = []
        for g in spot:
            p = g - edge.project(g)
            n = fro(p)
            if n <= 1e-12:
                continue
            p = p / n
            if not cone_contains(cone, p, tol, rng):
                novel.append(p)
        if novel:
            cols = [realify(g, complex_field) for g in novel]
            _, kept = _dedupe_append(cone.stack, cols)
            gens = gens + [unrealify(k, shape, complex_field) for k in kept]
            cone = Cone(generators=tuple(gens), shape=shape,
                        complex_field=complex_field, analytic=family, tol=tol)
            report["novel_counts"].append(len(kept))
            continue
        report["novel_counts"].append(0)
        report["converged"] = True
        report["termination"] = ("membership-spot-check"
                                 if family.kind == "orbit" or cone.n_generators > 64
                                 else "membership")
        break

    pointed = lineality(cone, tol).dim == 0 if cone.n_generators else None
    cone = replace(cone, pointed=pointed)
    return Wedge(edge=edge, cone=cone, rep=w.rep, edge_seeds=w.edge_seeds,
                 drift=drift, saturation=report)


# ---------------------------------------------------------------------------
# closed-form membership oracles
# ---------------------------------------------------------------------------

def dual_cone_margin(gamma, s: np.ndarray) -> float:
    """Margin c*l1(S) + b*l2(S) + a*l3(S) of the dual-cone criterion.

    gamma = (a, b, c) with a >= b >= c >= 0 are the diagonal relaxation
    rates; eigenvalues of the symmetric S are taken descending.
    """
    a, b, c = (float(v) for v in gamma)
    if not (a >= b >= c >= 0):
        raise ValueError(f"rates must satisfy a >= b >= c >= 0, got {(a, b, c)}")
    s = np.asarray(s, dtype=float)
    w, _ = eig_sym(s)
    return float(c * w[0] + b * w[1] + a * w[2])


def dual_cone_contains(gamma, s: np.ndarray, tol: float = 1e-12) -> bool:
    """Eigenvalue test for membership in the dual of the rotation-orbit cone."""
    return dual_cone_margin(gamma, s) >= -tol


def majorized(s: np.ndarray, gamma, tol: float = 1e-9) -> bool:
    """Majorization S < gamma: descending partial sums bounded, totals equal."""
    s = np.asarray(s, dtype=float)
    w, _ = eig_sym(s)
    g = np.sort(np.asarray(gamma, dtype=float))[::-1]
    if w.shape != g.shape:
        raise ValueError("dimension mismatch between S and gamma")
    cw, cg = np.cumsum(w), np.cumsum(g)
    scale = max(1.0, float(np.abs(g).sum()))
    if np.any(cw[:-1] - cg[:-1] > tol * scale):
        return False
    return bool(abs(cw[-1] - cg[-1]) <= tol * scale)


# ---------------------------------------------------------------------------
# outer-approximation hypotheses
# ---------------------------------------------------------------------------

def _haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def outer_wedge_check(c: Cone, n: int, samples: int = 100, seed: int = 0,
                      gamma_l: np.ndarray = None, tol: float = 1e-8) -> dict:
    """Numeric residuals for the global outer-approximation hypotheses.

    On sampled generator pairs and random unitaries, checks that (1) the
    dissipator lies in the cone, (2) commutators of cone elements fall in
    the unitary adjoint algebra, (3) commutators with that algebra fall in
    the cone's linear span, and (4) the cone is invariant under unitary
    conjugation in the superoperator picture.
    """
    rng = np.random.default_rng(seed)
    basis = pauli_basis(n)
    adsu = orthonormal_span([np.asarray(1j * ad_hat(b).matrix) for b in basis])
    span = c.span()
    gens = c.generators
    report = {"samples": samples, "tol": tol}
    report["dissipator_in_cone"] = (
        None if gamma_l is None else cone_contains(c, np.asarray(gamma_l), tol, rng))
    worst2 = worst3 = worst4 = 0.0
    if gens:
        for _ in range(samples):
            i, j = rng.integers(0, len(gens), size=2)
            br = gens[i] @ gens[j] - gens[j] @ gens[i]
            nb = fro(br)
            if nb > 1e-12:
                worst2 = max(worst2, adsu.residual(br) / nb)
        for _ in range(samples):
            i = rng.integers(0, len(gens))
            k = rng.integers(0, adsu.dim)
            br = gens[i] @ adsu.mats[k] - adsu.mats[k] @ gens[i]
            nb = fro(br)
            if nb > 1e-12:
                worst3 = max(worst3, span.residual(br) / nb)
        for _ in range(samples):
            u = _haar_unitary(n, rng)
            uhat = np.kron(u.conj(), u)
            i = rng.integers(0, len(gens))
            g = uhat @ gens[i] @ uhat.conj().T
            worst4 = max(worst4, cone_residual(c, g, rng=rng) / max(1.0, fro(g)))
    report["bracket_in_unitary_algebra"] = worst2
    report["bracket_span_residual"] = worst3
    report["ad_invariance_residual"] = worst4
    report["holds"] = {
        "cond1": report["dissipator_in_cone"],
        "cond2": worst2 <= tol,
        "cond3": worst3 <= tol,
        "cond4": worst4 <= tol,
    }
    return report
