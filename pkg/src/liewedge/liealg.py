"""Lie closures of generator sets and controllability condition checks.

The closure routine works in the realified coordinate space of `matcore`
and batches commutators / projections through matmul so that even the
225-dimensional closure over a two-qubit carrier stays fast.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .lindblad import ControlSystem, control_directions, drift_direction, ham_drift_direction
from .matcore import ConvergenceError, Subspace, fro, orthonormal_span

_CHUNK = 24


def _realify_stack(mats: np.ndarray, complex_field: bool) -> np.ndarray:
    """Realified coordinates of an (m, n, n) stack, as columns of a (d, m) array."""
    m = mats.shape[0]
    flat = mats.reshape(m, -1)
    if complex_field:
        return np.concatenate([np.real(flat), np.imag(flat)], axis=1).T.astype(float)
    return np.real(flat).T.astype(float)


def lie_closure(gens, tol: float = 1e-9, max_depth: int = 12) -> Subspace:
    """Smallest real Lie algebra containing `gens`, as a `Subspace`.

    Breadth-first: each round brackets the newest directions against the
    whole current basis, keeps components orthogonal to it, and stops when
    a round yields nothing new.  Raises ConvergenceError if `max_depth`
    rounds do not stabilise.
    """
    gens = [np.asarray(g) for g in gens]
    basis = orthonormal_span(gens, tol=tol)
    if basis.dim == 0:
        return basis
    shape = basis.shape
    complex_field = basis.complex_field
    ambient = int(np.prod(shape)) * (2 if complex_field else 1)
    dtype = complex if complex_field else float
    stack = basis.stack
    mats = np.stack([np.asarray(m, dtype=dtype) for m in basis.mats])
    frontier = mats

    for _ in range(max_depth):
        if frontier.shape[0] == 0 or stack.shape[1] >= ambient:
            break
        new_cols = []
        for lo in range(0, frontier.shape[0], _CHUNK):
            f = frontier[lo:lo + _CHUNK]
            br = np.einsum("aij,bjk->abik", f, mats) - np.einsum("bij,ajk->abik", mats, f)
            br = br.reshape(-1, *shape)
            cols = _realify_stack(br, complex_field)
            res = cols - stack @ (stack.T @ cols)
            res_norms = np.linalg.norm(res, axis=0)
            # Never normalise a bracket before this test: a near-zero bracket
            # is pure cancellation noise and blowing it up to unit size would
            # smuggle junk directions into the closure.
            sel = res_norms > tol * np.maximum(1.0, np.linalg.norm(cols, axis=0))
            if np.any(sel):
                new_cols.append(res[:, sel])
        if not new_cols:
            frontier = np.zeros((0, *shape), dtype=dtype)
            break
        cand = np.concatenate(new_cols, axis=1)
        u, s, _ = np.linalg.svd(cand, full_matrices=False)
        add = u[:, s > tol * s[0]]
        # re-orthogonalise against the basis once more for numerical hygiene
        add = add - stack @ (stack.T @ add)
        keep = np.linalg.norm(add, axis=0) > 0.5
        add = add[:, keep]
        if add.shape[1] == 0:
            frontier = np.zeros((0, *shape), dtype=dtype)
            break
        add /= np.linalg.norm(add, axis=0)
        stack = np.concatenate([stack, add], axis=1)
        from .matcore import unrealify

        frontier = np.stack([unrealify(add[:, i], shape, complex_field)
                             for i in range(add.shape[1])]).astype(dtype)
        mats = np.concatenate([mats, frontier], axis=0)
    else:
        raise ConvergenceError(f"Lie closure did not stabilise within {max_depth} rounds")

    from .matcore import unrealify

    out = tuple(unrealify(stack[:, i], shape, complex_field) for i in range(stack.shape[1]))
    return Subspace(mats=out, shape=shape, complex_field=complex_field, tol=tol,
                    stack=stack.copy())


def cartan_split(a: np.ndarray):
    """Split into (antihermitian, Hermitian) parts."""
    a = np.asarray(a)
    return (a - a.conj().T) / 2.0, (a + a.conj().T) / 2.0


def subspace_equal(a: Subspace, b: Subspace, tol: float = 1e-8) -> bool:
    if a.dim != b.dim:
        return False
    return all(b.contains(m, tol) for m in a.mats)


def subspace_leq(a: Subspace, b: Subspace, tol: float = 1e-8) -> bool:
    """True if span(a) is contained in span(b)."""
    return all(b.contains(m, tol) for m in a.mats)


def orthocomplement(sub: Subspace) -> Subspace:
    """Orthogonal complement within the full ambient matrix space."""
    from .matcore import unrealify

    d = sub.stack.shape[0] if sub.stack.size else int(np.prod(sub.shape)) * (2 if sub.complex_field else 1)
    if sub.dim == 0:
        eye = np.eye(d)
        mats = tuple(unrealify(eye[:, i], sub.shape, sub.complex_field) for i in range(d))
        return Subspace(mats=mats, shape=sub.shape, complex_field=sub.complex_field,
                        tol=sub.tol, stack=eye)
    u, _, _ = np.linalg.svd(sub.stack, full_matrices=True)
    comp = u[:, sub.dim:]
    mats = tuple(unrealify(comp[:, i], sub.shape, sub.complex_field) for i in range(comp.shape[1]))
    return Subspace(mats=mats, shape=sub.shape, complex_field=sub.complex_field,
                    tol=sub.tol, stack=comp.copy())


@dataclass(frozen=True)
class ConditionReport:
    """Dimensions and verdicts for the controllability hierarchy.

    (H): the controls alone generate the full rotation/unitary algebra.
    (WH): controls plus the drift Hamiltonian do, but the controls alone
    do not.  (A): drift plus controls generate the full general linear
    algebra of the traceless sector, i.e. accessibility.
    """

    dim_kc: int
    dim_kd: int
    dim_s: int
    dim_target_k: int
    dim_target_s: int
    holds_H: bool
    holds_WH: bool
    holds_A: bool
    kc: Subspace = field(repr=False, default=None)
    kd: Subspace = field(repr=False, default=None)
    s: Subspace = field(repr=False, default=None)


def check_conditions(sys: ControlSystem, tol: float = 1e-9) -> ConditionReport:
    """Evaluate conditions (H), (WH) and (A) for a control system."""
    if sys.rep == "r3":
        target_k, target_s = 3, 9
    elif sys.rep == "qubit":
        target_k, target_s = 3, 9
    else:
        target_k, target_s = 15, 225
    ctrl = [np.asarray(c) for c in control_directions(sys)]
    ham = np.asarray(ham_drift_direction(sys))
    kc = lie_closure(ctrl, tol=tol)
    kd = lie_closure(ctrl + [ham], tol=tol)
    s = lie_closure(ctrl + [np.asarray(drift_direction(sys))], tol=tol)
    holds_h = kc.dim == target_k
    return ConditionReport(
        dim_kc=kc.dim, dim_kd=kd.dim, dim_s=s.dim,
        dim_target_k=target_k, dim_target_s=target_s,
        holds_H=holds_h,
        holds_WH=(kd.dim == target_k and not holds_h),
        holds_A=(s.dim == target_s),
        kc=kc, kd=kd, s=s,
    )
