"""Overlapping factorizations of finite unitaries.

Given a partition of the coordinate basis into left, center, and right
groups, a unitary U factorizes as U = (U_LC + 1_R)(1_L + U_CR), with the
factors supported on left+center and center+right, exactly when the corner
P_R U P_L vanishes (the rank condition on P_LC U P_CR comes for free in
finite dimension and is kept as a consistency check).  The factor pair is
unique up to a gauge unitary acting on the center.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import as_matrix, numerical_rank, require_unitary
from .series import MatrixPowerSeries, coeff_distance, direct_sum_series
from .spectral import schur_of_subspace

CORNER_REL_TOL = 1e-10
FACTOR_TOL = 1e-10


@dataclass(frozen=True)
class SubspacePartition:
    """Disjoint left/center/right index groups covering 0..ambient_dim-1."""

    ambient_dim: int
    left: tuple[int, ...]
    center: tuple[int, ...]
    right: tuple[int, ...]

    def __post_init__(self):
        left = tuple(sorted(int(i) for i in self.left))
        center = tuple(sorted(int(i) for i in self.center))
        right = tuple(sorted(int(i) for i in self.right))
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "right", right)
        seen = left + center + right
        if len(set(seen)) != len(seen):
            raise ValueError("partition groups must be disjoint")
        if sorted(seen) != list(range(self.ambient_dim)):
            raise ValueError("partition must cover every index exactly once")

    @property
    def lc(self) -> tuple[int, ...]:
        return tuple(sorted(self.left + self.center))

    @property
    def cr(self) -> tuple[int, ...]:
        return tuple(sorted(self.center + self.right))

    def describe(self) -> str:
        def fmt(group):
            return ",".join(str(i) for i in group) or "-"

        return f"L={fmt(self.left)} C={fmt(self.center)} R={fmt(self.right)}"


def _diag_projector(dim: int, idx) -> np.ndarray:
    p = np.zeros((dim, dim), dtype=np.complex128)
    for i in idx:
        p[i, i] = 1.0
    return p


@dataclass(frozen=True)
class OverlapCheck:
    """Outcome of the corner/rank characterization."""

    ok: bool
    corner_norm: float
    corner_tol: float
    rank: int
    center_dim: int

    @property
    def corner_ok(self) -> bool:
        return self.corner_norm <= self.corner_tol

    @property
    def rank_ok(self) -> bool:
        return self.rank == self.center_dim


@dataclass(frozen=True)
class OverlapFactorization:
    """Factor pair (u_lc, u_cr) of an overlapping factorization.

    The factors are stored on their own index groups (ascending ambient
    order); embedding extends them by the identity elsewhere.
    """

    partition: SubspacePartition
    u_lc: np.ndarray
    u_cr: np.ndarray

    def embedded_lc(self) -> np.ndarray:
        n = self.partition.ambient_dim
        out = np.eye(n, dtype=np.complex128)
        out[np.ix_(self.partition.lc, self.partition.lc)] = self.u_lc
        return out

    def embedded_cr(self) -> np.ndarray:
        n = self.partition.ambient_dim
        out = np.eye(n, dtype=np.complex128)
        out[np.ix_(self.partition.cr, self.partition.cr)] = self.u_cr
        return out

    def product(self) -> np.ndarray:
        return self.embedded_lc() @ self.embedded_cr()

    def reconstruction_residual(self, U) -> float:
        return float(np.linalg.norm(self.product() - as_matrix(U)))


def check_overlap(U, partition: SubspacePartition, rel_tol: float = CORNER_REL_TOL) -> OverlapCheck:
    """Corner test P_R U P_L = 0 plus the rank consistency assertion."""
    u = require_unitary(U)
    if u.shape[0] != partition.ambient_dim:
        raise ValueError("matrix size does not match the partition")
    if partition.right and partition.left:
        corner = u[np.ix_(partition.right, partition.left)]
        corner_norm = float(np.linalg.norm(corner))
    else:
        corner_norm = 0.0
    corner_tol = rel_tol * float(np.linalg.norm(u))
    k = u[np.ix_(partition.lc, partition.cr)]
    rank = numerical_rank(k) if k.size else 0
    center_dim = len(partition.center)
    ok = corner_norm <= corner_tol and rank == center_dim
    return OverlapCheck(ok, corner_norm, corner_tol, rank, center_dim)


def construct_overlap(U, partition: SubspacePartition, rel_tol: float = CORNER_REL_TOL) -> OverlapFactorization:
    """Build the factor pair via the partial isometry K = P_LC U P_CR.

    K^dagger K is the projection onto the initial space of K; a gauge
    isometry W maps an orthonormal basis of that space onto the canonical
    basis of the center.  The basis is chosen deterministically: pivoted
    orthonormalization of the columns of K^dagger K, largest column norm
    first (ties resolved to the lowest index), matched to the center
    indices in ascending order.
    """
    u = require_unitary(U)
    chk = check_overlap(u, partition, rel_tol)
    if not chk.ok:
        raise ValueError(
            "no overlapping factorization: corner norm "
            f"{chk.corner_norm:.3e} (tol {chk.corner_tol:.3e}), rank "
            f"{chk.rank} vs center dimension {chk.center_dim}"
        )
    n = partition.ambient_dim
    p_l = _diag_projector(n, partition.left)
    p_c = _diag_projector(n, partition.center)
    p_r = _diag_projector(n, partition.right)
    p_lc = p_l + p_c
    p_cr = p_c + p_r
    k = p_lc @ u @ p_cr
    kdk = k.conj().T @ k
    proj_defect = float(np.linalg.norm(kdk @ kdk - kdk))
    scale = max(1.0, float(np.linalg.norm(u)))
    if proj_defect > FACTOR_TOL * scale:
        raise ValueError(f"K^dagger K is not a projection (defect {proj_defect:.3e})")

    r = len(partition.center)
    cols = kdk.copy()
    basis = []
    for _ in range(r):
        norms = np.linalg.norm(cols, axis=0)
        p = int(np.argmax(norms))
        if norms[p] <= 1e-8:
            raise ValueError("rank collapse while orthonormalizing the overlap basis")
        w = cols[:, p].copy()
        for b in basis:
            w -= b * (b.conj() @ w)
        w /= np.linalg.norm(w)
        basis.append(w)
        cols -= np.outer(w, w.conj() @ cols)

    w_op = np.zeros((n, n), dtype=np.complex128)
    for t, c in enumerate(partition.center):
        w_op[c, :] = basis[t].conj()

    one_ucr = p_l + w_op @ kdk + p_r @ u
    ulc_one = u @ p_l + k @ w_op.conj().T @ p_c + p_r
    u_cr = one_ucr[np.ix_(partition.cr, partition.cr)]
    u_lc = ulc_one[np.ix_(partition.lc, partition.lc)]
    fact = OverlapFactorization(
        partition,
        require_unitary(u_lc, what="left-center factor"),
        require_unitary(u_cr, what="center-right factor"),
    )
    resid = fact.reconstruction_residual(u)
    if resid > FACTOR_TOL * scale:
        raise ArithmeticError(f"factor product misses the source by {resid:.3e}")
    return fact


def _positions(whole: tuple[int, ...], part) -> list[int]:
    table = {amb: t for t, amb in enumerate(whole)}
    return [table[int(i)] for i in part]


def verify_gauge(f1: OverlapFactorization, f2: OverlapFactorization, tol: float = FACTOR_TOL) -> np.ndarray:
    """Extract the gauge unitary connecting two factorizations of one source.

    The left factors must differ by 1 + U_C on the center and the right
    factors by the adjoint relation; anything else raises.
    """
    if f1.partition != f2.partition:
        raise ValueError("factorizations use different partitions")
    part = f1.partition
    pc_lc = _positions(part.lc, part.center)
    g = f1.u_lc.conj().T @ f2.u_lc
    expected = np.eye(len(part.lc), dtype=np.complex128)
    u_c = g[np.ix_(pc_lc, pc_lc)]
    expected[np.ix_(pc_lc, pc_lc)] = u_c
    scale = max(1.0, float(np.linalg.norm(g)))
    if float(np.linalg.norm(g - expected)) > tol * scale:
        raise ValueError("left factors are not related by a center gauge")
    require_unitary(u_c, what="gauge")

    pc_cr = _positions(part.cr, part.center)
    h = f2.u_cr @ f1.u_cr.conj().T
    expected = np.eye(len(part.cr), dtype=np.complex128)
    expected[np.ix_(pc_cr, pc_cr)] = u_c.conj().T
    if float(np.linalg.norm(h - expected)) > tol * scale:
        raise ValueError("right factors do not carry the adjoint gauge")
    return u_c


@dataclass(frozen=True)
class KhrushchevResidual:
    """Residual of the factorization f_V = (1 + f^R)(f^L + 1)."""

    residual: float
    order: int
    tolerance: float

    @property
    def ok(self) -> bool:
        return self.residual <= self.tolerance


def abstract_khrushchev_check(
    U,
    partition: SubspacePartition,
    v_l,
    v_r,
    order: int,
    factorization: OverlapFactorization | None = None,
    tolerance: float = 1e-8,
) -> KhrushchevResidual:
    """Check the Schur-function factorization across an overlap.

    For V = V_L + center + V_R with V_L inside the left group and V_R
    inside the right group, the V-Schur function of U must equal
    (1_{V_L} + f^R)(f^L + 1_{V_R}), where f^L is computed from the
    left-center factor on V_L + center and f^R from the center-right
    factor on center + V_R.  The product is gauge invariant even though
    the individual factors are not.
    """
    u = require_unitary(U)
    vl = tuple(sorted(int(i) for i in v_l))
    vr = tuple(sorted(int(i) for i in v_r))
    if not set(vl) <= set(partition.left):
        raise ValueError("V_L must lie inside the left group")
    if not set(vr) <= set(partition.right):
        raise ValueError("V_R must lie inside the right group")
    fact = factorization if factorization is not None else construct_overlap(u, partition)

    ordered_v = vl + partition.center + vr
    f_v = schur_of_subspace(u, ordered_v, order)

    lc_local = _positions(partition.lc, vl + partition.center)
    cr_local = _positions(partition.cr, partition.center + vr)
    f_left = schur_of_subspace(fact.u_lc, lc_local, order)
    f_right = schur_of_subspace(fact.u_cr, cr_local, order)

    lhs = direct_sum_series(MatrixPowerSeries.one(len(vl), order), f_right)
    rhs = direct_sum_series(f_left, MatrixPowerSeries.one(len(vr), order))
    residual = coeff_distance(f_v, lhs * rhs)
    return KhrushchevResidual(residual, order, tolerance)
