"""First-return amplitudes by explicit path enumeration.

A unitary matrix doubles as the one-step evolution of a quantum walk on
its index set: entry U[j, k] is the amplitude for hopping from state k
to state j.  Summing, over every index path of length n that avoids a
forbidden set at its intermediate states, the product of the one-step
amplitudes along the path reproduces the n-step first-return amplitude
of a subspace.

Enumeration is exponential in n and exists purely as an independent
check on the resolvent route in `spectral`; the two share nothing
beyond entry lookup.  Amplitude products are taken in time order, i.e.
the step taken last is multiplied on the left.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import as_matrix, require_unitary
from .spectral import index_tuple

N_CAP = 8
PRUNE_FLOOR = 1e-14


@dataclass(frozen=True)
class PathSum:
    """Sum of amplitudes over all admissible paths between two states.

    `amplitude` is a complex number for scalar enumeration and a d x d
    array for block enumeration.  `n_paths` counts the paths actually
    visited; with pruning enabled, zero-amplitude steps are skipped, so
    the count may shrink while the sum stays put.
    """

    source: int
    target: int
    avoided: tuple[int, ...]
    length: int
    amplitude: complex | np.ndarray
    n_paths: int


def _check_length(n: int) -> None:
    if n < 1:
        raise ValueError("paths have at least one step")
    if n > N_CAP:
        raise ValueError(f"path length {n} exceeds the enumeration cap {N_CAP}")


def _scalar_walk(u, source, target, avoid, n, prune):
    dim = u.shape[0]
    blocked = set(avoid)
    interior = [s for s in range(dim) if s not in blocked]
    total = 0.0 + 0.0j
    count = 0

    def extend(cur: int, remaining: int, amp: complex) -> None:
        nonlocal total, count
        if remaining == 1:
            step = u[target, cur]
            if prune and abs(step) < PRUNE_FLOOR:
                return
            total += step * amp
            count += 1
            return
        for nxt in interior:
            step = u[nxt, cur]
            if prune and abs(step) < PRUNE_FLOOR:
                continue
            extend(nxt, remaining - 1, amp * step)

    extend(source, n, 1.0 + 0.0j)
    return total, count


def _block_walk(u, source, target, avoid, n, d, prune):
    n_blocks = u.shape[0] // d
    blocked = set(avoid)
    interior = [s for s in range(n_blocks) if s not in blocked]

    def block(r: int, c: int) -> np.ndarray:
        return u[r * d:(r + 1) * d, c * d:(c + 1) * d]

    total = np.zeros((d, d), dtype=np.complex128)
    count = 0

    def extend(cur: int, remaining: int, amp: np.ndarray) -> None:
        nonlocal total, count
        if remaining == 1:
            step = block(target, cur)
            if prune and np.linalg.norm(step) < PRUNE_FLOOR:
                return
            total += step @ amp
            count += 1
            return
        for nxt in interior:
            step = block(nxt, cur)
            if prune and np.linalg.norm(step) < PRUNE_FLOOR:
                continue
            extend(nxt, remaining - 1, step @ amp)

    extend(source, n, np.eye(d, dtype=np.complex128))
    return total, count


def path_amplitude_sum(U, source: int, target: int, avoid, n: int,
                       block_dim: int = 1, prune: bool = True) -> PathSum:
    """Sum amplitudes of n-step paths source -> target avoiding `avoid`.

    `avoid` constrains intermediate states only; the endpoints may or
    may not belong to it.  With block_dim = d > 1 the matrix is read as
    a block matrix, states are block indices, and the amplitude is the
    d x d product of one-step blocks, later steps multiplied on the
    left.
    """
    u = as_matrix(U)
    _check_length(n)
    if block_dim < 1 or u.shape[0] % block_dim:
        raise ValueError("matrix size is not a multiple of the block dimension")
    n_states = u.shape[0] // block_dim
    avoided = tuple(sorted({int(s) for s in avoid}))
    for s in (source, target, *avoided):
        if not 0 <= s < n_states:
            raise ValueError(f"state {s} outside 0..{n_states - 1}")
    if block_dim == 1:
        amp, count = _scalar_walk(u, source, target, avoided, n, prune)
    else:
        amp, count = _block_walk(u, source, target, avoided, n, block_dim, prune)
    return PathSum(source=int(source), target=int(target), avoided=avoided,
                   length=n, amplitude=amp, n_paths=count)


def oracle_first_return(U, v, n: int, prune: bool = True) -> np.ndarray:
    """n-step first-return amplitude of a subspace, by path enumeration.

    Entry (r, c) sums the amplitudes of all length-n paths from the
    c-th to the r-th spanning index of v that stay outside v in
    between.  Agrees with spectral.first_return_amplitudes, which
    computes the same matrix from powers of the sliced operator.
    """
    u = require_unitary(U)
    _check_length(n)
    idx = index_tuple(u.shape[0], v)
    blocked = set(idx)
    interior = [s for s in range(u.shape[0]) if s not in blocked]
    m = len(idx)
    out = np.zeros((m, m), dtype=np.complex128)

    for c in range(m):

        def extend(cur: int, remaining: int, amp: complex) -> None:
            if remaining == 1:
                for r in range(m):
                    step = u[idx[r], cur]
                    if prune and abs(step) < PRUNE_FLOOR:
                        continue
                    out[r, c] += step * amp
                return
            for nxt in interior:
                step = u[nxt, cur]
                if prune and abs(step) < PRUNE_FLOOR:
                    continue
                extend(nxt, remaining - 1, amp * step)

        extend(idx[c], n, 1.0 + 0.0j)
    return out
