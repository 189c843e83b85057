"""Tensor-train decomposition via sequential truncated SVDs, reconstruction,
and the compression / error metrics used to score candidate shapes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import tensor
from .errors import NumericalFailure, ShapeChainBroken, ShapeMismatch


@dataclass(frozen=True)
class TTCores:
    """Chain of order-3 cores; core j has shape (r_{j-1}, n_j, r_j)."""

    cores: tuple[np.ndarray, ...]

    @property
    def order(self) -> int:
        return len(self.cores)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(int(c.shape[1]) for c in self.cores)

    @property
    def ranks(self) -> tuple[int, ...]:
        """Rank vector (r_0, ..., r_d); bookend ranks are 1 for a valid chain."""
        return (int(self.cores[0].shape[0]),) + tuple(
            int(c.shape[2]) for c in self.cores
        )


@dataclass(frozen=True)
class DecompositionReport:
    cores: TTCores
    param_count: int
    threshold: float


@dataclass(frozen=True)
class FitnessRecord:
    """Per-shape evaluation result."""

    compression: float
    error: float
    ranks: tuple[int, ...]
    param_count: int


def validate_chain(cores: Sequence[np.ndarray]) -> None:
    """Raise ShapeChainBroken unless the cores form a contractible chain."""
    if len(cores) == 0:
        raise ShapeChainBroken("a decomposition needs at least one core")
    for j, core in enumerate(cores):
        if core.ndim != 3:
            raise ShapeChainBroken(f"core {j} has {core.ndim} axes, expected 3")
    if cores[0].shape[0] != 1:
        raise ShapeChainBroken(f"leading rank is {cores[0].shape[0]}, expected 1")
    if cores[-1].shape[2] != 1:
        raise ShapeChainBroken(f"trailing rank is {cores[-1].shape[2]}, expected 1")
    for j in range(len(cores) - 1):
        left, right = cores[j].shape[2], cores[j + 1].shape[0]
        if left != right:
            raise ShapeChainBroken(
                f"cores {j} and {j + 1} disagree on their shared rank ({left} vs {right})"
            )


def _rank_for_tail(singular_values: np.ndarray, threshold: float) -> int:
    # Smallest r >= 1 whose discarded tail energy sum(s[r:]**2) fits threshold**2.
    squares = np.square(singular_values)
    tails = np.concatenate([np.cumsum(squares[::-1])[::-1], [0.0]])
    eligible = np.nonzero(tails <= threshold * threshold)[0]
    rank = int(eligible[0]) if eligible.size else singular_values.size
    return max(rank, 1)


def truncated_svd(w, threshold: float):
    """SVD keeping the fewest singular triplets whose discarded tail has
    Frobenius norm at most `threshold`. At least one triplet is always kept.

    Returns (u, s, vt, rank) with u of shape (m, rank), s of shape (rank,)
    and vt of shape (rank, n). Sign convention: in every left singular
    vector the entry of largest magnitude (lowest index on ties) is made
    nonnegative, so repeated calls agree bit for bit.
    """
    arr = tensor.as_tensor(w)
    if arr.ndim != 2:
        raise ValueError(f"expected a matrix, got {arr.ndim} axes")
    if threshold < 0:
        raise ValueError("truncation threshold must be nonnegative")
    try:
        u, s, vt = np.linalg.svd(arr, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD did not converge: {exc}") from exc
    rank = _rank_for_tail(s, threshold)
    u = u[:, :rank].copy()
    s = s[:rank].copy()
    vt = vt[:rank].copy()
    for j in range(rank):
        pivot = int(np.argmax(np.abs(u[:, j])))
        if u[pivot, j] < 0:
            u[:, j] = -u[:, j]
            vt[j] = -vt[j]
    return u, s, vt, rank


def tt_svd(y, error_bound: float) -> DecompositionReport:
    """Decompose a dense tensor into a tensor train.

    Each of the d-1 unfolding steps truncates with threshold
    error_bound * ||y||_F / (d - 1), which keeps the accumulated relative
    reconstruction error within error_bound for any order d >= 2. Order-1
    tensors are returned verbatim as a single core.
    """
    arr = tensor.as_tensor(y)
    if error_bound < 0:
        raise ValueError("error bound must be nonnegative")
    dims = arr.shape
    d = arr.ndim
    if d == 1:
        cores = TTCores((arr.reshape(1, dims[0], 1).copy(),))
        return DecompositionReport(cores, param_count(cores), 0.0)
    norm = tensor.frobenius_norm(arr)
    threshold = error_bound * norm / (d - 1)
    if norm == 0.0:
        cores = TTCores(tuple(np.zeros((1, n, 1)) for n in dims))
        return DecompositionReport(cores, param_count(cores), threshold)
    cores = []
    r_prev = 1
    w = tensor.unfold(arr, dims[0])
    for j in range(d - 1):
        w = tensor.unfold(w, r_prev * dims[j])
        u, s, vt, rank = truncated_svd(w, threshold)
        cores.append(u.reshape(r_prev, dims[j], rank))
        w = s[:, None] * vt
        r_prev = rank
    cores.append(w.reshape(r_prev, dims[d - 1], 1))
    chain = TTCores(tuple(cores))
    return DecompositionReport(chain, param_count(chain), threshold)


def tt_reconstruct(chain: TTCores) -> np.ndarray:
    """Contract the core chain back into the full tensor.

    Runs as accumulated matrix products: a left factor of shape
    (prod of leading dims, r_j) absorbs one core per step, never touching
    individual entries.
    """
    cores = chain.cores
    validate_chain(cores)
    dims = tuple(c.shape[1] for c in cores)
    left = cores[0].reshape(dims[0], cores[0].shape[2])
    for core in cores[1:]:
        r_in, n, r_out = core.shape
        left = left @ core.reshape(r_in, n * r_out)
        left = left.reshape(-1, r_out)
    return left.reshape(dims)


def param_count(chain: TTCores) -> int:
    """Total number of values stored across all cores."""
    return int(sum(c.size for c in chain.cores))


def compression_ratio(params: int, original_cardinality: int) -> float:
    """1 - stored / original. Negative when the decomposition inflates."""
    if original_cardinality < 1:
        raise ValueError("original cardinality must be positive")
    return 1.0 - params / original_cardinality


def relative_error(x, approx) -> float:
    """||x - approx||_F / ||x||_F.

    A zero-norm reference yields 0.0 on an exact match and inf otherwise;
    the sentinel is reported, never raised.
    """
    a = tensor.as_tensor(x)
    b = tensor.as_tensor(approx)
    if a.shape != b.shape:
        raise ShapeMismatch(f"shapes differ: {a.shape} vs {b.shape}")
    denom = tensor.frobenius_norm(a)
    num = tensor.frobenius_norm(a - b)
    if denom == 0.0:
        return 0.0 if num == 0.0 else math.inf
    return num / denom


def evaluate_shape(x, dims: Sequence[int], error_bound: float) -> FitnessRecord:
    """Score one candidate shape.

    Pads the data into `dims`, decomposes, and measures both the
    compression ratio against the original element count and the relative
    reconstruction error on the unpadded data.
    """
    arr = tensor.as_tensor(x)
    padded = tensor.pad_reshape(arr, dims)
    report = tt_svd(padded, error_bound)
    approx = tensor.unpad(tt_reconstruct(report.cores), arr.shape)
    return FitnessRecord(
        compression=compression_ratio(report.param_count, arr.size),
        error=relative_error(arr, approx),
        ranks=report.cores.ranks,
        param_count=report.param_count,
    )
