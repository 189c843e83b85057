"""Dense tensor primitives: shapes, padding reshapes, unfoldings, norms.

Tensors are plain float64 numpy arrays in row-major (C) order; a shape is
a tuple of positive dimension sizes.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .errors import CardinalityMismatch, InfeasibleShape, InvalidShape, NotDivisible

Shape = tuple[int, ...]

# Shapes whose element count does not fit a signed 64-bit integer are rejected.
MAX_CARDINALITY = 2**63 - 1


def as_shape(dims: Sequence[int]) -> Shape:
    """Coerce to a tuple of ints, rejecting empty or non-positive shapes."""
    shape = tuple(int(n) for n in dims)
    if not shape:
        raise InvalidShape("a shape needs at least one dimension")
    for n in shape:
        if n < 1:
            raise InvalidShape(f"dimension sizes must be >= 1, got {n}")
    return shape


def cardinality(dims: Sequence[int]) -> int:
    """Number of elements a shape addresses.

    Python integers keep the product exact; anything past 2**63 - 1 is
    rejected rather than silently wrapped.
    """
    total = 1
    for n in as_shape(dims):
        total *= n
    if total > MAX_CARDINALITY:
        raise InvalidShape(f"shape product {total} exceeds {MAX_CARDINALITY}")
    return total


def as_tensor(data) -> np.ndarray:
    """Coerce to a C-contiguous float64 array; scalars become length-1 vectors."""
    arr = np.ascontiguousarray(data, dtype=np.float64)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    return arr


def reshape(t, dims: Sequence[int]) -> np.ndarray:
    """Row-major reinterpretation into a shape of identical cardinality."""
    arr = as_tensor(t)
    shape = as_shape(dims)
    if cardinality(shape) != arr.size:
        raise CardinalityMismatch(
            f"cannot reshape {arr.size} elements into {shape}"
        )
    return arr.reshape(shape)


def pad_reshape(t, dims: Sequence[int]) -> np.ndarray:
    """Flatten row-major, append trailing zeros, reinterpret as `dims`.

    The zero padding leaves the Frobenius norm untouched, so error metrics
    computed on the padded tensor transfer to the original data.
    """
    arr = as_tensor(t)
    shape = as_shape(dims)
    card = cardinality(shape)
    if card < arr.size:
        raise InfeasibleShape(
            f"target shape {shape} holds {card} elements, need {arr.size}"
        )
    if card == arr.size:
        return arr.reshape(shape)
    out = np.zeros(card, dtype=np.float64)
    out[: arr.size] = arr.reshape(-1)
    return out.reshape(shape)


def unpad(t, original_dims: Sequence[int]) -> np.ndarray:
    """Drop trailing padding: keep the first elements, restore the shape."""
    arr = as_tensor(t)
    shape = as_shape(original_dims)
    card = cardinality(shape)
    if arr.size < card:
        raise CardinalityMismatch(
            f"tensor has {arr.size} elements, cannot recover shape {shape}"
        )
    return arr.reshape(-1)[:card].reshape(shape)


def unfold(t, rows: int) -> np.ndarray:
    """Matricize row-major into `rows` rows; the row count must divide evenly."""
    arr = as_tensor(t)
    rows = int(rows)
    if rows < 1 or arr.size % rows != 0:
        raise NotDivisible(f"{arr.size} elements do not split into {rows} rows")
    return arr.reshape(rows, arr.size // rows)


def frobenius_norm(t) -> float:
    """Square root of the exactly rounded sum of squared entries.

    math.fsum makes the sum independent of element grouping, so appending
    zero padding can never move the result by even one bit.
    """
    arr = as_tensor(t)
    return math.sqrt(math.fsum(np.square(arr).ravel().tolist()))
