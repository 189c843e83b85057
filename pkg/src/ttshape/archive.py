"""Binary container for decomposed tensors.

Layout, all integers little-endian:

    magic               4 bytes, b"TTS1"
    original order k    u32, then k u64 dimension sizes
    core count d        u32, then d u64 dimension sizes
    rank vector         (d + 1) u64
    error bound         f64, the bound the compression ran with
    payload             core values as f64, row-major, in core order
    checksum            u32 CRC-32 over every preceding byte
"""

from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import tensor
from .errors import ChecksumMismatch, IoFailure, MalformedHeader, ShapeChainBroken
from .tt import TTCores, validate_chain

MAGIC = b"TTS1"


@dataclass(frozen=True)
class ArchiveContents:
    cores: TTCores
    original_shape: tuple[int, ...]
    padded_shape: tuple[int, ...]
    error_bound: float


def pack_archive(
    cores: TTCores,
    original_shape: Sequence[int],
    padded_shape: Sequence[int],
    error_bound: float,
) -> bytes:
    """Serialize a decomposition to bytes."""
    validate_chain(cores.cores)
    original = tensor.as_shape(original_shape)
    padded = tensor.as_shape(padded_shape)
    if cores.dims != padded:
        raise ShapeChainBroken(
            f"cores span shape {cores.dims}, archive claims {padded}"
        )
    if tensor.cardinality(original) > tensor.cardinality(padded):
        raise ShapeChainBroken("original data cannot exceed the padded shape")
    parts = [MAGIC]
    parts.append(struct.pack("<I", len(original)))
    parts.append(struct.pack(f"<{len(original)}Q", *original))
    parts.append(struct.pack("<I", len(padded)))
    parts.append(struct.pack(f"<{len(padded)}Q", *padded))
    ranks = cores.ranks
    parts.append(struct.pack(f"<{len(ranks)}Q", *ranks))
    parts.append(struct.pack("<d", float(error_bound)))
    for core in cores.cores:
        parts.append(np.ascontiguousarray(core, dtype="<f8").tobytes())
    blob = b"".join(parts)
    return blob + struct.pack("<I", zlib.crc32(blob))


class _Reader:
    def __init__(self, blob: bytes):
        self.blob = blob
        self.offset = 0

    def take(self, count: int) -> bytes:
        if self.offset + count > len(self.blob):
            raise MalformedHeader("archive ends before its declared contents")
        chunk = self.blob[self.offset : self.offset + count]
        self.offset += count
        return chunk

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]

    def u64s(self, count: int) -> tuple[int, ...]:
        return struct.unpack(f"<{count}Q", self.take(8 * count))

    def f64(self) -> float:
        return struct.unpack("<d", self.take(8))[0]


def unpack_archive(blob: bytes) -> ArchiveContents:
    """Parse bytes produced by pack_archive, verifying the checksum."""
    reader = _Reader(blob)
    if reader.take(4) != MAGIC:
        raise MalformedHeader("bad magic; not an archive produced by this tool")
    k = reader.u32()
    if k < 1:
        raise MalformedHeader("original shape must have at least one dimension")
    original = reader.u64s(k)
    d = reader.u32()
    if d < 1:
        raise MalformedHeader("padded shape must have at least one dimension")
    padded = reader.u64s(d)
    ranks = reader.u64s(d + 1)
    error_bound = reader.f64()
    if any(n < 1 for n in original) or any(n < 1 for n in padded):
        raise MalformedHeader("dimension sizes must be positive")
    if ranks[0] != 1 or ranks[-1] != 1 or any(r < 1 for r in ranks):
        raise MalformedHeader(f"invalid rank vector {ranks}")
    payload_values = sum(
        ranks[j] * padded[j] * ranks[j + 1] for j in range(d)
    )
    payload = reader.take(8 * payload_values)
    checksum = reader.u32()
    if reader.offset != len(blob):
        raise MalformedHeader("trailing bytes after the checksum")
    if zlib.crc32(blob[:-4]) != checksum:
        raise ChecksumMismatch("stored CRC-32 does not match the contents")
    values = np.frombuffer(payload, dtype="<f8")
    cores = []
    start = 0
    for j in range(d):
        size = ranks[j] * padded[j] * ranks[j + 1]
        cores.append(
            values[start : start + size]
            .astype(np.float64)
            .reshape(ranks[j], padded[j], ranks[j + 1])
        )
        start += size
    contents = ArchiveContents(
        cores=TTCores(tuple(cores)),
        original_shape=tuple(int(n) for n in original),
        padded_shape=tuple(int(n) for n in padded),
        error_bound=error_bound,
    )
    if tensor.cardinality(contents.original_shape) > tensor.cardinality(
        contents.padded_shape
    ):
        raise MalformedHeader("original shape exceeds the padded shape")
    return contents


def write_archive(
    cores: TTCores,
    original_shape: Sequence[int],
    padded_shape: Sequence[int],
    error_bound: float,
    path,
) -> int:
    """Serialize to a file; returns the byte count written."""
    blob = pack_archive(cores, original_shape, padded_shape, error_bound)
    try:
        with open(path, "wb") as handle:
            handle.write(blob)
    except OSError as exc:
        raise IoFailure(f"cannot write archive {path}: {exc}") from exc
    return len(blob)


def read_archive(path) -> ArchiveContents:
    """Read and verify an archive file."""
    try:
        with open(path, "rb") as handle:
            blob = handle.read()
    except OSError as exc:
        raise IoFailure(f"cannot read archive {path}: {exc}") from exc
    return unpack_archive(blob)
