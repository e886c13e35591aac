"""
IDX binary format reader and MNIST loader.

Layout (all integers big-endian):
    bytes 0-1     zero
    byte 2        element type code
    byte 3        number of dimensions d
    4 .. 4+4d     dimension sizes, one uint32 each
    remainder     elements in row-major order

Parsing works on an in-memory buffer and checks every length against the buffer
before slicing, so no read ever goes past the declared payload.
"""

import gzip
import math
from dataclasses import dataclass
from pathlib import Path
from typing import BinaryIO

import numpy as np

from wmm_lab.core.constants import FULL_SPLIT, MNIST_FILES
from wmm_lab.core.errors import (
    IdxMagicError,
    IdxTrailingBytesError,
    IdxTruncatedError,
    IdxUnsupportedTypeError,
    InvalidArgumentError,
)
from wmm_lab.core.logging import logger
from wmm_lab.data.windows import DatasetSplits, WindowedDataset, split_sizes

IDX_TYPES: dict[int, np.dtype] = {
    0x08: np.dtype(">u1"),
    0x09: np.dtype(">i1"),
    0x0B: np.dtype(">i2"),
    0x0C: np.dtype(">i4"),
    0x0D: np.dtype(">f4"),
    0x0E: np.dtype(">f8"),
}

HEADER_PREFIX = 4


@dataclass(frozen=True)
class IdxTensor:
    type_code: int
    dims: tuple[int, ...]
    data: np.ndarray

    @property
    def dtype(self) -> np.dtype:
        return IDX_TYPES[self.type_code]


def _require(buffer: bytes, stop: int) -> None:
    if len(buffer) < stop:
        raise IdxTruncatedError(
            f"input ends after {len(buffer)} bytes, {stop} needed", offset=len(buffer)
        )


def parse_idx(source: bytes | bytearray | memoryview | BinaryIO) -> IdxTensor:
    """
    Parse one IDX tensor from bytes or a readable binary stream.

    Raises:
        IdxMagicError: If either leading byte is non-zero.
        IdxUnsupportedTypeError: If the type code is not a known IDX element type.
        IdxTruncatedError: If the header or payload is incomplete; the offset is the first missing byte.
        IdxTrailingBytesError: If bytes follow the declared payload.
    """
    buffer = bytes(source) if isinstance(source, (bytes, bytearray, memoryview)) else source.read()

    _require(buffer, 2)
    for offset in (0, 1):
        if buffer[offset] != 0:
            raise IdxMagicError(
                f"magic byte is 0x{buffer[offset]:02x}, expected 0x00", offset=offset
            )
    _require(buffer, HEADER_PREFIX)
    type_code = buffer[2]
    dtype = IDX_TYPES.get(type_code)
    if dtype is None:
        raise IdxUnsupportedTypeError(f"unsupported element type code 0x{type_code:02x}", offset=2)
    ndim = buffer[3]

    header_end = HEADER_PREFIX + 4 * ndim
    _require(buffer, header_end)
    dims = tuple(
        int.from_bytes(buffer[HEADER_PREFIX + 4 * k : HEADER_PREFIX + 4 * (k + 1)], "big")
        for k in range(ndim)
    )

    count = math.prod(dims)
    payload_end = header_end + count * dtype.itemsize
    _require(buffer, payload_end)
    if len(buffer) > payload_end:
        raise IdxTrailingBytesError(
            f"{len(buffer) - payload_end} bytes follow the declared payload", offset=payload_end
        )

    data = np.frombuffer(buffer, dtype=dtype, count=count, offset=header_end)
    return IdxTensor(type_code, dims, data.astype(dtype.newbyteorder("=")).reshape(dims))


def load_idx(path: Path) -> IdxTensor:
    """Read an IDX file, transparently decompressing ``.gz`` files."""
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "rb") as stream:
        tensor = parse_idx(stream)
    logger.debug("Loaded IDX %s with dims %s", path, tensor.dims)
    return tensor


def find_idx_file(directory: Path, stem: str) -> Path:
    for candidate in (directory / stem, directory / f"{stem}.gz"):
        if candidate.exists():
            return candidate
    raise FileNotFoundError(f"IDX file '{stem}' (or '{stem}.gz') not found in {directory}")


def load_mnist(directory: Path, scale: float = 1.0) -> DatasetSplits:
    """
    Load MNIST from ``directory`` into train/val/test splits.

    Train and validation come from consecutive blocks at the head of the training
    file (55,000 then 5,000 images at full scale), test from the head of the test file. Pixels are
    scaled to [0, 1] and flattened to 784 features; targets are integer labels and
    ``source_ids`` are image indices within their source file.

    Raises:
        FileNotFoundError: If an IDX file is missing.
        InvalidArgumentError: If images and labels disagree or a file is too small for ``scale``.
    """
    images = {
        name: load_idx(find_idx_file(directory, stem)).data for name, stem in MNIST_FILES.items()
    }
    for part in ("train", "test"):
        if len(images[f"{part}_images"]) != len(images[f"{part}_labels"]):
            raise InvalidArgumentError(f"MNIST {part} images and labels have different lengths")

    n_train, n_val, n_test = split_sizes(scale) if scale < 1.0 else FULL_SPLIT
    if n_train + n_val > len(images["train_images"]) or n_test > len(images["test_images"]):
        raise InvalidArgumentError(
            f"MNIST files in {directory} are too small for splits ({n_train}, {n_val}, {n_test})"
        )

    def take(split: str, part: str, start: int, stop: int) -> WindowedDataset:
        pixels = images[f"{part}_images"][start:stop]
        inputs = pixels.reshape(len(pixels), -1).astype(np.float64) / 255.0
        labels = images[f"{part}_labels"][start:stop].astype(np.int64)
        ids = np.arange(start, stop)
        return WindowedDataset(split, inputs, labels, ids)  # type: ignore[arg-type]

    return DatasetSplits(
        take("train", "train", 0, n_train),
        take("val", "train", n_train, n_train + n_val),
        take("test", "test", 0, n_test),
    )
