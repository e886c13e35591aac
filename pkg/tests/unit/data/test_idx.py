"""Unit tests for wmm_lab.data.idx."""

import gzip
import io
import struct

import numpy as np
import pytest

from wmm_lab.core.constants import MNIST_FILES
from wmm_lab.core.errors import (
    IdxMagicError,
    IdxParseError,
    IdxTrailingBytesError,
    IdxTruncatedError,
    IdxUnsupportedTypeError,
    InvalidArgumentError,
)
from wmm_lab.core.settings import settings
from wmm_lab.data.idx import find_idx_file, load_idx, load_mnist, parse_idx
from wmm_lab.ops.rng import make_rng

# 2x3 unsigned bytes 1..6
SMALL = bytes([0, 0, 0x08, 2, 0, 0, 0, 2, 0, 0, 0, 3, 1, 2, 3, 4, 5, 6])


def encode_idx(array: np.ndarray, type_code: int = 0x08) -> bytes:
    header = bytes([0, 0, type_code, array.ndim]) + b"".join(struct.pack(">I", d) for d in array.shape)
    return header + array.astype(array.dtype.newbyteorder(">")).tobytes()


# ---------------------------------------------------------------------------
# parse_idx
# ---------------------------------------------------------------------------


class TestParseIdx:
    def test_small_unsigned_tensor(self):
        tensor = parse_idx(SMALL)
        assert tensor.dims == (2, 3)
        assert tensor.data.tolist() == [[1, 2, 3], [4, 5, 6]]
        assert tensor.dtype == np.dtype(">u1")

    def test_reads_from_stream(self):
        assert parse_idx(io.BytesIO(SMALL)).dims == (2, 3)

    def test_big_endian_floats(self):
        values = np.array([[1.5, -2.25]], dtype=np.float32)
        tensor = parse_idx(encode_idx(values, 0x0D))
        assert tensor.data.tolist() == [[1.5, -2.25]]
        assert tensor.data.dtype.isnative

    def test_signed_integers(self):
        values = np.array([-3, 70_000], dtype=np.int32)
        assert parse_idx(encode_idx(values, 0x0C)).data.tolist() == [-3, 70_000]

    def test_zero_sized_dimension(self):
        tensor = parse_idx(bytes([0, 0, 0x08, 2, 0, 0, 0, 0, 0, 0, 0, 5]))
        assert tensor.data.shape == (0, 5)

    @pytest.mark.parametrize("offset", [0, 1])
    def test_bad_magic_reports_offset(self, offset):
        corrupted = bytearray(SMALL)
        corrupted[offset] = 0x01
        with pytest.raises(IdxMagicError) as excinfo:
            parse_idx(corrupted)
        assert excinfo.value.offset == offset

    def test_unknown_type_code(self):
        corrupted = bytearray(SMALL)
        corrupted[2] = 0x0A
        with pytest.raises(IdxUnsupportedTypeError, match="0x0a") as excinfo:
            parse_idx(corrupted)
        assert excinfo.value.offset == 2

    @pytest.mark.parametrize("length", [0, 1, 3, 7, 11, 12, 17])
    def test_truncation_reports_end_of_input(self, length):
        with pytest.raises(IdxTruncatedError) as excinfo:
            parse_idx(SMALL[:length])
        assert excinfo.value.offset == length

    def test_trailing_bytes(self):
        with pytest.raises(IdxTrailingBytesError, match="1 bytes") as excinfo:
            parse_idx(SMALL + b"\x00")
        assert excinfo.value.offset == len(SMALL)

    def test_huge_declared_payload_is_truncation(self):
        header = bytes([0, 0, 0x0E, 3]) + b"\xff\xff\xff\xff" * 3
        with pytest.raises(IdxTruncatedError):
            parse_idx(header)

    def test_random_corruption_only_raises_parse_errors(self):
        rng = make_rng(99)
        base = encode_idx(np.arange(24, dtype=np.int16).reshape(2, 3, 4), 0x0B)
        for _ in range(10_000):
            data = bytearray(base)
            for position in rng.integers(0, len(data), size=int(rng.integers(1, 4))):
                data[position] = int(rng.integers(0, 256))
            data = data[: int(rng.integers(0, len(data) + 1))]
            try:
                tensor = parse_idx(data)
            except IdxParseError:
                continue
            assert tensor.data.size == int(np.prod(tensor.dims))


class TestLoadIdx:
    def test_plain_and_gzip_files_agree(self, tmp_path):
        plain = tmp_path / "small-idx"
        plain.write_bytes(SMALL)
        packed = tmp_path / "small-idx.gz"
        packed.write_bytes(gzip.compress(SMALL))
        assert np.array_equal(load_idx(plain).data, load_idx(packed).data)


# ---------------------------------------------------------------------------
# load_mnist
# ---------------------------------------------------------------------------


@pytest.fixture
def mnist_dir(tmp_path):
    """Fake MNIST with 2x2 images: 20 training and 5 test images, pixel value = index."""
    rng = make_rng(0)
    files = {
        "train_images": np.arange(20, dtype=np.uint8).repeat(4).reshape(20, 2, 2),
        "train_labels": rng.integers(0, 10, size=20).astype(np.uint8),
        "test_images": np.arange(5, dtype=np.uint8).repeat(4).reshape(5, 2, 2),
        "test_labels": rng.integers(0, 10, size=5).astype(np.uint8),
    }
    for name, array in files.items():
        target = tmp_path / MNIST_FILES[name]
        if name.startswith("test"):
            target.with_name(target.name + ".gz").write_bytes(gzip.compress(encode_idx(array)))
        else:
            target.write_bytes(encode_idx(array))
    return tmp_path


class TestLoadMnist:
    def test_validation_follows_training_block(self, mnist_dir):
        # 55,000/5,000/10,000 * 0.0002 = 11/1/2
        splits = load_mnist(mnist_dir, scale=0.0002)
        assert [len(s) for s in splits] == [11, 1, 2]
        assert splits.train.source_ids.tolist() == list(range(11))
        assert splits.val.source_ids.tolist() == [11]
        assert splits.test.source_ids.tolist() == [0, 1]

    def test_pixels_scaled_and_flattened(self, mnist_dir):
        splits = load_mnist(mnist_dir, scale=0.0002)
        assert splits.val.inputs.shape == (1, 4)
        assert splits.val.inputs.tolist() == [[11 / 255] * 4]
        assert splits.train.targets.dtype == np.int64

    def test_files_too_small_for_scale(self, mnist_dir):
        with pytest.raises(InvalidArgumentError, match="too small"):
            load_mnist(mnist_dir, scale=0.01)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError, match="train-images-idx3-ubyte"):
            load_mnist(tmp_path)

    def test_label_count_mismatch(self, mnist_dir):
        (mnist_dir / MNIST_FILES["train_labels"]).write_bytes(encode_idx(np.zeros(19, dtype=np.uint8)))
        with pytest.raises(InvalidArgumentError, match="different lengths"):
            load_mnist(mnist_dir, scale=0.0002)


class TestRealMnistFiles:
    @pytest.mark.parametrize(
        "name, dims",
        [("train_images", (60_000, 28, 28)), ("test_images", (10_000, 28, 28))],
    )
    def test_published_image_dims(self, name, dims):
        directory = settings.data.mnist_dir
        if directory is None:
            pytest.skip("WMM_LAB_MNIST_DIR not set")
        try:
            path = find_idx_file(directory, MNIST_FILES[name])
        except FileNotFoundError:
            pytest.skip(f"{MNIST_FILES[name]} not present in {directory}")
        assert load_idx(path).dims == dims
