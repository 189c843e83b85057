import numpy as np
import pytest
from PIL import Image

from ttshape import images
from ttshape.errors import IoFailure, UnsupportedFormat


class TestLoadImage:
    def test_white_png(self, tmp_path):
        path = tmp_path / "white.png"
        Image.fromarray(np.full((2, 2, 3), 255, dtype=np.uint8), "RGB").save(path)
        arr = images.load_image(path)
        assert arr.shape == (2, 2, 3)
        assert arr.dtype == np.float64
        assert (arr == 255.0).all()

    def test_binary_ppm(self, tmp_path):
        path = tmp_path / "black.ppm"
        path.write_bytes(b"P6\n1 1\n255\n\x00\x00\x00")
        arr = images.load_image(path)
        assert arr.shape == (1, 1, 3)
        assert (arr == 0.0).all()

    def test_round_trip_is_bit_identical(self, tmp_path, tiny_png):
        path, pixels = tiny_png
        arr = images.load_image(path)
        assert np.array_equal(arr, pixels.astype(np.float64))
        out = tmp_path / "copy.png"
        images.save_image(arr, out)
        assert np.array_equal(images.load_image(out), arr)

    def test_resize_from_loader(self, tmp_path):
        path = tmp_path / "wide.png"
        rng = np.random.default_rng(0)
        pixels = rng.integers(0, 256, size=(428, 640, 3), dtype=np.uint8)
        Image.fromarray(pixels, "RGB").save(path)
        arr = images.load_image(path, resize_longest=320)
        assert arr.shape == (214, 320, 3)

    def test_unsupported_format(self, tmp_path):
        path = tmp_path / "photo.jpg"
        Image.fromarray(np.zeros((4, 4, 3), dtype=np.uint8), "RGB").save(path, "JPEG")
        with pytest.raises(UnsupportedFormat):
            images.load_image(path)

    def test_garbage_bytes(self, tmp_path):
        path = tmp_path / "noise.png"
        path.write_bytes(b"this is not an image at all")
        with pytest.raises(UnsupportedFormat):
            images.load_image(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(IoFailure):
            images.load_image(tmp_path / "absent.png")


class TestResize:
    def test_landscape_halved(self):
        arr = np.zeros((428, 640, 3))
        out = images.resize_longest_side(arr, 320)
        assert out.shape == (214, 320, 3)

    def test_portrait(self):
        arr = np.zeros((640, 428, 3))
        out = images.resize_longest_side(arr, 320)
        assert out.shape == (320, 214, 3)

    def test_short_side_rounds_half_up(self):
        # 1 * 5 / 2 = 2.5 rounds to 3
        arr = np.zeros((1, 2, 3))
        out = images.resize_longest_side(arr, 5)
        assert out.shape == (3, 5, 3)

    def test_no_change_when_already_at_target(self):
        rng = np.random.default_rng(1)
        arr = rng.random((6, 4, 3))
        out = images.resize_longest_side(arr, 6)
        assert np.array_equal(out, arr)

    def test_nearest_neighbor_takes_source_pixels(self):
        arr = np.arange(16, dtype=np.float64).reshape(4, 4, 1)
        out = images.resize_longest_side(arr, 2)
        values = set(out.ravel().tolist())
        assert values <= set(arr.ravel().tolist())

    def test_short_side_never_collapses_to_zero(self):
        arr = np.zeros((1, 100, 3))
        out = images.resize_longest_side(arr, 10)
        assert out.shape[0] == 1

    def test_target_must_be_positive(self):
        with pytest.raises(ValueError):
            images.resize_longest_side(np.zeros((2, 2, 3)), 0)


class TestSaveImage:
    def test_clamp_and_round_half_up(self, tmp_path):
        t = np.array(
            [[[255.7, -0.4, 254.5], [0.0, 127.5, 1.49]]], dtype=np.float64
        )
        path = tmp_path / "clamped.png"
        images.save_image(t, path)
        arr = images.load_image(path)
        assert arr[0, 0].tolist() == [255.0, 0.0, 255.0]
        assert arr[0, 1].tolist() == [0.0, 128.0, 1.0]

    def test_wrong_shape_rejected(self, tmp_path):
        with pytest.raises(UnsupportedFormat):
            images.save_image(np.zeros((4, 4)), tmp_path / "bad.png")

    def test_unwritable_path(self, tmp_path):
        with pytest.raises(IoFailure):
            images.save_image(
                np.zeros((2, 2, 3)), tmp_path / "no" / "dir" / "img.png"
            )
