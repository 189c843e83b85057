import numpy as np
import pytest


@pytest.fixture
def make_tt_cores():
    """Factory for random core chains with a prescribed rank vector."""

    def _make(rng, dims, ranks):
        assert len(ranks) == len(dims) + 1
        assert ranks[0] == 1 and ranks[-1] == 1
        return tuple(
            rng.standard_normal((ranks[j], dims[j], ranks[j + 1]))
            for j in range(len(dims))
        )

    return _make


@pytest.fixture
def tiny_png(tmp_path):
    """Write a small random RGB PNG and return (path, pixel array)."""
    from PIL import Image

    rng = np.random.default_rng(2024)
    pixels = rng.integers(0, 256, size=(10, 12, 3), dtype=np.uint8)
    path = tmp_path / "tiny.png"
    Image.fromarray(pixels, "RGB").save(path)
    return path, pixels
