import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ttshape import tensor
from ttshape.errors import (
    CardinalityMismatch,
    InfeasibleShape,
    InvalidShape,
    NotDivisible,
)


class TestCardinality:
    def test_basic_product(self):
        assert tensor.cardinality((212, 320, 3)) == 203520

    def test_single_dim(self):
        assert tensor.cardinality((7,)) == 7

    def test_empty_shape_rejected(self):
        with pytest.raises(InvalidShape):
            tensor.cardinality(())

    def test_zero_dim_rejected(self):
        with pytest.raises(InvalidShape):
            tensor.cardinality((4, 0, 2))

    def test_negative_dim_rejected(self):
        with pytest.raises(InvalidShape):
            tensor.cardinality((4, -1))

    def test_overflow_rejected(self):
        with pytest.raises(InvalidShape):
            tensor.cardinality((2**32, 2**32))

    def test_largest_representable_accepted(self):
        assert tensor.cardinality((2**63 - 1,)) == 2**63 - 1


class TestReshape:
    def test_row_major_reinterpretation(self):
        t = np.arange(6, dtype=np.float64)
        out = tensor.reshape(t, (2, 3))
        assert out.tolist() == [[0, 1, 2], [3, 4, 5]]

    def test_buffer_is_shared(self):
        t = np.arange(12, dtype=np.float64)
        out = tensor.reshape(t, (3, 4))
        assert out.base is t or out.base is t.base

    def test_cardinality_mismatch(self):
        with pytest.raises(CardinalityMismatch):
            tensor.reshape(np.arange(6, dtype=np.float64), (2, 4))


class TestPadReshape:
    def test_trailing_zeros(self):
        t = np.arange(1, 7, dtype=np.float64).reshape(2, 3)
        out = tensor.pad_reshape(t, (2, 2, 2))
        flat = out.reshape(-1)
        assert flat[:6].tolist() == [1, 2, 3, 4, 5, 6]
        assert flat[6:].tolist() == [0, 0]
        assert out.shape == (2, 2, 2)

    def test_equal_cardinality_is_plain_reshape(self):
        t = np.arange(4, dtype=np.float64)
        out = tensor.pad_reshape(t, (2, 2))
        assert out.tolist() == [[0, 1], [2, 3]]

    def test_image_scale_padding(self):
        # 212*320*3 = 203520 elements into 2270*3*30 = 204300 slots.
        rng = np.random.default_rng(0)
        t = rng.random((212, 320, 3))
        out = tensor.pad_reshape(t, (2270, 3, 30))
        flat = out.reshape(-1)
        assert out.shape == (2270, 3, 30)
        assert np.array_equal(flat[:203520], t.reshape(-1))
        assert not flat[203520:].any()
        assert flat[203520:].size == 780

    def test_too_small_target_rejected(self):
        with pytest.raises(InfeasibleShape):
            tensor.pad_reshape(np.ones(9), (2, 2, 2))


class TestUnpad:
    def test_round_trip(self):
        rng = np.random.default_rng(1)
        t = rng.standard_normal((3, 4, 5))
        padded = tensor.pad_reshape(t, (7, 3, 4))
        back = tensor.unpad(padded, (3, 4, 5))
        assert back.tobytes() == t.tobytes()

    def test_identity_when_no_padding(self):
        t = np.arange(8, dtype=np.float64).reshape(2, 4)
        assert np.array_equal(tensor.unpad(t, (2, 4)), t)

    def test_too_few_elements_rejected(self):
        with pytest.raises(CardinalityMismatch):
            tensor.unpad(np.ones(5), (2, 3))


class TestUnfold:
    def test_basic(self):
        t = np.arange(24, dtype=np.float64).reshape(2, 3, 4)
        out = tensor.unfold(t, 6)
        assert out.shape == (6, 4)
        assert out[0].tolist() == [0, 1, 2, 3]

    def test_not_divisible(self):
        with pytest.raises(NotDivisible):
            tensor.unfold(np.arange(10, dtype=np.float64), 3)

    def test_rows_must_be_positive(self):
        with pytest.raises(NotDivisible):
            tensor.unfold(np.arange(4, dtype=np.float64), 0)


class TestFrobeniusNorm:
    def test_three_four_five(self):
        assert tensor.frobenius_norm(np.array([3.0, 4.0])) == 5.0

    def test_zeros(self):
        assert tensor.frobenius_norm(np.zeros((3, 3))) == 0.0

    def test_ones(self):
        assert tensor.frobenius_norm(np.ones((2, 2))) == 2.0


@st.composite
def _tensor_and_padded_shape(draw):
    src_dims = draw(
        st.lists(st.integers(min_value=1, max_value=5), min_size=1, max_size=3)
    )
    size = int(np.prod(src_dims))
    target = draw(
        st.lists(st.integers(min_value=1, max_value=8), min_size=1, max_size=4).filter(
            lambda dims: int(np.prod(dims)) >= size
        )
    )
    values = draw(
        st.lists(
            st.floats(
                min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False
            ),
            min_size=size,
            max_size=size,
        )
    )
    t = np.array(values, dtype=np.float64).reshape(src_dims)
    return t, tuple(target)


@settings(max_examples=80, deadline=None)
@given(_tensor_and_padded_shape())
def test_padding_preserves_norm_exactly(case):
    t, target = case
    padded = tensor.pad_reshape(t, target)
    assert tensor.frobenius_norm(padded) == tensor.frobenius_norm(t)


@settings(max_examples=80, deadline=None)
@given(_tensor_and_padded_shape())
def test_pad_unpad_round_trip_is_bit_exact(case):
    t, target = case
    back = tensor.unpad(tensor.pad_reshape(t, target), t.shape)
    assert back.shape == t.shape
    assert back.tobytes() == t.tobytes()
