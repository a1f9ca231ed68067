import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vecmsm import limbvec as lv


def test_pack_examples():
    assert lv.pack(0) == [0] * 16
    assert lv.pack(1 << 25) == [0, 1] + [0] * 14
    with pytest.raises(ValueError):
        lv.pack(1 << 400)
    with pytest.raises(ValueError):
        lv.pack(-1)


def test_unpack_examples():
    assert lv.unpack([0] * 16) == 0
    assert lv.unpack([1, 1] + [0] * 14) == (1 << 25) + 1


@settings(max_examples=200, deadline=None)
@given(st.integers(0, (1 << 400) - 1))
def test_pack_unpack_roundtrip(x):
    assert lv.unpack(lv.pack(x)) == x


@settings(max_examples=200, deadline=None)
@given(st.integers(0, (1 << 63) - 1))
def test_mask_identity_matches_bitwise_and(x):
    assert lv.mask_low25(x) == x & 0x1FFFFFF


def test_mask_identity_signed():
    for x in (-1, -(1 << 25), -(1 << 40) - 7, 12345):
        assert lv.mask_low25(x) == x % (1 << 25)


def test_coarse_step_zero():
    out, c = lv.coarse_carry_step([0] * 8, 0)
    assert out == [0] * 8 and c == 0


def test_coarse_step_lane0_carry():
    # lane 0 masks to 1 and its carry lands in lane 1
    out, c = lv.coarse_carry_step([(1 << 25) + 1, 5, 0, 0, 0, 0, 0, 0], 0)
    assert out == [1, 6, 0, 0, 0, 0, 0, 0]
    assert c == 0


def test_coarse_step_top_lane_exit():
    out, c = lv.coarse_carry_step([0] * 7 + [1 << 26], 0)
    assert out == [0] * 8
    assert c == 2


def test_coarse_step_carry_in_enters_lane0():
    out, c = lv.coarse_carry_step([0] * 8, 77)
    assert out == [77] + [0] * 7 and c == 0


def test_coarse_propagate_all_max_corner():
    chunk = [(1 << 50) - 1] * 8
    out, c = lv.coarse_carry_propagate(chunk, 0)
    assert all(0 <= v <= 1 << 25 for v in out)
    assert lv.unpack(chunk) == lv.unpack(out) + (c << 200)


@settings(max_examples=300, deadline=None)
@given(st.lists(st.integers(0, (1 << 50) - 1), min_size=8, max_size=8),
       st.integers(0, 1 << 25))
def test_coarse_propagate_value_and_bound(chunk, c_in):
    out, c_out = lv.coarse_carry_propagate(chunk, c_in)
    assert lv.unpack(chunk) + c_in == lv.unpack(out) + (c_out << 200)
    assert all(0 <= v <= 1 << 25 for v in out)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(-(1 << 57), 1 << 57), min_size=8, max_size=8),
       st.integers(-(1 << 33), 1 << 33))
def test_coarse_propagate_value_preserved_on_wide_signed_lanes(chunk, c_in):
    out, c_out = lv.coarse_carry_propagate(chunk, c_in)
    assert lv.unpack(chunk) + c_in == lv.unpack(out) + (c_out << 200)


def test_accurate_examples():
    out, carry = lv.accurate_carry_propagate([1 << 25, 0] + [0] * 14, spill=False)
    assert out[:3] == [0, 1, 0] and carry == 0
    canonical = list(range(16))
    again, carry = lv.accurate_carry_propagate(canonical, spill=False)
    assert again == canonical and carry == 0  # idempotent on canonical input


def test_accurate_spills_into_next_lane():
    lanes = [(1 << 26) + 3] * 8 + [5] + [0] * 7
    out, carry = lv.accurate_carry_propagate(lanes, 0, 8, spill=True)
    assert carry == 0
    assert all(0 <= v < (1 << 25) for v in out[:8])
    assert lv.unpack(out) == lv.unpack(lanes)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, (1 << 62) - 1), min_size=16, max_size=16))
def test_accurate_value_preservation_and_idempotence(lanes):
    once, c1 = lv.accurate_carry_propagate(lanes, spill=False)
    assert lv.unpack(lanes) == lv.unpack(once) + (c1 << (25 * 16))
    assert all(0 <= v < (1 << 25) for v in once)
    twice, c2 = lv.accurate_carry_propagate(once, spill=False)
    assert twice == once and c2 == 0
