"""Ring contexts: packed arithmetic, valuations, digits, sections."""

import pytest

from simclass import (
    BadDescriptor,
    BadLevel,
    DigitOutOfRange,
    NonUnit,
    RingElem,
    parse_ring,
    ring_ctx,
    section,
    section_of,
)


def test_parse_ring_round_trip():
    for desc in ["z:2:1", "z:2:3", "z:7:2", "t:3:2", "t:5:1"]:
        ctx = parse_ring(desc)
        assert ctx.descriptor == desc
        assert parse_ring(desc) is ctx  # contexts are interned


@pytest.mark.parametrize(
    "desc", ["q:2:2", "z:4:2", "z:9:1", "z:2:0", "t:1:3", "z:2", "z:2:2:2", "z:x:1"]
)
def test_parse_ring_rejects_bad_descriptors(desc):
    with pytest.raises((BadDescriptor, BadLevel, ValueError)):
        parse_ring(desc)


def test_integer_flavor_matches_modular_arithmetic():
    ctx = ring_ctx("z", 2, 3)
    for a in range(8):
        for b in range(8):
            assert ctx.add_raw(a, b) == (a + b) % 8
            assert ctx.mul_raw(a, b) == (a * b) % 8
            assert ctx.sub_raw(a, b) == (a - b) % 8


def test_poly_flavor_multiplies_without_carries():
    ctx = ring_ctx("t", 3, 3)
    one_plus_t = 1 + 3
    one_plus_2t = 1 + 2 * 3
    # (1+t)(1+2t) = 1 + 3t + 2t^2 = 1 + 0t + 2t^2 over F_3
    assert ctx.mul_raw(one_plus_t, one_plus_2t) == 1 + 2 * 9
    # t^2 * t = 0 in length 3
    assert ctx.mul_raw(9, 3) == 0
    # addition is digitwise
    assert ctx.add_raw(2 + 3, 2 + 2 * 3) == 1  # (2+t)+(2+2t) = 4+3t = 1


@pytest.mark.parametrize("flavor,p,length", [("z", 2, 3), ("z", 3, 2), ("t", 2, 3), ("t", 3, 2)])
def test_units_invert_exactly(flavor, p, length):
    ctx = ring_ctx(flavor, p, length)
    units = 0
    for a in range(ctx.cardinality):
        if ctx.is_unit_raw(a):
            units += 1
            assert ctx.mul_raw(a, ctx.inv_raw(a)) == 1
        else:
            with pytest.raises(NonUnit):
                ctx.inv_raw(a)
    assert units == (p - 1) * p ** (length - 1)


@pytest.mark.parametrize("flavor", ["z", "t"])
def test_valuation_and_unit_split(flavor):
    ctx = ring_ctx(flavor, 3, 3)
    assert ctx.val_raw(0) == 3
    for a in range(1, ctx.cardinality):
        v = ctx.val_raw(a)
        t, u = ctx.unit_split_raw(a)
        assert t == v and ctx.is_unit_raw(u)
        assert ctx.mul_raw(ctx.pi_pow_raw(t), u) == a
        assert ctx.mul_raw(ctx.pi_pow_raw(v), ctx.div_pi_raw(a, v)) == a


def test_digits_round_trip():
    for flavor in ("z", "t"):
        ctx = ring_ctx(flavor, 5, 3)
        for a in [0, 1, 7, 24, 124, 66]:
            ds = ctx.digits_raw(a)
            assert len(ds) == 3 and all(0 <= d < 5 for d in ds)
            assert ctx.from_digits_raw(ds) == a


def test_mod_pi_truncates_low_digits():
    ctx = ring_ctx("z", 2, 3)
    for a in range(8):
        ds = ctx.digits_raw(a)
        assert ctx.digits_raw(ctx.mod_pi_raw(a, 2))[:2] == ds[:2]
        assert ctx.digits_raw(ctx.mod_pi_raw(a, 2))[2] == 0


def test_elem_wrappers_and_residue():
    ctx = ring_ctx("z", 3, 2)
    x, y = ctx.elem(4), ctx.elem(7)
    assert (x + y).val == 2 and (x * y).val == (4 * 7) % 9
    assert (-x).val == 5 and bool(ctx.zero()) is False
    assert x.is_unit() and x.inverse() * x == ctx.one()
    assert ctx.pi().valuation() == 1
    assert x.residue().val == 1 and x.residue().ctx.length == 1
    assert x.truncate(1).val == 1 and x.truncate(1).ctx is ctx.truncated(1)
    assert ctx.truncated(1).elem(1).lift(2).val == 1


def test_sections_hold_truncated_digit_vectors():
    ctx = ring_ctx("z", 2, 3)
    s = section_of(ctx.elem(7), 2)  # digits (1,1,1) cut to level 2
    assert s.level == 2 and s.value.val == 3
    assert section(ctx, 2, (1, 1)).value.val == 3
    with pytest.raises(DigitOutOfRange):
        section(ctx, 2, (2, 0))
    # the level-l section of x is x mod pi^l
    for a in range(8):
        for lvl in range(4):
            assert section_of(ctx.elem(a), lvl).value.val == ctx.mod_pi_raw(a, lvl)


def test_truncate_and_extend():
    ctx = ring_ctx("t", 2, 3)
    assert ctx.truncated(2).length == 2 and ctx.truncated(2).flavor == "t"
    assert ctx.truncated(2).extended(3) is ctx
    assert ctx.residue_field().length == 1
    assert ctx.q == 2 and ring_ctx("z", 3, 2).q == 3


def test_elements_and_units_iterators():
    ctx = ring_ctx("z", 2, 2)
    assert [e.val for e in ctx.elements()] == [0, 1, 2, 3]
    assert [u.val for u in ctx.units()] == [1, 3]


def test_mixed_context_operations_are_rejected():
    from simclass import CtxMismatch

    a = ring_ctx("z", 2, 2).elem(1)
    b = ring_ctx("t", 2, 2).elem(1)
    with pytest.raises(CtxMismatch):
        a + b


def test_elem_validates_range():
    ctx = ring_ctx("z", 2, 2)
    with pytest.raises(Exception):
        RingElem(ctx, 4)
