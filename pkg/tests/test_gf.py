import random

import numpy as np
import pytest

from oracles import brute_order, deg, irreducible_brute, school_mul

from ssac.gf import (
    DEFAULT_POLYS,
    FieldMismatchError,
    FieldSpec,
    field,
    field_for_order,
    log_base_two,
)


def test_default_polys_are_irreducible_of_right_degree():
    for width, poly in DEFAULT_POLYS.items():
        assert deg(poly) == width
        assert irreducible_brute(poly)


def test_reducible_poly_rejected():
    with pytest.raises(ValueError):
        field(4, 0b10101)  # (x^2 + x + 1)^2
    with pytest.raises(ValueError):
        field(4, 0b1011)  # degree 3, not 4


def test_width_bounds():
    for bad in (0, 9, -1):
        with pytest.raises(ValueError):
            FieldSpec(bad)


def test_field_cache_returns_same_object():
    assert field(4) is field(4, DEFAULT_POLYS[4])
    assert field_for_order(256) is field(8)
    with pytest.raises(ValueError):
        field_for_order(100)


def test_mul_matches_schoolbook_exhaustive_gf16(f16):
    for a in range(16):
        for b in range(16):
            assert f16.mul(a, b) == school_mul(a, b, f16.poly)


def test_mul_matches_schoolbook_sampled_gf256(f256):
    rnd = random.Random(99)
    for _ in range(4000):
        a, b = rnd.randrange(256), rnd.randrange(256)
        assert f256.mul(a, b) == school_mul(a, b, f256.poly)


def test_field_axioms_exhaustive_gf16(f16):
    elems = range(16)
    for a in elems:
        assert f16.add(a, 0) == a
        assert f16.add(a, a) == 0
        assert f16.mul(a, 1) == a
        assert f16.mul(a, 0) == 0
        if a:
            assert f16.mul(a, f16.inv(a)) == 1
    for a in elems:
        for b in elems:
            assert f16.mul(a, b) == f16.mul(b, a)
            assert f16.add(a, b) == f16.add(b, a)
            for c in elems:
                assert f16.mul(a, f16.mul(b, c)) == f16.mul(f16.mul(a, b), c)
                assert f16.mul(a, f16.add(b, c)) == f16.add(
                    f16.mul(a, b), f16.mul(a, c)
                )


def test_field_axioms_sampled_gf256(f256):
    rnd = random.Random(7)
    for _ in range(3000):
        a, b, c = (rnd.randrange(256) for _ in range(3))
        assert f256.mul(a, f256.add(b, c)) == f256.add(f256.mul(a, b), f256.mul(a, c))
        assert f256.mul(a, f256.mul(b, c)) == f256.mul(f256.mul(a, b), c)
        if a:
            assert f256.mul(a, f256.inv(a)) == 1


def test_axioms_all_widths():
    for width in range(1, 9):
        fld = field(width)
        q = fld.order
        rnd = random.Random(width)
        for _ in range(500):
            a, b, c = (rnd.randrange(q) for _ in range(3))
            assert fld.mul(a, fld.add(b, c)) == fld.add(fld.mul(a, b), fld.mul(a, c))
            assert school_mul(a, b, fld.poly) == fld.mul(a, b)


def test_spot_values_gf16(f16):
    assert f16.mul(5, 14) == 4
    assert f16.inv(5) == 15
    assert f16.mul(5, 15) == 1


def test_pow(f16):
    assert f16.pow(2, 0) == 1
    assert f16.pow(2, 15) == 1
    assert f16.pow(4, 2) == f16.mul(4, 4)
    assert f16.pow(7, -1) == f16.inv(7)
    assert f16.pow(0, 3) == 0
    with pytest.raises(ZeroDivisionError):
        f16.pow(0, 0)
    with pytest.raises(ZeroDivisionError):
        f16.inv(0)


def test_generator_generates(f16, f256):
    for fld in (f16, f256):
        seen = {1}
        val = fld.generator
        for _ in range(fld.order - 2):
            seen.add(val)
            val = fld.mul(val, fld.generator)
        assert seen == set(range(1, fld.order))


def test_primitivity_matches_brute_order(f16):
    expected = [a for a in range(1, 16) if brute_order(a, f16.poly, 16) == 15]
    assert [a for a in range(1, 16) if f16.is_primitive(a)] == expected
    assert expected == [2, 4, 6, 7, 9, 12, 13, 14]
    assert list(f16.primitive_elements()) == expected
    assert not f16.is_primitive(1)
    assert not f16.is_primitive(0)


def test_primitivity_gf256_spot_checks(f256):
    # phi(255) = 128 primitive elements in total
    assert len(f256.primitive_elements()) == 128
    for a in (21, 43):
        assert f256.is_primitive(a)
        assert brute_order(a, f256.poly, 256) == 255
    # order of any non-primitive divides 255 properly
    for a in (1, 16):
        if not f256.is_primitive(a):
            assert brute_order(a, f256.poly, 256) < 255


def test_mul_table_properties(f16):
    assert f16.mul_table.shape == (16, 16)
    assert not f16.mul_table.flags.writeable
    assert np.array_equal(f16.mul_table, f16.mul_table.T)


def test_out_of_range_elements_rejected(f16):
    with pytest.raises(FieldMismatchError):
        f16.mul(16, 1)
    with pytest.raises(FieldMismatchError):
        f16.add(-1, 1)
    with pytest.raises(FieldMismatchError):
        f16.inv(200)


def test_field_equality_and_repr(f16):
    assert f16 == field(4, 0b11001)
    assert f16 != field(8)
    assert "0x19" in repr(f16) or "25" in repr(f16)
    assert list(f16.elements()) == list(range(16))


def test_log_base_two():
    assert log_base_two(16) == 4
    assert log_base_two(2) == 1
    with pytest.raises(ValueError):
        log_base_two(12)
