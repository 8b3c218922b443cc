import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from smoothlab import (EmptyDomainError, GridFunction, GridMismatchError,
                       GridOffset, Region, check_leibniz1, check_leibniz2,
                       check_telescoping, diff1, diff2, multiply, sample,
                       translate)

from conftest import random_gridfunction


def grid_of(fn, dx=2.0 ** -8, lo=-4.0, hi=4.0, **kw):
    return sample(fn, dx, lo, hi, **kw)


class TestGridFunction:
    def test_invariants(self):
        with pytest.raises(ValueError):
            GridFunction(-0.1, 0.0, np.ones(4), 0.0, 0.3)
        with pytest.raises(ValueError):
            GridFunction(0.1, 0.0, np.ones(4), 0.0, 0.5)  # beyond range

    def test_exact_lookup(self):
        f = grid_of(lambda x: x ** 3)
        assert f.value_at(0.5) == 0.5 ** 3
        with pytest.raises(ValueError):
            f.index_of(0.5 + 1e-4)

    def test_empty_domain_flag(self):
        f = GridFunction(0.1, 0.0, np.ones(4), 0.2, 0.1)
        assert f.domain_empty
        with pytest.raises(EmptyDomainError):
            f.valid_index_range()

    def test_values_read_only(self):
        f = grid_of(np.sin)
        with pytest.raises(ValueError):
            f.values[0] = 1.0


class TestTranslate:
    def test_identity_map_shift(self):
        f = grid_of(lambda x: x)
        g = translate(f, GridOffset(f.index_of(1.0) - f.index_of(0.0)))
        assert g.valid_lo == -3.0 and g.valid_hi == 4.0
        xs = np.arange(-3.0, 4.0, 0.25)
        for x in xs:
            assert g.value_at(x) == pytest.approx(x - 1.0, abs=1e-12)

    def test_constant(self):
        f = grid_of(lambda x: np.full_like(x, 3.0))
        g = translate(f, GridOffset(37))
        lo, hi = g.valid_index_range()
        assert np.all(g.values[lo:hi + 1] == 3.0)

    def test_zero_shift_bit_identical(self):
        f = grid_of(np.sin)
        g = translate(f, GridOffset(0))
        assert np.array_equal(g.values, f.values)

    def test_round_trip_restores(self):
        f = grid_of(np.cos)
        k = 19
        g = translate(translate(f, GridOffset(k)), GridOffset(-k))
        lo, hi = g.valid_index_range()
        assert np.array_equal(g.values[lo:hi + 1], f.values[lo:hi + 1])

    @given(st.integers(-40, 40))
    @settings(max_examples=25, deadline=None)
    def test_round_trip_any_offset(self, k):
        f = random_gridfunction(11)
        g = translate(translate(f, GridOffset(k)), GridOffset(-k))
        if not g.domain_empty:
            lo, hi = g.valid_index_range()
            assert np.array_equal(g.values[lo:hi + 1], f.values[lo:hi + 1])


class TestDifferences:
    def test_diff1_linear(self):
        f = grid_of(lambda x: x)
        d = diff1(f, GridOffset(128))  # h = 0.5
        lo, hi = d.valid_index_range()
        assert np.allclose(d.values[lo:hi + 1], 0.5, atol=1e-12)

    def test_diff1_constant(self):
        f = grid_of(lambda x: np.full_like(x, 2.5))
        d = diff1(f, GridOffset(-7))
        lo, hi = d.valid_index_range()
        assert np.all(d.values[lo:hi + 1] == 0.0)

    def test_diff1_square_pointwise(self):
        # brute-force oracle: evaluate f(x+h) - f(x) directly
        f = grid_of(lambda x: x * x, dx=2.0 ** -10)
        h = 0.25
        d = diff1(f, GridOffset(int(h / f.spacing)))
        lo, hi = d.valid_index_range()
        xs = f.origin + f.spacing * np.arange(lo, hi + 1)
        expected = (xs + h) ** 2 - xs ** 2
        assert np.allclose(d.values[lo:hi + 1], expected, atol=1e-12)
        assert np.allclose(d.values[lo:hi + 1], 0.5 * xs + 0.0625, atol=1e-12)

    def test_diff2_kills_affine(self):
        f = grid_of(lambda x: 3.0 * x - 1.0)
        d = diff2(f, GridOffset(33))
        lo, hi = d.valid_index_range()
        assert np.allclose(d.values[lo:hi + 1], 0.0, atol=1e-12)

    def test_diff2_square_constant(self):
        f = grid_of(lambda x: x * x)
        h = 64 * f.spacing  # 0.25
        d = diff2(f, GridOffset(64))
        lo, hi = d.valid_index_range()
        assert np.allclose(d.values[lo:hi + 1], 2 * h * h, atol=1e-12)

    def test_diff1_twice_equals_diff2(self):
        f = random_gridfunction(3)
        for k in (1, 5, -4):
            a = diff1(diff1(f, GridOffset(k)), GridOffset(k))
            b = diff2(f, GridOffset(k))
            lo = max(a.valid_lo, b.valid_lo)
            hi = min(a.valid_hi, b.valid_hi)
            ia = a.valid_index_range()
            ib = b.valid_index_range()
            lo_i, hi_i = max(ia[0], ib[0]), min(ia[1], ib[1])
            assert np.array_equal(a.values[lo_i:hi_i + 1],
                                  b.values[lo_i:hi_i + 1])

    @given(st.integers(-30, 30))
    @settings(max_examples=25, deadline=None)
    def test_valid_count_shrinks_by_offset(self, k):
        f = random_gridfunction(4)
        before = f.valid_index_range()
        d = diff1(f, GridOffset(k))
        if d.domain_empty:
            return
        after = d.valid_index_range()
        assert (before[1] - before[0]) - (after[1] - after[0]) == abs(k)


class TestIdentities:
    def test_product_rule_x_times_sin(self):
        f = grid_of(lambda x: x, dx=2.0 ** -10)
        g = grid_of(np.sin, dx=2.0 ** -10)
        fg_max = np.max(np.abs(f.values * g.values))
        assert check_leibniz1(f, g, GridOffset(256)) <= 1e-12 * (1 + fg_max)

    def test_product_rule_constants_exact(self):
        f = grid_of(lambda x: np.ones_like(x))
        assert check_leibniz1(f, f, GridOffset(5)) == 0.0
        assert check_leibniz2(f, f, GridOffset(5)) == 0.0

    def test_product_rules_random(self):
        f = random_gridfunction(21)
        g = random_gridfunction(22)
        scale = 1 + np.max(np.abs(f.values * g.values))
        assert check_leibniz1(f, g, GridOffset(3)) <= 1e-12 * scale
        assert check_leibniz2(f, g, GridOffset(5)) <= 1e-12 * scale

    def test_second_product_rule_identity_map(self):
        f = grid_of(lambda x: x)
        assert check_leibniz2(f, f, GridOffset(16)) <= 1e-12 * (1 + 16.0)

    def test_grid_mismatch_rejected(self):
        f = grid_of(np.sin)
        g = grid_of(np.sin, dx=2.0 ** -7)
        with pytest.raises(GridMismatchError):
            check_leibniz1(f, g, GridOffset(1))

    def test_telescoping_exp(self):
        f = sample(np.exp, 2.0 ** -8, -2.0, 2.0)
        scale = 1 + np.max(np.abs(f.values))
        assert check_telescoping(f, GridOffset(1), 1) <= 1e-12 * scale

    def test_telescoping_affine_exact(self):
        f = grid_of(lambda x: 2.0 * x + 1.0)
        assert check_telescoping(f, GridOffset(2), 3) <= 1e-13

    def test_telescoping_deep_random(self):
        f = random_gridfunction(7, n=2048)
        assert check_telescoping(f, GridOffset(1), 6) <= 1e-11 * 2.0

    def test_telescoping_empty_domain(self):
        f = random_gridfunction(8, n=64)
        with pytest.raises(EmptyDomainError):
            check_telescoping(f, GridOffset(1), 7)


def test_multiply_intersects_domains():
    f = grid_of(np.sin)
    g = translate(grid_of(np.cos), GridOffset(12))
    prod = multiply(f, g)
    assert prod.valid_lo == g.valid_lo
    assert prod.value_at(1.0) == pytest.approx(np.sin(1.0) * np.cos(1.0 - 12 * f.spacing), rel=1e-12)
