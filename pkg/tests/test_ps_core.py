"""Membership, sieving, and counting-ratio checks."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pslab import ps_core


class TestFloorRootPower:
    def test_examples(self):
        assert ps_core.floor_root_power(4, 3, 2) == 8
        assert ps_core.floor_root_power(2, 3, 2) == 2
        assert ps_core.floor_root_power(10, 2, 3) == 4

    def test_edge_cases(self):
        assert ps_core.floor_root_power(0, 2, 3) == 0
        assert ps_core.floor_root_power(1, 7, 5) == 1
        with pytest.raises(ValueError):
            ps_core.floor_root_power(4, 0, 2)

    @given(st.integers(min_value=0, max_value=10 ** 12),
           st.integers(min_value=1, max_value=7),
           st.integers(min_value=1, max_value=7))
    def test_defining_inequality(self, n, a, b):
        r = ps_core.floor_root_power(n, a, b)
        assert r ** b <= n ** a < (r + 1) ** b

    @given(st.integers(min_value=1, max_value=10 ** 9),
           st.integers(min_value=1, max_value=5),
           st.integers(min_value=1, max_value=5))
    def test_ceil_relation(self, n, a, b):
        r = ps_core.ceil_root_power(n, a, b)
        assert (r - 1) ** b < n ** a <= r ** b


class TestPSExponent:
    def test_valid(self):
        c = ps_core.PSExponent(3, 2)
        assert float(c.c) == 1.5
        assert str(c) == "3/2"

    def test_parse(self):
        assert ps_core.PSExponent.parse("21/20") == ps_core.PSExponent(21, 20)

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            ps_core.PSExponent(2, 1)
        with pytest.raises(ValueError):
            ps_core.PSExponent(1, 1)

    def test_rejects_common_factor(self):
        with pytest.raises(ValueError):
            ps_core.PSExponent(4, 2)


class TestMembership:
    def test_examples_three_halves(self):
        c = ps_core.PSExponent(3, 2)
        assert ps_core.is_ps_member(5, c)
        assert not ps_core.is_ps_member(4, c)
        assert ps_core.is_ps_member(8, c)
        assert ps_core.is_ps_member(1, c)

    def test_members_list(self):
        c = ps_core.PSExponent(3, 2)
        assert ps_core.ps_members(11, c) == [1, 2, 5, 8, 11]

    @pytest.mark.parametrize("c", [ps_core.PSExponent(21, 20),
                                   ps_core.PSExponent(3, 2)])
    def test_against_enumeration_oracle(self, c):
        limit = 2000
        oracle = set()
        n = 1
        while True:
            m = ps_core.floor_root_power(n, c.p, c.q)
            if m > limit:
                break
            oracle.add(m)
            n += 1
        for m in range(1, limit + 1):
            assert ps_core.is_ps_member(m, c) == (m in oracle)

    def test_indicator_values(self):
        c = ps_core.PSExponent(21, 20)
        for m in range(1, 500):
            assert ps_core.floor_indicator(m, c) in (0, 1)

    def test_member_count_formula(self):
        # |{floor(n^c)} ∩ [x]| = #{n : n^c < x+1} = ceil((x+1)^(1/c)) - 1
        c = ps_core.PSExponent(3, 2)
        for x in (10, 100, 999, 10 ** 4):
            expected = ps_core.ceil_root_power(x + 1, c.q, c.p) - 1
            assert len(ps_core.ps_members(x, c)) == expected


class TestSieve:
    def test_small(self):
        assert ps_core.sieve_primes(10).tolist() == [2, 3, 5, 7]
        assert len(ps_core.sieve_primes(100)) == 25

    def test_against_trial_division(self):
        def is_prime(n):
            return n >= 2 and all(n % k for k in range(2, math.isqrt(n) + 1))

        primes = set(ps_core.sieve_primes(10 ** 4).tolist())
        for n in range(2, 10 ** 4 + 1):
            assert (n in primes) == is_prime(n)

    def test_million(self):
        assert len(ps_core.sieve_primes(10 ** 6)) == 78498

    def test_tiny(self):
        assert len(ps_core.sieve_primes(1)) == 0


class TestPSPrimes:
    def test_example(self):
        c = ps_core.PSExponent(3, 2)
        assert ps_core.ps_primes(11, c).members.tolist() == [2, 5, 11]

    def test_near_one_keeps_most_primes(self):
        c = ps_core.PSExponent(101, 100)
        members = ps_core.ps_primes(50, c).members.tolist()
        all_primes = ps_core.sieve_primes(50).tolist()
        assert len(members) >= len(all_primes) - 3

    def test_empty(self):
        c = ps_core.PSExponent(3, 2)
        assert len(ps_core.ps_primes(1, c)) == 0


class TestPNTRatio:
    def test_sanity_band(self):
        rep = ps_core.pnt_ratio(1000, ps_core.PSExponent(21, 20))
        assert 0.5 < rep.ratio < 2

    def test_warns_outside_proven_range(self):
        with pytest.warns(UserWarning):
            ps_core.pnt_ratio(100, ps_core.PSExponent(13, 11))

    def test_x_too_small(self):
        with pytest.raises(ValueError):
            ps_core.pnt_ratio(2, ps_core.PSExponent(21, 20))
