import itertools
import random
from functools import lru_cache

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hyperramsey.pcv import (
    DegenerateSubsetError,
    Pcv,
    contains,
    enum_pp,
    enum_qq,
    enum_vk,
    pcv_from_counts,
)


def P(*parts):
    return Pcv(tuple(parts))


@lru_cache(maxsize=None)
def partition_count(s, largest):
    """Partitions of s with parts <= largest, by the standard recursion."""
    if s == 0:
        return 1
    if largest == 0:
        return 0
    return sum(partition_count(s - j, min(j, s - j)) for j in range(1, min(largest, s) + 1))


def brute_force_family(s, d):
    """All distinct sorted compositions of s into at most d positive parts."""
    out = set()
    for n in range(1, d + 1):
        for comp in itertools.product(range(1, s + 1), repeat=n):
            if sum(comp) == s:
                out.add(tuple(sorted(comp, reverse=True)))
    return out


class TestPcvFromCounts:
    def test_examples(self):
        assert pcv_from_counts([2, 0, 3, 1]) == P(3, 2, 1)
        assert pcv_from_counts([4]) == P(4)
        assert pcv_from_counts([1, 1, 1, 1]) == P(1, 1, 1, 1)

    def test_all_zero_is_degenerate(self):
        with pytest.raises(DegenerateSubsetError):
            pcv_from_counts([0, 0])

    def test_rejects_bad_parts(self):
        with pytest.raises(ValueError):
            Pcv((1, 2))
        with pytest.raises(ValueError):
            Pcv((2, 0))
        with pytest.raises(ValueError):
            Pcv(())

    def test_text_round_trip(self):
        for v in enum_vk(8, 8):
            assert Pcv.parse(str(v)) == v
        assert str(P(3, 1)) == "(3,1)"


class TestContains:
    def test_examples(self):
        assert contains(P(4, 2), P(2, 2))
        assert contains(P(3, 2), P(3, 1))
        assert not contains(P(3, 3), P(3, 1, 1))

    @pytest.mark.criterion(6)
    @pytest.mark.parametrize("s", range(1, 13))
    def test_partial_order_laws(self, s):
        # all PCVs of total <= s: laws must hold across totals too
        fam = [v for t in range(1, s + 1) for v in enum_vk(t, t)]
        for a in fam:
            assert contains(a, a)
        for a, b in itertools.product(fam, repeat=2):
            if a != b and contains(a, b):
                assert not contains(b, a)
        if s <= 7:
            for a, b, c in itertools.product(fam, repeat=3):
                if contains(a, b) and contains(b, c):
                    assert contains(a, c)

    @pytest.mark.criterion(6)
    def test_partial_order_exact_up_to_12(self):
        # relation matrix over every PCV of total <= 12; C @ C must not add pairs
        fam = [v for t in range(1, 13) for v in enum_vk(t, t)]
        assert len(fam) == 271
        c = np.array([[contains(a, b) for b in fam] for a in fam])
        assert c.diagonal().all()
        assert not (c & c.T & ~np.eye(len(fam), dtype=bool)).any()
        composed = c.astype(np.int64) @ c.astype(np.int64) > 0
        assert not (composed & ~c).any()


class TestFamilies:
    def test_vk_examples(self):
        assert list(enum_vk(4, 2)) == [P(4), P(3, 1), P(2, 2)]
        assert list(enum_vk(4, 7)) == list(enum_vk(4, 4))
        assert len(enum_vk(4, 7)) == 5
        assert list(enum_vk(1, 1)) == [P(1)]

    def test_pp_examples(self):
        assert list(enum_pp(6, 2)) == [P(4, 2), P(3, 3)]
        assert all(2 <= v[0] <= 4 for v in enum_pp(6, 5))
        assert list(enum_pp(3, 2)) == []

    def test_qq_examples(self):
        assert list(enum_qq(5, 2)) == [P(4, 1), P(3, 2)]
        q7 = list(enum_qq(7, 5))
        assert P(3, 1, 1, 1, 1) in q7 and P(7) not in q7
        assert list(enum_qq(2, 2)) == [P(1, 1)]

    @pytest.mark.parametrize("s", range(1, 9))
    @pytest.mark.parametrize("d", range(1, 9))
    def test_vk_matches_composition_oracle(self, s, d):
        fam = enum_vk(s, d)
        assert {v.parts for v in fam} == brute_force_family(s, d)
        assert len(set(fam)) == len(fam)

    @pytest.mark.parametrize("s", range(1, 13))
    def test_partition_counts(self, s):
        assert len(enum_vk(s, s)) == partition_count(s, s)
        assert [partition_count(s, s) for s in (4, 5, 6)] == [5, 7, 11]

    @pytest.mark.parametrize("s", range(1, 13))
    def test_families_beyond_s_parts_are_unchanged(self, s):
        for d in range(s, s + 4):
            assert list(enum_vk(s, d)) == list(enum_vk(s, s))

    @pytest.mark.parametrize("s", range(3, 13))
    def test_order_is_decreasing_lex(self, s):
        for d in (2, 3, s):
            parts = [v.parts for v in enum_vk(s, d)]
            assert parts == sorted(parts, reverse=True)

    @pytest.mark.parametrize("s", range(3, 11))
    def test_pq_filters(self, s):
        for d in range(2, s + 1):
            vk = list(enum_vk(s, d))
            assert list(enum_pp(s, d)) == [v for v in vk if v[0] <= s - 2]
            assert list(enum_qq(s, d)) == [v for v in vk if v[0] <= s - 1]


def _subset_pcvs(blocks, xs):
    return pcv_from_counts([sum(1 for x in xs if blocks[x] == b) for b in range(max(blocks) + 1)])


class TestSubsetRealization:
    """PCVs of subsets of X are exactly the PCVs contained in pcv(X)."""

    @pytest.mark.criterion(6)
    @pytest.mark.parametrize("size", range(1, 9))
    @pytest.mark.parametrize("d", range(1, 5))
    def test_exhaustive(self, size, d):
        # every way of spreading `size` labelled vertices over d blocks, up to relabelling,
        # is determined by its count vector; enumerate all of them
        for counts in enum_vk(size, d):
            blocks = [b for b, c in enumerate(counts) for _ in range(c)]
            xs = range(size)
            px = _subset_pcvs(blocks, xs)
            realized = set()
            for r in range(1, size + 1):
                for ys in itertools.combinations(xs, r):
                    py = _subset_pcvs(blocks, ys)
                    assert contains(px, py)
                    # coordinate-wise domination
                    assert all(a >= b for a, b in zip(px, py))
                    realized.add(py)
            below = {v for t in range(1, size + 1) for v in enum_vk(t, d) if contains(px, v)}
            assert realized == below

    @given(st.lists(st.integers(0, 3), min_size=1, max_size=8), st.data())
    def test_random_universe(self, blocks, data):
        xs = list(range(len(blocks)))
        ys = data.draw(st.lists(st.sampled_from(xs), min_size=1, unique=True))
        px = _subset_pcvs(blocks, xs)
        py = _subset_pcvs(blocks, ys)
        assert contains(px, py)
