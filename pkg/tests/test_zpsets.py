import random

import numpy as np
import pytest

import subgroup_lab.zpsets as zpsets
from subgroup_lab.numtheory import subgroup
from subgroup_lab.zpsets import (
    InvariantSet,
    ZpSet,
    dilate,
    fold_sumset,
    invariant_set,
    is_invariant,
    shift_intersect,
    sumset,
    translate,
)

from oracles import (
    brute_dilate,
    brute_fold,
    brute_shift_intersect,
    brute_sumset,
    brute_translate,
)

PRIMES = (3, 5, 7, 13, 31, 101)


def rand_elements(p, rng, lo=0):
    k = rng.randint(lo, p - 1)
    return rng.sample(range(p), k)


class TestZpSet:
    def test_from_elements_normalizes(self):
        S = ZpSet.from_elements(7, [8, 15, 1, -3, 4])
        assert list(S.members()) == [1, 4]
        assert S.card == 2
        assert len(S) == 2

    def test_empty(self):
        S = ZpSet.empty(11)
        assert S.card == 0
        assert list(S.members()) == []

    def test_contains(self):
        S = ZpSet.from_elements(7, [1, 2, 4])
        assert 2 in S
        assert 9 in S  # 9 = 2 mod 7
        assert 3 not in S

    def test_eq_hash(self):
        a = ZpSet.from_elements(7, [1, 2, 4])
        b = ZpSet.from_elements(7, [4, 1, 2])
        assert a == b
        assert hash(a) == hash(b)
        assert a != ZpSet.from_elements(7, [1, 2])
        assert a != ZpSet.from_elements(11, [1, 2, 4])

    def test_bits_immutable(self):
        S = ZpSet.from_elements(7, [1])
        with pytest.raises(ValueError):
            S.bits[0] = True

    def test_constructor_copies(self):
        bits = np.zeros(7, dtype=bool)
        bits[3] = True
        S = ZpSet(7, bits)
        bits[5] = True
        assert 5 not in S

    def test_rejects_bad_modulus(self):
        with pytest.raises(ValueError):
            ZpSet.from_elements(8, [1])

    def test_covers_nonzero(self):
        assert ZpSet.from_elements(5, [1, 2, 3, 4]).covers_nonzero()
        assert ZpSet.from_elements(5, [0, 1, 2, 3, 4]).covers_nonzero()
        assert not ZpSet.from_elements(5, [1, 2, 3]).covers_nonzero()

    def test_is_subset_of(self):
        small = ZpSet.from_elements(7, [1, 2])
        big = ZpSet.from_elements(7, [1, 2, 4])
        assert small.is_subset_of(big)
        assert not big.is_subset_of(small)
        with pytest.raises(ValueError):
            small.is_subset_of(ZpSet.from_elements(11, [1, 2]))

    def test_text_roundtrip(self):
        S = ZpSet.from_elements(7, [1, 2, 4])
        assert S.to_text() == "7:{1,2,4}"
        assert ZpSet.from_text("7:{1,2,4}") == S
        E = ZpSet.empty(11)
        assert ZpSet.from_text(E.to_text()) == E

    def test_from_text_rejects_garbage(self):
        for bad in ("7", "7:{1,2", "x:{1}", "7:[1]", ""):
            with pytest.raises(ValueError):
                ZpSet.from_text(bad)


class TestPointwiseOps:
    def test_translate_matches_oracle(self):
        rng = random.Random(1)
        for p in PRIMES:
            for _ in range(5):
                els = rand_elements(p, rng)
                S = ZpSet.from_elements(p, els)
                for z in (0, 1, p - 1, rng.randrange(p)):
                    got = set(int(v) for v in translate(S, z).members())
                    assert got == brute_translate(els, z, p)

    def test_dilate_matches_oracle(self):
        rng = random.Random(2)
        for p in PRIMES:
            els = rand_elements(p, rng)
            S = ZpSet.from_elements(p, els)
            for a in range(1, p):
                got = set(int(v) for v in dilate(S, a).members())
                assert got == brute_dilate(els, a, p)

    def test_dilate_by_zero_rejected(self):
        S = ZpSet.from_elements(7, [1, 2])
        with pytest.raises(ValueError):
            dilate(S, 0)
        with pytest.raises(ValueError):
            dilate(S, 14)

    def test_shift_intersect_matches_oracle(self):
        rng = random.Random(3)
        for p in PRIMES:
            els = rand_elements(p, rng)
            S = ZpSet.from_elements(p, els)
            for s in range(p):
                got = set(int(v) for v in shift_intersect(S, s).members())
                assert got == brute_shift_intersect(els, s, p)


class TestSumset:
    def test_matches_oracle_small_path(self):
        rng = random.Random(4)
        for p in PRIMES:
            for _ in range(8):
                xs, ys = rand_elements(p, rng), rand_elements(p, rng)
                got = sumset(ZpSet.from_elements(p, xs), ZpSet.from_elements(p, ys))
                assert set(int(v) for v in got.members()) == brute_sumset(xs, ys, p)

    def test_matches_oracle_convolution_path(self, monkeypatch):
        monkeypatch.setattr(zpsets, "SHIFT_OR_THRESHOLD", 0)
        rng = random.Random(5)
        for p in PRIMES:
            for _ in range(4):
                xs = rand_elements(p, rng, lo=1)
                ys = rand_elements(p, rng, lo=1)
                got = sumset(ZpSet.from_elements(p, xs), ZpSet.from_elements(p, ys))
                assert set(int(v) for v in got.members()) == brute_sumset(xs, ys, p)

    def test_paths_agree(self, monkeypatch):
        rng = random.Random(6)
        p = 131
        pairs = [
            (rand_elements(p, rng, lo=1), rand_elements(p, rng, lo=1))
            for _ in range(10)
        ]
        small = [
            sumset(ZpSet.from_elements(p, a), ZpSet.from_elements(p, b))
            for a, b in pairs
        ]
        monkeypatch.setattr(zpsets, "SHIFT_OR_THRESHOLD", 0)
        large = [
            sumset(ZpSet.from_elements(p, a), ZpSet.from_elements(p, b))
            for a, b in pairs
        ]
        assert small == large

    def test_empty_operand(self):
        S = ZpSet.from_elements(7, [1, 2])
        assert sumset(S, ZpSet.empty(7)).card == 0

    def test_zero_singleton_is_identity(self):
        S = ZpSet.from_elements(11, [2, 3, 7])
        assert sumset(S, ZpSet.from_elements(11, [0])) == S

    def test_modulus_mismatch(self):
        with pytest.raises(ValueError):
            sumset(ZpSet.from_elements(7, [1]), ZpSet.from_elements(11, [1]))

    def test_golden_subgroup_7_3(self):
        A = subgroup(7, 3).indicator
        two = sumset(A, A)
        assert list(two.members()) == [1, 2, 3, 4, 5, 6]


class TestFoldSumset:
    def test_k1_is_identity(self):
        A = ZpSet.from_elements(13, [1, 5, 8])
        assert fold_sumset(A, 1) == A

    def test_matches_oracle(self):
        rng = random.Random(7)
        for p in (7, 13, 31):
            els = rand_elements(p, rng, lo=1)
            S = ZpSet.from_elements(p, els)
            for k in (2, 3, 4):
                got = fold_sumset(S, k)
                assert set(int(v) for v in got.members()) == brute_fold(els, k, p)

    def test_golden_3a_covers_everything(self):
        A = subgroup(7, 3).indicator
        assert list(fold_sumset(A, 3).members()) == [0, 1, 2, 3, 4, 5, 6]

    def test_rejects_nonpositive_k(self):
        A = ZpSet.from_elements(7, [1])
        for k in (0, -1):
            with pytest.raises(ValueError):
                fold_sumset(A, k)


class TestInvariantSets:
    def test_golden_union(self):
        A = subgroup(7, 3)
        S = invariant_set(A, (1, 3))
        assert list(S.members()) == [1, 2, 3, 4, 5, 6]
        assert S.reps == (1, 3)
        assert not S.includes_zero

    def test_zero_flag(self):
        A = subgroup(7, 3)
        S = invariant_set(A, (1,), includes_zero=True)
        assert list(S.members()) == [0, 1, 2, 4]

    def test_single_rep_is_the_subgroup_itself(self):
        A = subgroup(7, 3)
        assert list(invariant_set(A, (1,)).members()) == [1, 2, 4]

    def test_rejects_zero_rep(self):
        with pytest.raises(ValueError):
            invariant_set(subgroup(7, 3), (0,))

    def test_rejects_same_coset_reps(self):
        # 2 sits in the coset of 1 for the cubes mod 7
        with pytest.raises(ValueError):
            invariant_set(subgroup(7, 3), (1, 2))

    def test_is_invariant(self):
        A = subgroup(13, 4)
        assert is_invariant(A.indicator, A)
        assert is_invariant(invariant_set(A, (1, 2)).base, A)
        with_zero = invariant_set(A, (2,), includes_zero=True).base
        assert is_invariant(with_zero, A)
        assert not is_invariant(ZpSet.from_elements(13, [1, 5]), A)
        assert is_invariant(ZpSet.empty(13), A)

    def test_members_sorted(self):
        A = subgroup(13, 4)
        S = invariant_set(A, (2,), includes_zero=True)
        m = list(S.members())
        assert m == sorted(m)
        assert isinstance(S, InvariantSet)
