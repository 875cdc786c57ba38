import random

import numpy as np
import pytest

import subgroup_lab.energetics as energetics
from subgroup_lab.energetics import (
    CosetProfile,
    EnergyReport,
    InvarianceViolation,
    additive_energy,
    additive_energy_spectral,
    coset_profile,
    energy_moment,
    energy_moment_from_profile,
    energy_report,
    invariant_convolution_sum,
    restricted_moment,
    shift_sizes,
    ssc_ratio_sum,
    sumset_ratio_sum,
    threshold_invariant_set,
)
from subgroup_lab.numtheory import divisors, subgroup
from subgroup_lab.spectral import convolve_counts
from subgroup_lab.zpsets import ZpSet, invariant_set

from oracles import (
    brute_energy,
    brute_energy_moment,
    brute_shift_profile,
    brute_ssc_ratio,
    brute_sumset_ratio,
)


def rand_set(p, rng, k):
    return rng.sample(range(p), k)


class TestShiftSizes:
    def test_matches_oracle(self):
        rng = random.Random(31)
        for p in (5, 7, 13, 31):
            for _ in range(4):
                els = rand_set(p, rng, rng.randint(0, p - 1))
                prof = shift_sizes(ZpSet.from_elements(p, els))
                assert list(prof) == brute_shift_profile(els, p)

    def test_conv_fallback_agrees(self, monkeypatch):
        rng = random.Random(32)
        p = 101
        els = rand_set(p, rng, 40)
        S = ZpSet.from_elements(p, els)
        fast = shift_sizes(S)
        monkeypatch.setattr(energetics, "_BINCOUNT_PAIR_LIMIT", 0)
        slow = shift_sizes(S)
        assert np.array_equal(fast, slow)

    def test_zero_shift_is_cardinality(self):
        S = ZpSet.from_elements(13, [2, 3, 5, 7])
        assert shift_sizes(S)[0] == 4


class TestAdditiveEnergy:
    def test_golden_7_3(self):
        A = subgroup(7, 3).indicator
        assert additive_energy(A, A) == 15

    def test_golden_full_group_mod_5(self):
        A = subgroup(5, 4).indicator
        assert additive_energy(A, A) == 52

    def test_matches_quadruple_loop(self):
        rng = random.Random(33)
        for p in (5, 7, 11, 13):
            for _ in range(3):
                axs = rand_set(p, rng, rng.randint(1, min(p - 1, 6)))
                bxs = rand_set(p, rng, rng.randint(1, min(p - 1, 6)))
                A = ZpSet.from_elements(p, axs)
                B = ZpSet.from_elements(p, bxs)
                assert additive_energy(A, B) == brute_energy(axs, bxs, p)

    def test_symmetric(self):
        rng = random.Random(34)
        p = 31
        A = ZpSet.from_elements(p, rand_set(p, rng, 7))
        B = ZpSet.from_elements(p, rand_set(p, rng, 11))
        assert additive_energy(A, B) == additive_energy(B, A)

    def test_empty(self):
        p = 11
        assert additive_energy(ZpSet.empty(p), ZpSet.from_elements(p, [1])) == 0

    def test_spectral_form_agrees(self):
        rng = random.Random(35)
        for p in (7, 31, 101):
            for _ in range(3):
                A = ZpSet.from_elements(p, rand_set(p, rng, rng.randint(1, p - 1)))
                B = ZpSet.from_elements(p, rand_set(p, rng, rng.randint(1, p - 1)))
                exact = additive_energy(A, B)
                spec = additive_energy_spectral(A, B)
                assert abs(spec - exact) <= 1e-6 * max(1, exact)

    def test_spectral_modulus_mismatch(self):
        with pytest.raises(ValueError):
            additive_energy_spectral(
                ZpSet.from_elements(7, [1]), ZpSet.from_elements(11, [1])
            )


class TestEnergyMoments:
    def test_r1_is_cardinality_squared(self):
        rng = random.Random(36)
        for p in (7, 31):
            els = rand_set(p, rng, 5)
            assert energy_moment(ZpSet.from_elements(p, els), 1) == 25.0

    def test_r2_is_energy(self):
        A = subgroup(7, 3).indicator
        assert energy_moment(A, 2) == 15.0

    def test_golden_e3_7_3(self):
        A = subgroup(7, 3).indicator
        assert energy_moment(A, 3) == 33.0

    def test_matches_oracle_fractional(self):
        rng = random.Random(37)
        for p in (7, 13, 31):
            els = rand_set(p, rng, rng.randint(1, p - 1))
            S = ZpSet.from_elements(p, els)
            for r in (1.5, 2.0, 3.0):
                want = brute_energy_moment(els, r, p)
                assert abs(energy_moment(S, r) - want) <= 1e-9 * max(1.0, want)

    def test_rejects_r_below_one(self):
        with pytest.raises(ValueError):
            energy_moment(ZpSet.from_elements(7, [1]), 0.5)

    def test_golden_e32_7_3(self):
        A = subgroup(7, 3).indicator
        assert abs(energy_moment(A, 1.5) - 11.196152422706632) <= 1e-12


class TestCosetProfile:
    def test_golden_7_3(self):
        prof = coset_profile(subgroup(7, 3))
        assert prof.pairs == ((1, 1), (3, 1))

    def test_sorted_by_size_desc(self):
        for p, d in ((101, 10), (211, 14)):
            prof = coset_profile(subgroup(p, d))
            sizes = [l for _, l in prof.pairs]
            assert sizes == sorted(sizes, reverse=True)
            assert isinstance(prof, CosetProfile)

    def test_sizes_cover_all_nonzero_shifts(self):
        # d * sum of coset sizes counts every nonzero shift intersection
        p, d = 61, 12
        A = subgroup(p, d)
        prof = coset_profile(A)
        raw = shift_sizes(A.indicator)
        assert d * int(prof.sizes().sum()) == int(raw[1:].sum())

    def test_full_group_single_entry(self):
        # one nonzero coset; every nonzero shift meets Z_p* in p-2 points
        assert coset_profile(subgroup(7, 6)).pairs == ((1, 5),)
        assert coset_profile(subgroup(11, 10)).pairs == ((1, 9),)

    def test_moment_from_profile_matches_direct(self):
        for p, d in ((13, 4), (101, 25), (211, 30)):
            A = subgroup(p, d)
            direct = energy_moment(A.indicator, 1.5)
            via_profile = energy_moment_from_profile(coset_profile(A))
            assert abs(direct - via_profile) <= 1e-9 * max(1.0, direct)


class TestRatioSums:
    def test_ssc_golden_7_3(self):
        assert abs(ssc_ratio_sum(subgroup(7, 3)) - 2.7) <= 1e-12

    def test_ssc_matches_oracle(self):
        for p, d in ((13, 4), (31, 6), (61, 12), (101, 20)):
            A = subgroup(p, d)
            want = brute_ssc_ratio(list(map(int, A.elements)), p)
            assert abs(ssc_ratio_sum(A) - want) <= 1e-9 * max(1.0, want)

    def test_ssc_trivial_subgroup(self):
        # only s = 0 contributes: 1^2 / |{1}+{1}| = 1
        assert ssc_ratio_sum(subgroup(7, 1)) == 1.0

    def test_sumset_ratio_golden_7_3(self):
        assert abs(sumset_ratio_sum(subgroup(7, 3)) - 3.5) <= 1e-12

    def test_sumset_ratio_trivial_subgroup(self):
        assert sumset_ratio_sum(subgroup(7, 1)) == 1.0

    def test_sumset_ratio_matches_oracle(self):
        for p, d in ((13, 4), (31, 6), (61, 12), (101, 20)):
            A = subgroup(p, d)
            want = brute_sumset_ratio(list(map(int, A.elements)), p)
            got = sumset_ratio_sum(A)
            assert abs(got - want) <= 1e-9 * max(1.0, want)

    def test_sumset_ratio_gate(self):
        A = subgroup(4099, 3)
        with pytest.raises(ValueError):
            sumset_ratio_sum(A)
        assert sumset_ratio_sum(A, allow_large=True) > 0


class TestInvariantMachinery:
    def test_convolution_sum_golden(self):
        A = subgroup(7, 3)
        S1 = invariant_set(A, (1,))
        S3 = invariant_set(A, (3,))
        both = invariant_set(A, (1, 3))
        assert invariant_convolution_sum(S1, S1, S1) == 3
        assert invariant_convolution_sum(S1, S1, S3) == 6
        assert invariant_convolution_sum(S1, S1, both) == 9

    def test_convolution_sum_matches_enumeration(self):
        A = subgroup(13, 4)
        S1 = invariant_set(A, (1, 2))
        S2 = invariant_set(A, (4,))
        S3 = invariant_set(A, (2, 4), includes_zero=True)
        xs = [int(v) for v in S1.members()]
        ys = [int(v) for v in S2.members()]
        zs = set(int(v) for v in S3.members())
        want = sum(1 for x in xs for y in ys if (x + y) % 13 in zs)
        assert invariant_convolution_sum(S1, S2, S3) == want

    def test_convolution_sum_rejects_mixed_subgroups(self):
        S1 = invariant_set(subgroup(7, 3), (1,))
        S2 = invariant_set(subgroup(7, 6), (1,))
        with pytest.raises(ValueError):
            invariant_convolution_sum(S1, S1, S2)

    def test_restricted_moment_golden(self):
        A = subgroup(7, 3)
        S = invariant_set(A, (1, 3))
        prof = convolve_counts(A.indicator, A.indicator)
        # counts on 1..6 are [1,1,2,1,2,2]; squares sum to 15
        assert restricted_moment(prof, S, 2.0) == 15.0

    def test_restricted_moment_r1_is_total_mass(self):
        A = subgroup(7, 3)
        prof = convolve_counts(A.indicator, A.indicator)
        everything = invariant_set(A, (1, 3), includes_zero=True)
        assert restricted_moment(prof, everything, 1.0) == 9.0

    def test_restricted_moment_zero_only(self):
        # A * (-A) piles |A| pairs on z = 0; {0} alone picks up counts[0]^r
        A = subgroup(7, 3)
        neg = ZpSet.from_elements(7, [(-int(x)) % 7 for x in A.elements])
        prof = convolve_counts(A.indicator, neg)
        zero_only = invariant_set(A, (), includes_zero=True)
        assert zero_only.members() == [0]
        assert restricted_moment(prof, zero_only, 2.0) == 9.0

    def test_restricted_moment_modulus_mismatch(self):
        prof = convolve_counts(subgroup(7, 3).indicator, subgroup(7, 3).indicator)
        with pytest.raises(ValueError):
            restricted_moment(prof, invariant_set(subgroup(13, 4), (1,)), 2.0)

    def test_threshold_set_golden(self):
        A = subgroup(7, 3)
        prof = convolve_counts(A.indicator, A.indicator)
        assert list(threshold_invariant_set(prof, A, 2.0).members()) == [3, 5, 6]
        assert list(threshold_invariant_set(prof, A, 0.5).members()) == [1, 2, 3, 4, 5, 6]
        assert threshold_invariant_set(prof, A, 2.5).base.card == 0

    def test_threshold_set_include_zero(self):
        A = subgroup(7, 3)
        two = invariant_set(A, (1, 3), includes_zero=True)  # all of Z_7
        prof = convolve_counts(two.base, two.base)
        S = threshold_invariant_set(prof, A, 1.0, include_zero=True)
        assert S.includes_zero
        assert 0 in S.base

    def test_threshold_set_raises_on_nonconstant_profile(self):
        A = subgroup(13, 4)
        lopsided = ZpSet.from_elements(13, [1, 2])  # not A-invariant
        prof = convolve_counts(A.indicator, lopsided)
        with pytest.raises(InvarianceViolation):
            threshold_invariant_set(prof, A, 1.0)

    def test_threshold_result_is_invariant_and_counted(self):
        A = subgroup(31, 6)
        prof = convolve_counts(A.indicator, A.indicator)
        for k in (1.0, 2.0, 3.0):
            S = threshold_invariant_set(prof, A, k)
            members = set(int(v) for v in S.members())
            want = {z for z in range(1, 31) if prof.counts[z] >= k}
            assert members == want


class TestEnergyReport:
    def test_fields_golden_7_3(self):
        rep = energy_report(subgroup(7, 3))
        assert isinstance(rep, EnergyReport)
        assert (rep.p, rep.d) == (7, 3)
        assert rep.twoA_size == 6
        assert rep.energy == 15
        assert rep.energy3 == 33
        assert abs(rep.energy32 - 11.196152422706632) <= 1e-12
        assert abs(rep.ssc_ratio - 2.7) <= 1e-12
        assert abs(rep.sumset_ratio - 3.5) <= 1e-12

    def test_sumset_ratio_optional(self):
        rep = energy_report(subgroup(101, 20), with_sumset_ratio=False)
        assert rep.sumset_ratio is None
        assert rep.energy == additive_energy(subgroup(101, 20).indicator, subgroup(101, 20).indicator)
