import math
from fractions import Fraction

import numpy as np
import pytest

from core.constants import ArithmeticMode, Parity
from core.exceptions import (
    EnumerationCapExceeded,
    MarginalValidationError,
    SOutsideInterval,
)
from schemas.measure_schemas import AtomicMeasure
from services.measure_service import _feasible_interval
from utils.subset_masks import popcount_array, prefix_mask

RATIONAL = ArithmeticMode.RATIONAL


class TestInvariants:
    def test_mixed_profile(self, measure_family, profile):
        values = profile(0.1, 0.2, 0.3, 0.4, mode=RATIONAL)

        assert measure_family.invariant_p(values) == 1
        assert measure_family.invariant_m(values) == 2

    def test_large_marginals(self, measure_family, profile):
        values = profile(0.6, 0.7, 0.8)

        assert measure_family.invariant_p(values) == 0
        assert measure_family.invariant_m(values) == 0

    def test_uniform_half(self, measure_family, uniform):
        values = uniform(8, 0.5)

        assert measure_family.invariant_p(values) == 3
        assert measure_family.invariant_m(values) == 4


class TestSInterval:
    def test_uniform_half(self, measure_family, uniform):
        interval = measure_family.s_interval(uniform(3, 0.5))

        assert interval.s_min == Fraction(-1, 8)
        assert interval.s_max == Fraction(1, 8)
        assert (interval.p, interval.m) == (1, 1)
        assert not interval.collapsed

    @pytest.mark.parametrize("n", range(2, 17))
    def test_uniform_half_for_every_size(self, measure_family, uniform, n):
        interval = measure_family.s_interval(uniform(n, "1/2"))

        assert interval.s_min == Fraction(-1, 2**n)
        assert interval.s_max == Fraction(1, 2**n)
        assert interval.p == (n - 1) // 2
        assert interval.m == n // 2

    def test_underflowed_floats_are_not_collapsed(
        self, measure_family, uniform
    ):
        interval = measure_family.s_interval(
            uniform(1200, 0.5, ArithmeticMode.FLOATING)
        )

        assert interval.s_max == 0.0
        assert not interval.collapsed
        assert interval.log_s_max == pytest.approx(-1200 * math.log(2))
        assert interval.log_abs_s_min == pytest.approx(-1200 * math.log(2))

    def test_interval_cache_is_bounded(self, measure_family, uniform):
        for n in range(2, 50):
            measure_family.s_interval(uniform(n, 0.25))

        cache = _feasible_interval.cache_info()
        assert cache.maxsize == 32
        assert cache.currsize <= 32

    def test_endpoint_products(self, measure_family, profile):
        interval = measure_family.s_interval(
            profile(0.1, 0.2, 0.3, 0.4, mode=RATIONAL)
        )

        assert interval.s_min == Fraction("-0.0024")
        assert interval.s_max == Fraction("0.0036")

    def test_no_pairs(self, measure_family, profile):
        interval = measure_family.s_interval(
            profile(0.6, 0.7, 0.8, mode=RATIONAL)
        )

        assert interval.s_min == Fraction("-0.024")
        assert interval.s_max == Fraction("0.036")

    def test_zero_marginal_collapses(self, measure_family, profile):
        interval = measure_family.s_interval(profile(0.0, 0.5))

        assert interval.s_min == 0
        assert interval.s_max == 0
        assert interval.collapsed

    def test_single_event_collapses(self, measure_family, profile):
        assert measure_family.s_interval(profile(0.5)).collapsed

    def test_m_is_p_or_p_plus_one(self, measure_family, oracle):
        for values in oracle.random_profiles(count=50, max_n=9, seed=3):
            interval = measure_family.s_interval(values)
            assert interval.m - interval.p in (0, 1)
            assert interval.s_min <= 0 <= interval.s_max


class TestAtoms:
    def test_vectorized_atoms_match_products(self, measure_family, profile):
        values = profile(0.15, 0.2, 0.35, 0.9)
        atoms = measure_family.product_atoms(values)

        for mask in range(16):
            assert atoms[mask] == measure_family.atom_product(values, mask)

    def test_product_atoms_sum_to_one(self, measure_family, uniform):
        atoms = measure_family.product_atoms(uniform(6, "0.3"))
        assert atoms.sum() == 1

    def test_cap(self, measure_family, uniform):
        with pytest.raises(EnumerationCapExceeded):
            measure_family.product_atoms(
                uniform(21, 0.5, ArithmeticMode.FLOATING)
            )


class TestBuildMeasure:
    def test_negative_endpoint_loads_odd_subsets(
        self, measure_family, uniform
    ):
        measure = measure_family.build_measure(
            uniform(3, 0.5), Fraction(-1, 8)
        )
        counts = popcount_array(3)

        assert all(measure.atom_probs[counts % 2 == 1] == Fraction(1, 4))
        assert all(measure.atom_probs[counts % 2 == 0] == 0)

    def test_marginals_are_preserved(self, measure_family, profile):
        values = profile(0.1, 0.2, 0.3, 0.4, mode=RATIONAL)
        interval = measure_family.s_interval(values)

        for s in (interval.s_min, 0, interval.s_max):
            measure = measure_family.build_measure(values, s)
            assert measure.atom_probs.sum() == 1
            for i, a in enumerate(values.sorted_values):
                assert measure_family.joint_probability(measure, 1 << i) == a

    def test_endpoint_zeroes_extremal_atom(self, measure_family, profile):
        values = profile(0.1, 0.2, 0.3, 0.4, mode=RATIONAL)
        interval = measure_family.s_interval(values)

        at_max = measure_family.build_measure(values, interval.s_max)
        at_min = measure_family.build_measure(values, interval.s_min)

        assert at_max.atom_probs[prefix_mask(2 * interval.p + 1)] == 0
        assert at_min.atom_probs[prefix_mask(2 * interval.m)] == 0
        assert min(at_max.atom_probs) == 0

    def test_outside_interval(self, measure_family, uniform):
        with pytest.raises(
            SOutsideInterval, match="s outside feasible interval"
        ) as error:
            measure_family.build_measure(uniform(3, 0.5), "0.2")
        assert "s_max" in str(error.value)

    @pytest.mark.parametrize("side", ["s_min", "s_max"])
    def test_tiny_overshoot_leaves_a_negative_atom(
        self, measure_family, oracle, side
    ):
        overshoot = 1 + Fraction(1, 10**9)
        for values in oracle.random_profiles(
            count=10, max_n=10, seed=5, mode=RATIONAL
        ):
            s = getattr(measure_family.s_interval(values), side) * overshoot
            atoms = (
                measure_family.product_atoms(values)
                + measure_family._signs(values) * s
            )
            assert atoms.min() < 0

            with pytest.raises(SOutsideInterval) as error:
                measure_family.build_measure(values, s)
            assert side in str(error.value)
            assert "would be -" in str(error.value)

    def test_floating_endpoint_has_no_negative_atoms(
        self, measure_family, oracle
    ):
        for values in oracle.random_profiles(count=20, max_n=8, seed=11):
            interval = measure_family.s_interval(values)
            for s in (interval.s_min, interval.s_max):
                atoms = measure_family.build_measure(values, s).atom_probs
                assert atoms.min() >= 0


class TestParityConstruction:
    @pytest.mark.parametrize(
        "parity, loaded", [(Parity.EVEN, 1), (Parity.ODD, 0)]
    )
    def test_mass_on_one_parity(self, measure_family, parity, loaded):
        measure = measure_family.parity_construction(4, parity, RATIONAL)
        counts = popcount_array(4)

        assert all(measure.atom_probs[counts % 2 == loaded] == Fraction(1, 8))
        assert all(measure.atom_probs[counts % 2 != loaded] == 0)

    @pytest.mark.parametrize("n", [2, 5, 6])
    def test_even_parity_sits_at_s_min(self, measure_family, uniform, n):
        measure = measure_family.parity_construction(n, Parity.EVEN, RATIONAL)

        assert measure.s == measure_family.s_interval(uniform(n, 0.5)).s_min
        assert measure.atom_probs[0] == 0
        assert measure.atom_probs[1] == Fraction(2, 2**n)

    @pytest.mark.parametrize("parity", list(Parity))
    def test_order_is_n_minus_one(self, measure_family, uniform, parity):
        measure = measure_family.parity_construction(4, parity, RATIONAL)

        order = measure_family.independence_order(measure, uniform(4, 0.5))
        assert order == 3

    def test_rejects_single_event(self, measure_family):
        with pytest.raises(MarginalValidationError):
            measure_family.parity_construction(1, Parity.EVEN)


class TestIndependenceOrder:
    def test_product_measure_is_fully_independent(
        self, measure_family, profile
    ):
        values = profile(0.1, 0.2, 0.3, 0.4)
        measure = measure_family.build_measure(values, 0)

        assert measure_family.independence_order(measure, values) == 4

    def test_family_member_is_n_minus_one_wise(self, measure_family, profile):
        values = profile(0.1, 0.2, 0.3, 0.4)
        measure = measure_family.build_measure(values, 0.001)

        assert measure_family.independence_order(measure, values) == 3

    def test_marginal_mismatch_is_order_zero(self, measure_family, profile):
        values = profile(0.1, 0.2, 0.3, mode=RATIONAL)
        atoms = np.array(measure_family.product_atoms(values))
        atoms[0] += Fraction(1, 100)
        atoms[1] -= Fraction(1, 100)
        measure = AtomicMeasure(n=3, atom_probs=atoms, mode=RATIONAL)

        assert measure_family.independence_order(measure, values) == 0


class TestMeasureJson:
    def test_subsets_use_input_positions(self, measure_family, profile):
        values = profile(0.4, 0.1)
        measure = measure_family.build_measure(values, 0)

        payload = measure_family.measure_to_json(measure, values).model_dump(
            mode="json"
        )

        assert payload["n"] == 2
        assert payload["s"] == 0
        assert [atom["subset"] for atom in payload["atoms"]] == [
            [],
            [2],
            [1],
            [1, 2],
        ]
        assert payload["atoms"][2]["prob"] == pytest.approx(0.4 * 0.9)

    def test_documented_keys_only(self, measure_family, uniform):
        values = uniform(3, 0.5)
        measure = measure_family.build_measure(values, Fraction(-1, 8))

        payload = measure_family.measure_to_json(measure, values).model_dump(
            mode="json"
        )

        assert set(payload) == {"n", "s", "atoms"}
        assert payload["s"] == -0.125
        assert all(
            set(atom) == {"subset", "prob"} for atom in payload["atoms"]
        )
        assert [atom["prob"] for atom in payload["atoms"]] == [
            0.0,
            0.25,
            0.25,
            0.0,
            0.25,
            0.0,
            0.0,
            0.25,
        ]

    def test_rational_probs_stay_exact(self, measure_family, uniform):
        values = uniform(2, 0.3)
        measure = measure_family.build_measure(values, 0)

        payload = measure_family.measure_to_json(measure, values)

        assert payload.atoms[3].prob == Fraction(9, 100)
