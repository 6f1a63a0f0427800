import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linrep import (
    ArityMismatchError,
    BudgetExceededError,
    GroundSet,
    LinearForm,
    RepClass,
    canonicalize,
    class_counts,
    count_at,
    rep_function,
)
from linrep.repcount import _general_counts

from oracles import brute_counts, class_key, ordered_solutions

nonzero = st.integers(min_value=-5, max_value=5).filter(bool)
forms3 = st.lists(nonzero, min_size=1, max_size=3).map(lambda c: LinearForm(tuple(c)))
small_sets = st.sets(st.integers(-30, 30), min_size=0, max_size=6).map(GroundSet.of)


class TestGroundSet:
    def test_sorted_distinct(self):
        g = GroundSet.of([3, -1, 3, 0])
        assert g.elements == (-1, 0, 3)
        assert len(g) == 3 and -1 in g and 2 not in g

    def test_json_roundtrip(self):
        g = GroundSet.of([10**40, -3, 7])
        again = GroundSet.from_json(g.to_json())
        assert again == g
        assert json.loads(g.to_json()) == ["-3", "7", str(10**40)]

    def test_max_abs(self):
        assert GroundSet.of([]).max_abs() == 0
        assert GroundSet.of([-9, 4]).max_abs() == 9


class TestCanonicalize:
    def test_symmetric_pair(self):
        form = LinearForm.parse("1,1")
        assert canonicalize(form, (1, 3)) == canonicalize(form, (3, 1))
        assert canonicalize(form, (1, 3)).items == ((1, 1), (3, 1))

    def test_zero_weights_drop(self):
        form = LinearForm.parse("1,-1")
        cls = canonicalize(form, (5, 5))
        assert cls.items == ()
        assert cls.represents() == 0

    def test_distinct_classes_same_value(self):
        form = LinearForm.parse("2,1")
        a = canonicalize(form, (1, 2))
        b = canonicalize(form, (0, 4))
        assert a.items == ((1, 2), (2, 1))
        assert b.items == ((0, 2), (4, 1))
        assert a != b
        assert a.represents() == b.represents() == 4

    def test_arity_mismatch(self):
        with pytest.raises(ArityMismatchError):
            canonicalize(LinearForm.parse("1,1"), (1, 2, 3))

    @given(forms3, st.lists(st.integers(-20, 20), min_size=3, max_size=3), st.randoms())
    def test_equal_coefficient_position_swap(self, form, values, rng):
        # permuting positions that carry equal coefficients never changes the class
        tup = tuple(values[: form.arity])
        coeffs = form.coefficients
        order = list(range(form.arity))
        rng.shuffle(order)
        if tuple(coeffs[i] for i in order) != coeffs:
            return
        permuted = tuple(tup[i] for i in order)
        assert canonicalize(form, permuted) == canonicalize(form, tup)

    @given(forms3, st.lists(st.integers(-20, 20), min_size=3, max_size=3))
    def test_matches_oracle_key(self, form, values):
        tup = tuple(values[: form.arity])
        assert canonicalize(form, tup).items == class_key(form.coefficients, tup)


class TestRepFunction:
    def test_two_ones_small_set(self):
        prof = rep_function(LinearForm.parse("1,1"), GroundSet.of([0, 1, 2]), (0, 4))
        assert prof.windowed_counts() == {0: 1, 1: 1, 2: 2, 3: 1, 4: 1}

    def test_difference_form_merges(self):
        prof = rep_function(LinearForm.parse("1,-1"), GroundSet.of([0, 5]), (-5, 5))
        assert prof.windowed_counts() == {-5: 1, 0: 1, 5: 1}

    def test_empty_set(self):
        prof = rep_function(LinearForm.parse("1,1"), GroundSet.of([]), (-3, 3))
        assert prof.windowed_counts() == {}
        assert prof.support_min is None and prof.support_max is None

    def test_export_shape(self):
        prof = rep_function(LinearForm.parse("1,1"), GroundSet.of([0, 1]), (0, 1))
        obj = prof.to_json_obj()
        assert obj == {"counts": {"0": 1, "1": 1}, "support_min": "0", "support_max": "2"}

    def test_budget(self):
        with pytest.raises(BudgetExceededError) as err:
            rep_function(
                LinearForm.parse("1,1,1"), GroundSet.of(range(100)), (0, 1), budget=10**5
            )
        assert err.value.required == 100**3

    def test_bad_window(self):
        with pytest.raises(ValueError):
            rep_function(LinearForm.parse("1,1"), GroundSet.of([1]), (3, -3))


class TestCountAt:
    def test_examples(self):
        assert count_at(LinearForm.parse("1,1"), GroundSet.of([0, 1, 2]), 2) == 2
        assert count_at(LinearForm.parse("1,1"), GroundSet.of([0]), 0) == 1
        assert count_at(LinearForm.parse("3,-2"), GroundSet.of([2, 3]), 0) == 1


class TestOracleAgreement:
    @given(forms3, small_sets)
    @settings(max_examples=80, deadline=None)
    def test_counts_match_independent_enumeration(self, form, ground):
        assert class_counts(form, ground) == brute_counts(
            form.coefficients, ground.elements
        )

    @given(forms3, small_sets)
    @settings(max_examples=40, deadline=None)
    def test_unordered_at_most_ordered(self, form, ground):
        counts = class_counts(form, ground)
        for n, c in counts.items():
            assert c <= len(ordered_solutions(form.coefficients, ground.elements, n))

    @given(forms3, small_sets)
    @settings(max_examples=40, deadline=None)
    def test_total_classes(self, form, ground):
        # summing over the full support counts every class exactly once
        counts = class_counts(form, ground)
        from itertools import product as iproduct

        all_classes = {
            canonicalize(form, tup)
            for tup in iproduct(ground.elements, repeat=form.arity)
        }
        assert sum(counts.values()) == len(all_classes)


class TestAllOnesTranslation:
    @given(
        st.integers(1, 3),
        st.sets(st.integers(-15, 15), min_size=1, max_size=5),
        st.integers(-10, 10),
    )
    @settings(max_examples=40, deadline=None)
    def test_shift_moves_support(self, arity, values, t):
        form = LinearForm(tuple([1] * arity))
        base = class_counts(form, GroundSet.of(values))
        shifted = class_counts(form, GroundSet.of(v + t for v in values))
        assert shifted == {n + arity * t: c for n, c in base.items()}


class TestFastPaths:
    @given(
        st.integers(-3, 3).filter(bool),
        st.integers(1, 3),
        st.sets(st.integers(-12, 12), min_size=1, max_size=6),
    )
    @settings(max_examples=40, deadline=None)
    def test_uniform_matches_general(self, coeff, arity, values):
        form = LinearForm(tuple([coeff] * arity))
        ground = GroundSet.of(values)
        assert class_counts(form, ground) == _general_counts(
            form.coefficients, ground.elements
        )

    def test_monotone_prune_matches_within_window(self):
        rng = random.Random(7)
        for _ in range(25):
            arity = rng.randint(1, 3)
            sign = rng.choice([1, -1])
            form = LinearForm(tuple(sign * rng.randint(1, 4) for _ in range(arity)))
            ground = GroundSet.of(rng.sample(range(-20, 21), rng.randint(1, 6)))
            window = sorted(rng.sample(range(-60, 61), 2))
            full = rep_function(form, ground, tuple(window))
            pruned = rep_function(form, ground, tuple(window), monotone_prune=True)
            assert pruned.windowed_only
            assert full.windowed_counts() == pruned.windowed_counts()


class TestRepClass:
    def test_from_weights_drops_zeros(self):
        cls = RepClass.from_weights({3: 0, 1: 2})
        assert cls.items == ((1, 2),)
