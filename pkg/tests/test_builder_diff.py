import json

import pytest

from linrep import (
    DIFFERENCE_FORM,
    GroundSet,
    INFINITY,
    InsufficientPairsError,
    PlentifulSequence,
    PreconditionViolationError,
    SequenceExhaustedError,
    SupplyExhaustedError,
    TargetFunction,
    build_infinite_case,
    build_unbounded_case,
    check_even_normalized,
    check_three_rep_obstruction,
    class_counts,
    extract_plentiful,
    is_plentiful,
    window_plentiful_supply,
)


def even_values(pairs):
    values = {}
    for n, v in pairs:
        values[n] = v
        values[-n] = v
    return values


def inf_off_zero(window=4):
    return TargetFunction.make(
        (-window, window), values={0: 1}, default=INFINITY
    )


class TestEvenNormalized:
    def test_all_ones_ok(self):
        assert check_even_normalized(TargetFunction.make((-5, 5))).ok

    def test_uneven_flagged(self):
        t = TargetFunction.make((-5, 5), values={3: 2, -3: 1})
        report = check_even_normalized(t)
        assert not report.ok
        assert ("not-even", 3) in report.violations

    def test_zero_count_flagged(self):
        report = check_even_normalized(TargetFunction.make((-5, 5), values={0: 2}))
        assert ("zero-count-not-one", 0) in report.violations


class TestThreeRepObstruction:
    def test_lone_triple_flagged(self):
        t = TargetFunction.make((-10, 10), values=even_values([(7, 3)]))
        report = check_three_rep_obstruction(t)
        assert not report.ok
        assert any(n == 7 for _, n in report.violations)

    def test_second_doubled_value_clears(self):
        t = TargetFunction.make((-10, 10), values=even_values([(7, 3), (2, 2)]))
        assert check_three_rep_obstruction(t).ok

    def test_vacuous_when_capped_at_two(self):
        t = TargetFunction.make((-10, 10), values=even_values([(4, 2)]))
        assert check_three_rep_obstruction(t).ok

    def test_doubled_default_clears(self):
        t = TargetFunction.make((-10, 10), values=even_values([(7, 3)]), default=2)
        assert check_three_rep_obstruction(t).ok

    def test_infinite_counts_as_triple(self):
        t = TargetFunction.make((-10, 10), values=even_values([(7, INFINITY)]))
        assert not check_three_rep_obstruction(t).ok


class TestPlentiful:
    def test_partial_sums_doubled(self):
        t = TargetFunction.make((-5, 5), values=even_values([(1, 2), (2, 2), (3, 2)]))
        assert is_plentiful(PlentifulSequence((1, 1, 1)), t)

    def test_single_gap_breaks_it(self):
        t = TargetFunction.make((-5, 5), values=even_values([(1, 2), (3, 2)]))
        assert not is_plentiful(PlentifulSequence((1, 1, 1)), t)

    def test_empty_sequence_vacuous(self):
        assert is_plentiful(PlentifulSequence(()), TargetFunction.make((-2, 2)))

    def test_partial_sum_indexing(self):
        seq = PlentifulSequence((3, 5, 7))
        assert seq.partial_sum(1, 3) == 15
        assert seq.partial_sum(2, 2) == 5
        with pytest.raises(ValueError):
            seq.partial_sum(2, 1)

    def test_positive_terms_enforced(self):
        with pytest.raises(ValueError):
            PlentifulSequence((1, 0, 2))

    def test_json_roundtrip(self):
        seq = PlentifulSequence((10, 90, 2**70))
        assert PlentifulSequence.from_json(seq.to_json()) == seq
        assert json.loads(seq.to_json())[2] == str(2**70)

    def test_against_rep_profile(self):
        # plentifulness can be checked against a set's own counts
        counts = class_counts(DIFFERENCE_FORM, GroundSet.of([0, 1, 10, 11, 100, 101]))
        assert is_plentiful(PlentifulSequence((10, 90)), counts)


class TestExtractPlentiful:
    def test_worked_example(self):
        ground = GroundSet.of([0, 1, 10, 11, 100, 101])
        seq = extract_plentiful(ground, 1, 2)
        assert seq.terms == (10, 90)

    def test_insufficient_pairs(self):
        with pytest.raises(InsufficientPairsError):
            extract_plentiful(GroundSet.of([0, 1]), 1, 1)

    def test_zero_difference_rejected(self):
        with pytest.raises(PreconditionViolationError):
            extract_plentiful(GroundSet.of([0, 1, 2]), 0, 1)

    def test_postcondition_plentiful(self):
        ground = GroundSet.of([0, 1, 10, 11, 100, 101])
        seq = extract_plentiful(ground, 1, 2)
        assert is_plentiful(seq, class_counts(DIFFERENCE_FORM, ground))


class TestBuildInfiniteCase:
    def test_rejects_uneven(self):
        t = TargetFunction.make((-5, 5), values={3: 2, -3: 1, 4: INFINITY, -4: INFINITY})
        with pytest.raises(PreconditionViolationError, match="even"):
            build_infinite_case(t, PlentifulSequence((1,)), 2)

    def test_rejects_bad_zero_count(self):
        t = TargetFunction.make((-5, 5), values={0: 2}, default=INFINITY)
        with pytest.raises(PreconditionViolationError, match="even"):
            build_infinite_case(t, PlentifulSequence((1,)), 2)

    def test_rejects_all_finite_targets(self):
        t = TargetFunction.make((-5, 5))
        with pytest.raises(PreconditionViolationError, match="infinite"):
            build_infinite_case(t, PlentifulSequence((1,)), 2)

    def test_rejects_non_plentiful_sequence(self):
        t = TargetFunction.make(
            (-6, 6), values={0: 1, 5: INFINITY, -5: INFINITY}, default=1
        )
        with pytest.raises(PreconditionViolationError, match="plentiful"):
            build_infinite_case(t, PlentifulSequence((1,)), 2)

    def test_sequence_exhaustion(self):
        target = inf_off_zero()
        with pytest.raises(SequenceExhaustedError):
            build_infinite_case(target, PlentifulSequence((2, 4)), 8)

    def test_invariants_after_twelve_steps(self):
        target = inf_off_zero()
        seq = PlentifulSequence(tuple(2**i for i in range(1, 200)))
        state = build_infinite_case(target, seq, 12)
        counts = class_counts(DIFFERENCE_FORM, state.elements)
        assert counts.get(0) == 1
        assert all(counts[n] == counts.get(-n, 0) for n in counts)
        assert all(c <= target.value_at(n) for n, c in counts.items())
        assert state.ledger_gaps_ok()
        # every chained/fresh element cleared its size bound
        for record in state.records:
            bound = 2 * abs(record.target) + 3 * record.m_bound
            assert max(record.block) > bound

    def test_single_count_target_adds_exactly_one_class(self):
        # only the two infinite values ever chain; a plain value gets one
        # fresh pair and nothing else moves except mirrored fresh counts
        target = TargetFunction.make(
            (-6, 6), values={0: 1, 5: INFINITY, -5: INFINITY}, default=1
        )
        seq = PlentifulSequence((5,))
        state = build_infinite_case(target, seq, 1)
        (record,) = state.records
        assert target.value_at(record.target) == 1
        counts = class_counts(DIFFERENCE_FORM, state.elements)
        assert counts.get(record.target) == 1

    def test_ledger_anchors_strictly_increase(self):
        target = inf_off_zero()
        seq = PlentifulSequence(tuple(2**i for i in range(1, 200)))
        state = build_infinite_case(target, seq, 10)
        for entries in state.ledger.values():
            anchors = [a for a, _, _ in entries]
            assert anchors == sorted(anchors)
            witnesses = [m for _, _, m in entries]
            assert witnesses == sorted(witnesses)

    def test_extraction_round_trip(self):
        target = inf_off_zero()
        seq = PlentifulSequence(tuple(2**i for i in range(1, 200)))
        state = build_infinite_case(target, seq, 12)
        counts = class_counts(DIFFERENCE_FORM, state.elements)
        n = max((k for k, c in counts.items() if k > 0 and c >= 3), default=None)
        assert n is not None
        extracted = extract_plentiful(state.elements, n, counts[n] - 1)
        assert is_plentiful(extracted, counts)


class TestBuildUnboundedCase:
    def test_rejects_infinite_values(self):
        with pytest.raises(PreconditionViolationError, match="infinite"):
            build_unbounded_case(inf_off_zero(), lambda *a: PlentifulSequence(()), 2)

    def test_rejects_uneven(self):
        t = TargetFunction.make((-5, 5), values={2: 2, -2: 1})
        with pytest.raises(PreconditionViolationError, match="even"):
            build_unbounded_case(t, lambda *a: PlentifulSequence(()), 2)

    def test_all_gamma_one_degenerates_to_fresh_pairs(self):
        target = TargetFunction.make((-10, 10))
        calls = []

        def supply(length, min_first, min_ratio):
            calls.append(length)
            return PlentifulSequence(())

        state = build_unbounded_case(target, supply, 5)
        assert calls == []  # no gap sequence ever needed
        assert all(r.gamma == 1 for r in state.records)
        counts = class_counts(DIFFERENCE_FORM, state.elements)
        assert max(counts.values()) <= 1

    def test_supplier_contract_enforced(self):
        target = TargetFunction.make(
            (-100, 100), values=even_values([(2, 2), (50, 2)])
        )

        def lazy_supply(length, min_first, min_ratio):
            return PlentifulSequence((50,) * length)  # ignores min_first

        with pytest.raises(SupplyExhaustedError):
            build_unbounded_case(target, lazy_supply, 4)

    def test_gamma_pattern_fills_exactly(self):
        W = 1_100_000
        values = even_values(
            [(2, 2), (3, 3), (552, 2), (41568, 2), (997632, 2), (1039200, 2)]
        )
        target = TargetFunction.make((-W, W), values=values, default=1)
        state = build_unbounded_case(target, window_plentiful_supply(target), 3)
        assert [r.gamma for r in state.records] == [1, 2, 3]
        counts = class_counts(DIFFERENCE_FORM, state.elements)
        for record in state.records:
            fv = target.value_at(record.target)
            assert counts.get(record.target) == fv
            assert counts.get(-record.target) == fv
        assert all(c <= target.value_at(n) for n, c in counts.items())


class TestWindowSupply:
    def test_finds_minimal_candidates(self):
        target = TargetFunction.make(
            (-2000, 2000), values=even_values([(7, 2), (100, 2), (800, 2), (900, 2)])
        )
        supply = window_plentiful_supply(target)
        seq = supply(1, 50, 2)
        assert seq.terms == (100,)

    def test_partial_sums_must_be_doubled(self):
        # 100 then 800 fails because 900 must also be doubled; here it is
        target = TargetFunction.make(
            (-2000, 2000), values=even_values([(100, 2), (800, 2), (900, 2)])
        )
        seq = window_plentiful_supply(target)(2, 50, 2)
        assert seq.terms == (100, 800)

    def test_exhaustion(self):
        target = TargetFunction.make((-50, 50), values=even_values([(7, 2)]))
        with pytest.raises(SupplyExhaustedError):
            window_plentiful_supply(target)(2, 1, 2)

    def test_doubled_default_goes_outside_window(self):
        target = TargetFunction.make((-20, 20), default=2, values={0: 1})
        seq = window_plentiful_supply(target)(3, 5, 3)
        assert len(seq) == 3
        assert seq.terms[0] > 20
        assert is_plentiful(seq, target)
