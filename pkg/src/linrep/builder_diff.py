"""Constructions for the difference form x1 - x2.

The difference form is the simplest form with a zero-sum coefficient
subset, and the general machinery does not apply to it.  Any count
function it realizes must be even with exactly one class at 0, and a
value of 3 or more anywhere forces a second doubled value elsewhere.
The constructions here hang off gap sequences whose every consecutive
partial sum has a target count above 1 ("plentiful" sequences): chained
representations of a repeated value are spaced by such partial sums, so
the incidental differences they create are exactly the doubly-allowed
ones.

Two builders cover the two supported target shapes: one for targets
with infinite values (driven by a single long plentiful sequence), one
for all-finite targets (driven by a supplier of fresh plentiful
sequences with large term ratios).  Both make deterministic minimal
choices and verify every step with the exhaustive counting oracle;
since no retry can fix a forced choice, a failed check raises a bug
signal instead of looping.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Union

from .builder_target import Count, TargetFunction, enumerate_multiset
from .errors import (
    ConstructionBugError,
    InsufficientPairsError,
    PreconditionViolationError,
    SequenceExhaustedError,
    SupplyExhaustedError,
)
from .forms import LinearForm
from .repcount import DEFAULT_TUPLE_BUDGET, GroundSet, RepProfile, class_counts

DIFFERENCE_FORM = LinearForm((1, -1))

DEFAULT_QUOTIENT_BOUND = 24  # 8 * (1 + 2) for the two-variable difference form


@dataclass(frozen=True)
class PlentifulSequence:
    """A finite sequence of positive integers queried by partial sums.

    partial_sum(l, m) is the 1-based inclusive sum of terms l..m.  The
    sequence is plentiful for a count function f when every such sum s
    has f(s) > 1.
    """

    terms: tuple[int, ...]

    def __post_init__(self):
        for t in self.terms:
            if not isinstance(t, int) or isinstance(t, bool) or t <= 0:
                raise ValueError("plentiful sequence terms must be positive integers")

    def __len__(self) -> int:
        return len(self.terms)

    def partial_sum(self, l: int, m: int) -> int:
        if not 1 <= l <= m <= len(self.terms):
            raise ValueError(f"need 1 <= l <= m <= {len(self.terms)}")
        return sum(self.terms[l - 1 : m])

    def all_partial_sums(self) -> set[int]:
        sums: set[int] = set()
        for l in range(1, len(self.terms) + 1):
            acc = 0
            for m in range(l, len(self.terms) + 1):
                acc += self.terms[m - 1]
                sums.add(acc)
        return sums

    @classmethod
    def from_json(cls, text: str) -> "PlentifulSequence":
        raw = json.loads(text)
        if not isinstance(raw, list):
            raise ValueError("sequence file must be a JSON array")
        return cls(tuple(int(s) for s in raw))

    def to_json(self) -> str:
        return json.dumps([str(t) for t in self.terms])


CountLookup = Union[TargetFunction, RepProfile, Mapping[int, Count], Callable[[int], Count]]


def _value_at(f_like: CountLookup, n: int) -> Count:
    if isinstance(f_like, TargetFunction):
        return f_like.value_at(n)
    if isinstance(f_like, RepProfile):
        return f_like.count(n)
    if isinstance(f_like, Mapping):
        return f_like.get(n, 0)
    return f_like(n)


@dataclass(frozen=True)
class DiffReport:
    """Named violations from a difference-form admissibility check."""

    violations: tuple[tuple[str, int], ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "; ".join(f"{kind} at {n}" for kind, n in self.violations)


def check_even_normalized(target: TargetFunction) -> DiffReport:
    """Checks f(n) = f(-n) across the window and f(0) = 1.

    Away from the explicit values both sides fall back to the default, so
    only the explicitly listed positions can break evenness; the scan is
    restricted to them.
    """
    violations: list[tuple[str, int]] = []
    if target.value_at(0) != 1:
        violations.append(("zero-count-not-one", 0))
    for n in sorted({abs(k) for k in target.values} - {0}):
        if target.value_at(n) != target.value_at(-n):
            violations.append(("not-even", n))
    return DiffReport(tuple(violations))


def check_three_rep_obstruction(target: TargetFunction) -> DiffReport:
    """Any n with f(n) >= 3 needs some m outside {n, -n, 0} with f(m) >= 2.

    Three pairwise inequivalent difference representations of n force a
    repeated difference at some other value, so targets without one are
    unrealizable.  The window values and the default are both consulted;
    a default above 1 satisfies every such n outright, and values of 3 or
    more can otherwise only sit at explicit positions.
    """
    if target.default > 2:
        return DiffReport(())
    violations: list[tuple[str, int]] = []
    for n in sorted(n for n, v in target.values.items() if v >= 3):
        if target.default > 1:
            continue  # infinitely many m outside the window qualify
        if any(v > 1 and m not in (n, -n, 0) for m, v in target.values.items()):
            continue
        violations.append(("needs-second-doubled-value", n))
    return DiffReport(tuple(violations))


def is_plentiful(seq: PlentifulSequence, counts: CountLookup) -> bool:
    """Exhaustive O(N^2) check that every partial sum has count above 1."""
    n = len(seq.terms)
    for l in range(1, n + 1):
        acc = 0
        for m in range(l, n + 1):
            acc += seq.terms[m - 1]
            if not _value_at(counts, acc) > 1:
                return False
    return True


def extract_plentiful(
    ground_set: GroundSet,
    n: int,
    length: int,
    budget: int = DEFAULT_TUPLE_BUDGET,
) -> PlentifulSequence:
    """Gap sequence extracted from the pairs of A at difference n.

    Collects all x in A with x - n in A (strictly increasing by
    construction) and returns the consecutive gaps of the first
    ``length``+1 of them.  The result is checked to be plentiful for A's
    own representation counts before returning.
    """
    if n == 0:
        raise PreconditionViolationError(
            "difference", "extraction at difference 0 is degenerate"
        )
    anchors = sorted(x for x in ground_set if (x - n) in ground_set)
    if len(anchors) < length + 1:
        raise InsufficientPairsError(
            f"found {len(anchors)} pairs at difference {n}, need {length + 1}"
        )
    chosen = anchors[: length + 1]
    seq = PlentifulSequence(
        tuple(chosen[i + 1] - chosen[i] for i in range(length))
    )
    own_counts = class_counts(DIFFERENCE_FORM, ground_set, budget)
    if not is_plentiful(seq, own_counts):
        raise ConstructionBugError(
            f"extracted gaps {seq.terms} are not plentiful for the set's own counts"
        )
    return seq


@dataclass(frozen=True)
class DiffStepRecord:
    """Audit record for one accepted difference-form step."""

    step: int
    case: str  # "fresh" (no prior class of the target) or "chained" / "batch"
    target: int
    copy_index: int
    m_bound: int  # the max-|element| bound the step had to clear
    gamma: int
    block: tuple[int, ...]
    witness: Optional[int]
    support_size: int
    representations: tuple[tuple[int, int], ...]  # ledger of the target after the step

    def to_json_obj(self) -> dict:
        return {
            "step": self.step,
            "case": self.case,
            "target": str(self.target),
            "copy": self.copy_index,
            "M": str(self.m_bound),
            "gamma": self.gamma,
            "block": [str(b) for b in self.block],
            "witness": self.witness,
            "support_size": self.support_size,
            "representations": [[str(a), str(b)] for a, b in self.representations],
        }


@dataclass(frozen=True)
class DiffConstructionState:
    """Immutable snapshot of a difference-form construction.

    ``ledger`` maps each value with more than one allowed class to its
    representations (anchor, partner, witness), anchors strictly
    increasing; consecutive anchors differ by the partial sum of
    ``gap_sequence`` between the two witnesses (lower exclusive, upper
    inclusive).  Mirrored entries are kept for both signs.
    """

    blocks: tuple[tuple[int, ...], ...]
    elements: GroundSet
    covered: tuple[tuple[int, int], ...]  # (target, copy index)
    records: tuple[DiffStepRecord, ...]
    ledger: dict[int, tuple[tuple[int, int, int], ...]]
    gap_sequence: Optional[PlentifulSequence]

    @property
    def step(self) -> int:
        return len(self.covered)

    def trace_records(self) -> list[dict]:
        return [r.to_json_obj() for r in self.records]

    def ledger_gaps_ok(self) -> bool:
        """Recompute every ledger gap from the gap sequence and compare."""
        if self.gap_sequence is None:
            return True
        for entries in self.ledger.values():
            for (a1, _, m1), (a2, _, m2) in zip(entries, entries[1:]):
                if not 0 < m1 < m2:
                    return False
                if a2 - a1 != self.gap_sequence.partial_sum(m1 + 1, m2):
                    return False
        return True


def _assert_diff_preconditions(target: TargetFunction) -> None:
    report = check_even_normalized(target)
    if not report.ok:
        raise PreconditionViolationError("even-normalized", str(report))


def _verify_diff_step(
    counts: dict[int, int],
    old_counts: dict[int, int],
    target_fn: TargetFunction,
    entry: tuple[int, int],
    allowed_double: Callable[[int], bool],
    exempt: frozenset[int] = frozenset(),
) -> None:
    """Shared oracle checks after one difference-form step; raises on failure.

    ``exempt`` values skip the increment-size analysis (a batch step fills
    its target value all the way in one go; the caller checks the exact
    fill separately).
    """
    t, copy_index = entry
    if counts.get(0, 0) != 1:
        raise ConstructionBugError(f"count at 0 is {counts.get(0, 0)}, expected 1")
    for n, c in counts.items():
        if c != counts.get(-n, 0):
            raise ConstructionBugError(
                f"counts not even-symmetric at {n}: {c} vs {counts.get(-n, 0)}"
            )
        if c > target_fn.value_at(n):
            raise ConstructionBugError(
                f"count {c} exceeds target {target_fn.value_at(n)} at {n}"
            )
    for n, c in counts.items():
        old = old_counts.get(n, 0)
        delta = c - old
        if delta < 0:
            raise ConstructionBugError(f"count dropped at {n}")
        if n in exempt:
            continue
        if delta > 2:
            raise ConstructionBugError(f"count jumped by {delta} at {n}")
        if delta == 2:
            if old != 0:
                raise ConstructionBugError(
                    f"count rose by 2 at {n} on top of {old} existing classes"
                )
            if not allowed_double(n):
                raise ConstructionBugError(
                    f"unexpected double increment at {n}"
                )
    if counts.get(t, 0) < copy_index + 1:
        raise ConstructionBugError(
            f"target {t} copy {copy_index} still uncovered after the step"
        )


def build_infinite_case(
    target: TargetFunction,
    seq: PlentifulSequence,
    steps: int,
    d0: int = 1,
    budget: int = DEFAULT_TUPLE_BUDGET,
) -> DiffConstructionState:
    """Realize a target containing infinite values, one class per step.

    Requires an even target with f(0) = 1 and at least one infinite value
    (targets with all-finite values are handled by build_unbounded_case;
    bounded targets in the strict sense have no general construction and
    are rejected here).  ``seq`` must be plentiful for the target and long
    enough: chained steps consume terms until the running partial sum
    clears the size bound, and exhausting the sequence raises
    SequenceExhaustedError.

    Per step, the first multiset entry (n, c) whose copy is uncovered
    becomes the target t.  A fresh pair (x, x - t) with
    x > 2|t| + 3*max|B| is used when t has no class yet; otherwise x is
    chained onto t's largest anchor by the minimal sufficient partial sum
    of ``seq``, keeping every anchor gap a contiguous partial sum.  Every
    step is verified exhaustively; failures are bug signals, not retries.
    """
    if steps < 0:
        raise ValueError("steps must be non-negative")
    if d0 == 0:
        raise ValueError("d0 must be non-zero")
    _assert_diff_preconditions(target)
    if not target.has_infinite_value():
        raise PreconditionViolationError(
            "infinite-value",
            "target has no infinite value; all-finite targets belong to "
            "build_unbounded_case (strictly bounded targets are an open case "
            "and are not attempted)",
        )
    if not is_plentiful(seq, target):
        raise PreconditionViolationError(
            "plentiful", "supplied sequence is not plentiful for the target"
        )

    sigma_all = seq.all_partial_sums()
    elements = GroundSet.of([d0])
    blocks: list[tuple[int, ...]] = [(d0,)]
    counts = class_counts(DIFFERENCE_FORM, elements, budget)
    ledger: dict[int, list[tuple[int, int, int]]] = {}
    covered: list[tuple[int, int]] = []
    records: list[DiffStepRecord] = []
    ordering = iter(enumerate_multiset(target))

    for k in range(1, steps + 1):
        while True:
            entry = next(ordering)
            n, c = entry
            if counts.get(n, 0) >= c + 1:
                continue
            break
        t, copy_index = entry
        m_bound = elements.max_abs()
        bound = 2 * abs(t) + 3 * m_bound
        fv = target.value_at(t)
        p = counts.get(t, 0)

        if p == 0:
            x = bound + 1
            case = "fresh"
            witness: Optional[int] = 1 if fv > 1 else None
        else:
            entries = ledger.get(t, [])
            if len(entries) != p:
                raise ConstructionBugError(
                    f"ledger for {t} has {len(entries)} entries, count is {p}"
                )
            a_p, _, m_p = entries[-1]
            sigma = 0
            m_next = m_p
            while a_p + sigma <= bound:
                m_next += 1
                if m_next > len(seq):
                    raise SequenceExhaustedError(
                        f"step {k}: sequence of {len(seq)} terms cannot lift "
                        f"anchor {a_p} above {bound}"
                    )
                sigma += seq.terms[m_next - 1]
            x = a_p + sigma
            case = "chained"
            witness = m_next
        y = x - t
        if x == y or x in elements or y in elements:
            raise ConstructionBugError(
                f"step {k}: pair ({x}, {y}) collides with the current set"
            )

        merged = elements.union((x, y))
        new_counts = class_counts(DIFFERENCE_FORM, merged, budget)
        _verify_diff_step(
            new_counts,
            counts,
            target,
            entry,
            allowed_double=lambda v: abs(v) in sigma_all,
        )

        if fv > 1:
            anchor_entry = (x, y, witness if witness is not None else 1)
            mirror_entry = (y, x, anchor_entry[2])
            ledger.setdefault(t, []).append(anchor_entry)
            ledger.setdefault(-t, []).append(mirror_entry)
        records.append(
            DiffStepRecord(
                step=k,
                case=case,
                target=t,
                copy_index=copy_index,
                m_bound=m_bound,
                gamma=1,
                block=(x, y),
                witness=witness,
                support_size=len(new_counts),
                representations=tuple((a, b) for a, b, _ in ledger.get(t, [])),
            )
        )
        blocks.append((x, y))
        covered.append(entry)
        elements = merged
        counts = new_counts

    return DiffConstructionState(
        blocks=tuple(blocks),
        elements=elements,
        covered=tuple(covered),
        records=tuple(records),
        ledger={n: tuple(v) for n, v in ledger.items()},
        gap_sequence=seq,
    )


PlentifulSupply = Callable[[int, int, int], PlentifulSequence]
"""Supplier contract: (length, min_first, min_ratio) -> PlentifulSequence.

The returned sequence must have ``length`` terms, first term at least
``min_first``, each later term at least ``min_ratio`` times its
predecessor, and must be plentiful for the target in play.
"""


def build_unbounded_case(
    target: TargetFunction,
    plentiful_supply: PlentifulSupply,
    steps: int,
    d0: int = 1,
    quotient_bound: int = DEFAULT_QUOTIENT_BOUND,
    budget: int = DEFAULT_TUPLE_BUDGET,
) -> DiffConstructionState:
    """Realize an all-finite target, filling each value in one batch.

    Requires an even target with f(0) = 1 and no infinite value.  A window
    target with a finite default is, strictly speaking, globally bounded;
    the construction stands in for unbounded targets at desk scale and
    certifies the prefix invariants only.

    Per step, the uncovered entry's value t is brought from its current
    count p straight to f(t): with gamma = f(t) - p, the step adds the
    2*gamma elements x_1, ..., x_gamma and x_i - t, where
    x_1 > 2|t| + 3*max|B| and the later x gaps come from a supplied
    plentiful sequence whose quotients all exceed ``quotient_bound``
    (first term included, relative to x_1).  The oracle then requires
    counts at both signs of t to equal f(t) exactly, and every other
    moved count to be fresh (0 before; up by 1, or by 2 on a value whose
    target exceeds 1).
    """
    if steps < 0:
        raise ValueError("steps must be non-negative")
    if d0 == 0:
        raise ValueError("d0 must be non-zero")
    if quotient_bound < 1:
        raise ValueError("quotient bound must be positive")
    _assert_diff_preconditions(target)
    if target.has_infinite_value():
        raise PreconditionViolationError(
            "finite-values",
            "target has infinite values; use build_infinite_case",
        )

    elements = GroundSet.of([d0])
    blocks: list[tuple[int, ...]] = [(d0,)]
    counts = class_counts(DIFFERENCE_FORM, elements, budget)
    covered: list[tuple[int, int]] = []
    records: list[DiffStepRecord] = []
    ordering = iter(enumerate_multiset(target))

    for k in range(1, steps + 1):
        while True:
            entry = next(ordering)
            n, c = entry
            if counts.get(n, 0) >= c + 1:
                continue
            break
        t, copy_index = entry
        m_bound = elements.max_abs()
        fv = target.value_at(t)
        p = counts.get(t, 0)
        gamma = int(fv) - p
        if gamma < 1:
            raise ConstructionBugError(f"step {k}: non-positive gamma {gamma}")
        x1 = 2 * abs(t) + 3 * m_bound + 1

        gaps: tuple[int, ...] = ()
        if gamma >= 2:
            supplied = plentiful_supply(gamma - 1, x1 * quotient_bound, quotient_bound)
            if supplied is None or len(supplied) != gamma - 1:
                raise SupplyExhaustedError(
                    f"step {k}: supplier did not provide {gamma - 1} terms"
                )
            prev = x1
            for term in supplied.terms:
                if term < prev * quotient_bound:
                    raise SupplyExhaustedError(
                        f"step {k}: quotient below {quotient_bound} at term {term}"
                    )
                prev = term
            if not is_plentiful(supplied, target):
                raise SupplyExhaustedError(
                    f"step {k}: supplied sequence is not plentiful for the target"
                )
            gaps = supplied.terms

        xs = [x1]
        for gap in gaps:
            xs.append(xs[-1] + gap)
        ys = [x - t for x in xs]
        block = tuple(xs + ys)
        if len(set(block)) != len(block) or any(v in elements for v in block):
            raise ConstructionBugError(
                f"step {k}: batch {block} collides with the current set"
            )

        merged = elements.union(block)
        new_counts = class_counts(DIFFERENCE_FORM, merged, budget)
        _verify_diff_step(
            new_counts,
            counts,
            target,
            entry,
            allowed_double=lambda v: target.value_at(v) > 1,
            exempt=frozenset((t, -t)),
        )
        if new_counts.get(t, 0) != fv or new_counts.get(-t, 0) != fv:
            raise ConstructionBugError(
                f"step {k}: counts at +-{t} are "
                f"({new_counts.get(t, 0)}, {new_counts.get(-t, 0)}), expected {fv}"
            )

        records.append(
            DiffStepRecord(
                step=k,
                case="batch",
                target=t,
                copy_index=copy_index,
                m_bound=m_bound,
                gamma=gamma,
                block=block,
                witness=None,
                support_size=len(new_counts),
                representations=tuple(zip(xs, ys)),
            )
        )
        blocks.append(block)
        covered.append(entry)
        elements = merged
        counts = new_counts

    return DiffConstructionState(
        blocks=tuple(blocks),
        elements=elements,
        covered=tuple(covered),
        records=tuple(records),
        ledger={},
        gap_sequence=None,
    )


def window_plentiful_supply(target: TargetFunction) -> PlentifulSupply:
    """Bounded brute-force supplier drawing on the target's doubled values.

    With a default above 1, geometric choices beyond the window always
    work.  Otherwise candidates are the positive window values above 1 and
    the search walks increasing tuples whose every partial sum also has a
    value above 1, returning the lexicographically least fit.
    """

    def supply(length: int, min_first: int, min_ratio: int) -> PlentifulSequence:
        if length == 0:
            return PlentifulSequence(())
        if target.default > 1:
            first = max(min_first, target.window_hi + 1)
            terms = [first]
            while len(terms) < length:
                terms.append(terms[-1] * max(min_ratio, 2))
            return PlentifulSequence(tuple(terms))
        candidates = sorted(
            n for n, v in target.values.items() if n >= 1 and v > 1
        )

        def extend(prefix: list[int]) -> Optional[list[int]]:
            if len(prefix) == length:
                return prefix
            floor = min_first if not prefix else prefix[-1] * min_ratio
            for cand in candidates:
                if cand < floor:
                    continue
                # every partial sum ending at the new term must stay doubled
                acc = cand
                ok = target.value_at(acc) > 1
                for prev in reversed(prefix):
                    if not ok:
                        break
                    acc += prev
                    ok = target.value_at(acc) > 1
                if not ok:
                    continue
                found = extend(prefix + [cand])
                if found is not None:
                    return found
            return None

        found = extend([])
        if found is None:
            raise SupplyExhaustedError(
                f"no plentiful sequence of length {length} with first term >= "
                f"{min_first} and ratio >= {min_ratio} in the target window"
            )
        return PlentifulSequence(tuple(found))

    return supply
