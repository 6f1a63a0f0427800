"""Realizing a prescribed representation function for regular forms.

A target function assigns every integer a desired class count (possibly
infinite), given as an explicit window of values plus a default for
everything else; its zero set must be an explicit finite list inside the
window.  The builder walks a fair enumeration of the multiset holding
f(n) copies of n and, per step, appends one block giving the current
entry a fresh representation class, verified exhaustively so that no
count ever exceeds its target and the zero set stays unrepresented.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import chain
from typing import Iterator, Optional, Union

from .builder_unique import (
    DEFAULT_RETRY_CAP,
    ConstructionState,
    StepRecord,
    Violation,
    _propose,
    default_growth_constant,
)
from .errors import (
    NotPartitionRegularError,
    NotPrimitiveError,
    PreconditionViolationError,
    RetryExhaustedError,
)
from .forms import LinearForm, bezout_witness, is_partition_regular, is_primitive, spiral
from .repcount import DEFAULT_TUPLE_BUDGET, GroundSet, class_counts

INFINITY: float = math.inf

Count = Union[int, float]  # non-negative int, or INFINITY


def _validate_count(value: Count, what: str) -> Count:
    if value == INFINITY:
        return INFINITY
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise ValueError(f"{what} must be a non-negative integer or INFINITY")
    return value


@dataclass(frozen=True)
class TargetFunction:
    """A prescribed count for every integer: window values plus a default.

    ``values`` fixes counts inside the window; every other integer takes
    ``default``.  Zeros may occur only at the listed ``zero_set`` positions,
    which must lie inside the window; the default is never zero, so the
    zero set is always finite and explicit.
    """

    window_lo: int
    window_hi: int
    values: dict[int, Count]
    default: Count
    zero_set: frozenset[int]

    def __post_init__(self):
        if self.window_lo > self.window_hi:
            raise ValueError("window lower bound exceeds upper bound")
        default = _validate_count(self.default, "default")
        if default == 0:
            raise ValueError("default count must never be zero")
        zeros = frozenset(self.zero_set)
        values = dict(self.values)
        for n in zeros:
            if not self.window_lo <= n <= self.window_hi:
                raise ValueError(f"zero at {n} lies outside the window")
            values.setdefault(n, 0)
        for n, v in values.items():
            if not self.window_lo <= n <= self.window_hi:
                raise ValueError(f"explicit value at {n} lies outside the window")
            v = _validate_count(v, f"value at {n}")
            if v == 0 and n not in zeros:
                raise ValueError(f"zero value at {n} missing from the zero list")
            values[n] = v
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "zero_set", zeros)
        object.__setattr__(self, "default", default)

    @classmethod
    def make(
        cls,
        window: tuple[int, int],
        values: Optional[dict[int, Count]] = None,
        default: Count = 1,
        zeros: tuple[int, ...] = (),
    ) -> "TargetFunction":
        return cls(
            window_lo=window[0],
            window_hi=window[1],
            values=dict(values or {}),
            default=default,
            zero_set=frozenset(zeros),
        )

    def value_at(self, n: int) -> Count:
        v = self.values.get(n)
        return self.default if v is None else v

    @property
    def window(self) -> tuple[int, int]:
        return (self.window_lo, self.window_hi)

    def has_infinite_value(self) -> bool:
        return self.default == INFINITY or any(
            v == INFINITY for v in self.values.values()
        )

    @classmethod
    def from_json(cls, text: str) -> "TargetFunction":
        """Load {"window": [lo, hi], "values": {"n": c|"inf"},
        "default": c|"inf", "zeros": [n, ...]}."""
        raw = json.loads(text)
        window = raw.get("window")
        if (
            not isinstance(window, list)
            or len(window) != 2
            or not all(isinstance(b, int) for b in window)
        ):
            raise ValueError('target file needs "window": [lo, hi]')

        def decode(v) -> Count:
            if v == "inf":
                return INFINITY
            if isinstance(v, int) and not isinstance(v, bool):
                return v
            raise ValueError(f"count must be an integer or \"inf\", got {v!r}")

        values = {int(k): decode(v) for k, v in raw.get("values", {}).items()}
        default = decode(raw.get("default", 1))
        zeros = tuple(int(z) for z in raw.get("zeros", []))
        return cls.make((window[0], window[1]), values, default, zeros)

    def to_json(self) -> str:
        def encode(v: Count):
            return "inf" if v == INFINITY else v

        obj = {
            "window": [self.window_lo, self.window_hi],
            "values": {str(n): encode(v) for n, v in sorted(self.values.items())},
            "default": encode(self.default),
            "zeros": sorted(self.zero_set),
        }
        return json.dumps(obj, sort_keys=True)


@dataclass(frozen=True)
class MultisetOrdering:
    """Fair enumeration of the multiset holding f(n) copies of n.

    Entry (n, c) is emitted at diagonal level max(spiral position of n, c),
    so every copy of every value appears at a finite position even when
    some counts are infinite.  Iteration yields (n, copy_index) pairs.
    """

    target: TargetFunction

    def __iter__(self) -> Iterator[tuple[int, int]]:
        level = 0
        while True:
            n = spiral(level)
            fv = self.target.value_at(n)
            cap = level + 1 if fv == INFINITY else min(level + 1, int(fv))
            for c in range(cap):
                yield (n, c)
            for i in range(level):
                m = spiral(i)
                if self.target.value_at(m) > level:
                    yield (m, level)
            level += 1

    def entries(self, count: int) -> list[tuple[int, int]]:
        out = []
        for entry in self:
            out.append(entry)
            if len(out) >= count:
                break
        return out


def enumerate_multiset(target: TargetFunction) -> MultisetOrdering:
    """Deterministic fair ordering of the target's copy multiset."""
    return MultisetOrdering(target)


def compute_X(n: int, l: int, m: int, p: int) -> set[int]:
    """All integers of the form (a/b)*n + c over the parameter box.

    a ranges over [-l, l], b over the non-zero part of [-m, m], c over
    [-p, p]; only exactly-integral quotients are kept.  Exact integer
    arithmetic throughout.  Requires l, m >= 1 and p >= 0.
    """
    if l < 1 or m < 1 or p < 0:
        raise ValueError("need l >= 1, m >= 1, p >= 0")
    out: set[int] = set()
    for a in range(-l, l + 1):
        num = a * n
        for b in chain(range(-m, 0), range(1, m + 1)):
            if num % b == 0:
                q = num // b
                for c in range(-p, p + 1):
                    out.add(q + c)
    return out


@dataclass(frozen=True)
class TargetReport:
    """Outcome of checking a set's counts against a target function."""

    overshoots: tuple[tuple[int, int, Count], ...]  # (n, count, allowed)
    zero_hits: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return not self.overshoots and not self.zero_hits

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        parts = [
            f"count {c} > {allowed} at {n}" for n, c, allowed in self.overshoots
        ] + [f"zero-set value {n} is represented" for n in self.zero_hits]
        return "; ".join(parts)


def check_counts_against_target(
    form: LinearForm,
    ground_set: GroundSet,
    target: TargetFunction,
    budget: int = DEFAULT_TUPLE_BUDGET,
) -> TargetReport:
    """Full-support count check: lists every overshoot and zero-set hit."""
    counts = class_counts(form, ground_set, budget)
    overshoots = tuple(
        (n, c, target.value_at(n))
        for n, c in sorted(counts.items())
        if c > target.value_at(n)
    )
    zero_hits = tuple(sorted(n for n in counts if n in target.zero_set))
    return TargetReport(overshoots=overshoots, zero_hits=zero_hits)


def _verify_target_step(
    form: LinearForm,
    elements: GroundSet,
    candidate: tuple[int, ...],
    target_fn: TargetFunction,
    old_counts: dict[int, int],
    frozen_numbers: set[int],
    entry: tuple[int, int],
    budget: int,
) -> tuple[Optional[Violation], Optional[dict[int, int]], Optional[GroundSet]]:
    """Oracle check for one target-realization step.

    Requires: candidate elements pairwise distinct and new; counts never
    exceed the target anywhere; the zero set stays unrepresented; counts of
    numbers already scheduled earlier in the ordering do not move (except
    the current target's); and the current entry's copy is now covered.
    """
    t, copy_index = entry
    seen: set[int] = set()
    for v in candidate:
        if v in seen:
            return Violation("duplicate-in-block", v), None, None
        seen.add(v)
        if v in elements:
            return Violation("collision-with-existing", v), None, None
    merged = elements.union(candidate)
    counts = class_counts(form, merged, budget)
    for n, c in counts.items():
        if c > target_fn.value_at(n):
            return Violation("count-exceeds-target", n), None, None
        if n in target_fn.zero_set:
            return Violation("zero-set-hit", n), None, None
    for n in frozen_numbers:
        if n != t and counts.get(n, 0) != old_counts.get(n, 0):
            return Violation("frozen-count-changed", n), None, None
    if counts.get(t, 0) < copy_index + 1:
        return Violation("target-copy-missed", t), None, None
    return None, counts, merged


def build_for_target(
    form: LinearForm,
    target: TargetFunction,
    steps: int,
    m0: Optional[int] = None,
    d0: int = 1,
    budget: int = DEFAULT_TUPLE_BUDGET,
    retry_cap: int = DEFAULT_RETRY_CAP,
) -> ConstructionState:
    """Grow a set whose counts march toward the target function.

    Requires a primitive, partition regular form of at least two variables.
    Each step takes the first multiset entry whose copy is not yet covered
    and appends a block representing it once more, subject to the per-step
    oracle checks (never overshoot, avoid the zero set, leave earlier
    scheduled numbers untouched).  Blocks must have pairwise distinct
    entries, enforced at proposal time.  The growth constant doubles on
    every rejection, retry-capped as in the unique-basis builder.
    """
    if steps < 0:
        raise ValueError("steps must be non-negative")
    if not is_primitive(form):
        raise NotPrimitiveError(f"form {form} has gcd > 1")
    if not is_partition_regular(form):
        raise NotPartitionRegularError(
            f"form {form} has a zero-sum coefficient subset"
        )
    if form.arity < 2:
        raise PreconditionViolationError(
            "arity", "target realization needs a form with at least 2 variables"
        )
    if d0 == 0:
        raise ValueError("d0 must be non-zero")
    seed_value = d0 * sum(form.coefficients)
    if target.value_at(seed_value) < 1:
        raise PreconditionViolationError(
            "seed",
            f"initial element {d0} represents {seed_value}, which the target "
            "forbids; choose a different d0",
        )

    bez = bezout_witness(form)
    m = m0 if m0 is not None else default_growth_constant(form)
    if m < 1:
        raise ValueError("growth constant must be positive")

    state = ConstructionState.initial(form, form, d0)
    counts = class_counts(form, state.elements, budget)
    ordering = iter(enumerate_multiset(target))
    frozen_numbers: set[int] = set()
    trail: list[str] = []

    for k in range(1, steps + 1):
        # advance to the first entry whose copy is not already covered
        while True:
            entry = next(ordering)
            n, c = entry
            if counts.get(n, 0) >= c + 1:
                frozen_numbers.add(n)
                continue
            break
        t, copy_index = entry
        retries = 0
        while True:
            block, deltas, eps, remainder, shift = _propose(
                form,
                bez,
                t,
                m,
                prev_max_abs=state.elements.max_abs(),
                attempt=retries,
            )
            if len(set(block)) != len(block):
                violation: Optional[Violation] = Violation(
                    "duplicate-in-block", None
                )
                new_counts = merged = None
            else:
                violation, new_counts, merged = _verify_target_step(
                    form,
                    state.elements,
                    block,
                    target,
                    counts,
                    frozen_numbers,
                    entry,
                    budget,
                )
            if violation is None:
                break
            retries += 1
            trail.append(f"step {k} retry {retries} (M={m}): {violation}")
            if retries > retry_cap:
                raise RetryExhaustedError(
                    f"step {k} entry {entry} exhausted {retry_cap} retries; "
                    "trace:\n" + "\n".join(trail)
                )
            m *= 2
        record = StepRecord(
            step=k,
            target=t,
            m=m,
            retries=retries,
            deltas=deltas,
            epsilon=eps,
            remainder=remainder,
            shift=shift,
            block=block,
            support_size=len(new_counts),
            copy_index=copy_index,
        )
        state = state.extended(block, t, m, retries, record)
        counts = new_counts
        frozen_numbers.add(t)
    return state
