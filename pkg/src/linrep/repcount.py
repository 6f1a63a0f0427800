"""Exhaustive unordered representation counting over finite integer sets.

Two solution tuples of a form represent the same class when, at every
integer value, the sums of the coefficients attached to that value agree.
The canonical datum of a class is therefore the finite map
value -> coefficient-sum with zero sums removed.  Counting classes per
represented integer is done by brute-force enumeration of all |A|^h
ordered tuples; a finite set represents finitely many integers, so the
full support is always available.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations_with_replacement, product
from typing import Iterable, Iterator

from .errors import ArityMismatchError, BudgetExceededError
from .forms import LinearForm

DEFAULT_TUPLE_BUDGET = 10**8


@dataclass(frozen=True)
class GroundSet:
    """A finite set of distinct integers, stored sorted ascending."""

    elements: tuple[int, ...]

    @classmethod
    def of(cls, values: Iterable[int]) -> "GroundSet":
        return cls(tuple(sorted(set(int(v) for v in values))))

    def __post_init__(self):
        elems = tuple(self.elements)
        if len(set(elems)) != len(elems) or tuple(sorted(elems)) != elems:
            object.__setattr__(self, "elements", tuple(sorted(set(elems))))

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, value: int) -> bool:
        return value in self.elements

    def max_abs(self) -> int:
        """Largest absolute value, or 0 for the empty set."""
        return max((abs(e) for e in self.elements), default=0)

    def union(self, values: Iterable[int]) -> "GroundSet":
        return GroundSet.of(self.elements + tuple(values))

    @classmethod
    def from_json(cls, text: str) -> "GroundSet":
        """Load from a JSON array of signed decimal strings."""
        raw = json.loads(text)
        if not isinstance(raw, list):
            raise ValueError("ground set file must be a JSON array")
        return cls.of(int(s) for s in raw)

    def to_json(self) -> str:
        """Serialize as a JSON array of decimal strings (exact for big values)."""
        return json.dumps([str(e) for e in self.elements])


@dataclass(frozen=True)
class RepClass:
    """Canonical representation class: sorted (value, weight) pairs.

    Weights are the per-value coefficient sums; zero weights are dropped
    during canonicalization, so the empty class represents 0.
    """

    items: tuple[tuple[int, int], ...]

    @classmethod
    def from_weights(cls, weights: dict[int, int]) -> "RepClass":
        return cls(tuple(sorted((v, w) for v, w in weights.items() if w != 0)))

    def represents(self) -> int:
        """The integer this class is a representation of."""
        return sum(v * w for v, w in self.items)


def canonicalize(form: LinearForm, solution: tuple[int, ...]) -> RepClass:
    """Canonical class of one solution tuple.

    Groups tuple positions by value and sums the attached coefficients;
    zero sums are removed.  Two tuples are equivalent representations iff
    their canonical classes are equal.
    """
    if len(solution) != form.arity:
        raise ArityMismatchError(
            f"tuple has {len(solution)} entries, form has {form.arity} variables"
        )
    weights: dict[int, int] = {}
    for a, x in zip(form.coefficients, solution):
        weights[x] = weights.get(x, 0) + a
    return RepClass.from_weights(weights)


@dataclass
class RepProfile:
    """Class counts of a ground set under a form.

    ``counts`` is exhaustive over the full support (every represented
    integer appears; anything absent has count 0); ``window`` records the
    interval the caller asked about.
    """

    counts: dict[int, int]
    window: tuple[int, int]
    windowed_only: bool = field(default=False)

    def count(self, n: int) -> int:
        return self.counts.get(n, 0)

    @property
    def support_min(self) -> int | None:
        return min(self.counts) if self.counts else None

    @property
    def support_max(self) -> int | None:
        return max(self.counts) if self.counts else None

    def windowed_counts(self) -> dict[int, int]:
        lo, hi = self.window
        return {n: c for n, c in sorted(self.counts.items()) if lo <= n <= hi}

    def to_json_obj(self) -> dict:
        smin, smax = self.support_min, self.support_max
        return {
            "counts": {str(n): c for n, c in self.windowed_counts().items()},
            "support_min": None if smin is None else str(smin),
            "support_max": None if smax is None else str(smax),
        }


def _check_budget(size: int, arity: int, budget: int) -> None:
    required = size**arity
    if required > budget:
        raise BudgetExceededError(required, budget)


def class_counts(
    form: LinearForm,
    ground_set: GroundSet,
    budget: int = DEFAULT_TUPLE_BUDGET,
) -> dict[int, int]:
    """Exhaustive map n -> number of distinct classes representing n.

    Enumerates every ordered tuple over the set.  When all coefficients are
    equal, classes biject with value multisets, so the enumeration walks
    sorted multisets directly; results are identical to the general path.
    """
    elements = ground_set.elements
    coeffs = form.coefficients
    _check_budget(len(elements), len(coeffs), budget)
    if not elements:
        return {}
    if len(set(coeffs)) == 1:
        return _uniform_counts(coeffs[0], len(coeffs), elements)
    return _general_counts(coeffs, elements)


def _uniform_counts(coeff: int, arity: int, elements: tuple[int, ...]) -> dict[int, int]:
    counts: dict[int, int] = defaultdict(int)
    for combo in combinations_with_replacement(elements, arity):
        counts[coeff * sum(combo)] += 1
    return dict(counts)


def _general_counts(coeffs: tuple[int, ...], elements: tuple[int, ...]) -> dict[int, int]:
    buckets: dict[int, set] = defaultdict(set)
    arity = len(coeffs)
    for tup in product(elements, repeat=arity):
        total = 0
        weights: dict[int, int] = {}
        for a, x in zip(coeffs, tup):
            total += a * x
            weights[x] = weights.get(x, 0) + a
        buckets[total].add(frozenset(kv for kv in weights.items() if kv[1]))
    return {n: len(classes) for n, classes in buckets.items()}


def _pruned_counts(
    coeffs: tuple[int, ...], elements: tuple[int, ...], lo: int, hi: int
) -> dict[int, int]:
    """Same-sign enumeration restricted to [lo, hi] by monotone bounding."""
    arity = len(coeffs)
    lo_elem, hi_elem = elements[0], elements[-1]
    # suffix_min/max[i]: extreme contribution of positions i..arity-1
    suffix_min = [0] * (arity + 1)
    suffix_max = [0] * (arity + 1)
    for i in range(arity - 1, -1, -1):
        a = coeffs[i]
        cands = (a * lo_elem, a * hi_elem)
        suffix_min[i] = suffix_min[i + 1] + min(cands)
        suffix_max[i] = suffix_max[i + 1] + max(cands)

    buckets: dict[int, set] = defaultdict(set)

    def walk(pos: int, partial: int, chosen: tuple[int, ...]) -> None:
        if partial + suffix_max[pos] < lo or partial + suffix_min[pos] > hi:
            return
        if pos == arity:
            weights: dict[int, int] = {}
            for a, x in zip(coeffs, chosen):
                weights[x] = weights.get(x, 0) + a
            buckets[partial].add(frozenset(kv for kv in weights.items() if kv[1]))
            return
        a = coeffs[pos]
        for x in elements:
            walk(pos + 1, partial + a * x, chosen + (x,))

    walk(0, 0, ())
    return {n: len(classes) for n, classes in buckets.items()}


def rep_function(
    form: LinearForm,
    ground_set: GroundSet,
    window: tuple[int, int],
    budget: int = DEFAULT_TUPLE_BUDGET,
    monotone_prune: bool = False,
) -> RepProfile:
    """Unordered representation function of a finite set, exhaustively.

    Counts, for every integer in ``window`` (and across the full support),
    the number of distinct representation classes.  Raises
    BudgetExceededError with the required tuple count when |A|^h exceeds
    ``budget``.

    ``monotone_prune`` enables early termination by monotone bounding when
    all coefficients share a sign.  It is off by default: a pruned run
    only counts inside the window, so the profile's support fields then
    describe the window intersection rather than the full support.
    """
    lo, hi = window
    if lo > hi:
        raise ValueError(f"window lower bound {lo} exceeds upper bound {hi}")
    coeffs = form.coefficients
    same_sign = all(c > 0 for c in coeffs) or all(c < 0 for c in coeffs)
    if monotone_prune and same_sign and ground_set.elements:
        _check_budget(len(ground_set), form.arity, budget)
        counts = _pruned_counts(coeffs, ground_set.elements, lo, hi)
        return RepProfile(counts=counts, window=window, windowed_only=True)
    counts = class_counts(form, ground_set, budget)
    return RepProfile(counts=counts, window=window)


def count_at(
    form: LinearForm,
    ground_set: GroundSet,
    n: int,
    budget: int = DEFAULT_TUPLE_BUDGET,
) -> int:
    """Number of distinct classes representing n; same budget rule."""
    return class_counts(form, ground_set, budget).get(n, 0)
