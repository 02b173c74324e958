"""Finite set systems over the naturals: derived families, recursive rank,
and inclusivity.

A family is a finite set of nonempty finite sets of naturals.  The rank of
the empty family is 0; otherwise it is one plus the largest rank of a
derived family obtained by stripping a single element of the support.  For
finite families the rank always equals the largest member size, which the
tests cross-check by brute force.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import chain, combinations
from typing import Iterable


@dataclass(frozen=True, slots=True)
class FinFamily:
    """A deduplicated finite collection of nonempty finite sets of naturals."""

    members: frozenset[frozenset[int]]

    def __post_init__(self) -> None:
        for m in self.members:
            if not m:
                raise ValueError("family members must be nonempty")
            if any(x < 0 for x in m):
                raise ValueError("family members must contain naturals")

    @classmethod
    def of(cls, sets: Iterable[Iterable[int]]) -> "FinFamily":
        return cls(frozenset(frozenset(s) for s in sets))

    @classmethod
    def empty(cls) -> "FinFamily":
        return cls(frozenset())

    def support(self) -> frozenset[int]:
        """Union of all members."""
        out: set[int] = set()
        for m in self.members:
            out |= m
        return frozenset(out)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, s) -> bool:
        return frozenset(s) in self.members

    def __le__(self, other: "FinFamily") -> bool:
        return self.members <= other.members

    def to_json(self) -> list[list[int]]:
        return sorted(sorted(m) for m in self.members)


def derived_family(M: FinFamily, sigma: Iterable[int]) -> FinFamily:
    """All nonempty tau disjoint from sigma with tau-union-sigma a member."""
    s = frozenset(sigma)
    out = set()
    for m in M.members:
        if s <= m:
            tau = m - s
            if tau:
                out.add(tau)
    return FinFamily(frozenset(out))


def ord_rank(M: FinFamily) -> int:
    """Recursive rank: 0 for the empty family, else 1 + the best rank after
    stripping one support element.  Equals the maximum member size."""
    memo: dict[frozenset[frozenset[int]], int] = {}

    def rank(members: frozenset[frozenset[int]]) -> int:
        if not members:
            return 0
        cached = memo.get(members)
        if cached is not None:
            return cached
        support = frozenset(chain.from_iterable(members))
        best = 0
        for a in support:
            derived = set()
            for m in members:
                if a in m:
                    tau = m - {a}
                    if tau:
                        derived.add(tau)
            best = max(best, rank(frozenset(derived)))
        memo[members] = best + 1
        return best + 1

    return rank(M.members)


def is_inclusive(M: FinFamily) -> bool:
    """Whether every nonempty subset of a member is itself a member."""
    for m in M.members:
        for size in range(1, len(m)):
            for sub in combinations(sorted(m), size):
                if frozenset(sub) not in M.members:
                    return False
    return True


def inclusive_closure(M: FinFamily) -> FinFamily:
    """Add every nonempty subset of every member."""
    out: set[frozenset[int]] = set()
    for m in M.members:
        elems = sorted(m)
        for size in range(1, len(elems) + 1):
            for sub in combinations(elems, size):
                out.add(frozenset(sub))
    return FinFamily(frozenset(out))
