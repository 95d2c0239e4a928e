#!/usr/bin/env python3
"""
typeclass.py

Zero-pattern classification of the left factor L of a stochastic factorization
of a 6-row matrix. Only rows 1 and 2 matter:

    k   columns with both coordinates zero
    k1  columns with the first coordinate positive and the second zero
    k2  columns with the second coordinate positive and the first zero

The four factorization types:

    type 1   k=1, k1=2, k2=2
    type 2   k=2, k1=1        (k2 in 0..2)
    type 3   k=2, k2=1        (k1 in 0..2)
    type 4   k=3, k1=1, k2=1

Usage:
    from typeclass import classify, feasible_profiles
    classify(paper_constants().W).type_tag      # 1
    feasible_profiles(4)                        # {(2, 1, 1)}
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Optional, Set, Tuple

from exactnum import sign
from linalg import DimensionError, ExactMatrix, NegativeEntryError

log = logging.getLogger(__name__)

Profile = Tuple[int, int, int]


def _matching_types(k: int, k1: int, k2: int) -> FrozenSet[int]:
    tags: Set[int] = set()
    if (k, k1, k2) == (1, 2, 2):
        tags.add(1)
    if k == 2 and k1 == 1 and 0 <= k2 <= 2:
        tags.add(2)
    if k == 2 and k2 == 1 and 0 <= k1 <= 2:
        tags.add(3)
    if (k, k1, k2) == (3, 1, 1):
        tags.add(4)
    return frozenset(tags)


@dataclass(frozen=True)
class TypeProfile:
    k: int
    k1: int
    k2: int
    inner_dim: int
    matching_types: FrozenSet[int] = field(default_factory=frozenset)

    @property
    def type_tag(self) -> Optional[int]:
        """Smallest matching type; (2, 1, 1) is both type 2 and type 3 and reports 2."""
        return min(self.matching_types) if self.matching_types else None

    @property
    def profile(self) -> Profile:
        return (self.k, self.k1, self.k2)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "k": self.k, "k1": self.k1, "k2": self.k2,
            "inner_dim": self.inner_dim,
            "type_tag": self.type_tag if self.type_tag is not None else "none",
            "matching_types": sorted(self.matching_types),
        }


def classify(L: ExactMatrix) -> TypeProfile:
    rows, cols = L.shape
    if rows != 6:
        raise DimensionError(f"left factor must have 6 rows, got {rows}")
    for i in range(rows):
        for j in range(cols):
            if sign(L[i, j]) < 0:
                raise NegativeEntryError(f"L[{i + 1},{j + 1}] is negative")
    k = k1 = k2 = 0
    for j in range(cols):
        first, second = sign(L[0, j]) > 0, sign(L[1, j]) > 0
        if not first and not second:
            k += 1
        elif first and not second:
            k1 += 1
        elif second and not first:
            k2 += 1
    profile = TypeProfile(k, k1, k2, cols, _matching_types(k, k1, k2))
    log.debug(f"classified {rows}x{cols} factor as {profile.profile}, types {sorted(profile.matching_types)}")
    return profile


def feasible_profiles(d: int) -> Set[Profile]:
    """All (k, k1, k2) a stochastic rank-d factorization of the certificate matrix can have."""
    if d < 1:
        raise ValueError(f"inner dimension must be >= 1, got {d}")
    return {
        (k, k1, k2)
        for k in range(d + 1) for k1 in range(d + 1) for k2 in range(d + 1)
        if k + k1 + k2 <= d and k + k1 >= 3 and k + k2 >= 3 and k1 >= 1 and k2 >= 1
    }


def profile_arithmetic_holds(profile: Profile, d: int = 5) -> bool:
    k, k1, k2 = profile
    return 2 * k >= 6 - k1 - k2 and k in (1, 2, 3) and k + k1 + k2 <= d
