"""Finite set families over a ground set [n].

A set S of [n] is stored as a plain ``int`` bit mask: element i (1-based)
lives at bit i-1.  Python integers have unbounded width, so masks for ground
sets larger than 64 elements (power families grow quickly) need no special
handling; ``shift_sizes`` takes a numpy fast path when the ground set fits in
a machine word.

Families are immutable, deduplicated and kept in ascending mask order, which
makes every output deterministic.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError, GroundMismatchError, ResourceGuardError

DEFAULT_CLOSURE_CAP = 1 << 16
DEFAULT_POWER_CAP = 1 << 16

# numpy path: masks must fit in int64, marker table must stay small
_NUMPY_MAX_N = 62
_TABLE_MAX_N = 16


def mask_of(elements: Iterable[int]) -> int:
    """Bit mask of a collection of 1-based elements."""
    m = 0
    for e in elements:
        m |= 1 << (e - 1)
    return m


def elements_of(mask: int) -> list[int]:
    """Ascending 1-based elements of ``mask``."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def full_mask(n: int) -> int:
    return (1 << n) - 1


@dataclass(frozen=True)
class Family:
    """A deduplicated family of subsets of [n] in ascending mask order.

    Build one with :func:`canonicalize` (1-based element lists) or
    :meth:`from_masks`; the raw constructor trusts its arguments.
    """

    n: int
    sets: tuple[int, ...]
    _members: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_members", frozenset(self.sets))

    @classmethod
    def from_masks(cls, n: int, masks: Iterable[int]) -> "Family":
        if n <= 0:
            raise InputError(f"ground size must be positive, got {n}")
        limit = 1 << n
        uniq = set()
        for m in masks:
            if m < 0 or m >= limit:
                raise InputError(f"mask {m:#x} does not fit ground size {n}")
            uniq.add(m)
        return cls(n, tuple(sorted(uniq)))

    def __len__(self) -> int:
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)

    def __contains__(self, mask) -> bool:
        return mask in self._members

    def issubfamily(self, other: "Family") -> bool:
        return self.n == other.n and self._members <= other._members

    def to_lists(self) -> list[list[int]]:
        return [elements_of(m) for m in self.sets]

    def to_json(self) -> dict:
        return {"n": self.n, "sets": self.to_lists()}

    def __str__(self) -> str:
        parts = ("{" + ",".join(map(str, elements_of(m))) + "}" for m in self.sets)
        return "{" + ", ".join(parts) + "}"


def canonicalize(raw_sets: Sequence[Iterable[int]], n: int) -> Family:
    """Family from 1-based element lists; duplicates and ordering are ignored."""
    if not isinstance(n, int) or isinstance(n, bool) or n <= 0:
        raise InputError(f"ground size must be a positive integer, got {n!r}")
    masks = []
    for k, raw in enumerate(raw_sets):
        m = 0
        for j, e in enumerate(raw):
            if not isinstance(e, int) or isinstance(e, bool):
                raise InputError(f"sets[{k}][{j}]: element {e!r} is not an integer")
            if not 1 <= e <= n:
                raise InputError(f"sets[{k}][{j}]: element {e} out of range 1..{n}")
            m |= 1 << (e - 1)
        masks.append(m)
    return Family(n, tuple(sorted(set(masks))))


def family_from_json(obj) -> Family:
    """Parse the ``{"n": int, "sets": [[int, ...], ...]}`` family schema."""
    if not isinstance(obj, dict):
        raise InputError("family JSON must be an object with keys 'n' and 'sets'")
    for key in ("n", "sets"):
        if key not in obj:
            raise InputError(f"missing field '{key}'")
    if not isinstance(obj["sets"], list):
        raise InputError("field 'sets' must be a list of lists")
    for k, s in enumerate(obj["sets"]):
        if not isinstance(s, list):
            raise InputError(f"sets[{k}]: expected a list of elements")
    return canonicalize(obj["sets"], obj["n"])


def load_family(path) -> Family:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    try:
        return family_from_json(obj)
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from None


def _check_width(F: Family, S: int) -> None:
    if S < 0 or S >> F.n:
        raise GroundMismatchError(f"set {S:#x} does not fit ground size {F.n}")


def shift(F: Family, S: int) -> Family:
    """The family {S ∪ T : T ∈ F}, duplicates collapsed."""
    _check_width(F, S)
    return Family(F.n, tuple(sorted({T | S for T in F.sets})))


def shift_size(F: Family, S: int) -> int:
    return len({T | S for T in F.sets})


def shift_sizes(G: Family, shifts: Sequence[int]) -> list[int]:
    """``[shift_size(G, S) for S in shifts]``, vectorized for large inputs."""
    if len(G) * len(shifts) < 4096 or G.n > _NUMPY_MAX_N:
        return [len({T | S for T in G.sets}) for S in shifts]
    arr = np.fromiter(G.sets, dtype=np.int64, count=len(G))
    out = []
    if G.n <= _TABLE_MAX_N:
        mark = np.zeros(1 << G.n, dtype=bool)
        for S in shifts:
            vals = arr | S
            mark[vals] = True
            out.append(int(np.count_nonzero(mark)))
            mark[vals] = False
    else:
        for S in shifts:
            out.append(int(np.unique(arr | S).size))
    return out


def is_union_closed(F: Family) -> bool:
    sets = F.sets
    for a_idx, A in enumerate(sets):
        for B in sets[a_idx + 1:]:
            if (A | B) not in F:
                return False
    return True


def union_closure(generators: Family, cap: int = DEFAULT_CLOSURE_CAP) -> Family:
    """Smallest union-closed family containing ``generators``."""
    closed, _ = union_closure_stats(generators, cap)
    return closed


def union_closure_stats(generators: Family, cap: int = DEFAULT_CLOSURE_CAP):
    """Like :func:`union_closure`, also returning per-round growth counts."""
    if len(generators) == 0:
        raise InputError("union closure needs at least one generator")
    seen = set(generators.sets)
    frontier = list(generators.sets)
    growth = []
    while frontier:
        fresh = []
        base = list(seen)
        for A in frontier:
            for B in base:
                U = A | B
                if U not in seen:
                    seen.add(U)
                    fresh.append(U)
                    if len(seen) > cap:
                        raise ResourceGuardError(
                            f"union closure exceeds cap of {cap} sets")
        if fresh:
            growth.append(len(fresh))
        frontier = fresh
    return Family(generators.n, tuple(sorted(seen))), growth


@dataclass(frozen=True)
class FrequencyTable:
    """Per-element absence counts: ``absent[i-1]`` sets of the family miss i."""

    n: int
    absent: tuple[int, ...]
    family_size: int

    def w(self, i: int) -> int:
        return self.absent[i - 1]

    def present(self, i: int) -> int:
        return self.family_size - self.absent[i - 1]


def frequencies(F: Family) -> FrequencyTable:
    present = [0] * F.n
    for S in F.sets:
        for e in elements_of(S):
            present[e - 1] += 1
    m = len(F)
    return FrequencyTable(F.n, tuple(m - c for c in present), m)


def abundant_elements(F: Family) -> list[int]:
    """Elements contained in at least half of the sets (2·w(i) <= |F|)."""
    if len(F) == 0:
        raise InputError("abundance is undefined for the empty family")
    table = frequencies(F)
    return [i for i in range(1, F.n + 1) if 2 * table.w(i) <= len(F)]


def product_power(F: Family, copies: int, cap: int = DEFAULT_POWER_CAP) -> Family:
    """Disjoint-copies power of F over ground size n·copies.

    Copy j (1-based) of base element i sits at position i + (j-1)·n, so the
    tuple (S_1, ..., S_N) becomes the mask ``sum(S_j << (j-1)·n)``.
    """
    if copies < 1:
        raise InputError(f"number of copies must be >= 1, got {copies}")
    if len(F) == 0:
        raise InputError("power of the empty family")
    size = len(F) ** copies
    if size > cap:
        raise ResourceGuardError(
            f"power family has {size} members, exceeding cap {cap}")
    n = F.n
    masks = []
    for parts in itertools.product(F.sets, repeat=copies):
        m = 0
        for j, S in enumerate(parts):
            m |= S << (j * n)
        masks.append(m)
    return Family(n * copies, tuple(sorted(masks)))


def split_power_mask(mask: int, n: int, copies: int) -> tuple[int, ...]:
    """Inverse of the power-family embedding: per-copy base masks."""
    low = full_mask(n)
    return tuple((mask >> (j * n)) & low for j in range(copies))


def power_shift_size(F: Family, parts: Sequence[int]) -> int:
    """Size of the power family shifted by the tuple ``parts``.

    The copies are disjoint, so the shifted power family is the product of
    the per-copy shifts; nothing is materialized.
    """
    for S in parts:
        _check_width(F, S)
    return math.prod(shift_size(F, S) for S in parts)


@dataclass(frozen=True)
class PowerFamilyHandle:
    """Lazy view of ``product_power(base, copies)``."""

    base: Family
    copies: int
    materialization_cap: int = DEFAULT_POWER_CAP

    def __post_init__(self):
        if self.copies < 1:
            raise InputError(f"number of copies must be >= 1, got {self.copies}")
        if self.materialization_cap < 1:
            raise InputError("materialization cap must be positive")

    @property
    def size(self) -> int:
        return len(self.base) ** self.copies

    @property
    def ground_size(self) -> int:
        return self.base.n * self.copies

    def materialize(self) -> Family:
        return product_power(self.base, self.copies, self.materialization_cap)

    def shift_size(self, parts: Sequence[int]) -> int:
        if len(parts) != self.copies:
            raise InputError(f"expected {self.copies} parts, got {len(parts)}")
        return power_shift_size(self.base, parts)
