"""Entropy of set-valued random variables and the per-element decomposition.

Entropies are in bits.  A distribution maps set masks to probabilities; the
law of X ∪ S is obtained with :func:`union_pushforward`.

The decomposition peels elements off one at a time: for element e the share
is x_e = H(X) - H(X ∪ {e}), after which the coordinate e is frozen (pushed
through ∪{e} and stripped) and the next element is processed.  The result
satisfies sum(x) = H(X) and H(X ∪ S) >= sum of x_i over i outside S, for
every elimination order.
"""

from __future__ import annotations

import math
import random
from collections import defaultdict
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import ContractViolation, InputError, ResourceGuardError
from .family import Family, elements_of, full_mask

# absolute tolerance for every entropy inequality
TOLERANCE = 1e-9
NORMALIZATION_TOLERANCE = 1e-12
EXHAUSTIVE_MAX_N = 24


@dataclass(frozen=True)
class SetDistribution:
    """Probability mass on subsets of [n]; ``mass`` is sorted by mask."""

    n: int
    mass: tuple[tuple[int, float], ...]

    @classmethod
    def from_mapping(cls, n: int, weights: Mapping[int, float],
                     normalize: bool = False) -> "SetDistribution":
        if n <= 0:
            raise InputError(f"ground size must be positive, got {n}")
        limit = 1 << n
        items = []
        for m, p in weights.items():
            if m < 0 or m >= limit:
                raise InputError(f"mask {m:#x} does not fit ground size {n}")
            if p < 0 or not math.isfinite(p):
                raise InputError(f"invalid probability {p!r} for mask {m:#x}")
            if p > 0:
                items.append((m, float(p)))
        if not items:
            raise InputError("distribution has no positive mass")
        total = math.fsum(p for _, p in items)
        if normalize:
            items = [(m, p / total) for m, p in items]
        elif abs(total - 1.0) > NORMALIZATION_TOLERANCE:
            raise InputError(f"masses sum to {total!r}, not 1")
        items.sort()
        return cls(n, tuple(items))

    @property
    def support(self) -> list[int]:
        return [m for m, _ in self.mass]

    def as_dict(self) -> dict[int, float]:
        return dict(self.mass)


def uniform_on(F: Family) -> SetDistribution:
    """Law of a set drawn uniformly from ``F``."""
    if len(F) == 0:
        raise InputError("cannot draw uniformly from the empty family")
    p = 1.0 / len(F)
    return SetDistribution(F.n, tuple((m, p) for m in F.sets))


def entropy(d: SetDistribution) -> float:
    return _entropy_of(p for _, p in d.mass)


def _entropy_of(probs) -> float:
    # fsum gives a correctly rounded total, which keeps long sums honest
    return math.fsum(-p * math.log2(p) for p in probs if p > 0)


def _pushed_masses(mass, S: int):
    groups = defaultdict(list)
    for m, p in mass:
        groups[m | S].append(p)
    return {m: math.fsum(ps) for m, ps in groups.items()}


def union_pushforward(d: SetDistribution, S: int) -> SetDistribution:
    """Law of X ∪ S."""
    if S < 0 or S >> d.n:
        raise InputError(f"set {S:#x} does not fit ground size {d.n}")
    if S == 0:
        return d
    pushed = _pushed_masses(d.mass, S)
    return SetDistribution(d.n, tuple(sorted(pushed.items())))


def union_entropy(d: SetDistribution, S: int) -> float:
    """H(X ∪ S) without building an intermediate distribution."""
    if S == 0:
        return entropy(d)
    return _entropy_of(_pushed_masses(d.mass, S).values())


def submodularity_gap(d: SetDistribution, S: int, e: int) -> float:
    """[H(X∪S) - H(X∪S∪{e})] - [H(X) - H(X∪{e})] for element e outside S.

    Never below -TOLERANCE: adding e costs at least as much entropy before
    S is merged in as after.
    """
    if not 1 <= e <= d.n:
        raise InputError(f"element {e} out of range 1..{d.n}")
    bit = 1 << (e - 1)
    if S & bit:
        raise InputError(f"element {e} belongs to S")
    if S == 0:
        return 0.0
    before = entropy(d) - union_entropy(d, bit)
    after = union_entropy(d, S) - union_entropy(d, S | bit)
    return after - before


@dataclass(frozen=True)
class DecompositionVector:
    """Nonnegative per-element shares of H(X); ``x[i-1]`` belongs to element i."""

    n: int
    x: tuple[float, ...]
    elimination_order: tuple[int, ...]
    source_entropy: float

    def share(self, i: int) -> float:
        return self.x[i - 1]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "x": list(self.x),
            "elimination_order": list(self.elimination_order),
            "source_entropy": self.source_entropy,
            "sum_x": math.fsum(self.x),
        }


def _check_order(order: Sequence[int], n: int) -> tuple[int, ...]:
    order = tuple(order)
    if sorted(order) != list(range(1, n + 1)):
        raise InputError(f"elimination order must be a permutation of 1..{n}, got {list(order)}")
    return order


def decompose(d: SetDistribution, order: Sequence[int] | None = None) -> DecompositionVector:
    """Split H(X) into per-element shares by eliminating elements in ``order``.

    The default order is n, n-1, ..., 1.  Shares in [-TOLERANCE, 0) are
    rounding noise and clamp to zero; anything lower raises.
    """
    n = d.n
    order = tuple(range(n, 0, -1)) if order is None else _check_order(order, n)
    x = [0.0] * n
    mass = {m: p for m, p in d.mass}
    h_current = entropy(d)
    source = h_current
    for e in order:
        bit = 1 << (e - 1)
        # push through ∪{e} then strip e: same law as X∪{e} up to relabeling
        groups = defaultdict(list)
        for m, p in mass.items():
            groups[m & ~bit].append(p)
        mass = {m: math.fsum(ps) for m, ps in groups.items()}
        h_next = _entropy_of(mass.values())
        share = h_current - h_next
        if share < 0:
            if share < -TOLERANCE:
                raise ContractViolation(
                    f"negative share {share!r} for element {e}")
            share = 0.0
        x[e - 1] = share
        h_current = h_next
    return DecompositionVector(n, tuple(x), order, source)


@dataclass(frozen=True)
class DecompositionCheck:
    """Outcome of checking H(X ∪ S) >= sum of shares outside S."""

    mode: str
    checked: int
    worst_slack: float
    worst_set: int
    violations: tuple[tuple[int, float], ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "checked": self.checked,
            "worst_slack": self.worst_slack,
            "worst_set": elements_of(self.worst_set),
            "violations": [{"set": elements_of(m), "slack": s} for m, s in self.violations],
        }


def verify_decomposition(d: SetDistribution, v: DecompositionVector,
                         mode: str = "exhaustive", samples: int = 0,
                         seed: int | None = None) -> DecompositionCheck:
    """Check every subset (``mode="exhaustive"``) or ``samples`` seeded random ones.

    Violations are the sets whose slack falls below -TOLERANCE, listed in
    ascending mask order.
    """
    if v.n != d.n:
        raise InputError(f"decomposition is over {v.n} elements, distribution over {d.n}")
    n = d.n
    if mode == "exhaustive":
        if n > EXHAUSTIVE_MAX_N:
            raise ResourceGuardError(
                f"exhaustive verification refused for n={n} > {EXHAUSTIVE_MAX_N}")
        subsets = range(1 << n)
    elif mode == "sample":
        if samples <= 0:
            raise InputError("sample mode needs a positive number of samples")
        if seed is None:
            raise InputError("sample mode needs an explicit seed")
        rng = random.Random(seed)
        subsets = sorted({rng.getrandbits(n) for _ in range(samples)})
    else:
        raise InputError(f"unknown verification mode {mode!r}")

    everything = full_mask(n)
    worst = math.inf
    worst_set = everything
    violations = []
    checked = 0
    for S in subsets:
        outside = everything & ~S
        budget = math.fsum(v.x[i] for i in range(n) if outside >> i & 1)
        slack = union_entropy(d, S) - budget
        checked += 1
        if slack < worst:
            worst, worst_set = slack, S
        if slack < -TOLERANCE:
            violations.append((S, slack))
    return DecompositionCheck(mode, checked, worst, worst_set, tuple(violations))
