"""Searching for witness families.

Three strategies:

* ``exhaustive_search`` walks candidates by ascending size, then ascending
  member tuple, and returns the first passing witness.  Running out of
  candidates (rather than budget) proves no witness exists in the universe.
* ``greedy_search`` is a seeded hill climb on the bit margin with restarts.
* ``threshold_power_witness`` builds the witness on a power family from the
  sets whose shifted power family is large, and audits the size conditions
  under which that witness is guaranteed to pass.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .certificate import CertificateReport, _evaluate, verify_certificate
from .errors import ContractViolation, InputError, ResourceGuardError
from .family import (
    DEFAULT_POWER_CAP,
    Family,
    elements_of,
    product_power,
    shift_size,
    split_power_mask,
)

FULL = "full"
SUBFAMILY = "subfamily"

FOUND = "found"
EXHAUSTED = "exhausted"
BUDGET = "budget"

DEFAULT_BUDGET = 10**4
FULL_UNIVERSE_MAX_N = 5


@dataclass(frozen=True)
class SearchConfig:
    universe: str = FULL
    min_size: int = 2
    max_size: int | None = None
    budget: int = DEFAULT_BUDGET
    seed: int = 0
    # consecutive non-improving proposals before a greedy restart
    patience: int = 64

    def __post_init__(self):
        if self.universe not in (FULL, SUBFAMILY):
            raise InputError(f"universe must be '{FULL}' or '{SUBFAMILY}', got {self.universe!r}")
        if self.min_size < 2:
            raise InputError("witnesses need at least two sets (min_size >= 2)")
        if self.max_size is not None and self.max_size < self.min_size:
            raise InputError("max_size is below min_size")
        if self.budget <= 0:
            raise InputError("budget must be positive")
        if self.patience <= 0:
            raise InputError("patience must be positive")

    def to_json(self) -> dict:
        return {
            "universe": self.universe,
            "min_size": self.min_size,
            "max_size": self.max_size,
            "budget": self.budget,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class SearchResult:
    witness: Family | None
    report: CertificateReport | None
    examined: int
    coverage: str
    trace: tuple[dict, ...] = field(default=())

    @property
    def found(self) -> bool:
        return self.witness is not None

    def to_json(self) -> dict:
        out = {
            "found": self.found,
            "coverage": self.coverage,
            "examined": self.examined,
            "witness": None if self.witness is None else self.witness.to_json(),
            "certificate": None if self.report is None else self.report.to_json(),
        }
        if self.trace:
            out["trace"] = list(self.trace)
        return out


def _universe(F: Family, cfg: SearchConfig) -> list[int] | None:
    """Sorted candidate members, or None for an unmaterialized 2^[n]."""
    if cfg.universe == SUBFAMILY:
        return list(F.sets)
    if F.n > FULL_UNIVERSE_MAX_N:
        return None
    return list(range(1 << F.n))


def exhaustive_search(F: Family, cfg: SearchConfig = SearchConfig()) -> SearchResult:
    if len(F) == 0:
        raise InputError("witness search needs a nonempty family")
    universe = _universe(F, cfg)
    if universe is None:
        raise ResourceGuardError(
            f"exhaustive search over all subfamilies of 2^[{F.n}] refused "
            f"(limit n <= {FULL_UNIVERSE_MAX_N}); use the subfamily universe or greedy mode")
    top = len(universe) if cfg.max_size is None else min(cfg.max_size, len(universe))
    examined = 0
    for size in range(cfg.min_size, top + 1):
        for members in itertools.combinations(universe, size):
            if examined >= cfg.budget:
                return SearchResult(None, None, examined, BUDGET)
            examined += 1
            G = Family(F.n, members)
            report = _evaluate(F, G)
            if report.passed:
                return SearchResult(G, report, examined, FOUND)
    return SearchResult(None, None, examined, EXHAUSTED)


class _Climber:
    """State of one greedy run; keeps the budget and trace in one place."""

    def __init__(self, F: Family, cfg: SearchConfig):
        self.F = F
        self.cfg = cfg
        self.rng = random.Random(cfg.seed)
        self.pool = list(F.sets) if cfg.universe == SUBFAMILY else None
        self.pool_size = len(F) if self.pool is not None else 1 << F.n
        self.max_size = min(cfg.max_size or self.pool_size, self.pool_size)
        self.examined = 0
        self.trace: list[dict] = []

    def draw_outside(self, current: set[int]) -> int | None:
        if len(current) >= self.pool_size:
            return None
        if self.pool is None and current and self.rng.random() < 0.5:
            # local move: toggle one element of a current member
            near = self.rng.choice(sorted(current)) ^ (1 << self.rng.randrange(self.F.n))
            if near not in current:
                return near
        for _ in range(32):
            m = self.rng.choice(self.pool) if self.pool is not None else self.rng.getrandbits(self.F.n)
            if m not in current:
                return m
        if self.pool is not None:
            rest = [m for m in self.pool if m not in current]
        else:
            rest = [m for m in range(self.pool_size) if m not in current]
        return self.rng.choice(rest)

    def fresh_start(self) -> set[int]:
        current: set[int] = set()
        while len(current) < self.cfg.min_size:
            current.add(self.draw_outside(current))
        return current

    def evaluate(self, current: set[int]) -> CertificateReport:
        self.examined += 1
        return _evaluate(self.F, Family(self.F.n, tuple(sorted(current))))

    def propose(self, current: set[int]) -> tuple[str, set[int], int] | None:
        moves = []
        room = len(current) < self.pool_size
        if room and len(current) < self.max_size:
            moves.append("add")
        if len(current) > self.cfg.min_size:
            moves.append("remove")
        if room:
            moves.append("swap")
        if not moves:
            return None
        move = self.rng.choice(moves)
        nxt = set(current)
        if move == "remove":
            target = self.rng.choice(sorted(current))
            nxt.discard(target)
        else:
            target = self.draw_outside(current)
            if move == "swap":
                nxt.discard(self.rng.choice(sorted(current)))
            nxt.add(target)
        return move, nxt, target

    def log(self, move: str, target: int | None, report: CertificateReport) -> None:
        self.trace.append({
            "step": self.examined,
            "move": move,
            "set": None if target is None else elements_of(target),
            "margin_bits": report.margin_bits,
        })

    def run(self) -> SearchResult:
        budget = self.cfg.budget
        done = lambda G, rep: SearchResult(G, rep, self.examined, FOUND, tuple(self.trace))
        while self.examined < budget:
            current = self.fresh_start()
            report = self.evaluate(current)
            self.log("start", None, report)
            if report.passed:
                return done(Family(self.F.n, tuple(sorted(current))), report)
            stale = 0
            while stale < self.cfg.patience and self.examined < budget:
                proposal = self.propose(current)
                if proposal is None:
                    break
                move, nxt, target = proposal
                cand = self.evaluate(nxt)
                if cand.passed:
                    self.log(move, target, cand)
                    return done(Family(self.F.n, tuple(sorted(nxt))), cand)
                if cand.margin_bits > report.margin_bits:
                    current, report, stale = nxt, cand, 0
                    self.log(move, target, cand)
                else:
                    stale += 1
            if self.examined < budget:
                self.trace.append({"step": self.examined, "move": "restart"})
        return SearchResult(None, None, self.examined, BUDGET, tuple(self.trace))


def greedy_search(F: Family, cfg: SearchConfig = SearchConfig()) -> SearchResult:
    """Seeded hill climb over subfamilies, maximizing the bit margin.

    Moves add, remove or swap one set; only strict improvements are kept and
    ``cfg.patience`` consecutive misses trigger a restart from a random
    family.  Every evaluated candidate counts against ``cfg.budget``.
    """
    if len(F) == 0:
        raise InputError("witness search needs a nonempty family")
    climber = _Climber(F, cfg)
    if climber.pool_size < cfg.min_size:
        return SearchResult(None, None, 0, EXHAUSTED)
    return climber.run()


@dataclass(frozen=True)
class ThresholdConfig:
    copies: int
    epsilon: Fraction
    cap: int = DEFAULT_POWER_CAP

    def __post_init__(self):
        eps = Fraction(self.epsilon)
        object.__setattr__(self, "epsilon", eps)
        if self.copies < 1:
            raise InputError(f"copies must be >= 1, got {self.copies}")
        if not 0 < eps < Fraction(1, 2):
            raise InputError(f"epsilon must lie strictly between 0 and 1/2, got {eps}")
        if self.cap < 1:
            raise InputError("cap must be positive")


@dataclass(frozen=True)
class ThresholdReport:
    copies: int
    epsilon: Fraction
    power_size: int
    witness_size: int
    size_condition_met: bool
    lower_bound_met: bool
    chain_applies: bool
    flags: tuple[str, ...]
    certificate: CertificateReport
    witness: Family = field(repr=False)

    def to_json(self) -> dict:
        return {
            "copies": self.copies,
            "epsilon": str(self.epsilon),
            "power_size": self.power_size,
            "witness_size": self.witness_size,
            "size_condition_met": self.size_condition_met,
            "lower_bound_met": self.lower_bound_met,
            "chain_applies": self.chain_applies,
            "flags": list(self.flags),
            "certificate": self.certificate.to_json(),
        }


def _meets_threshold(size: int, base: int, exponent: Fraction) -> bool:
    """Exact test size >= base ** exponent for a rational exponent."""
    p, q = exponent.numerator, exponent.denominator
    if p >= 0:
        return size ** q >= base ** p
    return size ** q * base ** (-p) >= 1


def threshold_power_witness(F: Family, cfg: ThresholdConfig) -> ThresholdReport:
    """Witness on the power family: members whose shifted power family is large.

    Keeps each tuple S of the power family with |F^N(S)| >= |F|^(eps·(N-2)),
    decided in integers.  When the kept family satisfies
    |G| <= (1/2 - eps)|F^N| and |G| >= |F^N|/4 with |G| > 1 the certificate
    must pass; that implication is checked on every call.
    """
    if len(F) == 0:
        raise InputError("threshold construction needs a nonempty family")
    N = cfg.copies
    power = product_power(F, N, cfg.cap)
    exponent = cfg.epsilon * (N - 2)
    base_sizes = {S: shift_size(F, S) for S in F.sets}
    kept = []
    for T in power.sets:
        size = 1
        for part in split_power_mask(T, F.n, N):
            size *= base_sizes[part]
        if _meets_threshold(size, len(F), exponent):
            kept.append(T)
    G = Family(power.n, tuple(kept))

    total = len(power)
    size_ok = len(G) <= (Fraction(1, 2) - cfg.epsilon) * total
    lower_ok = 4 * len(G) >= total
    chain = size_ok and lower_ok and len(G) > 1
    flags = []
    if N < 3:
        flags.append("degenerate: N < 3, threshold does not exceed 1")
    if len(F) == 1:
        flags.append("degenerate: |F| = 1")
    certificate = verify_certificate(power, G)
    if chain and not certificate.passed:
        raise ContractViolation(
            "size conditions hold but the threshold witness fails its certificate")
    return ThresholdReport(
        copies=N,
        epsilon=cfg.epsilon,
        power_size=total,
        witness_size=len(G),
        size_condition_met=size_ok,
        lower_bound_met=lower_ok,
        chain_applies=chain,
        flags=tuple(flags),
        certificate=certificate,
        witness=G,
    )
