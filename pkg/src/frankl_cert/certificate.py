"""Entropy certificates for "some element lies in at least half the sets".

A witness G (|G| > 1) certifies F when

    sum over S in F of log2 |G(S)|  <=  |F| * log2 |G| / 2,

where G(S) is G shifted by S.  Exponentiating both sides turns this into the
integer comparison (prod |G(S)|)^2 <= |G|^|F|, which decides the verdict;
the bit-valued sides are reported alongside for reading only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .entropy_engine import TOLERANCE, DecompositionVector, decompose, uniform_on
from .errors import ContractViolation, GroundMismatchError, InputError, ResourceGuardError
from .family import Family, frequencies, is_union_closed, shift_sizes

DEFAULT_FAMILY_CAP = 10**5

PASS = "pass"
FAIL = "fail"

WITNESS_TOO_SMALL = "witness too small"
INEQUALITY_VIOLATED = "inequality violated"
NOT_A_SUBFAMILY = "not a subfamily"
NOT_UNION_CLOSED = "family not union-closed"


@dataclass(frozen=True)
class CertificateReport:
    verdict: str
    family_size: int
    witness_size: int
    lhs_bits: float | None = None
    rhs_bits: float | None = None
    margin_bits: float | None = None
    exact_lhs: int | None = None
    exact_rhs: int | None = None
    reasons: tuple[str, ...] = ()
    predicates: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_json(self) -> dict:
        out = {
            "verdict": self.verdict,
            "family_size": self.family_size,
            "witness_size": self.witness_size,
            "lhs_bits": self.lhs_bits,
            "rhs_bits": self.rhs_bits,
            "margin_bits": self.margin_bits,
            # decimal strings: these outgrow any fixed-width integer
            "exact_lhs": None if self.exact_lhs is None else decimal_string(self.exact_lhs),
            "exact_rhs": None if self.exact_rhs is None else decimal_string(self.exact_rhs),
            "reasons": list(self.reasons),
        }
        if self.predicates:
            out["predicates"] = dict(self.predicates)
        return out


def decimal_string(value: int) -> str:
    """``str(value)`` without the interpreter's digit limit for huge integers."""
    if value < 0:
        return "-" + decimal_string(-value)
    if value.bit_length() < 12000:
        return str(value)
    half = int(value.bit_length() * 0.30103) // 2
    high, low = divmod(value, 10**half)
    return decimal_string(high) + decimal_string(low).zfill(half)


def _check_pair(F: Family, G: Family, cap: int) -> None:
    if F.n != G.n:
        raise GroundMismatchError(
            f"family is over [{F.n}] but witness is over [{G.n}]")
    if len(F) == 0:
        raise InputError("certificate check needs a nonempty family")
    if len(F) > cap:
        raise ResourceGuardError(f"family has {len(F)} sets, exceeding cap {cap}")


def verify_certificate(F: Family, G: Family, cap: int = DEFAULT_FAMILY_CAP) -> CertificateReport:
    """Decide whether ``G`` certifies ``F``; the integer comparison is authoritative."""
    _check_pair(F, G, cap)
    if len(G) <= 1:
        return CertificateReport(FAIL, len(F), len(G), reasons=(WITNESS_TOO_SMALL,))
    return _evaluate(F, G)


def _evaluate(F: Family, G: Family) -> CertificateReport:
    sizes = shift_sizes(G, F.sets)
    lhs_bits = math.fsum(math.log2(s) for s in sizes)
    rhs_bits = len(F) * math.log2(len(G)) / 2
    exact_lhs = math.prod(sizes) ** 2
    exact_rhs = len(G) ** len(F)
    ok = exact_lhs <= exact_rhs
    return CertificateReport(
        verdict=PASS if ok else FAIL,
        family_size=len(F),
        witness_size=len(G),
        lhs_bits=lhs_bits,
        rhs_bits=rhs_bits,
        margin_bits=rhs_bits - lhs_bits,
        exact_lhs=exact_lhs,
        exact_rhs=exact_rhs,
        reasons=() if ok else (INEQUALITY_VIOLATED,),
    )


def certificate_from_abundant(F: Family, i: int) -> Family:
    """The two-set witness {∅, {i}} for an element i in at least half of F."""
    if not 1 <= i <= F.n:
        raise InputError(f"element {i} out of range 1..{F.n}")
    if len(F) == 0:
        raise InputError("empty family has no abundant element")
    w = frequencies(F).w(i)
    if 2 * w > len(F):
        raise InputError(f"element {i} is missing from {w} of {len(F)} sets; not abundant")
    return Family(F.n, (0, 1 << (i - 1)))


@dataclass(frozen=True)
class ExtractionResult:
    element: int
    absent_count: int
    decomposition: DecompositionVector

    def to_json(self) -> dict:
        return {
            "element": self.element,
            "absent_count": self.absent_count,
            "decomposition": self.decomposition.to_json(),
        }


def extract_abundant(F: Family, G: Family, positivity: float = TOLERANCE) -> ExtractionResult:
    """Recover an abundant element of F from a passing witness G.

    Decomposes the entropy of a uniform draw from G; the shares are weights
    whose weighted mean of w_F(i) is at most |F|/2, so the positive-share
    element with the fewest absences is abundant.  Ties go to the smallest
    element.
    """
    report = verify_certificate(F, G)
    if not report.passed:
        raise InputError(f"witness does not certify the family: {', '.join(report.reasons)}")
    vec = decompose(uniform_on(G))
    table = frequencies(F)
    candidates = [i for i in range(1, F.n + 1) if vec.share(i) > positivity]
    if not candidates:
        raise ContractViolation("no element carries positive entropy share for |G| > 1")
    best = min(candidates, key=lambda i: (table.w(i), i))
    if 2 * table.w(best) > len(F):
        raise ContractViolation(
            f"extracted element {best} is not abundant (w={table.w(best)}, |F|={len(F)})")
    return ExtractionResult(best, table.w(best), vec)


def corollary_check(F: Family, G: Family, cap: int = DEFAULT_FAMILY_CAP) -> CertificateReport:
    """Certificate check restricted to union-closed F and witnesses inside F."""
    _check_pair(F, G, cap)
    subfamily = G.issubfamily(F)
    closed = is_union_closed(F)
    base = verify_certificate(F, G, cap)
    reasons = list(base.reasons)
    if not subfamily:
        reasons.append(NOT_A_SUBFAMILY)
    if not closed:
        reasons.append(NOT_UNION_CLOSED)
    ok = base.passed and subfamily and closed
    return CertificateReport(
        verdict=PASS if ok else FAIL,
        family_size=base.family_size,
        witness_size=base.witness_size,
        lhs_bits=base.lhs_bits,
        rhs_bits=base.rhs_bits,
        margin_bits=base.margin_bits,
        exact_lhs=base.exact_lhs,
        exact_rhs=base.exact_rhs,
        reasons=tuple(reasons),
        predicates={"subfamily": subfamily, "union_closed": closed},
    )
