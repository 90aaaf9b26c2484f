"""Entropy certificates for elements that lie in at least half the sets of a family."""

from .certificate import (
    CertificateReport,
    ExtractionResult,
    certificate_from_abundant,
    corollary_check,
    extract_abundant,
    verify_certificate,
)
from .entropy_engine import (
    DecompositionCheck,
    DecompositionVector,
    SetDistribution,
    decompose,
    entropy,
    submodularity_gap,
    uniform_on,
    union_pushforward,
    verify_decomposition,
)
from .errors import ContractViolation, GroundMismatchError, InputError, ResourceGuardError
from .family import (
    Family,
    FrequencyTable,
    PowerFamilyHandle,
    abundant_elements,
    canonicalize,
    elements_of,
    frequencies,
    is_union_closed,
    mask_of,
    power_shift_size,
    product_power,
    shift,
    union_closure,
)
from .search import (
    SearchConfig,
    SearchResult,
    ThresholdConfig,
    ThresholdReport,
    exhaustive_search,
    greedy_search,
    threshold_power_witness,
)

__version__ = "0.1.0"
