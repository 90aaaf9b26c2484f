import math
import random

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from gen import random_distribution, random_order
from frankl_cert import (
    ContractViolation,
    DecompositionVector,
    InputError,
    ResourceGuardError,
    SetDistribution,
    canonicalize,
    decompose,
    elements_of,
    entropy,
    mask_of,
    submodularity_gap,
    uniform_on,
    union_pushforward,
    verify_decomposition,
)
from frankl_cert.entropy_engine import TOLERANCE

CHAIN3 = canonicalize([[], [1], [1, 2]], 2)
CUBE2 = canonicalize([[], [1], [2], [1, 2]], 2)


@st.composite
def distributions(draw, max_n=5):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_distribution(random.Random(seed), max_n)


def hp_entropy(d):
    return float(oracles.entropy_hp([p for _, p in d.mass]))


# -- construction ---------------------------------------------------------

def test_uniform_on():
    d = uniform_on(canonicalize([[], [1]], 1))
    assert d.mass == ((0, 0.5), (1, 0.5))
    assert uniform_on(canonicalize([[1]], 1)).mass == ((1, 1.0),)
    assert entropy(uniform_on(CHAIN3)) == pytest.approx(math.log2(3), abs=1e-12)
    with pytest.raises(InputError):
        uniform_on(canonicalize([], 2))


def test_distribution_validation():
    with pytest.raises(InputError):
        SetDistribution.from_mapping(2, {0: 0.5, 1: 0.4})
    with pytest.raises(InputError):
        SetDistribution.from_mapping(2, {8: 1.0})
    with pytest.raises(InputError):
        SetDistribution.from_mapping(2, {0: -0.5, 1: 1.5})
    d = SetDistribution.from_mapping(2, {0: 1.0, 3: 0.0})
    assert d.support == [0]


# -- entropy ------------------------------------------------------------

def test_entropy_examples():
    assert entropy(uniform_on(CUBE2)) == 2.0
    assert entropy(uniform_on(canonicalize([[2]], 2))) == 0.0
    d = SetDistribution.from_mapping(2, {0: 0.5, 1: 0.25, 2: 0.25})
    assert entropy(d) == 1.5


@given(distributions())
def test_entropy_bounds_and_oracle(d):
    h = entropy(d)
    assert -1e-12 <= h <= math.log2(len(d.support)) + 1e-12
    assert h == pytest.approx(hp_entropy(d), abs=1e-12)


# -- pushforward ----------------------------------------------------------

def test_pushforward_examples():
    d = union_pushforward(uniform_on(CHAIN3), mask_of([1]))
    assert [m for m, _ in d.mass] == [mask_of([1]), mask_of([1, 2])]
    assert [p for _, p in d.mass] == pytest.approx([2 / 3, 1 / 3], abs=1e-15)
    base = uniform_on(CHAIN3)
    assert union_pushforward(base, 0) == base
    top = union_pushforward(base, 3)
    assert top.mass == ((3, pytest.approx(1.0)),) and entropy(top) == 0.0


@given(distributions(), st.data())
def test_pushforward_matches_oracle_and_never_gains(d, data):
    S = data.draw(st.integers(0, (1 << d.n) - 1))
    pushed = union_pushforward(d, S)
    assert entropy(pushed) <= entropy(d) + 1e-12
    law = oracles.law_of_union({frozenset(elements_of(m)): p for m, p in d.mass}, elements_of(S))
    mine = {frozenset(elements_of(m)): p for m, p in pushed.mass}
    assert mine.keys() == law.keys()
    for k, p in law.items():
        assert mine[k] == pytest.approx(p, abs=1e-15)
    assert len(pushed.support) == len({m | S for m in d.support})


# -- submodularity --------------------------------------------------------

def test_gap_examples():
    d = uniform_on(CUBE2)
    assert submodularity_gap(d, mask_of([1]), 2) == 0.0
    assert submodularity_gap(uniform_on(CHAIN3), 0, 2) == 0.0
    assert submodularity_gap(uniform_on(canonicalize([[1]], 2)), mask_of([1]), 2) == 0.0


def test_gap_rejects_member_element():
    with pytest.raises(InputError):
        submodularity_gap(uniform_on(CUBE2), mask_of([1]), 1)


@given(distributions(), st.data())
def test_gap_nonnegative_and_oracle(d, data):
    e = data.draw(st.integers(1, d.n))
    S = data.draw(st.integers(0, (1 << d.n) - 1)) & ~(1 << (e - 1))
    gap = submodularity_gap(d, S, e)
    assert gap >= -TOLERANCE
    law = {frozenset(elements_of(m)): p for m, p in d.mass}
    H = lambda T: oracles.entropy_hp(list(oracles.law_of_union(law, T).values()))
    Sset = set(elements_of(S))
    ref = (H(Sset) - H(Sset | {e})) - (H(set()) - H({e}))
    assert gap == pytest.approx(float(ref), abs=1e-9)


# -- decomposition --------------------------------------------------------

def test_decompose_examples():
    assert decompose(uniform_on(canonicalize([[], [1]], 1))).x == (1.0,)
    v = decompose(uniform_on(CUBE2), [2, 1])
    assert v.x == (1.0, 1.0) and v.elimination_order == (2, 1)
    assert decompose(uniform_on(canonicalize([[1, 3]], 3))).x == (0.0, 0.0, 0.0)


def test_decompose_default_order():
    assert decompose(uniform_on(CHAIN3)).elimination_order == (2, 1)


def test_decompose_rejects_bad_order():
    with pytest.raises(InputError):
        decompose(uniform_on(CUBE2), [1, 1])


@given(distributions(max_n=6), st.randoms(use_true_random=False))
@settings(max_examples=60, deadline=None)
def test_decomposition_sound_for_any_order(d, rnd):
    v = decompose(d, random_order(rnd, d.n))
    assert all(x >= 0 for x in v.x)
    assert math.fsum(v.x) == pytest.approx(entropy(d), abs=1e-9)
    report = verify_decomposition(d, v)
    assert report.ok and report.worst_slack >= -TOLERANCE
    assert report.checked == 1 << d.n
    # chain identity for the first eliminated element
    e = v.elimination_order[0]
    drop = entropy(d) - entropy(union_pushforward(d, 1 << (e - 1)))
    assert v.share(e) == pytest.approx(max(drop, 0.0), abs=1e-12)


def test_verify_full_set_row_has_zero_slack():
    d = uniform_on(CHAIN3)
    report = verify_decomposition(d, decompose(d))
    assert report.worst_slack == 0.0 and report.worst_set in (0, 3)


def test_verify_detects_mutation():
    d = uniform_on(canonicalize([[], [2]], 2))
    own = decompose(d)
    assert own.x == (0.0, 1.0)
    assert verify_decomposition(d, own).ok
    # all of H sits on element 2; charging it to element 1 breaks S={2}
    misplaced = DecompositionVector(2, (1.0, 0.0), (2, 1), 1.0)
    report = verify_decomposition(d, misplaced)
    assert [m for m, _ in report.violations] == [mask_of([2])]
    inflated = DecompositionVector(2, (1.0, 1.0), (2, 1), 1.0)
    report = verify_decomposition(d, inflated)
    assert report.violations[0][0] == 0
    assert report.violations[0][1] == pytest.approx(-1.0)


def test_verify_sample_mode_is_seeded():
    d = uniform_on(CUBE2)
    v = decompose(d)
    a = verify_decomposition(d, v, "sample", samples=5, seed=3)
    b = verify_decomposition(d, v, "sample", samples=5, seed=3)
    assert a == b and a.mode == "sample" and a.ok
    with pytest.raises(InputError):
        verify_decomposition(d, v, "sample", samples=5)


def test_verify_exhaustive_guard():
    d = SetDistribution.from_mapping(25, {0: 1.0})
    v = decompose(d)
    with pytest.raises(ResourceGuardError):
        verify_decomposition(d, v)
    assert verify_decomposition(d, v, "sample", samples=10, seed=0).ok


def test_verify_ground_mismatch():
    with pytest.raises(InputError):
        verify_decomposition(uniform_on(CUBE2), DecompositionVector(1, (1.0,), (1,), 1.0))


def test_large_negative_share_is_a_bug(monkeypatch):
    import frankl_cert.entropy_engine as mod
    calls = iter([1.0, 2.0])
    monkeypatch.setattr(mod, "_entropy_of", lambda probs: next(calls))
    d = uniform_on(canonicalize([[], [1]], 1))
    with pytest.raises(ContractViolation):
        mod.decompose(d)


def test_small_negative_share_clamps(monkeypatch):
    import frankl_cert.entropy_engine as mod
    calls = iter([1.0, 1.0 + 5e-10])
    monkeypatch.setattr(mod, "_entropy_of", lambda probs: next(calls))
    assert mod.decompose(uniform_on(canonicalize([[], [1]], 1))).x == (0.0,)
