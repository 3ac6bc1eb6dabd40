from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from invcorr.errors import (BudgetExceeded, DegenerateOracle, DomainError, LengthTooSmall,
                            VerifyFailure)
from invcorr.inverse import (Params, approx_provider, block_counts, build, fallback_params,
                             ledger_bound, measure_from_approx, pad_to, prefix_rounding, verify)
from invcorr.measure import FunctionOracle, Truncated, bernoulli, empirical, markov, mixture
from invcorr.words import Word, patterns_upto

from conftest import brute_count

MIX = mixture([(F(1, 2), bernoulli(0)), (F(1, 2), bernoulli(1))])


def brute_error(word: str, m, j: int) -> F:
    return max(abs(m.query(s) - F(brute_count(word, s), len(word))) for s in patterns_upto(j))


def test_fallback_params_examples():
    assert fallback_params(1, 1) == Params(1, F(1), 12, 2**14, F(1, 2**15))
    assert fallback_params(1, F(1, 2)) == Params(1, F(1, 2), 24, 2**27, F(1, 2**28))
    with pytest.raises(DomainError):
        fallback_params(3, 0)
    with pytest.raises(DomainError):
        fallback_params(3, F(3, 2))


@pytest.mark.parametrize("j", [1, 2, 3, 5])
@pytest.mark.parametrize("eps", [F(1), F(1, 2), F(1, 3), F(1, 8), F(2, 7)])
def test_ledger_below_eps_at_fallback(j, eps):
    p = fallback_params(j, eps)
    assert p.k >= j
    assert ledger_bound(j, p.k, p.l, p.delta) < eps


def test_block_counts_examples():
    bc = block_counts(bernoulli(F(1, 2)), 1, 4, F(1, 100))
    assert bc.b == [0, 2, 4] and bc.a == {"0": 2, "1": 2}
    assert block_counts(bernoulli(1), 1, 4, F(1, 100)).a == {"0": 0, "1": 4}
    bc = block_counts(empirical("01"), 2, 4, F(1, 100))
    assert bc.a == {"00": 0, "01": 2, "10": 2, "11": 0}


def test_block_counts_renormalize_and_round_half_up():
    # raw values sum to 1/2; renormalized to (1/2, 1/2) so b_1 = round(5/2) = 3
    m = FunctionOracle(lambda s, d: F(1, 4))
    bc = block_counts(m, 1, 5, F(1, 100))
    assert bc.b == [0, 3, 5] and sum(bc.a.values()) == 5
    assert prefix_rounding([F(1, 3)] * 3, 7) == [0, 2, 5, 7]
    with pytest.raises(DegenerateOracle):
        block_counts(FunctionOracle(lambda s, d: F(0)), 2, 4, F(1, 100))


@settings(max_examples=50)
@given(st.lists(st.fractions(0, 1, max_denominator=20), min_size=2, max_size=16), st.integers(1, 200))
def test_prefix_rounding_counts_are_close(ws, l):
    total = sum(ws)
    if total == 0:
        return
    ws = [w / total for w in ws]
    b = prefix_rounding(ws, l)
    a = [y - x for x, y in zip(b, b[1:])]
    assert b[0] == 0 and b[-1] == l and min(a) >= 0
    assert all(abs(ai - l * w) <= 1 for ai, w in zip(a, ws))


def test_build_exactness_showcase():
    r = build(bernoulli(F(1, 2)), 2, F(1, 8))
    assert r.word == "0011" and (r.params.k, r.params.l) == (1, 4)
    assert r.certified_error == 0 == brute_error("0011", bernoulli(F(1, 2)), 2)


def test_build_mixture_gives_two_runs():
    r = build(MIX, 2, F(1, 8))
    w = str(r.word)
    assert w == "0" * w.count("0") + "1" * w.count("1")
    n = len(w)
    assert abs(F(brute_count(w, "00"), n) - F(1, 2)) < F(1, 8)
    assert abs(F(brute_count(w, "11"), n) - F(1, 2)) < F(1, 8)
    assert F(brute_count(w, "01"), n) < F(1, 8)


def test_build_budget_exceeded():
    with pytest.raises(BudgetExceeded) as info:
        build(bernoulli(F(1, 2)), 2, F(1, 8), budget=2)
    assert info.value.best_error is not None and info.value.best_error >= F(1, 8)


def test_build_is_deterministic_and_worker_independent():
    m = markov(F(1, 3), F(2, 3))
    a = build(m, 3, F(1, 16))
    b = build(m, 3, F(1, 16), workers=4)
    assert a.word == b.word and a.certified_error == b.certified_error


def test_build_with_inexact_oracle_adds_delta():
    inner = markov(F(1, 3), F(2, 3))
    r = build(Truncated(inner), 2, F(1, 8))
    assert r.certified_error == max(r.residuals.values()) + r.params.delta
    assert r.certified_error < F(1, 8)
    assert brute_error(str(r.word), inner, 2) < F(1, 8)


@settings(max_examples=15, deadline=None)
@given(st.fractions(0, 1, max_denominator=7), st.fractions(0, 1, max_denominator=7),
       st.integers(1, 3), st.sampled_from([F(1, 2), F(1, 4), F(1, 8)]))
def test_build_soundness_on_markov_family(p01, p11, j, eps):
    if p01 + 1 - p11 == 0:
        return
    m = markov(p01, p11)
    r = build(m, j, eps)
    assert r.certified_error < eps
    assert brute_error(str(r.word), m, j) == r.certified_error
    fb = fallback_params(j, eps)
    assert len(r.word) == r.params.k * r.params.l <= fb.k * fb.l


def test_verify_examples():
    rep = verify(Word("0011"), bernoulli(F(1, 2)), 2, F(1, 8), F(1, 2**20))
    assert rep.passed and rep.max_residual == 0
    with pytest.raises(VerifyFailure) as info:
        verify(Word("0000"), bernoulli(F(1, 2)), 1, F(1, 8), F(1, 2**20))
    assert info.value.report.worst in ("0", "1") and info.value.report.max_residual == F(1, 2)
    assert verify(Word("01"), empirical("01"), 2, F(1, 100), F(1, 2**20)).max_residual == 0


def test_pad_examples():
    m = bernoulli(F(1, 2))
    r = build(m, 2, F(1, 8))
    padded = pad_to(r, 8, m)
    assert padded.word == "00110011" and padded.certified_error == 0
    with pytest.raises(LengthTooSmall):
        pad_to(r, 3, m)


def test_pad_non_multiple_needs_minimum_length():
    m = empirical("01")
    r = build(m, 2, F(1, 2))
    assert r.word == "01"
    # 7 < len(A) * ceil(4/eps) for every eps <= 1
    with pytest.raises(LengthTooSmall):
        pad_to(r, 7, m, eps=F(1))
    # the repeated-and-truncated word itself: D(01) = 3/7, D(00) = 1/7
    assert abs(F(brute_count("0101010", "01"), 7) - F(1, 2)) == F(1, 14)
    assert brute_error("0101010", m, 2) == F(1, 7)
    long = pad_to(r, 2 * 4 + 1, m, eps=F(1))
    assert len(long.word) == 9 and long.certified_error < 1


def test_pad_to_general_length():
    m = markov(F(1, 3), F(2, 3))
    r = build(m, 2, F(1, 16))
    n = len(r.word) * 32 + 3
    p = pad_to(r, n, m)
    assert len(p.word) == n and p.certified_error < F(1, 8)
    assert brute_error(str(p.word), m, 2) == p.certified_error


def test_measure_from_approx_examples():
    prov = approx_provider(bernoulli(F(1, 3)))
    v = measure_from_approx(prov, "1", F(1, 8))
    assert F(1, 3) - F(1, 8) < v < F(1, 3) + F(1, 8)
    prov = approx_provider(empirical("0110"))
    v = measure_from_approx(prov, "11", F(1, 16))
    assert F(1, 4) - F(1, 16) < v < F(1, 4) + F(1, 16)
    assert measure_from_approx(prov, "", F(1, 3)) == 1
