from fractions import Fraction as F

import pytest

from invcorr.errors import BudgetExceeded, DomainError, ScheduleTooShort
from invcorr.generic import (GenericStream, Schedule, bits, check_generic, extend_schedule,
                             m_actual, m_universal, stage_repeats)
from invcorr.measure import bernoulli, empirical, mixture
from invcorr.words import prefix_frequency

MIX = mixture([(F(1, 2), bernoulli(0)), (F(1, 2), bernoulli(1))])


def fallback_length(j, eps_exp):
    # eps = 2^-eps_exp: k = 12 j 2^eps_exp, l = 2^(k+2+eps_exp)
    k = max(j, 12 * j * 2**eps_exp)
    return k * 2 ** (k + 2 + eps_exp)


def test_point_mass_schedule_is_all_ones():
    s = extend_schedule(bernoulli(1), 2)
    assert all(set(str(A)) == {"1"} for A in s.approx)
    assert set(str(s.prefix(s.ends[2]))) == {"1"}


def test_stage_one_repeats_enough():
    s = extend_schedule(bernoulli(F(1, 2)), 1)
    len1, len2 = len(s.approx[0]), len(s.approx[1])
    assert F(len2, s.repeats[0] * len1) < F(1, 2)
    assert F(len2, (s.repeats[0] - 1) * len1) >= F(1, 2)


def test_schedule_budget_exceeded():
    with pytest.raises(BudgetExceeded):
        extend_schedule(bernoulli(F(1, 2)), 1, budget=1)


@pytest.mark.parametrize("m", [bernoulli(F(1, 3)), MIX, empirical("0110")])
def test_stage_inequality_holds_and_is_tight(m):
    s = extend_schedule(m, 3)
    for level in range(1, 4):
        A, nxt, r = len(s.approx[level - 1]), len(s.approx[level]), s.repeats[level - 1]
        lhs = (s.ends[level - 1] + nxt) * 2**level
        assert lhs < r * A
        assert not lhs < (r - 1) * A
        assert s.ends[level] == s.ends[level - 1] + r * A


def test_bits_examples():
    assert bits(bernoulli(1), 5) == "11111"
    s = extend_schedule(MIX, 3)
    omega = bits(MIX, s.ends[3] + 1)
    assert abs(prefix_frequency(omega, "0", s.ends[2]) - F(1, 2)) < F(1, 2)
    assert abs(prefix_frequency(omega, "0", s.ends[3]) - F(1, 2)) < F(1, 4)
    emp = bits(empirical("01"), 7)
    assert abs(prefix_frequency(emp, "01", 6) - F(1, 2)) <= F(1, 2)


def test_bits_are_prefix_consistent_and_reproducible():
    m = empirical("0110")
    long = bits(m, 900)
    for n in (1, 17, 256, 899):
        assert bits(m, n) == long[:n]
    assert bits(m, 900) == long


def test_stream_reads_sequentially():
    st = GenericStream(bernoulli(F(1, 2)))
    got = "".join(str(st.read(n)) for n in (3, 50, 7))
    assert got == str(bits(bernoulli(F(1, 2)), 60))
    assert [next(st) for _ in range(4)] == [int(c) for c in str(bits(bernoulli(F(1, 2)), 64))[60:]]


def test_m_actual_examples():
    s = extend_schedule(bernoulli(F(1, 2)), 3)
    assert m_actual(1, F(1, 2), s) == s.ends[2]
    assert m_actual(3, F(1, 4), s) == s.ends[3]
    with pytest.raises(ScheduleTooShort):
        m_actual(1, F(1, 2), Schedule())


def test_m_universal_matches_hand_recurrence():
    F1, F2 = fallback_length(1, 1), fallback_length(2, 2)
    assert (F1, F2) == (24 * 2**27, 96 * 2**100)
    r1 = F2 * 2 // F1 + 1
    assert r1 == 2**76 + 1
    assert m_universal(1, 1) == r1 * F1
    with pytest.raises(DomainError):
        m_universal(1, 2)


def test_m_universal_dominates_adaptive_schedules():
    for m in (bernoulli(F(1, 2)), MIX, empirical("0110")):
        s = extend_schedule(m, 3)
        for j in (1, 2):
            for eps in (F(1, 2), F(1, 4)):
                assert m_actual(j, eps, s) <= m_universal(j, eps)


def test_stage_repeats_minimal():
    assert stage_repeats(0, 4, 16, 1) == 9
    assert stage_repeats(36, 16, 48, 2) == 22


@pytest.mark.parametrize("m, j, eps", [(bernoulli(1), 1, F(1, 2)), (MIX, 2, F(1, 4)),
                                       (empirical("0110"), 2, F(1, 4))])
def test_check_generic_examples(m, j, eps):
    rep = check_generic(m, j, eps)
    assert rep.passed
    if m.query("1") == 1:
        assert rep.residuals["1"] == 0
