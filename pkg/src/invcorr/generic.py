"""A computable generic point for an oracle-represented measure.

The point is ``omega = tau_1 tau_2 tau_3 ...`` where ``tau_l`` is ``r_l``
copies of a certified (l, 2^-l)-good word ``A_l``. ``r_l`` is the least count
with ``(m_{l-1} + len(A_{l+1})) * 2^l < r_l * len(A_l)``, where ``m_l`` is the
length of ``tau_1 ... tau_l``. Because ``r_l`` looks one word ahead, the
next word is always built before a stage is closed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DomainError, GenericityFailure, ScheduleTooShort
from .inverse import DEFAULT_BUDGET, build, fallback_params
from .measure import MeasureOracle, as_rat
from .words import Pattern, Word, patterns_upto, prefix_frequencies


@dataclass
class Schedule:
    """Stages built so far. ``ends[0] == 0``; ``ends[l]`` is m_l."""

    approx: list[Word] = field(default_factory=list)
    repeats: list[int] = field(default_factory=list)
    ends: list[int] = field(default_factory=lambda: [0])

    @property
    def stages(self) -> int:
        return len(self.repeats)

    @property
    def known_length(self) -> int:
        """Bits fixed so far: closed stages plus one copy of the next word."""
        nxt = len(self.approx[self.stages]) if len(self.approx) > self.stages else 0
        return self.ends[-1] + nxt

    def prefix(self, n: int) -> Word:
        if n > self.known_length:
            raise ScheduleTooShort(f"only {self.known_length} bits are fixed, asked for {n}")
        chunks, have = [], 0
        for A, r in zip(self.approx, self.repeats):
            if have >= n:
                break
            need = min(r, -(-(n - have) // len(A)))
            chunks.append(np.tile(A.bits, need))
            have += need * len(A)
        if have < n:
            chunks.append(self.approx[self.stages].bits)
        return Word(np.concatenate(chunks)[:n])


def stage_repeats(m_prev: int, len_cur: int, len_next: int, level: int) -> int:
    """Least r with (m_prev + len_next) * 2^level < r * len_cur."""
    return ((m_prev + len_next) << level) // len_cur + 1


def extend_schedule(m: MeasureOracle, L: int, budget: int = DEFAULT_BUDGET,
                    schedule: Schedule | None = None) -> Schedule:
    if L < 1:
        raise DomainError("L must be >= 1")
    s = schedule if schedule is not None else Schedule()
    while s.stages < L:
        level = s.stages + 1
        while len(s.approx) < level + 1:
            j = len(s.approx) + 1
            s.approx.append(build(m, j, Fraction(1, 1 << j), budget).word)
        A, nxt = s.approx[level - 1], s.approx[level]
        r = stage_repeats(s.ends[-1], len(A), len(nxt), level)
        s.repeats.append(r)
        s.ends.append(s.ends[-1] + r * len(A))
    return s


class GenericStream:
    """Lazily extended bit stream of the generic point; one reader per stream."""

    def __init__(self, m: MeasureOracle, budget: int = DEFAULT_BUDGET):
        self.oracle = m
        self.budget = budget
        self.schedule = Schedule()
        self.cursor = 0

    def ensure(self, n: int) -> None:
        while self.schedule.known_length < n:
            extend_schedule(self.oracle, self.schedule.stages + 1, self.budget, self.schedule)

    def prefix(self, n: int) -> Word:
        self.ensure(n)
        return self.schedule.prefix(n)

    def read(self, n: int) -> Word:
        """Next ``n`` bits after the cursor."""
        self.ensure(self.cursor + n)
        out = self.schedule.prefix(self.cursor + n)[self.cursor:]
        self.cursor += n
        return out

    def __iter__(self):
        return self

    def __next__(self) -> int:
        return self.read(1)[0]


def bits(m: MeasureOracle, n: int, budget: int = DEFAULT_BUDGET) -> Word:
    if n < 1:
        raise DomainError("n must be >= 1")
    return GenericStream(m, budget).prefix(n)


def ceil_log2(x: Fraction) -> int:
    """Least t >= 0 with 2^t >= x (for x >= 1)."""
    t = 0
    while (1 << t) < x:
        t += 1
    return t


def target_stage(j: int, eps) -> int:
    eps = as_rat(eps)
    if j < 1:
        raise DomainError("j must be >= 1")
    if not 0 < eps <= 1:
        raise DomainError(f"eps={eps} must lie in (0, 1]")
    return max(j, ceil_log2(1 / eps) + 1)


def m_actual(j: int, eps, schedule: Schedule) -> int:
    """Prefix length from which every frequency of length <= j is within eps."""
    L = target_stage(j, eps)
    if schedule.stages < L:
        raise ScheduleTooShort(f"schedule has {schedule.stages} stages, need {L}")
    return schedule.ends[L]


def m_universal(j: int, eps) -> int:
    """The same bound computed from worst-case word lengths; valid for every measure."""
    L = target_stage(j, eps)
    lengths = [fallback_params(l, Fraction(1, 1 << l)).length for l in range(1, L + 2)]
    end = 0
    for level in range(1, L + 1):
        r = stage_repeats(end, lengths[level - 1], lengths[level], level)
        end += r * lengths[level - 1]
    return end


@dataclass
class GenericReport:
    j: int
    eps: Fraction
    n: int
    m_actual: int
    m_universal: int
    checked: list[int]
    residuals: dict[Pattern, Fraction]
    slack: Fraction

    @property
    def max_residual(self) -> Fraction:
        return max(self.residuals.values())

    @property
    def passed(self) -> bool:
        return self.max_residual + self.slack < self.eps


def check_generic(m: MeasureOracle, j: int, eps, budget: int = DEFAULT_BUDGET,
                  *, raise_on_fail: bool = True) -> GenericReport:
    """Scan the emitted prefix at n = m_actual (and at the last fixed start) against the oracle."""
    eps = as_rat(eps)
    L = target_stage(j, eps)
    stream = GenericStream(m, budget)
    extend_schedule(m, L, budget, stream.schedule)
    n = m_actual(j, eps, stream.schedule)
    last = stream.schedule.known_length - (j - 1)
    checked = [n] if last <= n else [n, last]
    omega = stream.prefix(checked[-1] + j - 1)
    targets = {s: m.query(s, eps / 4) for s in patterns_upto(j)}
    residuals = {s: Fraction(0) for s in targets}
    for point in checked:
        freqs = prefix_frequencies(omega, j, point)
        for s in targets:
            residuals[s] = max(residuals[s], abs(freqs[s] - targets[s]))
    rep = GenericReport(j=j, eps=eps, n=n, m_actual=n, m_universal=m_universal(j, eps),
                        checked=checked, residuals=residuals,
                        slack=Fraction(0) if m.exact else eps / 4)
    if raise_on_fail and not rep.passed:
        worst = max(residuals, key=residuals.get)
        raise GenericityFailure(f"frequency of {worst!r} off by {residuals[worst]}", report=rep)
    return rep
