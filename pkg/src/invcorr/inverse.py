"""Finite words whose cyclic pattern densities approximate a shift-invariant measure.

The construction: pick a block length ``k`` and a block total ``l``, round the
measures of all length-``k`` cylinders to multiples of ``1/l`` and concatenate
that many copies of each block in lexicographic order. The resulting word of
length ``k*l`` is checked directly against the oracle, so any (k, l) that
passes carries an exact certificate.

Error ledger for fixed (j, k, l, delta), all terms exact rationals::

    cyclic-vs-measure + seams    3(j-1)/k
    prefix rounding              2^k / l
    oracle precision             2^(k+1) * delta

:func:`fallback_params` picks values making the total strictly below eps, so
the adaptive search in :func:`build` always terminates by then.
"""

from __future__ import annotations

import functools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .errors import BudgetExceeded, DegenerateOracle, DomainError, LengthTooSmall, VerifyFailure
from .measure import MeasureOracle, as_rat
from .words import Pattern, Word, all_patterns, concat, density, density_table, patterns_upto, repeat_to

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 1 << 20


@dataclass(frozen=True)
class Params:
    j: int
    eps: Fraction
    k: int
    l: int
    delta: Fraction

    @property
    def length(self) -> int:
        return self.k * self.l


@dataclass
class BlockCounts:
    order: list[Pattern]
    a: dict[Pattern, int]
    b: list[int]

    @property
    def total(self) -> int:
        return self.b[-1]

    def nonzero(self) -> list[tuple[Pattern, int]]:
        return [(t, self.a[t]) for t in self.order if self.a[t]]


@dataclass
class VerifyReport:
    j: int
    eps: Fraction
    delta: Fraction
    residuals: dict[Pattern, Fraction]
    oracle_term: Fraction

    @property
    def max_residual(self) -> Fraction:
        return max(self.residuals.values())

    @property
    def worst(self) -> Pattern:
        top = self.max_residual
        return next(s for s, e in self.residuals.items() if e == top)

    @property
    def certified_error(self) -> Fraction:
        return self.max_residual + self.oracle_term

    @property
    def passed(self) -> bool:
        return self.certified_error < self.eps


@dataclass
class ApproxResult:
    word: Word
    params: Params
    certified_error: Fraction
    theoretical_bound: Fraction
    residuals: dict[Pattern, Fraction] = field(repr=False)
    counts: BlockCounts | None = field(default=None, repr=False)

    @property
    def A(self) -> Word:
        return self.word


def _check_j_eps(j: int, eps: Fraction) -> Fraction:
    eps = as_rat(eps)
    if j < 1:
        raise DomainError("j must be >= 1")
    if not 0 < eps <= 1:
        raise DomainError(f"eps={eps} must lie in (0, 1]")
    return eps


def ceil_div(a: Fraction | int, b: Fraction | int = 1) -> int:
    q = Fraction(a) / Fraction(b)
    return -((-q.numerator) // q.denominator)


def precision_for(k: int, eps: Fraction) -> Fraction:
    """Oracle query precision used for block length ``k``."""
    return eps / (1 << (k + 3))


def fallback_params(j: int, eps) -> Params:
    """Parameters for which the error ledger is provably below ``eps``.

    Each of the three ledger groups is at most eps/4 with these choices; the
    resulting sizes are usually far too large to build.
    """
    eps = _check_j_eps(j, eps)
    k = max(j, ceil_div(12 * j, eps))
    l = ceil_div(Fraction(1 << (k + 2)) / eps)
    return Params(j=j, eps=eps, k=k, l=l, delta=precision_for(k, eps))


def ledger_bound(j: int, k: int, l: int, delta: Fraction) -> Fraction:
    return Fraction(3 * (j - 1), k) + Fraction(1 << k, l) + (1 << (k + 1)) * delta


def query_all(m: MeasureOracle, patterns: list[Pattern], delta: Fraction, workers: int = 1) -> list[Fraction]:
    if workers > 1 and len(patterns) > 64:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda s: m.query(s, delta), patterns, chunksize=64))
    return [m.query(s, delta) for s in patterns]


def renormalized_weights(values: list[Fraction]) -> list[Fraction]:
    """Clamp to [0, 1] and rescale so the weights sum to exactly 1."""
    clamped = [min(max(v, Fraction(0)), Fraction(1)) for v in values]
    total = sum(clamped, Fraction(0))
    if total == 0:
        raise DegenerateOracle("all block weights are zero")
    if total == 1:
        return clamped
    return [v / total for v in clamped]


def round_half_up(x: Fraction) -> int:
    return (2 * x.numerator + x.denominator) // (2 * x.denominator)


def prefix_rounding(weights: list[Fraction], l: int) -> list[int]:
    """``b_i`` = nearest integer to ``l`` times the i-th prefix sum; b_0 = 0, b_last = l."""
    b = [0]
    acc = Fraction(0)
    for w in weights:
        acc += w
        b.append(round_half_up(l * acc))
    return b


def block_counts(m: MeasureOracle, k: int, l: int, delta, workers: int = 1) -> BlockCounts:
    delta = as_rat(delta)
    if k < 1 or l < 1:
        raise DomainError("k and l must be >= 1")
    if delta <= 0:
        raise DomainError("delta must be positive")
    order = all_patterns(k)
    weights = renormalized_weights(query_all(m, order, delta, workers))
    return _counts_from_weights(order, weights, l)


def _counts_from_weights(order: list[Pattern], weights: list[Fraction], l: int) -> BlockCounts:
    b = prefix_rounding(weights, l)
    a = {tau: b[i + 1] - b[i] for i, tau in enumerate(order)}
    return BlockCounts(order=order, a=a, b=b)


def assemble(counts: BlockCounts) -> Word:
    return concat((tau, n) for tau, n in counts.nonzero())


def _residuals(A: Word, targets: dict[Pattern, Fraction], j: int) -> dict[Pattern, Fraction]:
    dens = density_table(A, j)
    return {s: abs(targets[s] - dens[s]) for s in targets}


def verify(A: Word, m: MeasureOracle, j: int, eps, delta, workers: int = 1,
           *, raise_on_fail: bool = True) -> VerifyReport:
    """Certify ``|mu[sigma] - D_A(sigma)| < eps`` for all patterns of length <= j.

    The oracle precision ``delta`` is added to the worst residual unless the
    oracle is exact.
    """
    eps, delta = as_rat(eps), as_rat(delta)
    if len(A) < 1:
        raise DomainError("word must be nonempty")
    if not 0 < delta < eps:
        raise DomainError("need 0 < delta < eps")
    pats = patterns_upto(j)
    targets = dict(zip(pats, query_all(m, pats, delta, workers)))
    rep = VerifyReport(j=j, eps=eps, delta=delta, residuals=_residuals(A, targets, j),
                       oracle_term=Fraction(0) if m.exact else delta)
    if raise_on_fail and not rep.passed:
        raise VerifyFailure(
            f"pattern {rep.worst!r} off by {rep.max_residual} (certified {rep.certified_error} >= {eps})",
            report=rep,
        )
    return rep


def _l_candidates(cap: int) -> list[int]:
    if cap < 1:
        return []
    out, l = [], 2
    while l < cap:
        out.append(l)
        l *= 2
    out.append(cap)
    return out


def build(m: MeasureOracle, j: int, eps, budget: int = DEFAULT_BUDGET, workers: int = 1) -> ApproxResult:
    """Adaptive search for a certified (j, eps)-good word of length <= budget.

    Block length k runs upward from 1 and, for each k, the block total l
    doubles from 2 up to min(budget // k, ceil(2^(k+2)/eps)), the cap itself
    tried last. The first word whose certified error is below eps is returned.
    """
    eps = _check_j_eps(j, eps)
    fb = fallback_params(j, eps)
    pats = patterns_upto(j)
    best: Fraction | None = None
    targets: dict[Pattern, Fraction] | None = None
    for k in range(1, fb.k + 1):
        if k > budget or (1 << k) > budget:
            break
        cap = min(budget // k, ceil_div(Fraction(1 << (k + 2)) / eps))
        delta = precision_for(k, eps)
        if targets is None or not m.exact:
            targets = dict(zip(pats, query_all(m, pats, delta, workers)))
        order = all_patterns(k)
        weights = renormalized_weights(query_all(m, order, delta, workers))
        oracle_term = Fraction(0) if m.exact else delta
        seen: set[tuple[int, ...]] = set()
        for l in _l_candidates(cap):
            counts = _counts_from_weights(order, weights, l)
            key = tuple(counts.b)
            if key in seen:
                continue
            seen.add(key)
            A = assemble(counts)
            res = _residuals(A, targets, j)
            cert = max(res.values()) + oracle_term
            if best is None or cert < best:
                best = cert
            if cert < eps:
                log.debug("build j=%d eps=%s: k=%d l=%d error=%s", j, eps, k, l, cert)
                return ApproxResult(
                    word=A,
                    params=Params(j=j, eps=eps, k=k, l=l, delta=delta),
                    certified_error=cert,
                    theoretical_bound=ledger_bound(j, k, l, delta),
                    residuals=res,
                    counts=counts,
                )
    raise BudgetExceeded(
        f"no ({j}, {eps})-good word within budget {budget} (best certified error {best})",
        best_error=best,
        details={"fallback_k": fb.k, "fallback_l": fb.l},
    )


def pad_to(r: ApproxResult, n: int, m: MeasureOracle, eps=None, workers: int = 1) -> ApproxResult:
    """Stretch a result to length ``n`` by repetition and truncation.

    ``r`` should have been built at tolerance eps/2; ``eps`` defaults to twice
    the tolerance ``r`` was built at (capped at 1). Lengths that are a multiple
    of ``len(r.word)`` keep every density unchanged; other lengths must be at
    least ``len(r.word) * ceil(4/eps)``.
    """
    eps = as_rat(eps) if eps is not None else min(2 * r.params.eps, Fraction(1))
    L = len(r.word)
    m_pad = L * ceil_div(4 / eps)
    if n < 1 or (n % L and n < m_pad):
        raise LengthTooSmall(f"length {n} below minimum padded length {m_pad}")
    A = repeat_to(r.word, n)
    rep = verify(A, m, r.params.j, eps, r.params.delta, workers)
    return ApproxResult(
        word=A,
        params=Params(j=r.params.j, eps=eps, k=r.params.k, l=r.params.l, delta=r.params.delta),
        certified_error=rep.certified_error,
        theoretical_bound=r.theoretical_bound + Fraction(L + r.params.j, n),
        residuals=rep.residuals,
    )


def approx_provider(m: MeasureOracle, budget: int = DEFAULT_BUDGET) -> Callable[[int, Fraction], Word]:
    """A memoized ``(j, eps) -> Word`` backed by :func:`build`."""

    @functools.lru_cache(maxsize=None)
    def provider(j: int, eps: Fraction) -> Word:
        return build(m, j, eps, budget).word

    return provider


def measure_from_approx(provider: Callable[[int, Fraction], Word], sigma: Pattern, eps) -> Fraction:
    """Recover the measure of ``[sigma]`` to within eps from a supply of good approximations."""
    eps = as_rat(eps)
    if eps <= 0:
        raise DomainError("eps must be positive")
    if not sigma:
        return Fraction(1)
    return density(provider(len(sigma), eps), sigma)
