"""Shift-invariant measures on Cantor space, represented as query oracles.

An oracle answers ``query(sigma, delta)`` with a rational within ``delta`` of
the measure of the cylinder ``[sigma]``. Every built-in oracle is exact: it
ignores ``delta`` and sets ``exact = True``, which lets downstream
certificates drop the oracle-precision term.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import AuditFailure, DomainError, NonStationary, NoUniqueStationary, WeightError
from .words import Pattern, Word, check_pattern, count, pattern_counts, patterns_upto

ONE = Fraction(1)
ZERO = Fraction(0)


def as_rat(x) -> Fraction:
    if isinstance(x, float):
        raise DomainError("floats are not accepted; pass an exact rational")
    return Fraction(x)


class MeasureOracle:
    """Base class. Subclasses implement :meth:`_value` (exact) or override :meth:`query`."""

    exact = True

    def query(self, sigma: Pattern, delta: Fraction | None = None) -> Fraction:
        check_pattern(sigma)
        if not sigma:
            return ONE
        return self._value(sigma)

    def _value(self, sigma: Pattern) -> Fraction:
        raise NotImplementedError

    def __call__(self, sigma: Pattern, delta: Fraction | None = None) -> Fraction:
        return self.query(sigma, delta)

    def describe(self) -> str:
        return type(self).__name__


class Bernoulli(MeasureOracle):
    def __init__(self, p):
        p = as_rat(p)
        if not 0 <= p <= 1:
            raise DomainError(f"bernoulli parameter {p} outside [0, 1]")
        self.p = p

    def _value(self, sigma):
        ones = sigma.count("1")
        return self.p ** ones * (1 - self.p) ** (len(sigma) - ones)

    def describe(self):
        return f"(bernoulli {self.p})"


class Markov(MeasureOracle):
    """Stationary two-state chain; ``p01`` = P(0 -> 1), ``p11`` = P(1 -> 1)."""

    def __init__(self, p01, p11, pi1=None):
        p01, p11 = as_rat(p01), as_rat(p11)
        for v in (p01, p11):
            if not 0 <= v <= 1:
                raise DomainError(f"transition probability {v} outside [0, 1]")
        self.p01, self.p11 = p01, p11
        p10 = 1 - p11
        self.explicit_pi = pi1 is not None
        if pi1 is None:
            # pi P = pi with pi0 + pi1 = 1 reduces to pi0*p01 = pi1*p10
            if p01 + p10 == 0:
                raise NoUniqueStationary("chain is the identity: every distribution is stationary")
            pi1 = p01 / (p01 + p10)
        else:
            pi1 = as_rat(pi1)
            if not 0 <= pi1 <= 1:
                raise DomainError(f"stationary weight {pi1} outside [0, 1]")
            if (1 - pi1) * p01 != pi1 * p10:
                raise NonStationary(f"pi1={pi1} is not stationary for p01={p01}, p11={p11}")
        self.pi1 = pi1
        self._trans = {("0", "0"): 1 - p01, ("0", "1"): p01, ("1", "0"): p10, ("1", "1"): p11}

    def _value(self, sigma):
        v = self.pi1 if sigma[0] == "1" else 1 - self.pi1
        for a, b in zip(sigma, sigma[1:]):
            if not v:
                return ZERO
            v *= self._trans[a, b]
        return v

    def describe(self):
        if self.explicit_pi:
            return f"(markov {self.p01} {self.p11} {self.pi1})"
        return f"(markov {self.p01} {self.p11})"


class Mixture(MeasureOracle):
    def __init__(self, components: Sequence[tuple[Fraction, MeasureOracle]]):
        if not components:
            raise WeightError("mixture needs at least one component")
        comps = [(as_rat(w), m) for w, m in components]
        if any(w < 0 for w, _ in comps):
            raise WeightError("mixture weights must be non-negative")
        total = sum((w for w, _ in comps), ZERO)
        if total != 1:
            raise WeightError(f"mixture weights sum to {total}, not 1")
        self.components = comps
        self.exact = all(m.exact for _, m in comps)

    def query(self, sigma, delta=None):
        check_pattern(sigma)
        if not sigma:
            return ONE
        # weights sum to 1, so querying each component at delta keeps the sum within delta
        return sum((w * m.query(sigma, delta) for w, m in self.components if w), ZERO)

    def describe(self):
        inner = " ".join(f"({w} {m.describe()})" for w, m in self.components)
        return f"(mixture {inner})"


class Empirical(MeasureOracle):
    """The measure whose cylinder values are the cyclic densities of a word."""

    def __init__(self, A: Word | str):
        A = A if isinstance(A, Word) else Word(A)
        if len(A) < 1:
            raise DomainError("empirical measure needs a nonempty word")
        self.word = A
        self._counts: dict[int, np.ndarray] = {}
        self._lock = threading.Lock()

    def _table(self, length):
        with self._lock:
            tab = self._counts.get(length)
            if tab is None:
                tab = pattern_counts(self.word, length)
                self._counts[length] = tab
        return tab

    def _value(self, sigma):
        if len(sigma) > 20:
            return Fraction(count(self.word, sigma), len(self.word))
        return Fraction(int(self._table(len(sigma))[int(sigma, 2)]), len(self.word))

    def describe(self):
        return f"(empirical {self.word})"


@dataclass(frozen=True)
class FiniteMPS:
    """Finite measure-preserving system: ``perm[x]`` is the image of state ``x``."""

    perm: tuple[int, ...]
    weights: tuple[Fraction, ...]
    E: frozenset[int]

    def __post_init__(self):
        N = len(self.perm)
        if N < 1:
            raise DomainError("system needs at least one state")
        if sorted(self.perm) != list(range(N)):
            raise DomainError(f"perm {self.perm} is not a bijection of 0..{N - 1}")
        if len(self.weights) != N:
            raise DomainError("one weight per state required")
        object.__setattr__(self, "weights", tuple(as_rat(w) for w in self.weights))
        if any(w < 0 for w in self.weights):
            raise WeightError("weights must be non-negative")
        if sum(self.weights, ZERO) != 1:
            raise WeightError(f"weights sum to {sum(self.weights, ZERO)}, not 1")
        if any(not 0 <= x < N for x in self.E):
            raise DomainError("distinguished set must lie in 0..N-1")
        if any(self.weights[x] != self.weights[self.perm[x]] for x in range(N)):
            raise DomainError("weights are not invariant under perm (must be constant on cycles)")

    @property
    def size(self) -> int:
        return len(self.perm)

    def itinerary(self, x: int, length: int) -> str:
        out = []
        for _ in range(length):
            out.append("1" if x in self.E else "0")
            x = self.perm[x]
        return "".join(out)


class Pushforward(MeasureOracle):
    def __init__(self, system: FiniteMPS):
        self.system = system

    def _value(self, sigma):
        s = self.system
        return sum(
            (s.weights[x] for x in range(s.size) if s.itinerary(x, len(sigma)) == sigma), ZERO
        )

    def describe(self):
        s = self.system
        bits = " ".join("1" if x in s.E else "0" for x in range(s.size))
        return (f"(pushforward {s.size} (perm {' '.join(map(str, s.perm))}) "
                f"(weights {' '.join(map(str, s.weights))}) (set {bits}))")


class FunctionOracle(MeasureOracle):
    """Wrap a user function ``(sigma, delta) -> rational``; treated as inexact."""

    def __init__(self, fn: Callable[[Pattern, Fraction], Fraction], exact: bool = False):
        self.fn = fn
        self.exact = exact

    def query(self, sigma, delta=None):
        check_pattern(sigma)
        return Fraction(self.fn(sigma, delta))


class Truncated(MeasureOracle):
    """Inexact view of another oracle: values rounded down to a dyadic grid finer than delta."""

    exact = False

    def __init__(self, inner: MeasureOracle):
        self.inner = inner

    def query(self, sigma, delta=None):
        check_pattern(sigma)
        if delta is None or delta <= 0:
            raise DomainError("an inexact oracle needs a positive precision delta")
        v = self.inner.query(sigma, None)
        t = 0
        while Fraction(1, 1 << t) >= delta:
            t += 1
        scale = 1 << t
        return Fraction((v.numerator * scale) // v.denominator, scale)

    def describe(self):
        return f"(truncated {self.inner.describe()})"


def bernoulli(p) -> Bernoulli:
    return Bernoulli(p)


def markov(p01, p11, pi1=None) -> Markov:
    return Markov(p01, p11, pi1)


def mixture(components) -> Mixture:
    return Mixture(components)


def empirical(A) -> Empirical:
    return Empirical(A)


def pushforward(system: FiniteMPS) -> Pushforward:
    return Pushforward(system)


def cycle_system(E_bits: str) -> FiniteMPS:
    """Single N-cycle ``x -> x+1 mod N`` with uniform weights and E read from ``E_bits``."""
    N = len(E_bits)
    return FiniteMPS(
        perm=tuple((x + 1) % N for x in range(N)),
        weights=tuple(Fraction(1, N) for _ in range(N)),
        E=frozenset(i for i, b in enumerate(E_bits) if b == "1"),
    )


@dataclass
class AuditReport:
    depth: int
    delta: Fraction
    tolerance: Fraction
    residuals: dict[Pattern, Fraction] = field(default_factory=dict)
    violations: list[Pattern] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def max_residual(self) -> Fraction:
        return max(self.residuals.values(), default=ZERO)


def invariance_audit(m: MeasureOracle, depth: int, delta, *, raise_on_fail: bool = True) -> AuditReport:
    """Check right-additivity and left (shift) additivity for every pattern up to ``depth``."""
    delta = as_rat(delta)
    if depth < 0:
        raise DomainError("depth must be >= 0")
    if delta <= 0:
        raise DomainError("delta must be positive")
    cache: dict[Pattern, Fraction] = {}

    def q(s):
        if s not in cache:
            cache[s] = m.query(s, delta)
        return cache[s]

    rep = AuditReport(depth=depth, delta=delta, tolerance=3 * delta)
    for sigma in patterns_upto(depth):
        base = q(sigma)
        right = abs(q(sigma + "0") + q(sigma + "1") - base)
        left = abs(q("0" + sigma) + q("1" + sigma) - base)
        rep.residuals[sigma] = max(right, left)
        if rep.residuals[sigma] > rep.tolerance:
            rep.violations.append(sigma)
    for sigma in patterns_upto(depth + 1):
        v = q(sigma)
        if not 0 <= v <= 1:
            rep.violations.append(sigma)
    if raise_on_fail and not rep.passed:
        raise AuditFailure(rep)
    return rep
