"""The block construction on Z^d, using boxes F_n = {0..n-1}^d.

A :class:`LatticeModel` is a disjoint union of ``L`` copies of the box ``F_k``
with a bit on every cell. Translation by ``gamma`` acts partially: it moves a
cell ``p`` of a copy to ``p + gamma`` when that is still inside the box, and
is undefined otherwise. A pattern occurs at a cell when every 1 of the pattern
lands on a defined cell carrying a 1, and every 0 lands on a 0 or off the box.

Cells are enumerated row-major, and patterns on a box are indexed by reading
their bits in that order as a big-endian integer. This fixes the order in
which blocks are laid out.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Mapping

import numpy as np

from .errors import AuditFailure, BudgetExceeded, DomainError, SupportTooLarge
from .inverse import _l_candidates, ceil_div, prefix_rounding, query_all, renormalized_weights
from .measure import AuditReport, MeasureOracle, as_rat

log = logging.getLogger(__name__)

DEFAULT_ZD_BUDGET = 1 << 14

Coord = tuple[int, ...]


@dataclass(frozen=True)
class BoxFolner:
    d: int
    n: int

    def cells(self) -> list[Coord]:
        return list(itertools.product(range(self.n), repeat=self.d))

    def __len__(self) -> int:
        return self.n ** self.d


@dataclass(frozen=True)
class LatticePattern:
    """Finite partial map from Z^d to {0, 1}, stored as sorted (coordinate, bit) pairs."""

    cells: tuple[tuple[Coord, int], ...]

    @classmethod
    def of(cls, mapping: Mapping[Coord, int]) -> "LatticePattern":
        cells = []
        dims = {len(c) for c in mapping}
        if len(dims) > 1:
            raise DomainError("pattern coordinates have mixed dimensions")
        for c, b in mapping.items():
            if b not in (0, 1):
                raise DomainError(f"pattern bit {b!r} is not 0/1")
            cells.append((tuple(int(x) for x in c), int(b)))
        return cls(tuple(sorted(cells)))

    @classmethod
    def from_box(cls, arr) -> "LatticePattern":
        arr = np.asarray(arr)
        return cls.of({tuple(int(x) for x in idx): int(v) for idx, v in np.ndenumerate(arr)})

    @property
    def support(self) -> frozenset[Coord]:
        return frozenset(c for c, _ in self.cells)

    def as_dict(self) -> dict[Coord, int]:
        return dict(self.cells)

    def shift(self, gamma: Coord) -> "LatticePattern":
        return LatticePattern.of({tuple(a + g for a, g in zip(c, gamma)): b for c, b in self.cells})

    def extend(self, alpha: Coord, bit: int) -> "LatticePattern":
        d = self.as_dict()
        d[alpha] = bit
        return LatticePattern.of(d)

    def __len__(self) -> int:
        return len(self.cells)

    def __str__(self) -> str:
        return "{" + ", ".join(f"{c}:{b}" for c, b in self.cells) + "}"


def box_patterns(d: int, n: int) -> list[LatticePattern]:
    """All patterns with support exactly F_n, in enumeration order."""
    cells = BoxFolner(d, n).cells()
    return [LatticePattern(tuple(zip(cells, bitsv)))
            for bitsv in itertools.product((0, 1), repeat=len(cells))]


def _box_array(tau: LatticePattern, d: int, k: int) -> np.ndarray:
    arr = np.zeros((k,) * d, dtype=np.uint8)
    for c, b in tau.cells:
        arr[c] = b
    return arr


class LatticeOracle:
    exact = True

    def query(self, sigma: LatticePattern, delta: Fraction | None = None) -> Fraction:
        raise NotImplementedError

    def describe(self) -> str:
        return type(self).__name__


class ProductBernoulliZd(LatticeOracle):
    def __init__(self, d: int, p):
        p = as_rat(p)
        if d < 1:
            raise DomainError("dimension must be >= 1")
        if not 0 <= p <= 1:
            raise DomainError(f"bernoulli parameter {p} outside [0, 1]")
        self.d, self.p = d, p

    def query(self, sigma, delta=None):
        ones = sum(b for _, b in sigma.cells)
        return self.p ** ones * (1 - self.p) ** (len(sigma) - ones)

    def describe(self):
        return f"(product-bernoulli {self.d} {self.p})"


class TorusEmpiricalZd(LatticeOracle):
    """Cyclic pattern frequencies of a configuration on the torus (Z/s)^d."""

    def __init__(self, d: int, config):
        cfg = np.asarray(config, dtype=np.uint8)
        if d < 1 or cfg.ndim != d or len(set(cfg.shape)) != 1 or cfg.shape[0] < 1:
            raise DomainError(f"torus configuration must be a nonempty {d}-dimensional cube")
        if cfg.max() > 1:
            raise DomainError("configuration bits must be 0/1")
        self.d, self.config, self.side = d, cfg, cfg.shape[0]

    def query(self, sigma, delta=None):
        match = np.ones(self.config.shape, dtype=bool)
        for alpha, b in sigma.cells:
            # rolled[t] == config[(t + alpha) mod s]
            rolled = np.roll(self.config, shift=tuple(-a for a in alpha), axis=tuple(range(self.d)))
            match &= rolled == b
        return Fraction(int(match.sum()), self.config.size)

    def describe(self):
        rows = self.config.reshape(-1, self.side) if self.d > 1 else self.config.reshape(1, -1)
        return f"(torus {self.d} {self.side} " + " ".join("".join(map(str, r)) for r in rows) + ")"


class ShiftOracleZ1(LatticeOracle):
    """A one-sided shift oracle viewed as a Z-invariant lattice oracle (d = 1)."""

    def __init__(self, m: MeasureOracle):
        self.m = m
        self.d = 1
        self.exact = m.exact

    def query(self, sigma, delta=None):
        if not sigma.cells:
            return Fraction(1)
        d = sigma.as_dict()
        lo = min(c[0] for c in d)
        hi = max(c[0] for c in d)
        gaps = [x for x in range(lo, hi + 1) if (x,) not in d]
        total = Fraction(0)
        for fill in itertools.product("01", repeat=len(gaps)):
            filled = dict(zip(gaps, fill))
            word = "".join(str(d[(x,)]) if (x,) in d else filled[x] for x in range(lo, hi + 1))
            total += self.m.query(word, None if delta is None else delta / (1 << len(gaps)))
        return total

    def describe(self):
        return f"(z1 {self.m.describe()})"


def product_bernoulli_zd(d: int, p) -> ProductBernoulliZd:
    return ProductBernoulliZd(d, p)


def torus_empirical_zd(d: int, config) -> TorusEmpiricalZd:
    return TorusEmpiricalZd(d, config)


@dataclass(frozen=True)
class LatticeModel:
    """``assignment[c]`` is the bit array on the c-th copy of F_k."""

    d: int
    k: int
    assignment: np.ndarray = field(repr=False, compare=False)

    def __post_init__(self):
        a = np.asarray(self.assignment, dtype=np.uint8)
        if a.ndim != self.d + 1 or a.shape[1:] != (self.k,) * self.d:
            raise DomainError(f"assignment shape {a.shape} does not match d={self.d}, k={self.k}")
        a = a.copy()
        a.setflags(write=False)
        object.__setattr__(self, "assignment", a)

    @property
    def copies(self) -> int:
        return int(self.assignment.shape[0])

    @property
    def size(self) -> int:
        return int(self.assignment.size)

    def __eq__(self, other):
        return (isinstance(other, LatticeModel) and (self.d, self.k) == (other.d, other.k)
                and np.array_equal(self.assignment, other.assignment))

    def __hash__(self):
        return hash((self.d, self.k, self.assignment.tobytes()))

    def padded(self, margin: int) -> np.ndarray:
        """Assignment with ``margin`` zero cells appended on every axis (off-box reads as 0)."""
        pad = [(0, 0)] + [(0, margin)] * self.d
        return np.pad(self.assignment, pad)

    def domain_ratio(self, j: int) -> Fraction:
        """|dom(F_j)| / |X|: fraction of cells where every translate in F_j is defined."""
        inner = max(self.k - j + 1, 0) ** self.d
        return Fraction(inner, self.k ** self.d)


def _check_support(M: LatticeModel, sigma: LatticePattern) -> None:
    for c in sigma.support:
        if len(c) != M.d or any(not 0 <= x < M.k for x in c):
            raise SupportTooLarge(f"cell {c} is outside F_{M.k}")


def lattice_density(M: LatticeModel, sigma: LatticePattern) -> Fraction:
    _check_support(M, sigma)
    if not sigma.cells:
        return Fraction(1)
    P = M.padded(M.k)
    match = np.ones(M.assignment.shape, dtype=bool)
    for alpha, b in sigma.cells:
        sl = (slice(None),) + tuple(slice(a, a + M.k) for a in alpha)
        match &= P[sl] == b
    return Fraction(int(match.sum()), M.size)


def box_density_table(M: LatticeModel, j: int) -> np.ndarray:
    """Occurrence counts of every pattern with support F_j, indexed by pattern code."""
    if j > M.k:
        raise SupportTooLarge(f"F_{j} does not fit in F_{M.k}")
    P = M.padded(j)
    codes = np.zeros(M.assignment.shape, dtype=np.int64)
    for alpha in BoxFolner(M.d, j).cells():
        sl = (slice(None),) + tuple(slice(a, a + M.k) for a in alpha)
        codes = (codes << 1) | P[sl]
    return np.bincount(codes.ravel(), minlength=1 << (j ** M.d))


def choose_k_zd(d: int, j: int, eps) -> int:
    """Least k >= j with j^d ((j+k-1)^d - k^d) / k^d <= eps/4."""
    eps = as_rat(eps)
    if d < 1 or j < 1:
        raise DomainError("d and j must be >= 1")
    if not 0 < eps <= 1:
        raise DomainError(f"eps={eps} must lie in (0, 1]")
    k = j
    while Fraction(j ** d * ((j + k - 1) ** d - k ** d), k ** d) > eps / 4:
        k += 1
    return k


def boundary_term(d: int, j: int, k: int) -> Fraction:
    return Fraction(j ** d * ((j + k - 1) ** d - k ** d), k ** d)


def zd_ledger(d: int, j: int, k: int, L: int, delta: Fraction) -> Fraction:
    K = k ** d
    return boundary_term(d, j, k) + Fraction(1 << K, L) + (1 << (K + 1)) * delta


def assemble_model(d: int, k: int, order: list[LatticePattern], a: list[int]) -> LatticeModel:
    blocks = [np.broadcast_to(_box_array(tau, d, k), (n,) + (k,) * d)
              for tau, n in zip(order, a) if n]
    return LatticeModel(d=d, k=k, assignment=np.concatenate(blocks))


@dataclass
class ZdReport:
    d: int
    j: int
    eps: Fraction
    k: int
    copies: int
    delta: Fraction
    measured_error: Fraction
    ledger_bound: Fraction
    k_required: int
    domain_ratio: Fraction
    residuals: dict[LatticePattern, Fraction] = field(repr=False)
    counts: list[int] = field(repr=False, default_factory=list)

    @property
    def met_eps(self) -> bool:
        return self.measured_error < self.eps

    @property
    def bound_meets_eps(self) -> bool:
        return self.ledger_bound < self.eps

    @property
    def within_ledger(self) -> bool:
        return self.measured_error <= self.ledger_bound


def build_zd(m: LatticeOracle, d: int, j: int, eps, budget: int = DEFAULT_ZD_BUDGET,
             workers: int = 1) -> tuple[LatticeModel, ZdReport]:
    """Search box sides k = j, j+1, ... and copy counts L for a model within the ledger bound.

    A side k is tried only while its 2^(k^d) block patterns fit in ``budget``,
    and L doubles up to min(budget // k^d, ceil(2^(k^d+2)/eps)). The first
    model with measured error below eps is returned. Otherwise the result is
    the best model that satisfies its own ledger bound, with ``met_eps`` false.
    """
    eps = as_rat(eps)
    k_req = choose_k_zd(d, j, eps)
    sigmas = box_patterns(d, j)
    oracle_term = Fraction(0) if m.exact else None
    best: tuple[LatticeModel, ZdReport] | None = None
    best_error: Fraction | None = None
    for k in range(j, k_req + 1):
        K = k ** d
        if (1 << K) > budget:
            break
        cap = min(budget // K, ceil_div(Fraction(1 << (K + 2)) / eps))
        delta = eps / (1 << (K + 3))
        order = box_patterns(d, k)
        weights = renormalized_weights(query_all(m, order, delta, workers))
        targets = query_all(m, sigmas, delta, workers)
        extra = oracle_term if oracle_term is not None else delta
        seen = set()
        for L in _l_candidates(cap):
            b = prefix_rounding(weights, L)
            if tuple(b) in seen:
                continue
            seen.add(tuple(b))
            a = [b[i + 1] - b[i] for i in range(len(order))]
            M = assemble_model(d, k, order, a)
            counts = box_density_table(M, j)
            res = {s: abs(t - Fraction(int(c), M.size)) for s, t, c in zip(sigmas, targets, counts)}
            measured = max(res.values()) + extra
            if best_error is None or measured < best_error:
                best_error = measured
            rep = ZdReport(d=d, j=j, eps=eps, k=k, copies=L, delta=delta, measured_error=measured,
                           ledger_bound=zd_ledger(d, j, k, L, delta), k_required=k_req,
                           domain_ratio=M.domain_ratio(j), residuals=res, counts=a)
            if not rep.within_ledger:
                log.warning("k=%d L=%d: measured %s exceeds ledger %s", k, L, measured, rep.ledger_bound)
                continue
            if rep.met_eps:
                return M, rep
            if best is None or measured < best[1].measured_error:
                best = (M, rep)
    if best is not None:
        return best
    raise BudgetExceeded(
        f"no lattice model within budget {budget}: eps={eps} needs k={k_req}, "
        f"i.e. 2^{k_req ** d} block patterns",
        best_error=best_error,
        details={"k_required": k_req, "boundary_term": boundary_term(d, j, k_req),
                 "patterns_required_log2": k_req ** d},
    )


def partial_patterns(d: int, depth: int) -> list[LatticePattern]:
    """Every pattern whose support lies inside F_depth."""
    cells = BoxFolner(d, depth).cells()
    out = []
    for choice in itertools.product((None, 0, 1), repeat=len(cells)):
        out.append(LatticePattern(tuple((c, b) for c, b in zip(cells, choice) if b is not None)))
    return out


def lattice_invariance_audit(m: LatticeOracle, d: int, depth: int, delta,
                             *, raise_on_fail: bool = True) -> AuditReport:
    """Additivity (tolerance 3*delta) and unit-translation invariance (2*delta) inside F_depth."""
    delta = as_rat(delta)
    if delta <= 0:
        raise DomainError("delta must be positive")
    cache: dict[LatticePattern, Fraction] = {}

    def q(s):
        if s not in cache:
            cache[s] = m.query(s, delta)
        return cache[s]

    cells = BoxFolner(d, depth).cells()
    units = [tuple(int(i == axis) for i in range(d)) for axis in range(d)]
    rep = AuditReport(depth=depth, delta=delta, tolerance=3 * delta)
    for sigma in partial_patterns(d, depth):
        worst = Fraction(0)
        bad = False
        base = q(sigma)
        if not 0 <= base <= 1:
            bad = True
        for alpha in cells:
            if alpha in sigma.support:
                continue
            r = abs(q(sigma.extend(alpha, 0)) + q(sigma.extend(alpha, 1)) - base)
            worst = max(worst, r)
            bad |= r > 3 * delta
        for g in units:
            moved = sigma.shift(g)
            if all(all(x < depth for x in c) for c in moved.support):
                r = abs(q(moved) - base)
                worst = max(worst, r)
                bad |= r > 2 * delta
        rep.residuals[str(sigma)] = worst
        if bad:
            rep.violations.append(str(sigma))
    if raise_on_fail and not rep.passed:
        raise AuditFailure(rep)
    return rep


def write_model(path: str | Path, M: LatticeModel) -> None:
    Path(path).write_text(format_model(M), encoding="ascii")


def format_model(M: LatticeModel) -> str:
    if M.d not in (1, 2):
        raise DomainError("lattice model files support d = 1 or 2")
    lines = [f"{M.d} {M.k} {M.copies}"]
    for block in M.assignment:
        rows = block.reshape(1, -1) if M.d == 1 else block
        lines.extend("".join(str(int(b)) for b in row) for row in rows)
    return "\n".join(lines) + "\n"


def read_model(path: str | Path) -> LatticeModel:
    return parse_model(Path(path).read_text(encoding="ascii"))


def parse_model(text: str) -> LatticeModel:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise DomainError("empty lattice model file")
    try:
        d, k, L = (int(x) for x in lines[0].split())
    except ValueError:
        raise DomainError("header must be 'd k L'") from None
    if d not in (1, 2):
        raise DomainError("lattice model files support d = 1 or 2")
    per_block = 1 if d == 1 else k
    rows = lines[1:]
    if len(rows) != L * per_block or any(len(r) != k or r.strip("01") for r in rows):
        raise DomainError(f"expected {L * per_block} rows of {k} bits")
    arr = np.array([[int(c) for c in r] for r in rows], dtype=np.uint8)
    return LatticeModel(d=d, k=k, assignment=arr.reshape((L,) + (k,) * d))
