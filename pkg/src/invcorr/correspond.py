"""Finite-scale version of the forward correspondence: thin a family of words
until the densities of every listed pattern agree to within a tolerance."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .errors import DomainError
from .measure import as_rat
from .words import Pattern, Word, density_table as word_densities, patterns_upto


@dataclass
class DensityTable:
    words: list[Word]
    patterns: list[Pattern]
    cells: list[list[Fraction]]

    def column(self, sigma: Pattern) -> list[Fraction]:
        s = self.patterns.index(sigma)
        return [row[s] for row in self.cells]


def density_table(words: Sequence[Word | str], max_j: int) -> DensityTable:
    ws = [w if isinstance(w, Word) else Word(w) for w in words]
    if any(len(w) < 1 for w in ws):
        raise DomainError("every word needs length >= 1")
    pats = patterns_upto(max_j)
    cells = []
    for w in ws:
        dens = word_densities(w, max_j)
        cells.append([dens[s] for s in pats])
    return DensityTable(words=ws, patterns=pats, cells=cells)


def extract_subsequence(t: DensityTable, tol) -> list[int]:
    """Greedy thinning, one pattern at a time.

    Survivors are bucketed by ``floor(density / tol)``; the largest bucket
    wins, ties going to the lower bucket. All survivors then differ by less
    than ``tol`` on every pattern in the table.
    """
    tol = as_rat(tol)
    if tol <= 0:
        raise DomainError("tol must be positive")
    alive = list(range(len(t.words)))
    for s in range(len(t.patterns)):
        buckets: dict[int, list[int]] = defaultdict(list)
        for i in alive:
            v = t.cells[i][s] / tol
            buckets[v.numerator // v.denominator].append(i)
        if buckets:
            key = min(buckets, key=lambda b: (-len(buckets[b]), b))
            alive = buckets[key]
    return alive


def read_words(path: str | Path) -> list[Word]:
    out = []
    for n, line in enumerate(Path(path).read_text(encoding="ascii").splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        if line.strip("01"):
            raise DomainError(f"{path}:{n}: not a binary word")
        out.append(Word(line))
    return out
