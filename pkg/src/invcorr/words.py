"""Finite binary words and their cyclic pattern statistics.

A :class:`Word` of length ``n`` encodes a subset of ``{0, ..., n-1}``. A
pattern ``sigma`` is a plain ``str`` over ``'0'``/``'1'``; it *occurs* at
position ``i`` of a word when ``sigma[t] == A[(i + t) % n]`` for all ``t``, so
patterns wrap around the end of the word (repeatedly, if longer than it).
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, EmptyResult, InsufficientPrefix

Pattern = str


class Word:
    """Immutable binary word backed by a read-only ``uint8`` array."""

    __slots__ = ("_bits",)

    def __init__(self, bits: str | Sequence[int] | np.ndarray | "Word"):
        if isinstance(bits, Word):
            arr = bits._bits
        elif isinstance(bits, str):
            check_pattern(bits)
            arr = np.frombuffer(bits.encode("ascii"), dtype=np.uint8) - ord("0")
        else:
            arr = np.asarray(bits, dtype=np.uint8)
            if arr.ndim != 1:
                raise DomainError("word bits must be one-dimensional")
            if arr.size and arr.max() > 1:
                raise DomainError("word bits must be 0 or 1")
        arr = np.array(arr, dtype=np.uint8, copy=True)
        arr.setflags(write=False)
        self._bits = arr

    @property
    def bits(self) -> np.ndarray:
        return self._bits

    def __len__(self) -> int:
        return int(self._bits.size)

    def __str__(self) -> str:
        return (self._bits + ord("0")).tobytes().decode("ascii")

    def __repr__(self) -> str:
        s = str(self)
        if len(s) > 40:
            s = s[:37] + "..."
        return f"Word({s!r}, n={len(self)})"

    def __eq__(self, other) -> bool:
        if isinstance(other, str):
            return str(self) == other
        if not isinstance(other, Word):
            return NotImplemented
        return np.array_equal(self._bits, other._bits)

    def __hash__(self) -> int:
        return hash(self._bits.tobytes())

    def __getitem__(self, i):
        if isinstance(i, slice):
            return Word(self._bits[i])
        return int(self._bits[i])

    def as_set(self) -> frozenset[int]:
        return frozenset(int(i) for i in np.flatnonzero(self._bits))


def check_pattern(sigma: str) -> str:
    if not isinstance(sigma, str) or sigma.strip("01"):
        raise DomainError(f"not a binary pattern: {sigma!r}")
    return sigma


def all_patterns(length: int) -> list[Pattern]:
    """All binary patterns of ``length`` in lexicographic order (0 < 1)."""
    return ["".join(p) for p in itertools.product("01", repeat=length)]


def patterns_upto(j: int) -> list[Pattern]:
    """Patterns of length 0..j, shortest first, lexicographic within a length."""
    out: list[Pattern] = []
    for length in range(j + 1):
        out.extend(all_patterns(length))
    return out


def _require_nonempty(A: Word) -> None:
    if len(A) < 1:
        raise DomainError("word must have length >= 1")


def occurrence_positions(A: Word, sigma: Pattern) -> frozenset[int]:
    """Cyclic occurrence positions of ``sigma`` in ``A``, by direct scan."""
    _require_nonempty(A)
    check_pattern(sigma)
    n = len(A)
    bits = A.bits
    want = [ord(c) - 48 for c in sigma]
    return frozenset(
        i for i in range(n)
        if all(bits[(i + t) % n] == b for t, b in enumerate(want))
    )


def count(A: Word, sigma: Pattern) -> int:
    """Number of cyclic occurrences of ``sigma`` in ``A``."""
    _require_nonempty(A)
    check_pattern(sigma)
    if not sigma:
        return len(A)
    codes = window_codes(A.bits, len(sigma), cyclic=True)
    return int(np.count_nonzero(codes == int(sigma, 2)))


def density(A: Word, sigma: Pattern) -> Fraction:
    return Fraction(count(A, sigma), len(A))


def window_codes(bits: np.ndarray, length: int, *, cyclic: bool, starts: int | None = None) -> np.ndarray:
    """Integer code (big-endian) of the length-``length`` window at each start.

    Cyclic windows exist at every position and wrap modulo ``len(bits)``;
    non-cyclic ones exist at the first ``starts`` positions only.
    """
    n = bits.size
    if length == 0:
        return np.zeros(n if starts is None else starts, dtype=np.int64)
    if length > 62:
        raise DomainError("window length above 62 bits is not supported")
    m = n if starts is None else starts
    codes = np.zeros(m, dtype=np.int64)
    base = np.arange(m)
    for t in range(length):
        idx = base + t
        if cyclic:
            idx %= n
        codes = (codes << 1) | bits[idx]
    return codes


def pattern_counts(A: Word, length: int) -> np.ndarray:
    """Cyclic counts of every length-``length`` pattern, indexed by its code."""
    _require_nonempty(A)
    codes = window_codes(A.bits, length, cyclic=True)
    return np.bincount(codes, minlength=1 << length)


def density_table(A: Word, j: int) -> dict[Pattern, Fraction]:
    """Exact cyclic densities of all patterns with length <= j, one scan."""
    _require_nonempty(A)
    n = len(A)
    top = pattern_counts(A, j)
    out: dict[Pattern, Fraction] = {}
    for length in range(j + 1):
        # prefix of a cyclic length-j window is the cyclic length-`length` window
        counts = top.reshape(1 << length, 1 << (j - length)).sum(axis=1)
        for code, sigma in enumerate(all_patterns(length)):
            out[sigma] = Fraction(int(counts[code]), n)
    return out


def concat(parts: Iterable[tuple[Word | str, int]]) -> Word:
    """Concatenate ``count`` copies of each word, in order."""
    chunks = []
    for w, reps in parts:
        if reps < 0:
            raise DomainError("repeat count must be non-negative")
        w = w if isinstance(w, Word) else Word(w)
        if reps and len(w):
            chunks.append(np.tile(w.bits, reps))
    if not chunks:
        raise EmptyResult("concatenation has length 0")
    return Word(np.concatenate(chunks))


def repeat_to(A: Word, n: int) -> Word:
    """Repeat ``A`` cyclically and truncate to length ``n``."""
    _require_nonempty(A)
    if n < 1:
        raise EmptyResult("target length must be >= 1")
    reps = -(-n // len(A))
    return Word(np.tile(A.bits, reps)[:n])


def rotate(A: Word, r: int) -> Word:
    """Left rotation by ``r`` positions."""
    _require_nonempty(A)
    return Word(np.roll(A.bits, -r))


def prefix_frequency(bits: Word, sigma: Pattern, n: int) -> Fraction:
    """Fraction of starts ``i < n`` where ``sigma`` occurs without wraparound."""
    check_pattern(sigma)
    if n < 1:
        raise DomainError("n must be >= 1")
    need = n + max(len(sigma) - 1, 0)
    if len(bits) < need:
        raise InsufficientPrefix(f"need {need} bits, have {len(bits)}")
    if not sigma:
        return Fraction(1)
    codes = window_codes(bits.bits, len(sigma), cyclic=False, starts=n)
    return Fraction(int(np.count_nonzero(codes == int(sigma, 2))), n)


def prefix_frequencies(bits: Word, j: int, n: int) -> dict[Pattern, Fraction]:
    """Non-cyclic frequencies over starts ``i < n`` for all patterns of length <= j."""
    need = n + max(j - 1, 0)
    if len(bits) < need:
        raise InsufficientPrefix(f"need {need} bits, have {len(bits)}")
    out: dict[Pattern, Fraction] = {}
    for length in range(j + 1):
        codes = window_codes(bits.bits, length, cyclic=False, starts=n)
        counts = np.bincount(codes, minlength=1 << length)
        for code, sigma in enumerate(all_patterns(length)):
            out[sigma] = Fraction(int(counts[code]), n)
    return out


def read_word(path: str | Path) -> Word:
    text = Path(path).read_text(encoding="ascii")
    if text.endswith("\n"):
        text = text[:-1]
    if not text or text.strip("01"):
        raise DomainError(f"{path}: word file must be one line of 0/1 characters")
    return Word(text)


def write_word(path: str | Path, A: Word) -> None:
    Path(path).write_text(str(A) + "\n", encoding="ascii")

