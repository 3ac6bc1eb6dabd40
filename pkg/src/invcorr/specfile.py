"""Reader for measure spec files (s-expressions).

Grammar::

    spec := (bernoulli RAT) | (markov RAT RAT) | (markov RAT RAT RAT)
          | (empirical BITS) | (mixture (RAT spec)+)
          | (pushforward N (perm INT+) (weights RAT+) (set BIT+))
          | (product-bernoulli D RAT) | (torus D SIDE ROW+)
    RAT  := INT | INT/POSINT

Every error carries the 1-based line and column of the offending token.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .amenable import LatticeOracle, ProductBernoulliZd, TorusEmpiricalZd
from .errors import InvCorrError, SpecParseError
from .measure import Bernoulli, Empirical, FiniteMPS, Markov, MeasureOracle, Mixture, Pushforward

_RAT = re.compile(r"-?\d+(/[1-9]\d*)?\Z")
_INT = re.compile(r"-?\d+\Z")
_BITS = re.compile(r"[01]+\Z")


@dataclass
class Atom:
    text: str
    line: int
    col: int


@dataclass
class SList:
    items: list
    line: int
    col: int


def _fail(msg, node):
    raise SpecParseError(msg, node.line, node.col)


def tokenize(text: str):
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line, col = line + 1, 1
            i += 1
        elif c.isspace():
            i += 1
            col += 1
        elif c in "()":
            yield c, line, col
            i += 1
            col += 1
        else:
            start, scol = i, col
            while i < n and not text[i].isspace() and text[i] not in "()":
                i += 1
                col += 1
            yield text[start:i], line, scol
    yield None, line, col


def read_sexpr(text: str) -> SList | Atom:
    """Parse exactly one s-expression from ``text``."""
    toks = tokenize(text)
    stack: list[SList] = []
    result = None
    for tok, line, col in toks:
        if tok is None:
            if stack:
                raise SpecParseError("unclosed '('", stack[-1].line, stack[-1].col)
            if result is None:
                raise SpecParseError("empty spec", line, col)
            return result
        if result is not None:
            raise SpecParseError(f"unexpected {tok!r} after end of spec", line, col)
        if tok == "(":
            stack.append(SList([], line, col))
        elif tok == ")":
            if not stack:
                raise SpecParseError("unbalanced ')'", line, col)
            done = stack.pop()
            if stack:
                stack[-1].items.append(done)
            else:
                result = done
        else:
            atom = Atom(tok, line, col)
            if stack:
                stack[-1].items.append(atom)
            else:
                result = atom
    raise AssertionError("tokenizer always ends with a sentinel")


def _rat(node) -> Fraction:
    if not isinstance(node, Atom) or not _RAT.match(node.text):
        _fail("expected a rational INT or INT/POSINT", node)
    return Fraction(node.text)


def _int(node) -> int:
    if not isinstance(node, Atom) or not _INT.match(node.text):
        _fail("expected an integer", node)
    return int(node.text)


def _bits(node) -> str:
    if not isinstance(node, Atom) or not _BITS.match(node.text):
        _fail("expected a binary string", node)
    return node.text


def _head(node: SList, name: str, min_args: int, max_args: int | None = None) -> list:
    args = node.items[1:]
    if len(args) < min_args or (max_args is not None and len(args) > max_args):
        want = str(min_args) if max_args == min_args else f"{min_args}..{max_args or ''}"
        _fail(f"'{name}' takes {want} arguments, got {len(args)}", node)
    return args


def _tagged(node, tag: str) -> list:
    if not isinstance(node, SList) or not node.items or getattr(node.items[0], "text", None) != tag:
        _fail(f"expected ({tag} ...)", node)
    if len(node.items) < 2:
        _fail(f"({tag} ...) needs at least one entry", node)
    return node.items[1:]


def build_oracle(node) -> MeasureOracle | LatticeOracle:
    if not isinstance(node, SList) or not node.items or not isinstance(node.items[0], Atom):
        _fail("expected (NAME ...)", node)
    name = node.items[0].text
    try:
        if name == "bernoulli":
            (p,) = _head(node, name, 1, 1)
            return Bernoulli(_rat(p))
        if name == "markov":
            args = _head(node, name, 2, 3)
            return Markov(*(_rat(a) for a in args))
        if name == "empirical":
            (w,) = _head(node, name, 1, 1)
            return Empirical(_bits(w))
        if name == "mixture":
            comps = []
            for item in _head(node, name, 1):
                if not isinstance(item, SList) or len(item.items) != 2:
                    _fail("mixture component must be (RAT spec)", item)
                sub = build_oracle(item.items[1])
                if not isinstance(sub, MeasureOracle):
                    _fail("mixture components must be one-dimensional measures", item.items[1])
                comps.append((_rat(item.items[0]), sub))
            return Mixture(comps)
        if name == "pushforward":
            n, perm, weights, eset = _head(node, name, 4, 4)
            N = _int(n)
            perm_v = [_int(x) for x in _tagged(perm, "perm")]
            w_v = [_rat(x) for x in _tagged(weights, "weights")]
            e_v = _tagged(eset, "set")
            for x in e_v:
                if _bits(x) not in ("0", "1"):
                    _fail("set entries are single bits", x)
            if not len(perm_v) == len(w_v) == len(e_v) == N:
                _fail(f"perm, weights and set must each have {N} entries", node)
            return Pushforward(FiniteMPS(tuple(perm_v), tuple(w_v),
                                         frozenset(i for i, x in enumerate(e_v) if x.text == "1")))
        if name == "product-bernoulli":
            d, p = _head(node, name, 2, 2)
            return ProductBernoulliZd(_int(d), _rat(p))
        if name == "torus":
            args = _head(node, name, 3)
            d, side = _int(args[0]), _int(args[1])
            rows = [_bits(r) for r in args[2:]]
            n_rows = 1 if d == 1 else side ** (d - 1)
            if len(rows) != n_rows or any(len(r) != side for r in rows):
                _fail(f"torus needs {n_rows} rows of {side} bits", node)
            cfg = np.array([[int(c) for c in r] for r in rows], dtype=np.uint8).reshape((side,) * d)
            return TorusEmpiricalZd(d, cfg)
    except SpecParseError:
        raise
    except (InvCorrError, ValueError) as exc:
        _fail(str(exc), node)
    _fail(f"unknown measure {name!r}", node.items[0])


def parse_spec(text: str) -> MeasureOracle | LatticeOracle:
    return build_oracle(read_sexpr(text))


def load_spec(path: str | Path) -> MeasureOracle | LatticeOracle:
    return parse_spec(Path(path).read_text(encoding="utf-8"))
