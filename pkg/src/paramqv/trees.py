"""Perfect binary trees with scalar leaves.

A tree of height h is stored as its per-level labels and the 2^h leaves in
left-to-right order, so the leaf list is the state vector (qubit 1 is the
most significant bit of the index).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .algebra import DEFAULT_M, AlgebraicComplex, format_scalar, parse_scalar, zero


class Incompatible(ValueError):
    pass


class PositionError(IndexError):
    pass


@dataclass(frozen=True)
class PerfectTree:
    labels: tuple
    leaves: tuple

    def __post_init__(self):
        if len(self.leaves) != 1 << len(self.labels):
            raise ValueError(f"height {len(self.labels)} needs {1 << len(self.labels)} leaves")

    @property
    def height(self) -> int:
        return len(self.labels)

    @property
    def m(self) -> int:
        return self.leaves[0].m

    def __str__(self) -> str:
        return format_tree(self)


def leaf(value: AlgebraicComplex) -> PerfectTree:
    return PerfectTree((), (value,))


def cons(symbol: str, t0: PerfectTree, t1: PerfectTree) -> PerfectTree:
    if t0.labels != t1.labels:
        raise Incompatible("children carry different labels")
    return PerfectTree((symbol,) + t0.labels, t0.leaves + t1.leaves)


def zero_tree(labels: Sequence[str], m: int = DEFAULT_M) -> PerfectTree:
    return PerfectTree(tuple(labels), (zero(m),) * (1 << len(labels)))


def basis_tree(bits: str, labels: Sequence[str], m: int = DEFAULT_M) -> PerfectTree:
    """The computational basis state |bits>."""
    labels = tuple(labels)
    if len(bits) != len(labels):
        raise ValueError("bit string and labels differ in length")
    z = zero(m)
    leaves = [z] * (1 << len(labels))
    leaves[int(bits, 2) if bits else 0] = AlgebraicComplex.integer(1, m)
    return PerfectTree(labels, tuple(leaves))


def combine(terms: Iterable) -> PerfectTree:
    terms = list(terms)
    if not terms:
        raise ValueError("combine needs at least one term")
    labels = terms[0][1].labels
    for _, t in terms[1:]:
        if t.labels != labels:
            raise Incompatible("trees differ in height or labels")
    leaves = None
    for a, t in terms:
        scaled = [a * v for v in t.leaves]
        leaves = scaled if leaves is None else [x + y for x, y in zip(leaves, scaled)]
    return PerfectTree(labels, tuple(leaves))


def scale(a: AlgebraicComplex, t: PerfectTree) -> PerfectTree:
    return combine([(a, t)])


def subtree(t: PerfectTree, u: str) -> PerfectTree:
    if len(u) > t.height or any(ch not in "01" for ch in u):
        raise PositionError(f"position {u!r} not in a tree of height {t.height}")
    rest = t.height - len(u)
    start = (int(u, 2) if u else 0) << rest
    return PerfectTree(t.labels[len(u):], t.leaves[start:start + (1 << rest)])


def norm2(t: PerfectTree) -> AlgebraicComplex:
    """Sum of squared magnitudes, computed exactly."""
    total = zero(t.m)
    for v in t.leaves:
        total = total + v.abs2()
    return total


def format_tree(t: PerfectTree, style: str = "vector") -> str:
    if style == "vector":
        return (
            f"tree h={t.height} labels={','.join(t.labels)} "
            f"leaves=[{','.join(format_scalar(v) for v in t.leaves)}]"
        )
    if style == "dirac":
        if t.height == 0:
            return format_scalar(t.leaves[0])
        parts = []
        for i, v in enumerate(t.leaves):
            if v.is_zero():
                continue
            parts.append(f"{format_scalar(v)}|{i:0{t.height}b}>")
        return " + ".join(parts) if parts else "0"
    raise ValueError(f"unknown style {style!r}")


def split_top(text: str, sep: str = ",") -> list:
    """Split on `sep` outside of parentheses and angle brackets."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch in "(<":
            depth += 1
        elif ch in ")>":
            depth -= 1
        if ch == sep and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return out


_TREE = re.compile(r"^\s*tree\s+h=(\d+)\s+labels=(\S*)\s+leaves=\[(.*)\]\s*$")


def parse_tree(text: str, m: int = DEFAULT_M) -> PerfectTree:
    mt = _TREE.match(text)
    if not mt:
        raise ValueError(f"bad tree literal {text!r}")
    h = int(mt.group(1))
    labels = tuple(s for s in mt.group(2).split(",") if s)
    if len(labels) != h:
        raise ValueError(f"h={h} but {len(labels)} labels")
    leaves = tuple(parse_scalar(s, m) for s in split_top(mt.group(3)))
    return PerfectTree(labels, leaves)
