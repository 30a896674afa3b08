"""Functional equivalence and inclusion of SWTAs.

Two SWTAs are compared in two stages: their domains (as word languages, via
the domain DFAs) and their values on the common domain.  The second stage
builds the difference automaton, reads it as a linear transition system and
runs Karr's algorithm to decide whether every reachable leaf value is zero.
"""

from __future__ import annotations

import itertools
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Optional

from .algebra import Basis, FieldScalar, embed, vec_axpy, one
from .swta import DEAD, DomainDfa, LinearForm, ModelError, Swta, evaluate, rename

EQUAL, INCLUDED = "equal", "included"


@dataclass
class Verdict:
    holds: bool
    witness: Optional[tuple] = None
    branch: Optional[tuple] = None
    reason: str = ""
    stats: dict = field(default_factory=dict)

    @property
    def result(self) -> str:
        return "holds" if self.holds else "fails"

    def __bool__(self) -> bool:
        return self.holds


def _check_mode(mode: str) -> str:
    if mode in ("include", "inclusion"):
        mode = INCLUDED
    if mode not in (EQUAL, INCLUDED):
        raise ValueError(f"unknown mode {mode!r}")
    return mode


# ------------------------------------------------------- difference automaton

DIFF_ROOT = "diff"


def diff_swta(A: Swta, B: Swta, alpha: Optional[str] = None) -> Swta:
    """Fresh root reading (alpha, first color) into (r_A - r_B | r_A - r_B)."""
    if A.m != B.m:
        raise ModelError("mixed moduli")
    A2 = rename(A, lambda q: f"A.{q}")
    B2 = rename(B, lambda q: f"B.{q}")
    alphabet = tuple(dict.fromkeys(A.alphabet + B.alphabet))
    colors = tuple(dict.fromkeys(A.colors + B.colors))
    if not alphabet or not colors:
        raise ModelError("difference automaton needs at least one symbol and one color")
    alpha = alphabet[0] if alpha is None else alpha
    o = one(A.m)
    form = LinearForm({A2.root: o, B2.root: -o})
    trans = dict(A2.transitions)
    trans.update(B2.transitions)
    trans[(DIFF_ROOT, alpha, colors[0])] = (form, LinearForm(dict(form.terms)))
    return Swta(
        DIFF_ROOT,
        A2.leaves | B2.leaves,
        trans,
        alphabet,
        colors,
        A2.states | B2.states | {DIFF_ROOT},
        A.m,
    )


# ------------------------------------------------------------------- LTS


class Lts:
    """A linear transition system over sparse vectors.

    Edges carry matrices given as rows (index -> sparse row); a vector v
    moves to v*M = sum of v[q] * row_q.  `output`, when set, is the linear
    functional tested at target states; otherwise the whole vector must be 0.
    """

    def __init__(self, dim: int, initial: Hashable, v0: dict, output: Optional[dict] = None):
        self.dim = dim
        self.initial = initial
        self.v0 = v0
        self.output = output

    def successors(self, s) -> Iterable:
        raise NotImplementedError

    def is_target(self, s) -> bool:
        raise NotImplementedError

    def observe(self, v: dict) -> bool:
        """Whether v is nonzero as seen at a target."""
        if self.output is None:
            return bool(v)
        total = None
        for i, a in v.items():
            w = self.output.get(i)
            if w is not None:
                total = a * w if total is None else total + a * w
        return total is not None and not total.is_zero()


class ExplicitLts(Lts):
    def __init__(self, dim, initial, v0, edges: dict, targets, output=None):
        super().__init__(dim, initial, v0, output)
        self.edges = edges
        self.targets = frozenset(targets)

    def successors(self, s):
        return self.edges.get(s, ())

    def is_target(self, s) -> bool:
        return s in self.targets


def mat_vec(v: dict, rows: dict) -> dict:
    out: dict = {}
    for q, a in v.items():
        row = rows.get(q)
        if row:
            out = vec_axpy(out, a, row)
    return out


class SwtaLts(Lts):
    """LTS of an SWTA: states (U, g) with U the current support and g the
    domain-DFA state; edges per (symbol, color, side)."""

    def __init__(self, D: Swta):
        order = [D.root] + sorted(q for q in D.states if q != D.root)
        self.index = {q: i for i, q in enumerate(order)}
        self.order = order
        self.D = D
        self.dfa = DomainDfa(D)
        o = FieldScalar.one(D.m)
        output = {self.index[q]: o for q in D.leaves}
        super().__init__(len(order), (frozenset([D.root]), self.dfa.initial), {0: o}, output)
        self._rows: dict = {}
        self._succ: dict = {}

    def rows(self, sym, side: int) -> dict:
        key = (sym, side)
        r = self._rows.get(key)
        if r is None:
            r = {}
            a, c = sym
            for (q, a2, c2), forms in self.D.transitions.items():
                if a2 != a or c2 != c:
                    continue
                row = {}
                for p, coef in forms[side].items():
                    if not coef.is_zero():
                        row[self.index[p]] = embed(coef)
                r[self.index[q]] = row
            self._rows[key] = r
        return r

    def successors(self, s):
        out = self._succ.get(s)
        if out is not None:
            return out
        U, g = s
        out = []
        for sym in self.D.symbols:
            g2 = self.dfa.step(g, sym)
            if g2 is DEAD:
                continue
            a, c = sym
            for side in (0, 1):
                U2 = set()
                for u in U:
                    tr = self.D.transitions.get((u, a, c))
                    if tr is not None:
                        U2.update(tr[side].keys())
                out.append(((a, c, "LR"[side]), (frozenset(U2), g2), self.rows(sym, side)))
        self._succ[s] = out
        return out

    def is_target(self, s) -> bool:
        return self.dfa.accepting(s[1])


def build_lts(D: Swta) -> SwtaLts:
    return SwtaLts(D)


def zero_invariant(lts: Lts) -> Verdict:
    """Karr's algorithm: holds iff no path maps v0 to a nonzero observation at a target."""
    t0 = time.perf_counter()
    bases: dict = {}
    queue: deque = deque()
    stats = {"lts_states": 0, "vectors": 0, "max_basis": 0, "max_bits": 0}

    def path(node):
        labels = []
        while node[2] is not None:
            node, label = node[2]
            labels.append(label)
        return tuple(reversed(labels))

    def insert(s, v, parent):
        b = bases.get(s)
        if b is None:
            b = bases[s] = Basis(lts.dim)
            stats["lts_states"] += 1
        if not b.insert(v):
            return None
        assert len(b) <= lts.dim, "Karr basis exceeded the state count"
        stats["vectors"] += 1
        stats["max_basis"] = max(stats["max_basis"], len(b))
        stats["max_bits"] = max([stats["max_bits"]] + [x.bit_length() for x in v.values()])
        node = (s, v, parent)
        if lts.is_target(s) and lts.observe(v):
            return node
        queue.append(node)
        return None

    bad = insert(lts.initial, dict(lts.v0), None) if lts.v0 else None
    while bad is None and queue:
        node = queue.popleft()
        s, v, _ = node
        for label, s2, rows in lts.successors(s):
            v2 = mat_vec(v, rows)
            if not v2:
                continue
            bad = insert(s2, v2, (node, label))
            if bad is not None:
                break
    stats["seconds"] = time.perf_counter() - t0
    stats["dim"] = lts.dim
    if bad is None:
        return Verdict(True, reason="every reachable target value is zero", stats=stats)
    return Verdict(False, witness=path(bad), reason="nonzero value reachable at a target", stats=stats)


# ------------------------------------------------------------ domain stage


def _symbols(A: Swta, B: Swta) -> tuple:
    return tuple(dict.fromkeys(A.symbols + B.symbols))


def domain_relate(A: Swta, B: Swta, mode: str = EQUAL) -> Verdict:
    mode = _check_mode(mode)
    t0 = time.perf_counter()
    da, db = DomainDfa(A), DomainDfa(B)
    syms = _symbols(A, B)
    start = (da.initial, db.initial)
    seen = {start}
    queue = deque([(start, ())])
    while queue:
        (ga, gb), word = queue.popleft()
        ia, ib = da.accepting(ga), db.accepting(gb)
        if (mode == EQUAL and ia != ib) or (mode == INCLUDED and ia and not ib):
            side = "left only" if ia else "right only"
            return Verdict(
                False,
                witness=word,
                reason=f"domains differ: word defined on the {side}",
                stats={"pairs": len(seen), "seconds": time.perf_counter() - t0},
            )
        for sym in syms:
            na = da.step(ga, sym) if sym in A.symbols else DEAD
            nb = db.step(gb, sym) if sym in B.symbols else DEAD
            if na is DEAD and (nb is DEAD or mode == INCLUDED):
                continue
            pair = (na, nb)
            if pair not in seen:
                seen.add(pair)
                queue.append((pair, word + (sym,)))
    return Verdict(True, reason="domains related", stats={"pairs": len(seen), "seconds": time.perf_counter() - t0})


def functional_relate(A: Swta, B: Swta, mode: str = EQUAL) -> Verdict:
    mode = _check_mode(mode)
    t0 = time.perf_counter()
    dom = domain_relate(A, B, mode)
    if not dom.holds:
        dom.stats["stage"] = "domain"
        return dom
    D = diff_swta(A, B)
    v = zero_invariant(build_lts(D))
    stats = {"domain": dom.stats, "karr": v.stats, "diff_states": len(D.states)}
    stats["seconds"] = time.perf_counter() - t0
    if v.holds:
        return Verdict(True, reason=f"functionally {mode}", stats=stats)
    labels = v.witness[1:]
    word = tuple((a, c) for a, c, _ in labels)
    branch = "".join("0" if d == "L" else "1" for _, _, d in labels)
    stats["stage"] = "values"
    return Verdict(False, witness=word, branch=branch, reason="values differ", stats=stats)


def words_up_to(syms: tuple, L: int):
    for n in range(L + 1):
        yield from itertools.product(syms, repeat=n)


def witness_differs(A: Swta, B: Swta, word, mode: str = EQUAL) -> bool:
    mode = _check_mode(mode)
    ta, tb = evaluate(A, A.root, word), evaluate(B, B.root, word)
    if mode == EQUAL:
        return ta != tb
    return ta is not None and ta != tb


def bounded_oracle(A: Swta, B: Swta, L: int, mode: str = EQUAL) -> Verdict:
    """Brute force over all words of length <= L (pruned where both sides are dead)."""
    mode = _check_mode(mode)
    da, db = DomainDfa(A), DomainDfa(B)
    syms = _symbols(A, B)
    checked = 0
    frontier = [((), da.initial, db.initial)]
    for n in range(L + 1):
        nxt = []
        for word, ga, gb in frontier:
            if da.accepting(ga) or db.accepting(gb):
                checked += 1
                if witness_differs(A, B, word, mode):
                    return Verdict(False, witness=word, reason="values or definedness differ", stats={"words": checked})
            if n == L:
                continue
            for sym in syms:
                na, nb = da.step(ga, sym), db.step(gb, sym)
                if na is DEAD and (nb is DEAD or mode == INCLUDED):
                    continue
                nxt.append((word + (sym,), na, nb))
        frontier = nxt
    return Verdict(True, reason=f"no difference up to length {L}", stats={"words": checked})


# -------------------------------------------------------------- workflows


def image_chain(A: Swta, transducers: Iterable, sizes: Optional[list] = None) -> Swta:
    from .wtt import image

    for T in transducers:
        A = image(T, A)
        if sizes is not None:
            sizes.append(A.size())
    return A


def verify_triple(pre: Swta, transducers, post: Swta, mode: str = INCLUDED) -> Verdict:
    """{pre} C {post}: the image of pre under the circuit relates to post."""
    t0 = time.perf_counter()
    sizes = [pre.size()]
    res = image_chain(pre, transducers, sizes)
    t1 = time.perf_counter()
    v = functional_relate(res, post, mode)
    v.stats["sizes"] = sizes
    v.stats["image_seconds"] = t1 - t0
    v.stats["total_seconds"] = time.perf_counter() - t0
    return v


def equivalent_circuits(bases: Swta, left, right) -> Verdict:
    """Circuit equivalence over the inputs described by `bases`."""
    t0 = time.perf_counter()
    sl, sr = [bases.size()], [bases.size()]
    B1 = image_chain(bases, left, sl)
    B2 = image_chain(bases, right, sr)
    t1 = time.perf_counter()
    v = functional_relate(B1, B2, EQUAL)
    v.stats["sizes_left"] = sl
    v.stats["sizes_right"] = sr
    v.stats["image_seconds"] = t1 - t0
    v.stats["total_seconds"] = time.perf_counter() - t0
    return v
