"""Weighted tree transducers: application, image of an SWTA, composition, sum.

A transition maps (state, symbol) to two ground-term forms.  A ground term is
the pair (q, "L") or (q, "R"): state q run on the left or right input subtree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

from .algebra import DEFAULT_M, one, zero
from .swta import LinearForm, ModelError, Swta, pair_name
from .trees import PerfectTree

GroundTermForm = LinearForm
L, R = "L", "R"


class InvalidSum(ModelError):
    pass


@dataclass
class Wtt:
    root: str
    leaves: frozenset
    transitions: dict
    alphabet: tuple = ()
    states: frozenset = frozenset()
    m: int = DEFAULT_M

    def __post_init__(self):
        self.leaves = frozenset(self.leaves)
        alphabet = list(self.alphabet)
        states = set(self.states) | {self.root} | set(self.leaves)
        for (q, a), (left, right) in self.transitions.items():
            if a not in alphabet:
                alphabet.append(a)
            states.add(q)
            for p, d in itertools.chain(left.keys(), right.keys()):
                if d not in (L, R):
                    raise ModelError(f"bad ground term side {d!r}")
                states.add(p)
        if self.states and not states <= set(self.states):
            raise ModelError(f"undeclared states {sorted(states - set(self.states))}")
        self.alphabet = tuple(alphabet)
        self.states = frozenset(states)

    @cached_property
    def by_state(self) -> dict:
        out: dict = {q: [] for q in self.states}
        for (q, a), forms in self.transitions.items():
            out[q].append((a, forms))
        return out

    def size(self) -> dict:
        return {"states": len(self.states), "transitions": len(self.transitions)}


def apply(T: Wtt, t: PerfectTree) -> Optional[PerfectTree]:
    """T_root(t), or None where undefined."""
    h = t.height
    z = zero(t.m)
    memo: dict = {}

    def run(q: str, depth: int, idx: int):
        key = (q, depth, idx)
        if key in memo:
            return memo[key]
        if depth == h:
            res = (t.leaves[idx],) if q in T.leaves else None
        else:
            tr = T.transitions.get((q, t.labels[depth]))
            res = None
            if tr is not None:
                left = side(tr[0], depth, idx)
                if left is not None:
                    right = side(tr[1], depth, idx)
                    if right is not None:
                        res = left + right
        memo[key] = res
        return res

    def side(form, depth, idx):
        acc = [z] * (1 << (h - depth - 1))
        for (p, d), coef in form.items():
            sub = run(p, depth + 1, 2 * idx + (d == R))
            if sub is None:
                return None
            if coef.is_zero():
                continue
            acc = [x + coef * y for x, y in zip(acc, sub)]
        return tuple(acc)

    leaves = run(T.root, 0, 0)
    if leaves is None:
        return None
    return PerfectTree(t.labels, leaves)


def substitute(x: LinearForm, left: LinearForm, right: LinearForm) -> LinearForm:
    """x(left, right): q(L) -> sum of left[p] <p,q>, q(R) likewise with right.

    Duplicate product keys are merged by summation; zero results are kept.
    """
    out: dict = {}
    for (q, d), a in x.items():
        src = left if d == L else right
        for p, b in src.items():
            key = pair_name(p, q)
            v = a * b
            out[key] = out[key] + v if key in out else v
    return LinearForm(out)


# Virtual identity state paired with states the other operand never reads.
# Such pairs carry zero weight and only keep the dropped subtrees' domain.
KEEP = "~"
# Explicit zero state standing in for empty forms of an SWTA.
ZERO = "~0"


def _keep_forms(m: int) -> tuple:
    o = one(m)
    return LinearForm({(KEEP, L): o}), LinearForm({(KEEP, R): o})


def materialize_empty_forms(A: Swta) -> Swta:
    """Replace every empty form by 0*ZERO, where ZERO is defined everywhere."""
    if not any(f.is_empty() for forms in A.transitions.values() for f in forms):
        return A
    z = zero(A.m)
    zf = LinearForm({ZERO: z})
    trans = {k: tuple(zf if f.is_empty() else f for f in forms) for k, forms in A.transitions.items()}
    for a in A.alphabet:
        for c in A.colors:
            trans[(ZERO, a, c)] = (zf, zf)
    return Swta(A.root, A.leaves | {ZERO}, trans, A.alphabet, A.colors, A.states | {ZERO}, A.m)


def _unread(tr: tuple, left: LinearForm, right: LinearForm) -> list:
    """Keys of left/right that no ground term of tr selects."""
    sides = {d for form in tr for (_q, d) in form.keys()}
    read, unread = set(), []
    for d, form in ((L, left), (R, right)):
        if d in sides:
            read.update(form.keys())
    for d, form in ((L, left), (R, right)):
        if d not in sides:
            unread.extend(k for k in form.keys() if k not in read)
    return list(dict.fromkeys(unread))


def image(T: Wtt, A: Swta, prune: bool = True) -> Swta:
    if T.m != A.m:
        raise ModelError("mixed moduli")
    A = materialize_empty_forms(A)
    keep = _keep_forms(A.m)
    z = zero(A.m)
    root = (A.root, T.root)
    todo = [root]
    seen = {root}
    names = {}
    trans = {}
    all_pairs = None
    if not prune:
        all_pairs = [(p, q) for p in A.states for q in T.states]
        todo = list(all_pairs)
        seen = set(all_pairs)

    def name(pq):
        n = names.get(pq)
        if n is None:
            n = names[pq] = pair_name(*pq)
        return n

    def visit(pq):
        if pq not in seen:
            seen.add(pq)
            todo.append(pq)

    while todo:
        p, q = todo.pop()
        for (a, c), (l1, r1) in A.by_state.get(p, ()):
            tr = keep if q == KEEP else T.transitions.get((q, a))
            if tr is None:
                continue
            left, right = substitute(tr[0], l1, r1), substitute(tr[1], l1, r1)
            for (x, d), _ in itertools.chain(tr[0].items(), tr[1].items()):
                for pp in (l1 if d == L else r1).keys():
                    visit((pp, x))
            unread = _unread(tr, l1, r1)
            if unread:
                left = left.plus(LinearForm({pair_name(pp, KEEP): z for pp in unread}))
                for pp in unread:
                    visit((pp, KEEP))
            trans[(name((p, q)), a, c)] = (left, right)
    leaves = frozenset(
        name(pq) for pq in seen if pq[0] in A.leaves and (pq[1] in T.leaves or pq[1] == KEEP)
    )
    states = frozenset(name(pq) for pq in seen)
    return Swta(name(root), leaves, trans, A.alphabet, A.colors, states, A.m)


def _subst_ground(x: LinearForm, left: LinearForm, right: LinearForm) -> LinearForm:
    """x over T2 ground terms, left/right over T1 ground terms -> product ground terms."""
    out: dict = {}
    for (q, d), a in x.items():
        src = left if d == L else right
        for (p, e), b in src.items():
            key = (pair_name(p, q), e)
            v = a * b
            out[key] = out[key] + v if key in out else v
    return LinearForm(out)


def compose(T2: Wtt, T1: Wtt, prune: bool = True) -> Wtt:
    """T2 after T1, over product states <q1,q2>."""
    if T1.m != T2.m:
        raise ModelError("mixed moduli")
    keep = _keep_forms(T1.m)
    z = zero(T1.m)
    root = (T1.root, T2.root)
    if prune:
        todo, seen = [root], {root}
    else:
        seen = {(p, q) for p in T1.states for q in T2.states}
        todo = list(seen)

    def visit(pq):
        if pq not in seen:
            seen.add(pq)
            todo.append(pq)

    trans = {}
    while todo:
        p, q = todo.pop()
        for a, (l1, r1) in T1.by_state.get(p, ()):
            tr = keep if q == KEEP else T2.transitions.get((q, a))
            if tr is None:
                continue
            left, right = _subst_ground(tr[0], l1, r1), _subst_ground(tr[1], l1, r1)
            for (x, d), _ in itertools.chain(tr[0].items(), tr[1].items()):
                for (pp, _e) in (l1 if d == L else r1).keys():
                    visit((pp, x))
            unread = _unread(tr, l1, r1)
            if unread:
                left = left.plus(LinearForm({(pair_name(pp, KEEP), e): z for pp, e in unread}))
                for pp, _e in unread:
                    visit((pp, KEEP))
            trans[(pair_name(p, q), a)] = (left, right)
    leaves = frozenset(
        pair_name(*pq) for pq in seen if pq[0] in T1.leaves and (pq[1] in T2.leaves or pq[1] == KEEP)
    )
    states = frozenset(pair_name(*pq) for pq in seen)
    alphabet = tuple(a for a in T1.alphabet if a in T2.alphabet)
    return Wtt(pair_name(*root), leaves, trans, alphabet, states, T1.m)


def compose_all(transducers, prune: bool = True) -> Wtt:
    """Compose a circuit given in application order (first gate first)."""
    it = iter(transducers)
    acc = next(it)
    for T in it:
        acc = compact(compose(T, acc, prune))
    return acc


def rename(T: Wtt, state_map) -> Wtt:
    f = state_map if callable(state_map) else state_map.__getitem__
    g = lambda key: (f(key[0]), key[1])  # noqa: E731
    trans = {
        (f(q), a): (left.renamed(g), right.renamed(g))
        for (q, a), (left, right) in T.transitions.items()
    }
    return Wtt(
        f(T.root),
        frozenset(f(q) for q in T.leaves),
        trans,
        T.alphabet,
        frozenset(f(q) for q in T.states),
        T.m,
    )


def reachable_states(T: Wtt) -> list:
    """States reachable from the root, in breadth-first order."""
    order = [T.root]
    seen = {T.root}
    i = 0
    while i < len(order):
        q = order[i]
        i += 1
        for a in T.alphabet:
            tr = T.transitions.get((q, a))
            if tr is None:
                continue
            for p, _ in itertools.chain(tr[0].keys(), tr[1].keys()):
                if p not in seen:
                    seen.add(p)
                    order.append(p)
    return order


def trim(T: Wtt) -> Wtt:
    keep = set(reachable_states(T))
    return Wtt(
        T.root,
        frozenset(q for q in T.leaves if q in keep),
        {k: v for k, v in T.transitions.items() if k[0] in keep},
        T.alphabet,
        frozenset(keep),
        T.m,
    )


def compact(T: Wtt, prefix: str = "t") -> Wtt:
    """Trim and rename states to prefix0, prefix1, ... in breadth-first order."""
    order = reachable_states(T)
    names = {q: f"{prefix}{i}" for i, q in enumerate(order)}
    return rename(trim(T), names)


def add(Ta: Wtt, Tb: Wtt, root: str = "s") -> Wtt:
    """The transducer computing Ta(t) + Tb(t).

    The fresh root merges the two root transitions on every symbol where
    both are defined (elsewhere the sum is undefined).
    """
    if Ta.m != Tb.m:
        raise ModelError("mixed moduli")
    if Ta.root in Ta.leaves or Tb.root in Tb.leaves:
        raise InvalidSum("cannot add transducers whose root is a leaf state")
    A = rename(Ta, lambda q: f"a.{q}")
    B = rename(Tb, lambda q: f"b.{q}")
    trans = dict(A.transitions)
    trans.update(B.transitions)
    shared = [a for a in A.alphabet if (A.root, a) in A.transitions and (B.root, a) in B.transitions]
    if not shared:
        raise InvalidSum("the two roots have no transition on a common symbol")
    for a in shared:
        la, ra = A.transitions[(A.root, a)]
        lb, rb = B.transitions[(B.root, a)]
        trans[(root, a)] = (la.plus(lb), ra.plus(rb))
    alphabet = tuple(dict.fromkeys(Ta.alphabet + Tb.alphabet))
    return trim(Wtt(root, A.leaves | B.leaves, trans, alphabet, A.states | B.states | {root}, Ta.m))



class DepthConflict(ModelError):
    def __init__(self, state, d1, d2):
        super().__init__(f"state {state} occurs at depths {d1} and {d2}")
        self.state, self.d1, self.d2 = state, d1, d2


def state_depths(T: Wtt, skip=()) -> dict:
    """Breadth-first depth of every reachable state.

    Raises DepthConflict when a state is reached at two different depths;
    states in `skip` are neither expanded nor checked.
    """
    depth = {T.root: 0}
    order = [T.root]
    i = 0
    while i < len(order):
        q = order[i]
        i += 1
        if q in skip:
            continue
        for _a, (left, right) in T.by_state.get(q, ()):
            for p, _ in itertools.chain(left.keys(), right.keys()):
                if p in skip:
                    continue
                if p not in depth:
                    depth[p] = depth[q] + 1
                    order.append(p)
                elif depth[p] != depth[q] + 1:
                    raise DepthConflict(p, depth[p], depth[q] + 1)
    return depth
