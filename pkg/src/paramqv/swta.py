"""Synchronized weighted tree automata.

An SWTA maps a word of (symbol, color) pairs to a perfect tree.  Transitions
are keyed by (state, symbol, color) and produce a pair of linear forms over
states, one for each child.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Iterator, Optional, Sequence

from .algebra import DEFAULT_M, AlgebraicComplex, zero
from .trees import PerfectTree


class ModelError(ValueError):
    pass


class LinearForm:
    """Finite partial map from keys (states or ground terms) to scalars.

    A key present with coefficient 0 is different from an absent key: it
    still belongs to the support.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        if terms is None:
            terms = {}
        elif not isinstance(terms, dict):
            merged = {}
            for key, coef in terms:
                merged[key] = merged[key] + coef if key in merged else coef
            terms = merged
        self.terms = terms

    def support(self) -> frozenset:
        return frozenset(self.terms)

    def items(self):
        return self.terms.items()

    def keys(self):
        return self.terms.keys()

    def __getitem__(self, key):
        return self.terms[key]

    def __contains__(self, key) -> bool:
        return key in self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def is_empty(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinearForm):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def scaled(self, a: AlgebraicComplex) -> "LinearForm":
        return LinearForm({k: a * v for k, v in self.terms.items()})

    def plus(self, other: "LinearForm") -> "LinearForm":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return LinearForm(out)

    def zeroed(self) -> "LinearForm":
        return LinearForm({k: v * 0 for k, v in self.terms.items()})

    def renamed(self, f) -> "LinearForm":
        return LinearForm([(f(k), v) for k, v in self.terms.items()])

    def without_zeros(self) -> "LinearForm":
        return LinearForm({k: v for k, v in self.terms.items() if not v.is_zero()})

    def __repr__(self) -> str:
        if not self.terms:
            return "LinearForm(0)"
        return "LinearForm(" + " + ".join(f"{v}*{k}" for k, v in self.terms.items()) + ")"


def pair_name(left: str, right: str) -> str:
    return f"<{left},{right}>"


def state_sort_key(q: str):
    return (len(q), q)


@dataclass
class Swta:
    root: str
    leaves: frozenset
    transitions: dict
    alphabet: tuple = ()
    colors: tuple = ()
    states: frozenset = frozenset()
    m: int = DEFAULT_M

    def __post_init__(self):
        self.leaves = frozenset(self.leaves)
        alphabet = list(self.alphabet)
        colors = list(self.colors)
        states = set(self.states) | {self.root} | set(self.leaves)
        for (q, a, c), (left, right) in self.transitions.items():
            if a not in alphabet:
                alphabet.append(a)
            if c not in colors:
                colors.append(c)
            states.add(q)
            states.update(left.keys())
            states.update(right.keys())
        if self.states and not states <= set(self.states):
            raise ModelError(f"undeclared states {sorted(states - set(self.states))}")
        self.alphabet = tuple(alphabet)
        self.colors = tuple(colors)
        self.states = frozenset(states)

    @cached_property
    def by_state(self) -> dict:
        out: dict = {q: [] for q in self.states}
        for (q, a, c), forms in self.transitions.items():
            out[q].append(((a, c), forms))
        return out

    @cached_property
    def symbols(self) -> tuple:
        """All (symbol, color) pairs in lexicographic index order."""
        return tuple(itertools.product(self.alphabet, self.colors))

    def num_transitions(self) -> int:
        return len(self.transitions)

    def size(self) -> dict:
        return {"states": len(self.states), "transitions": len(self.transitions)}


def evaluate(A: Swta, q: str, word: Sequence) -> Optional[PerfectTree]:
    """The tree function of state q at `word`; None where it is undefined."""
    word = tuple(word)
    n = len(word)
    z = zero(A.m)
    one = AlgebraicComplex.integer(1, A.m)
    memo: dict = {}

    def ev(p: str, i: int):
        key = (p, i)
        if key in memo:
            return memo[key]
        if i == n:
            res = (one,) if p in A.leaves else None
        else:
            a, c = word[i]
            tr = A.transitions.get((p, a, c))
            if tr is None:
                res = None
            else:
                left = combine_form(tr[0], i + 1)
                right = combine_form(tr[1], i + 1) if left is not None else None
                res = None if right is None else left + right
        memo[key] = res
        return res

    def combine_form(form: LinearForm, i: int):
        acc = [z] * (1 << (n - i))
        for p, coef in form.items():
            sub = ev(p, i)
            if sub is None:
                return None
            if coef.is_zero():
                continue
            acc = [x + coef * y for x, y in zip(acc, sub)]
        return tuple(acc)

    leaves = ev(q, 0)
    if leaves is None:
        return None
    return PerfectTree(tuple(a for a, _ in word), leaves)


def tree_of(A: Swta, word: Sequence) -> Optional[PerfectTree]:
    return evaluate(A, A.root, word)


DEAD = None


class DomainDfa:
    """On-the-fly subset automaton over (symbol, color) pairs.

    States are frozensets of SWTA states; the dead state is None.
    """

    def __init__(self, A: Swta):
        self.A = A
        self.initial = frozenset([A.root])
        self._cache: dict = {}

    def step(self, S, sym):
        if S is DEAD:
            return DEAD
        key = (S, sym)
        if key in self._cache:
            return self._cache[key]
        a, c = sym
        out = set()
        res = None
        for s in S:
            tr = self.A.transitions.get((s, a, c))
            if tr is None:
                break
            out.update(tr[0].keys())
            out.update(tr[1].keys())
        else:
            res = frozenset(out)
        self._cache[key] = res
        return res

    def accepting(self, S) -> bool:
        # The empty set only arises under empty forms, whose subtrees are
        # zero trees defined for every continuation.
        return S is not DEAD and S <= self.A.leaves

    def run(self, word: Iterable):
        S = self.initial
        for sym in word:
            S = self.step(S, sym)
            if S is DEAD:
                return DEAD
        return S

    def accepts(self, word: Iterable) -> bool:
        return self.accepting(self.run(word))

    @property
    def explored(self) -> int:
        return len({S for S, _ in self._cache})


def domain_dfa(A: Swta) -> DomainDfa:
    return DomainDfa(A)


def emptiness_witness(A: Swta) -> Optional[tuple]:
    """Depth-first search for a word in the domain; None if there is none."""
    dfa = DomainDfa(A)
    seen = {dfa.initial}
    stack = [(dfa.initial, ())]
    while stack:
        S, word = stack.pop()
        if dfa.accepting(S):
            return word
        for sym in reversed(A.symbols):
            T = dfa.step(S, sym)
            if T is DEAD or T in seen:
                continue
            seen.add(T)
            stack.append((T, word + (sym,)))
    return None


def is_empty(A: Swta) -> bool:
    return emptiness_witness(A) is None


def words_of_length(A: Swta, n: int, labels: Optional[Sequence[str]] = None) -> Iterator[tuple]:
    """All domain words of length n (optionally with fixed symbols), lexicographically."""
    dfa = DomainDfa(A)

    def go(S, prefix):
        i = len(prefix)
        if i == n:
            if dfa.accepting(S):
                yield prefix
            return
        for sym in A.symbols:
            if labels is not None and sym[0] != labels[i]:
                continue
            T = dfa.step(S, sym)
            if T is not DEAD:
                yield from go(T, prefix + (sym,))

    yield from go(dfa.initial, ())


def accepts(A: Swta, t: PerfectTree) -> bool:
    if t.m != A.m:
        return False
    for word in words_of_length(A, t.height, t.labels):
        if evaluate(A, A.root, word) == t:
            return True
    return False


def tree_table(A: Swta, max_len: int) -> dict:
    """word -> tree for every defined word of length <= max_len."""
    out = {}
    for n in range(max_len + 1):
        for word in words_of_length(A, n):
            out[word] = evaluate(A, A.root, word)
    return out


def tree_set(A: Swta, max_len: int) -> set:
    return set(tree_table(A, max_len).values())


def rename(A: Swta, state_map, color_map=None) -> Swta:
    f = state_map if callable(state_map) else state_map.__getitem__
    g = (lambda c: c) if color_map is None else (color_map if callable(color_map) else color_map.__getitem__)
    trans = {
        (f(q), a, g(c)): (left.renamed(f), right.renamed(f))
        for (q, a, c), (left, right) in A.transitions.items()
    }
    return Swta(
        root=f(A.root),
        leaves=frozenset(f(q) for q in A.leaves),
        transitions=trans,
        alphabet=A.alphabet,
        colors=tuple(g(c) for c in A.colors),
        states=frozenset(f(q) for q in A.states),
        m=A.m,
    )


def union(A: Swta, B: Swta, root: str = "r") -> Swta:
    if A.m != B.m:
        raise ModelError("mixed moduli")
    A2 = rename(A, lambda q: f"a.{q}", lambda c: f"a{c}")
    B2 = rename(B, lambda q: f"b.{q}", lambda c: f"b{c}")
    trans = dict(A2.transitions)
    trans.update(B2.transitions)
    for X in (A2, B2):
        for (q, a, c), forms in X.transitions.items():
            if q == X.root:
                trans[(root, a, c)] = forms
    leaves = set(A2.leaves) | set(B2.leaves)
    if A.root in A.leaves or B.root in B.leaves:
        leaves.add(root)
    alphabet = tuple(dict.fromkeys(A.alphabet + B.alphabet))
    return Swta(
        root=root,
        leaves=frozenset(leaves),
        transitions=trans,
        alphabet=alphabet,
        colors=A2.colors + B2.colors,
        states=A2.states | B2.states | {root},
        m=A.m,
    )


def reachable_states(A: Swta) -> set:
    seen = {A.root}
    todo = [A.root]
    while todo:
        q = todo.pop()
        for _, (left, right) in A.by_state.get(q, ()):
            for p in itertools.chain(left.keys(), right.keys()):
                if p not in seen:
                    seen.add(p)
                    todo.append(p)
    return seen


def trim(A: Swta) -> Swta:
    """Drop states not reachable from the root."""
    keep = reachable_states(A)
    return Swta(
        root=A.root,
        leaves=frozenset(q for q in A.leaves if q in keep),
        transitions={k: v for k, v in A.transitions.items() if k[0] in keep},
        alphabet=A.alphabet,
        colors=A.colors,
        m=A.m,
    )


def prune_zero_terms(A: Swta) -> Swta:
    """Remove zero-coefficient entries from every linear form.

    This preserves tree values wherever both automata are defined, but it
    may enlarge the domain: a pruned state can be the only thing that made
    a word undefined.
    """
    trans = {
        k: (left.without_zeros(), right.without_zeros())
        for k, (left, right) in A.transitions.items()
    }
    return trim(Swta(A.root, A.leaves, trans, A.alphabet, A.colors, A.states, A.m))


def scale_root(A: Swta, a: AlgebraicComplex, side: str = "left") -> Swta:
    """Multiply one side of every root transition by a."""
    trans = dict(A.transitions)
    for key, (left, right) in A.transitions.items():
        if key[0] == A.root:
            trans[key] = (left.scaled(a), right) if side == "left" else (left, right.scaled(a))
    return Swta(A.root, A.leaves, trans, A.alphabet, A.colors, A.states, A.m)


def prime_tail(A: Swta, levels: int, suffix: str = "'") -> Swta:
    """Relabel so that exactly the last `levels` levels use primed symbols.

    States are split into an unprimed copy (more than `levels` levels remain)
    and countdown copies q@j (j primed levels remain).  Trees of height
    below `levels` are no longer accepted.
    """
    if levels < 1:
        return A

    def tag(q, j):
        return q if j is None else f"{q}@{j}"

    trans = {}
    for (q, a, c), (left, right) in A.transitions.items():
        ap = a + suffix
        trans[(tag(q, None), a, c)] = (left, right)
        trans[(tag(q, None), ap, c)] = (
            left.renamed(lambda p: tag(p, levels - 1)),
            right.renamed(lambda p: tag(p, levels - 1)),
        )
        for j in range(levels - 1, 0, -1):
            trans[(tag(q, j), ap, c)] = (
                left.renamed(lambda p, j=j: tag(p, j - 1)),
                right.renamed(lambda p, j=j: tag(p, j - 1)),
            )
    leaves = frozenset(tag(q, 0) for q in A.leaves)
    alphabet = A.alphabet + tuple(a + suffix for a in A.alphabet)
    return trim(Swta(A.root, leaves, trans, alphabet, A.colors, m=A.m))
