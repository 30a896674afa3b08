"""Size-parameterized transducers from a single box.

A box is a fixed-depth transducer whose only leaf state is `id`, an
identity wire.  `parameterize` builds the transducer of the unbounded
staircase box; box shifted by n levels; box shifted by 2n levels; ...
The staircase stops where the input switches to primed symbols.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

from .algebra import one
from .swta import LinearForm, ModelError
from .wtt import L, R, DepthConflict, Wtt, compose_all, state_depths

PRIME = "'"
ID = "id"


class BoxError(ModelError):
    pass


class MissingId(BoxError):
    pass


class MissingIdLoop(BoxError):
    pass


class TupleLimit(BoxError):
    pass


def primed(a: str) -> str:
    return a + PRIME


def is_primed(a: str) -> bool:
    return a.endswith(PRIME)


@dataclass
class BoxTransducer:
    wtt: Wtt
    id_state: str
    depth: dict
    span: int  # depth at which id is entered
    symbols: tuple  # unprimed alphabet


def _is_loop(forms, q, m) -> bool:
    left, right = forms
    o = one(m)
    return left == LinearForm({(q, L): o}) and right == LinearForm({(q, R): o})


def validate_box(T: Wtt, id_state: Optional[str] = None) -> BoxTransducer:
    if id_state is None:
        if len(T.leaves) != 1:
            raise MissingId(f"a box needs exactly one leaf state, found {len(T.leaves)}")
        (id_state,) = T.leaves
    elif T.leaves != frozenset([id_state]):
        raise MissingId(f"leaf states must be exactly {{{id_state}}}")
    if T.root == id_state:
        raise MissingId("the box root is the id state itself")
    symbols = tuple(a for a in T.alphabet if not is_primed(a))
    for a in symbols + tuple(primed(a) for a in symbols):
        tr = T.transitions.get((id_state, a))
        if tr is None or not _is_loop(tr, id_state, T.m):
            raise MissingIdLoop(f"{id_state} lacks the identity loop on {a!r}")
    depth = state_depths(T, skip={id_state})
    enter = set()
    for q, d in depth.items():
        if q == id_state:
            continue
        for _a, (left, right) in T.by_state.get(q, ()):
            if any(p == id_state for p, _ in list(left.keys()) + list(right.keys())):
                enter.add(d + 1)
    if not enter:
        raise MissingId("id is never reached from the root")
    if len(enter) > 1:
        a, b = sorted(enter)[:2]
        raise DepthConflict(id_state, a, b)
    span = enter.pop()
    depth = dict(depth)
    depth[id_state] = span
    return BoxTransducer(T, id_state, depth, span, symbols)


def make_box(T: Wtt, symbols: Sequence[str], id_state: str = ID) -> BoxTransducer:
    """Turn a fixed-size gate transducer into a box over `symbols`.

    Transitions are copied onto every symbol, leaf states are merged into
    one identity wire and that wire loops on all symbols and their primes.
    """
    symbols = tuple(symbols)
    ends = {q for q in T.leaves if not T.by_state.get(q)}
    if not ends:
        raise MissingId("no leaf state without transitions")

    def f(q):
        return id_state if q in ends else q

    def g(key):
        return (f(key[0]), key[1])

    trans: dict = {}
    for (q, _a), (left, right) in T.transitions.items():
        forms = (left.renamed(g), right.renamed(g))
        for a in symbols:
            old = trans.get((f(q), a))
            if old is not None and old != forms:
                raise BoxError(f"state {q} has different transitions on different symbols")
            trans[(f(q), a)] = forms
    o = one(T.m)
    for a in symbols + tuple(primed(a) for a in symbols):
        trans[(id_state, a)] = (LinearForm({(id_state, L): o}), LinearForm({(id_state, R): o}))
    alphabet = symbols + tuple(primed(a) for a in symbols)
    box = Wtt(f(T.root), frozenset([id_state]), trans, alphabet, m=T.m)
    return validate_box(box, id_state)


def tuple_name(states: tuple, end: bool, gap: Optional[int] = None) -> str:
    name = "<" + ",".join(states) + ">" + (".end" if end else "")
    return name if gap is None else f"{name}@{gap}"


def parameterize(box: BoxTransducer, n: int, direction: str = "right", max_tuple: int = 64) -> Wtt:
    """The staircase transducer with offset n (new boxes appended per `direction`)."""
    if n < 1:
        raise ValueError("offset must be at least 1")
    if direction not in ("left", "right"):
        raise ValueError("direction must be 'left' or 'right'")
    T = box.wtt
    m = T.m
    ident = box.id_state
    o = one(m)

    def step(tup: tuple, w: str):
        """Compose the components' transitions on w, first component innermost."""
        cur = ({((), L): o}, {((), R): o})
        for q in tup:
            tr = T.transitions.get((q, w))
            if tr is None:
                return None
            new = []
            for form in tr:
                out: dict = {}
                for (p, d), a in form.items():
                    for (t, e), b in cur[0 if d == L else 1].items():
                        key = (t if p == ident else t + (p,), e)
                        v = a * b
                        out[key] = out[key] + v if key in out else v
                new.append(out)
            cur = (new[0], new[1])
        return cur

    def with_root(forms):
        if direction == "right":
            f = lambda t: t + (T.root,)  # noqa: E731
        else:
            f = lambda t: (T.root,) + t  # noqa: E731
        return tuple({(f(t), e): a for (t, e), a in form.items()} for form in forms)

    def key(t, end, i):
        # between two boxes (offset larger than the box) only the offset tells levels apart
        return (t, end, i if not t and not end else None)

    start = key((T.root,), False, n)
    pos = {start: n}
    queue = deque([start])
    trans = {}
    leaves = set()

    def emit(state, sym, forms, end, next_pos):
        left, right = forms
        out = []
        for form in (left, right):
            lf = {}
            for (t, e), a in form.items():
                target = key(t, end, next_pos)
                if len(t) > max_tuple:
                    raise TupleLimit(f"tuple of length {len(t)} exceeds the cap {max_tuple}")
                if target not in pos:
                    pos[target] = next_pos
                    queue.append(target)
                elif not end and pos[target] != next_pos:
                    raise BoxError(
                        f"state {tuple_name(*target)} reached at offsets {pos[target]} and {next_pos}"
                    )
                lf[(tuple_name(*target), e)] = a
            out.append(LinearForm(lf))
        trans[(tuple_name(*state), sym)] = (out[0], out[1])

    while queue:
        state = queue.popleft()
        tup, end, _ = state
        i = pos[state]
        if not tup and end:
            leaves.add(tuple_name(*state))
        for w in box.symbols:
            forms = step(tup, w)
            if forms is None:
                continue
            if i != 1 or end:
                emit(state, primed(w) if end else w, forms, end, i - 1)
            else:
                emit(state, primed(w), forms, True, 0)
                emit(state, w, with_root(forms), False, n)
    alphabet = box.symbols + tuple(primed(a) for a in box.symbols)
    states = frozenset(tuple_name(*s) for s in pos)
    return Wtt(tuple_name(*start), frozenset(leaves), trans, alphabet, states, m)


# ------------------------------------------------------- explicit staircases


def shifted_box(box: BoxTransducer, offset: int) -> Wtt:
    """The box started `offset` levels down, accepting primed and unprimed labels."""
    T = box.wtt
    alphabet = box.symbols + tuple(primed(a) for a in box.symbols)
    o = one(T.m)
    trans = {}
    for (q, a), forms in T.transitions.items():
        base = a[:-1] if is_primed(a) else a
        for s in (base, primed(base)):
            trans.setdefault((q, s), forms)
    pad = "pad"
    while any(q.startswith(pad) for q in T.states):
        pad += "_"
    for k in range(offset):
        nxt = f"{pad}{k + 1}" if k + 1 < offset else T.root
        for a in alphabet:
            trans[(f"{pad}{k}", a)] = (LinearForm({(nxt, L): o}), LinearForm({(nxt, R): o}))
    root = f"{pad}0" if offset else T.root
    return Wtt(root, T.leaves, trans, alphabet, m=T.m)


def explicit_staircase(box: BoxTransducer, n: int, direction: str, j: int) -> Wtt:
    """j boxes at offsets 0, n, 2n, ... composed in circuit order."""
    boxes = [shifted_box(box, k * n) for k in range(j)]
    if direction == "left":
        boxes.reverse()
    return compose_all(boxes)


def staircase_labels(level_symbols: Sequence[str], n: int, span: int, j: int) -> tuple:
    """The labels of the j-box instance, primed from depth jn - 1 on.

    The height is (j-1)n + span, or jn when the offset exceeds the box.
    `level_symbols` gives the unprimed symbol of each level (cycled).
    """
    h = (j - 1) * n + max(span, n)
    cut = (j - 1) * n + n - 1
    out = []
    for d in range(h):
        a = level_symbols[d % len(level_symbols)]
        out.append(primed(a) if d >= cut else a)
    return tuple(out)
