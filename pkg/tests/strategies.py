"""Hypothesis strategies for scalars, trees and small automata."""

from hypothesis import strategies as st

from paramqv.algebra import make_number
from paramqv.swta import LinearForm, Swta
from paramqv.trees import PerfectTree
from paramqv.wtt import Wtt

COEF = st.integers(min_value=-3, max_value=3)


@st.composite
def scalars(draw, m=4, kmax=3, bound=3):
    coeffs = draw(st.lists(st.integers(-bound, bound), min_size=m, max_size=m))
    return make_number(coeffs, draw(st.integers(0, kmax)), m)


@st.composite
def small_scalars(draw, m=4):
    """Mostly simple values so products in deep trees stay readable."""
    return draw(
        st.one_of(
            st.sampled_from([make_number((v, 0, 0, 0), 0, m) for v in (-1, 0, 1, 2)]),
            st.sampled_from([make_number((1, 0, 0, 0), 1, m), make_number((0, 1, 0, 0), 0, m)]),
            scalars(m, kmax=1, bound=1),
        )
    )


@st.composite
def trees(draw, labels, m=4, elements=None):
    elements = elements or scalars(m)
    leaves = draw(st.lists(elements, min_size=1 << len(labels), max_size=1 << len(labels)))
    return PerfectTree(tuple(labels), tuple(leaves))


def labels_of(alphabet, max_height=3, min_height=0):
    return st.lists(st.sampled_from(alphabet), min_size=min_height, max_size=max_height).map(tuple)


@st.composite
def linear_forms(draw, keys, m=4, allow_empty=False):
    keys = list(keys)
    chosen = draw(st.lists(st.sampled_from(keys), min_size=0 if allow_empty else 1, max_size=min(3, len(keys)), unique=True))
    return LinearForm({k: draw(small_scalars(m)) for k in chosen})


@st.composite
def swtas(draw, max_states=4, alphabet=("a",), colors=("1", "2"), m=4, density=0.7, empty_forms=True):
    n = draw(st.integers(1, max_states))
    states = [f"q{i}" for i in range(n)]
    leaves = draw(st.lists(st.sampled_from(states), min_size=1, max_size=n, unique=True))
    trans = {}
    for q in states:
        for a in alphabet:
            for c in colors:
                if draw(st.floats(0, 1)) < density:
                    trans[(q, a, c)] = (
                        draw(linear_forms(states, m, allow_empty=empty_forms)),
                        draw(linear_forms(states, m, allow_empty=empty_forms)),
                    )
    return Swta("q0", frozenset(leaves), trans, tuple(alphabet), tuple(colors), frozenset(states), m)


@st.composite
def wtts(draw, max_states=3, alphabet=("a", "b"), m=4, density=0.85):
    n = draw(st.integers(1, max_states))
    states = [f"p{i}" for i in range(n)]
    ground = [(q, d) for q in states for d in ("L", "R")]
    leaves = draw(st.lists(st.sampled_from(states), min_size=1, max_size=n, unique=True))
    trans = {}
    for q in states:
        for a in alphabet:
            if draw(st.floats(0, 1)) < density:
                trans[(q, a)] = (draw(linear_forms(ground, m)), draw(linear_forms(ground, m)))
    return Wtt("p0", frozenset(leaves), trans, tuple(alphabet), frozenset(states), m)


@st.composite
def swta_pairs(draw, max_states=4, alphabet=("a",), colors=("1", "2")):
    """Pairs that are equal, slightly perturbed, or unrelated."""
    A = draw(swtas(max_states, alphabet, colors))
    how = draw(st.sampled_from(["same", "renamed", "perturbed", "fresh"]))
    if how == "same":
        return A, A
    if how == "renamed":
        from paramqv.swta import rename

        return A, rename(A, lambda q: "b" + q)
    if how == "perturbed" and A.transitions:
        key = draw(st.sampled_from(sorted(A.transitions)))
        left, right = A.transitions[key]
        trans = dict(A.transitions)
        trans[key] = (draw(linear_forms(sorted(A.states))), right)
        return A, Swta(A.root, A.leaves, trans, A.alphabet, A.colors, A.states, A.m)
    return A, draw(swtas(max_states, alphabet, colors))
