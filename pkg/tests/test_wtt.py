import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paramqv.algebra import one, parse_scalar
from paramqv.gates import hadamard, identity2, identity_wtt, pauli_x, single_qubit_wtt, zero_side
from paramqv.swta import LinearForm, Swta, evaluate
from paramqv.trees import PerfectTree, basis_tree, combine, leaf
from paramqv.wtt import InvalidSum, Wtt, add, apply, compose, image, substitute

import fixtures
from oracles import Cyc, key_of, leaves_of, naive_apply, naive_eval, tree_set
from strategies import scalars, swtas, trees, wtts

S = parse_scalar
H = S("1/s2^1")


def ground(*terms):
    return LinearForm({(q, d): S(v) for q, d, v in terms})


# ------------------------------------------------------------------ apply


def test_apply_worked_example():
    t = PerfectTree(("a", "a"), tuple(S(v) for v in ("0", "0", "0", "1")))
    out = apply(fixtures.t_ex(), t)
    assert [str(v) for v in out.leaves] == ["0", "-1/s2^1", "0", "1/s2^1"]


def test_apply_worked_example_matches_naive():
    T = fixtures.t_ex()
    t = PerfectTree(("a", "a"), tuple(S(v) for v in ("0", "0", "0", "1")))
    assert leaves_of(apply(T, t)) == naive_apply(T, t.labels, leaves_of(t))


@given(st.integers(0, 3).flatmap(lambda h: trees(("a",) * h)))
def test_identity_transducer(t):
    assert apply(identity_wtt(("a",)), t) == t


def test_apply_leaf_with_inner_root():
    T = single_qubit_wtt(pauli_x(), 1, 1, ("a",))
    assert apply(T, leaf(one())) is None
    # a leaf root returns the leaf unchanged
    assert apply(fixtures.t_ex(), leaf(one())) == leaf(one())


def test_apply_missing_symbol():
    assert apply(fixtures.t_ex(), basis_tree("0", ("b",))) is None


# ------------------------------------------------------------------ image


def test_substitution_kernel():
    x = ground(("q", "L", "1/s2^1"), ("q", "R", "1"), ("s", "R", "-3"))
    left = LinearForm({"p": S("1"), "u": S("0")})
    right = LinearForm({"p": S("-2"), "u": S("1/s2^1")})
    got = substitute(x, left, right)
    want = {
        "<p,q>": Cyc.of(1) * Cyc.from_scalar(H) - Cyc.of(2),
        "<u,q>": Cyc.from_scalar(H),
        "<p,s>": Cyc.of(6),
        "<u,s>": Cyc.of(-3) * Cyc.from_scalar(H),
    }
    assert set(got.keys()) == set(want)
    for k, v in want.items():
        assert Cyc.from_scalar(got[k]) == v
    # (1 - 2 sqrt2)/sqrt2 written out
    assert str(got["<p,q>"]) == "(1,-2,0,2)/s2^1"


def test_image_of_hadamard_on_bases():
    A1 = image(fixtures.t_h(), fixtures.a_bases())
    root = "<q,s>"
    assert A1.root == root
    assert A1.transitions[(root, "a", "1")] == (LinearForm({root: H}), LinearForm({root: H}))
    assert A1.transitions[(root, "a", "2")] == (LinearForm({root: H}), LinearForm({root: -H}))


def test_image_twice_restores_bases():
    A2 = image(fixtures.t_h(), image(fixtures.t_h(), fixtures.a_bases()))
    r = A2.root
    zero = S("0")
    assert A2.transitions[(r, "a", "1")] == (LinearForm({r: one()}), LinearForm({r: zero}))
    assert A2.transitions[(r, "a", "2")] == (LinearForm({r: zero}), LinearForm({r: one()}))
    for n in range(4):
        for w in itertools.product(A2.symbols, repeat=n):
            assert evaluate(A2, r, w) == evaluate(fixtures.a_bases(), "q", w)


def test_image_keeps_colors():
    A = fixtures.a_ex()
    assert image(identity_wtt(("a",)), A).colors == A.colors


def test_image_identity_matches_language():
    A = fixtures.a_ex()
    assert tree_set(image(identity_wtt(("a",)), A), 2) == tree_set(A, 2)


# ---------------------------------------------------------------- compose


def test_compose_rx_after_h_root():
    C = compose(fixtures.t_rx_even(), fixtures.t_h())
    assert C.root == "<s,u>"
    left, right = C.transitions[("<s,u>", "a")]
    a, b = S("(1,0,-1,0)/s2^2"), S("(1,0,1,0)/s2^2")
    assert left == LinearForm({("<s,v>", "L"): a, ("<s,v>", "R"): b})
    assert right == LinearForm({("<s,v>", "L"): a, ("<s,v>", "R"): -b})
    # (1-i)/2 and (1+i)/2 in floating point
    assert abs(Cyc.from_scalar(a).to_complex() - (1 - 1j) / 2) < 1e-12
    assert abs(Cyc.from_scalar(b).to_complex() - (1 + 1j) / 2) < 1e-12


def test_compose_rx_after_h_second_transition():
    C = compose(fixtures.t_rx_even(), fixtures.t_h())
    left, right = C.transitions[("<s,v>", "a")]
    assert left == LinearForm({("<s,u>", "L"): H, ("<s,u>", "R"): H})
    assert right == LinearForm({("<s,u>", "L"): H, ("<s,u>", "R"): -H})


@settings(max_examples=50)
@given(wtts(), st.integers(0, 4).flatmap(lambda h: trees(("a", "b", "a", "b")[:h])))
def test_compose_with_identity(T, t):
    I = identity_wtt(("a", "b"))
    assert apply(compose(I, T), t) == apply(T, t)
    assert apply(compose(T, I), t) == apply(T, t)


# -------------------------------------------------------------------- add


@settings(max_examples=50)
@given(wtts(density=1.0), wtts(density=1.0), st.integers(1, 3).flatmap(lambda h: trees(("a", "b", "b")[:h])))
def test_add_law(Ta, Tb, t):
    if Ta.root in Ta.leaves or Tb.root in Tb.leaves:
        with pytest.raises(InvalidSum):
            add(Ta, Tb)
        return
    ra, rb = apply(Ta, t), apply(Tb, t)
    got = apply(add(Ta, Tb), t)
    if ra is None or rb is None:
        assert got is None
    else:
        assert got == combine([(one(), ra), (one(), rb)])


def test_add_builds_cnot():
    sym = ("x1", "x2")
    TX = single_qubit_wtt(pauli_x(), 2, 2, sym)
    TI = single_qubit_wtt(identity2(), 2, 2, sym)
    C = add(zero_side(TX, "x1", "left"), zero_side(TI, "x1", "right"))
    table = {"00": "00", "01": "01", "10": "11", "11": "10"}
    for i, o in table.items():
        assert apply(C, basis_tree(i, sym)) == basis_tree(o, sym)


@given(st.integers(1, 3).flatmap(lambda h: trees(("a",) * h)))
def test_add_self_doubles(t):
    T = single_qubit_wtt(hadamard(), 1, t.height, ("a",) * t.height)
    got = apply(add(T, T), t)
    assert got == combine([(S("2"), apply(T, t))])


def test_add_rejects_disjoint_symbols():
    a = Wtt("p", frozenset(["p2"]), {("p", "a"): (ground(("p2", "L", "1")), ground(("p2", "R", "1")))})
    b = Wtt("p", frozenset(["p2"]), {("p", "b"): (ground(("p2", "L", "1")), ground(("p2", "R", "1")))})
    with pytest.raises(InvalidSum):
        add(a, b)


# ------------------------------------------------------------- properties


def _naive_tree(T, t):
    return naive_apply(T, t.labels, leaves_of(t))


@settings(max_examples=100)
@given(wtts(), wtts(), st.integers(0, 4).flatmap(lambda h: trees(("a", "b", "b", "a")[:h])))
def test_composition_law(T1, T2, t):
    mid = apply(T1, t)
    want = None if mid is None else apply(T2, mid)
    got = apply(compose(T2, T1), t)
    assert got == want
    # and against the unmemoized recursion
    ref_mid = _naive_tree(T1, t)
    ref = None if ref_mid is None else naive_apply(T2, t.labels, ref_mid)
    assert (got is None) == (ref is None)
    if got is not None:
        assert leaves_of(got) == ref


@settings(max_examples=50)
@given(wtts(alphabet=("a",)), swtas(max_states=3, alphabet=("a",)))
def test_image_language(T, A):
    applied = set()
    syms = list(itertools.product(A.alphabet, A.colors))
    for n in range(4):
        for w in itertools.product(syms, repeat=n):
            v = naive_eval(A, A.root, w)
            if v is None:
                continue
            out = naive_apply(T, tuple(a for a, _ in w), v)
            if out is not None:
                applied.add((tuple(a for a, _ in w), key_of(out)))
    assert tree_set(image(T, A), 3) == applied


@settings(max_examples=50)
@given(wtts(alphabet=("a",)), swtas(max_states=3, alphabet=("a",)))
def test_image_pointwise_and_colors(T, A):
    B = image(T, A)
    assert set(B.colors) == set(A.colors)
    for n in range(4):
        for w in itertools.product(B.symbols, repeat=n):
            tb = evaluate(B, B.root, w)
            if tb is not None:
                ta = evaluate(A, A.root, w)
                assert ta is not None
                assert apply(T, ta) == tb


@settings(max_examples=40)
@given(wtts(), wtts(), wtts(), st.integers(0, 3).flatmap(lambda h: trees(("a", "b", "a")[:h])))
def test_compose_associative_extensionally(T1, T2, T3, t):
    left = compose(T3, compose(T2, T1))
    right = compose(compose(T3, T2), T1)
    assert apply(left, t) == apply(right, t)


@settings(max_examples=50)
@given(wtts(), st.integers(0, 3).flatmap(lambda h: trees(("a", "b", "a")[:h])))
def test_apply_matches_naive(T, t):
    got = apply(T, t)
    ref = _naive_tree(T, t)
    assert (got is None) == (ref is None)
    if got is not None:
        assert leaves_of(got) == ref


@given(scalars(), scalars(), st.integers(1, 3).flatmap(lambda h: st.tuples(trees(("a",) * h), trees(("a",) * h))))
def test_apply_is_linear(a, b, pair):
    t1, t2 = pair
    T = fixtures.t_h()
    lhs = apply(T, combine([(a, t1), (b, t2)]))
    rhs = combine([(a, apply(T, t1)), (b, apply(T, t2))])
    assert lhs == rhs


def test_image_keeps_domain_of_empty_forms():
    # the empty form stands for a zero subtree; T must still be defined on it
    A = Swta("q", frozenset(["q"]), {("q", "a", "1"): (LinearForm(), LinearForm())})
    T = Wtt("p", frozenset(["p"]), {("p", "a"): (ground(("p", "L", "1")), ground(("dead", "L", "1")))})
    t = evaluate(A, "q", (("a", "1"),))
    assert apply(T, t) is None
    assert evaluate(image(T, A), "<q,p>", (("a", "1"),)) is None


def test_image_keeps_domain_of_unread_side():
    # T never reads the right subtree, yet A is undefined there
    A = Swta(
        "q",
        frozenset(["u"]),
        {("q", "a", "1"): (LinearForm({"u": one()}), LinearForm({"x": one()}))},
    )
    T = Wtt("p", frozenset(["p"]), {("p", "a"): (ground(("p", "L", "1")), ground(("p", "L", "1")))})
    w = (("a", "1"),)
    assert evaluate(A, "q", w) is None
    assert evaluate(image(T, A), "<q,p>", w) is None


def test_compose_keeps_domain_of_unread_side():
    # T1 is undefined on the right subtree; T2 only reads its left output
    T1 = Wtt(
        "p",
        frozenset(["p"]),
        {("p", "a"): (ground(("p", "L", "1")), ground(("x", "R", "1")))},
    )
    T2 = Wtt("q", frozenset(["q"]), {("q", "a"): (ground(("q", "L", "1")), ground(("q", "L", "1")))})
    t = basis_tree("0", ("a",))
    assert apply(T1, t) is None
    assert apply(compose(T2, T1), t) is None
