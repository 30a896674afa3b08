import pytest
from hypothesis import given
from hypothesis import strategies as st

from paramqv.algebra import AlgebraicComplex, make_number, one, parse_scalar, zero
from paramqv.trees import (
    Incompatible,
    PerfectTree,
    PositionError,
    basis_tree,
    combine,
    cons,
    format_tree,
    leaf,
    norm2,
    parse_tree,
    subtree,
)

from strategies import scalars, trees


def t(labels, *vals):
    return PerfectTree(tuple(labels), tuple(parse_scalar(str(v)) for v in vals))


HALF = "1/s2^2"


def test_combine_single_term_is_identity():
    x = t("ab", 1, 2, 3, 4)
    assert combine([(one(), x)]) == x


def test_combine_subtrees_of_worked_example():
    tr = t("a", 0, HALF)
    ts = PerfectTree(("a",), (zero(), -parse_scalar(HALF)))
    minus = -one()
    assert combine([(one(), tr), (one(), ts)]) == t("a", 0, 0)
    assert combine([(one(), tr), (minus, ts)]) == t("a", 0, 1)


def test_combine_height_mismatch():
    with pytest.raises(Incompatible):
        combine([(one(), t("a", 1, 0)), (one(), t("ab", 1, 0, 0, 0))])


def test_combine_label_mismatch():
    with pytest.raises(Incompatible):
        combine([(one(), t("a", 1, 0)), (one(), t("b", 1, 0))])


def test_combine_needs_terms():
    with pytest.raises(ValueError):
        combine([])


def test_subtree_left_child():
    t0, t1 = t("b", 1, 2), t("b", 3, 4)
    assert subtree(cons("a", t0, t1), "0") == t0


def test_subtree_empty_position():
    x = t("ab", 1, 2, 3, 4)
    assert subtree(x, "") == x


def test_subtree_outside_domain():
    with pytest.raises(PositionError):
        subtree(leaf(one()), "0")


def test_subtree_deep():
    x = t("abc", *range(8))
    assert subtree(x, "10") == t("c", 4, 5)


def test_format_vector_and_dirac():
    h = "1/s2^1"
    x = PerfectTree(("x", "x"), (parse_scalar(h), zero(), zero(), -parse_scalar(h)))
    assert format_tree(x) == "tree h=2 labels=x,x leaves=[1/s2^1,0,0,-1/s2^1]"
    assert format_tree(x, "dirac") == "1/s2^1|00> + -1/s2^1|11>"


def test_format_dirac_three_qubit_state():
    # the representable part of a three-qubit example state; sqrt3/4 has no exact form here
    x = t("xxx", "1/s2^1", 0, 0, 0, 0, "1/s2^4", "1/s2^4", 0)
    assert format_tree(x, "dirac") == "1/s2^1|000> + 1/s2^4|101> + 1/s2^4|110>"
    assert format_tree(x).startswith("tree h=3 labels=x,x,x leaves=[1/s2^1,0,0,0,0,1/s2^4")


def test_format_all_zero_and_leaf():
    assert format_tree(t("ab", 0, 0, 0, 0), "dirac") == "0"
    assert format_tree(leaf(make_number((0, 1, 0, 0), 1)), "dirac") == "(0,1,0,0)/s2^1"


def test_parse_tree_round_trip():
    x = t("ab", 1, "-1/s2^3", "(0,1,0,0)", 0)
    assert parse_tree(format_tree(x)) == x


def test_parse_tree_rejects_wrong_label_count():
    with pytest.raises(ValueError):
        parse_tree("tree h=2 labels=a leaves=[1,0,0,0]")


def test_basis_tree():
    b = basis_tree("10", ("x", "y"))
    assert [v == one() for v in b.leaves] == [False, False, True, False]


def test_norm2():
    x = t("a", "1/s2^1", "-1/s2^1")
    assert norm2(x) == one()


@given(st.integers(0, 3).flatmap(lambda h: trees(("a",) * h)), scalars(), scalars())
def test_combine_is_linear(x, a, b):
    assert combine([(a, x), (b, x)]) == combine([(a + b, x)])


@given(
    st.integers(0, 3).flatmap(lambda h: st.tuples(trees(("a",) * h), trees(("a",) * h)))
)
def test_subtree_of_cons(pair):
    t0, t1 = pair
    x = cons("b", t0, t1)
    assert subtree(x, "1") == t1
    assert subtree(x, "0") == t0


def test_tree_rejects_bad_leaf_count():
    with pytest.raises(ValueError):
        PerfectTree(("a",), (one(),))


def test_omega_leaf_values():
    w = AlgebraicComplex.omega(2)
    assert format_tree(leaf(w)) == "tree h=0 labels= leaves=[(0,0,1,0)]"
