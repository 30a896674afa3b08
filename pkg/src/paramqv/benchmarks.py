"""Bundled case studies.

Each builder returns a `Case`: either a pre/post triple around a list of
transducers, or two transducer lists compared over a set of basis inputs.
`gates(j)` gives the explicit gate list of the j-th family member so the
symbolic result can be cross-checked by dense simulation.

The pre/post automata of the adder and the syndrome-extraction circuit are
our own constructions; the layouts are documented next to each builder.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

from .algebra import DEFAULT_M, AlgebraicComplex, one, zero
from .gates import (
    Unitary2,
    broadcast_wtt,
    controlled_wtt,
    hadamard,
    pauli_x,
    pauli_z,
    rz_quarter_pi,
    s_gate,
    single_qubit_wtt,
    sqrt_x,
)
from .dense import run_circuit
from .models import parse_model, save_model
from .paramgen import BoxTransducer, make_box, parameterize, primed
from .swta import LinearForm, Swta, evaluate, prime_tail, words_of_length
from .trees import PerfectTree
from .verify import Verdict, equivalent_circuits, verify_triple
from .wtt import L, R, Wtt, apply, compose_all

VERIFY, EQUIV = "verify", "equiv"


@dataclass
class Param:
    """A staircase stage, kept symbolic so bundles can store the box instead."""

    name: str
    box: BoxTransducer
    offset: int
    direction: str = "right"

    def build(self) -> Wtt:
        return parameterize(self.box, self.offset, self.direction)


def materialize(stages) -> list:
    cache: dict = {}
    out = []
    for s in stages:
        if isinstance(s, Param):
            key = (s.name, s.offset, s.direction)
            if key not in cache:
                cache[key] = s.build()
            out.append(cache[key])
        else:
            out.append(s)
    return out


@dataclass
class Case:
    name: str
    kind: str
    m: int = DEFAULT_M
    pre: Optional[Swta] = None
    post: Optional[Swta] = None
    circuit: list = field(default_factory=list)
    bases: Optional[Swta] = None
    left: list = field(default_factory=list)
    right: list = field(default_factory=list)
    mode: str = "equal"
    reconstructed: bool = False
    # j -> (qubit count, gate list) or (qubits, left gates, right gates)
    gates: Optional[Callable] = None
    notes: str = ""


def _form(*terms) -> LinearForm:
    return LinearForm({q: a for q, a in terms})


def _basis_pair(bit: int, q: str, m: int) -> tuple:
    o, z = one(m), zero(m)
    lo, hi = (o, z) if bit == 0 else (z, o)
    return _form((q, lo)), _form((q, hi))


def _ground(q, side, a):
    return (q, side), a


def _box(gate_wtts: list, symbols) -> BoxTransducer:
    return make_box(compose_all(gate_wtts), symbols)


def _cx(c, t, width, m):
    return controlled_wtt(pauli_x(m), t, [c], width)


def _ccx(c1, c2, t, width, m):
    return controlled_wtt(pauli_x(m), t, [c1, c2], width)


# ---------------------------------------------------------------- BV

BV_PRE = """swta m=4
root s1
leaves s2
trans s1 w 1 -> (1*s1 | 0*s1)
trans s1 a 1 -> (0*s2 | 1*s2)
"""

BV_POST = """swta m=4
root g
leaves c
trans g w 1 -> (0*h | 1*h)
trans g a 1 -> (0*c | 1*c)
trans h w 1 -> (1*g | 0*g)
trans h a 1 -> (0*c | 1*c)
"""

# secret (01)* instead of (10)*(1 + eps)
BV_POST_MUTATED = """swta m=4
root g
leaves c
trans g w 1 -> (1*h | 0*h)
trans g a 1 -> (0*c | 1*c)
trans h w 1 -> (0*g | 1*g)
trans h a 1 -> (0*c | 1*c)
"""

BV_H = """wtt m=4
root u
leaves u
trans u w -> (1/s2^1*u(L) + 1/s2^1*u(R) | 1/s2^1*u(L) + -1/s2^1*u(R))
trans u a -> (1/s2^1*u(L) + 1/s2^1*u(R) | 1/s2^1*u(L) + -1/s2^1*u(R))
"""

BV_CX = """wtt m=4
root r0
leaves l
trans r0 w -> (1*s0(L) | 1*s1(R))
trans s0 w -> (1*r0(L) | 1*r0(R))
trans s1 w -> (1*r1(L) | 1*r1(R))
trans r1 w -> (1*s1(L) | 1*s0(R))
trans r0 a -> (1*l(L) | 1*l(R))
trans s0 a -> (1*l(L) | 1*l(R))
trans s1 a -> (1*l(R) | 1*l(L))
trans r1 a -> (1*l(R) | 1*l(L))
"""

# the three-stage result with product states renamed
BV_RESULT = """swta m=4
root gu
leaves su
trans gu w 1 -> (1/s2^2*du + 1/s2^2*eu | 1/s2^2*du + -1/s2^2*eu)
trans gu a 1 -> (0*su | 1*su)
trans du w 1 -> (1*gu | 0*gu)
trans du a 1 -> (0*su | 1*su)
trans eu w 1 -> (1*mu | 0*mu)
trans eu a 1 -> (0*su | -1*su)
trans mu w 1 -> (1/s2^2*eu + 1/s2^2*du | 1/s2^2*eu + -1/s2^2*du)
trans mu a 1 -> (0*su | -1*su)
"""


def bv_secret(n: int) -> str:
    return "".join("1" if i % 2 == 0 else "0" for i in range(n))


def bv(mutated: bool = False) -> Case:
    m = 4
    H = parse_model(BV_H, "bv_h.wtt", m)
    CX = parse_model(BV_CX, "bv_cx.wtt", m)

    def gates(n):
        h = hadamard(m)
        seq = [(h, q, []) for q in range(1, n + 2)]
        seq += [(pauli_x(m), n + 1, [i + 1]) for i, b in enumerate(bv_secret(n)) if b == "1"]
        seq += [(h, q, []) for q in range(1, n + 2)]
        return n + 1, seq

    return Case(
        name="bv-mutated" if mutated else "bv",
        kind=VERIFY,
        m=m,
        pre=parse_model(BV_PRE, "bv_pre.swta", m),
        post=parse_model(BV_POST_MUTATED if mutated else BV_POST, "bv_post.swta", m),
        circuit=[H, CX, H],
        gates=gates,
        notes="secret (01)*, expected to fail" if mutated else "secret (10)*(1+eps)",
    )


# ---------------------------------------------------------------- helpers


def basis_machine_swta(start, step: Callable, accepting: Callable, m: int, root: str = "r") -> Swta:
    """SWTA of the basis states produced by a deterministic machine.

    step(state, symbol, color) returns (output bit, next state) or None.
    Symbols and colors are discovered from `step` via `step.alphabet` and
    `step.colors`.
    """
    names = {start: root}
    todo = [start]
    trans = {}
    leaves = set()

    def name(s):
        if s not in names:
            names[s] = f"q{len(names)}"
            todo.append(s)
        return names[s]

    while todo:
        s = todo.pop()
        if accepting(s):
            leaves.add(names[s])
        for a in step.alphabet:
            for c in step.colors:
                r = step(s, a, c)
                if r is None:
                    continue
                bit, nxt = r
                trans[(names[s], a, c)] = _basis_pair(bit, name(nxt), m)
    return Swta(root, frozenset(leaves), trans, step.alphabet, step.colors, m=m)


def two_branch_swta(starts: tuple, step: Callable, accepting: Callable, m: int, root: str = "r") -> Swta:
    """SWTA of 1/sqrt2 (|u> + |v>) where u and v come from two runs of a machine.

    Both runs read the same word; zero-weighted copies keep the runs'
    definedness tied together after the paths split.
    """
    z = zero(m)
    h = AlgebraicComplex.inv_sqrt2(1, m)
    names = {("pair",) + tuple(starts): root}
    todo = [("pair",) + tuple(starts)]
    trans = {}
    leaves = set()

    def name(key):
        if key not in names:
            names[key] = f"q{len(names)}"
            todo.append(key)
        return names[key]

    while todo:
        key = todo.pop()
        if key[0] == "one" and accepting(key[1]):
            leaves.add(names[key])
        for a in step.alphabet:
            for c in step.colors:
                if key[0] == "one":
                    r = step(key[1], a, c)
                    if r is None:
                        continue
                    trans[(names[key], a, c)] = _basis_pair(r[0], name(("one", r[1])), m)
                    continue
                r1, r2 = step(key[1], a, c), step(key[2], a, c)
                if r1 is None or r2 is None:
                    continue
                if r1[0] == r2[0]:
                    trans[(names[key], a, c)] = _basis_pair(r1[0], name(("pair", r1[1], r2[1])), m)
                    continue
                q1, q2 = name(("one", r1[1])), name(("one", r2[1]))
                kids = [None, None]
                kids[r1[0]] = _form((q1, h), (q2, z))
                kids[r2[0]] = _form((q2, h), (q1, z))
                trans[(names[key], a, c)] = (kids[0], kids[1])
    return Swta(root, frozenset(leaves), trans, step.alphabet, step.colors, m=m)


def _machine(alphabet, colors):
    def wrap(f):
        f.alphabet = tuple(alphabet)
        f.colors = tuple(colors)
        return f

    return wrap


def _bit_of(c: str) -> int:
    return int(c)


# ---------------------------------------------------------------- adder

ADDER_SYMBOLS = ("c", "b", "a", "z")


def _maj_gates(m):
    # wires 1, 2, 3 = c, b, a
    return [_cx(3, 2, 3, m), _cx(3, 1, 3, m), _ccx(1, 2, 3, 3, m)]


def _uma_gates(m):
    return [_ccx(1, 2, 3, 3, m), _cx(3, 1, 3, m), _cx(1, 2, 3, m)]


def _carry_out_wtt(m: int) -> Wtt:
    """CX from the last a' onto z'."""
    o = one(m)
    trans = {}
    for s in ("c", "b", "a"):
        trans[("r", s)] = (_form(_ground("r", L, o)), _form(_ground("r", R, o)))
    trans[("r", "b'")] = (_form(_ground("r2", L, o)), _form(_ground("r2", R, o)))
    trans[("r2", "a'")] = (_form(_ground("p0", L, o)), _form(_ground("p1", R, o)))
    trans[("p0", "z'")] = (_form(_ground("e", L, o)), _form(_ground("e", R, o)))
    trans[("p1", "z'")] = (_form(_ground("e", R, o)), _form(_ground("e", L, o)))
    alphabet = ADDER_SYMBOLS + tuple(primed(a) for a in ADDER_SYMBOLS)
    return Wtt("r", frozenset(["e"]), trans, alphabet, m=m)


def adder_pre(m: int = DEFAULT_M) -> Swta:
    """All inputs c, b1 a1 ... bn an with the carry-out wire z cleared."""

    @_machine(ADDER_SYMBOLS, ("0", "1"))
    def step(s, a, c):
        want = {"start": "c", "b": "b", "a": "a"}.get(s)
        if s == "b" and a == "z":
            return (0, "end") if c == "0" else None
        if a != want:
            return None
        return _bit_of(c), {"start": "b", "b": "a", "a": "b"}[s]

    A = basis_machine_swta("start", step, lambda s: s == "end", m)
    return prime_tail(A, 3)


def adder_post(m: int = DEFAULT_M) -> Swta:
    """Outputs c, s1 a1 ... sn an, carry-out, with s_i = a_i + b_i + carry_i (mod 2).

    The sum bit is written before a_i is read, so the automaton guesses it
    at b_i and zeroes the subtree when the guess is wrong.
    """
    o, z = one(m), zero(m)
    colors = ("0", "1")
    trans = {}

    def K(carry):
        return f"k{carry}"

    def Y(carry, b, s):
        return f"y{carry}{b}{s}"

    for v in (0, 1):
        trans[("r", "c", str(v))] = _basis_pair(v, K(v), m)
    for carry in (0, 1):
        for b in (0, 1):
            trans[(K(carry), "b", str(b))] = (_form((Y(carry, b, 0), o)), _form((Y(carry, b, 1), o)))
            for s in (0, 1):
                for a in (0, 1):
                    nc = (a & b) | (a & carry) | (b & carry)
                    if a ^ b ^ carry == s:
                        trans[(Y(carry, b, s), "a", str(a))] = _basis_pair(a, K(nc), m)
                    else:
                        trans[(Y(carry, b, s), "a", str(a))] = (_form((K(nc), z)), _form((K(nc), z)))
        trans[(K(carry), "z", "0")] = _basis_pair(carry, "e", m)
    A = Swta("r", frozenset(["e"]), trans, ADDER_SYMBOLS, colors, m=m)
    return prime_tail(A, 3)


def adder(m: int = DEFAULT_M) -> Case:
    maj = _box(_maj_gates(m), ADDER_SYMBOLS)
    uma = _box(_uma_gates(m), ADDER_SYMBOLS)
    circuit = [Param("maj", maj, 2, "right"), _carry_out_wtt(m), Param("uma", uma, 2, "left")]

    def gates(j):
        x = pauli_x(m)
        seq = []
        for i in range(1, j + 1):
            w1, w2, w3 = 2 * i - 1, 2 * i, 2 * i + 1
            seq += [(x, w2, [w3]), (x, w1, [w3]), (x, w3, [w1, w2])]
        seq.append((x, 2 * j + 2, [2 * j + 1]))
        for i in range(j, 0, -1):
            w1, w2, w3 = 2 * i - 1, 2 * i, 2 * i + 1
            seq += [(x, w3, [w1, w2]), (x, w1, [w3]), (x, w2, [w1])]
        return 2 * j + 2, seq

    return Case(
        name="adder",
        kind=VERIFY,
        m=m,
        pre=adder_pre(m),
        post=adder_post(m),
        circuit=circuit,
        reconstructed=True,
        gates=gates,
        notes="ripple-carry adder, layout c b1 a1 ... bn' an' z'",
    )


# ---------------------------------------------------------------- QECC

QECC_SYMBOLS = ("x", "a")


def _qecc_step(syndrome: bool):
    """Branch machine over x1 a1 x2 a2 ...; colour e flips the current data bit once."""

    @_machine(QECC_SYMBOLS, ("n", "e"))
    def step(s, sym, c):
        kind, base, used, prev, cur, first = s
        if sym != kind:
            return None
        if kind == "x":
            if c == "e":
                if used:
                    return None
                v, used = 1 - base, True
            else:
                v = base
            return v, ("a", base, used, prev, v, first)
        if c != "n":
            return None
        out = 0 if (first or not syndrome) else prev ^ cur
        return out, ("x", base, used, cur, None, False)

    return step


def _qecc_swta(syndrome: bool, m: int) -> Swta:
    step = _qecc_step(syndrome)
    starts = (("x", 0, False, None, None, True), ("x", 1, False, None, None, True))
    A = two_branch_swta(starts, step, lambda s: s[0] == "x" and not s[5], m)
    return prime_tail(A, 3)


def qecc_pre(m: int = DEFAULT_M) -> Swta:
    """1/sqrt2 (|w> + |not w>) on the data qubits, at most one flipped bit, ancillas 0."""
    return _qecc_swta(False, m)


def qecc_post(m: int = DEFAULT_M) -> Swta:
    """Data unchanged; ancilla a_i holds x_{i-1} xor x_i for i >= 2."""
    return _qecc_swta(True, m)


def qecc(m: int = DEFAULT_M) -> Case:
    # wires x_{i-1} a_{i-1} x_i a_i
    box = _box([_cx(1, 4, 4, m), _cx(3, 4, 4, m)], QECC_SYMBOLS)

    def gates(j):
        x = pauli_x(m)
        seq = []
        for k in range(1, j + 1):
            base = 2 * (k - 1)
            seq += [(x, base + 4, [base + 1]), (x, base + 4, [base + 3])]
        return 2 * j + 2, seq

    return Case(
        name="qecc",
        kind=VERIFY,
        m=m,
        pre=qecc_pre(m),
        post=qecc_post(m),
        circuit=[Param("parity", box, 2, "right")],
        reconstructed=True,
        gates=gates,
        notes="repetition-code syndrome extraction, layout x1 a1 ... xn' an'",
    )


# ---------------------------------------------------------------- Grover

GROVER_SYMBOLS = ("x", "a")


def grover_bases(m: int = DEFAULT_M) -> Swta:
    """Basis states over x1 x2 a2 ... xn' an' with every ancilla a_i = 0."""

    @_machine(GROVER_SYMBOLS, ("0", "1"))
    def step(s, sym, c):
        if s == "a":
            return (0, "x") if sym == "a" and c == "0" else None
        if sym != "x":
            return None
        return _bit_of(c), "x" if s == "first" else "a"

    return prime_tail(basis_machine_swta("first", step, lambda s: s == "x", m), 2)


def _pass_all(_q, nxt, m):
    o = one(m)
    return _form(_ground(nxt, L, o)), _form(_ground(nxt, R, o))


def grover_mcz(m: int = DEFAULT_M) -> Wtt:
    """Phase -1 on data all ones; ancilla levels pass through."""
    o = one(m)
    trans = {
        ("p", "x"): (_form(_ground("id", L, o)), _form(_ground("p", R, o))),
        ("p", "a"): _pass_all("p", "p", m),
        ("p", "x'"): (_form(_ground("id", L, o)), _form(_ground("id", R, -o))),
    }
    for s in ("x", "a", "x'", "a'"):
        trans[("id", s)] = _pass_all("id", "id", m)
    return Wtt("p", frozenset(["id"]), trans, ("x", "a", "x'", "a'"), m=m)


def last_ancilla_z(m: int = DEFAULT_M) -> Wtt:
    o = one(m)
    trans = {("r", s): _pass_all("r", "r", m) for s in ("x", "a", "x'")}
    trans[("r", "a'")] = (_form(_ground("e", L, o)), _form(_ground("e", R, -o)))
    return Wtt("r", frozenset(["e"]), trans, ("x", "a", "x'", "a'"), m=m)


def grover(m: int = DEFAULT_M) -> Case:
    data = ("x", "x'")
    anc = ("a", "a'")
    Hx = broadcast_wtt(hadamard(m), data, anc)
    Xx = broadcast_wtt(pauli_x(m), data, anc)
    ccx = _box([_ccx(1, 2, 3, 3, m)], GROVER_SYMBOLS)
    down, up = Param("ccx", ccx, 2, "right"), Param("ccx", ccx, 2, "left")
    mcz = grover_mcz(m)
    cascade = [down, last_ancilla_z(m), up]
    left = [mcz, Hx, Xx, mcz, Xx, Hx]
    right = cascade + [Hx, Xx] + cascade + [Xx, Hx]

    def gates(j):
        n = 2 * j + 1
        xs = [1] + [2 * i - 2 for i in range(2, j + 2)]
        h, x, zg = hadamard(m), pauli_x(m), pauli_z(m)
        mcz_g = [(zg, xs[-1], xs[:-1])]
        casc = []
        for i in range(1, j + 1):
            c1 = 1 if i == 1 else 2 * i - 1
            casc.append((x, 2 * i + 1, [c1, 2 * i]))
        cz = casc + [(zg, n, [])] + casc[::-1]

        def diffuse(oracle):
            return (
                oracle
                + [(h, q, []) for q in xs]
                + [(x, q, []) for q in xs]
                + oracle
                + [(x, q, []) for q in xs]
                + [(h, q, []) for q in xs]
            )

        return n, diffuse(mcz_g), diffuse(cz)

    return Case(
        name="grover",
        kind=EQUIV,
        m=m,
        bases=grover_bases(m),
        left=left,
        right=right,
        gates=gates,
        notes="one iteration, multi-controlled Z versus a Toffoli cascade on ancillas",
    )


# ---------------------------------------------------------------- Heisenberg


def _rzz_gates(m):
    return [_cx(1, 2, 2, m), single_qubit_wtt(rz_quarter_pi(m), 2, 2), _cx(1, 2, 2, m)]


def _on_both(U, m):
    return [single_qubit_wtt(U, 1, 2), single_qubit_wtt(U, 2, 2)]


def heis_boxes(m: int = DEFAULT_M) -> dict:
    h, s = hadamard(m), s_gate(m)
    sym = ("x",)
    rzz = _rzz_gates(m)
    return {
        "rxx": _box(_on_both(h, m) + rzz + _on_both(h, m), sym),
        "ryy": _box(_on_both(s, m) + _on_both(h, m) + rzz + _on_both(h, m) + _on_both(s, m), sym),
        "rzz": _box(rzz, sym),
        "uzz": _box(rzz + [single_qubit_wtt(pauli_x(m), 2, 2)], sym),
    }


def heis_bases(m: int = DEFAULT_M) -> Swta:
    @_machine(("x",), ("0", "1"))
    def step(s, sym, c):
        return _bit_of(c), "q"

    return prime_tail(basis_machine_swta("q", step, lambda s: True, m, root="q"), 2)


def all_but_last_wtt(body: Unitary2, last: Unitary2) -> Wtt:
    """`body` on every qubit except the final one, which gets `last` (last two levels primed)."""
    m = body.m

    def g(U, q):
        return (
            _form(_ground(q, L, U.a), _ground(q, R, U.b)),
            _form(_ground(q, L, U.c), _ground(q, R, U.d)),
        )

    trans = {
        ("r", "x"): g(body, "r"),
        ("r", "x'"): g(body, "last"),
        ("last", "x'"): g(last, "e"),
    }
    return Wtt("r", frozenset(["e"]), trans, ("x", "x'"), m=m)


def heisenberg(m: int = DEFAULT_M) -> Case:
    """One Trotter step with t = pi, r = 4, so every R_z angle is pi/2."""
    b = heis_boxes(m)
    h, s, x = hadamard(m), s_gate(m), pauli_x(m)
    stair = {k: Param(k, v, 1, "right") for k, v in b.items()}
    xs = ("x", "x'")
    original = [stair["rxx"], stair["ryy"], stair["rzz"]]
    sh = s.matmul(h)
    optimized = [
        broadcast_wtt(h, xs),
        stair["rzz"],
        broadcast_wtt(sqrt_x(m), xs),
        stair["uzz"],
        all_but_last_wtt(sh, sh.matmul(x)),
        stair["rzz"],
    ]

    def gates(j):
        n = j + 1
        rz = rz_quarter_pi(m)

        def rzz(i):
            return [(x, i + 1, [i]), (rz, i + 1, []), (x, i + 1, [i])]

        def pair(i, U):
            return [(U, i, []), (U, i + 1, [])]

        orig = []
        for i in range(1, n):
            orig += pair(i, h) + rzz(i) + pair(i, h)
        for i in range(1, n):
            orig += pair(i, s) + pair(i, h) + rzz(i) + pair(i, h) + pair(i, s)
        for i in range(1, n):
            orig += rzz(i)
        opt = [(h, q, []) for q in range(1, n + 1)]
        for i in range(1, n):
            opt += rzz(i)
        opt += [(sqrt_x(m), q, []) for q in range(1, n + 1)]
        for i in range(1, n):
            opt += rzz(i) + [(x, i + 1, [])]
        opt += [(sh, q, []) for q in range(1, n)] + [(sh.matmul(x), n, [])]
        for i in range(1, n):
            opt += rzz(i)
        return n, orig, opt

    return Case(
        name="heisenberg",
        kind=EQUIV,
        m=m,
        bases=heis_bases(m),
        left=original,
        right=optimized,
        gates=gates,
        notes="XX, YY and ZZ staircases versus a version with cancelled basis changes",
    )


CASES = {
    "bv": bv,
    "grover": grover,
    "adder": adder,
    "qecc": qecc,
    "heisenberg": heisenberg,
}


def build(name: str) -> Case:
    if name == "bv-mutated":
        return bv(mutated=True)
    try:
        return CASES[name]()
    except KeyError:
        raise ValueError(f"unknown case {name!r}; known: {', '.join(sorted(CASES))}, bv-mutated") from None


# ---------------------------------------------------------------- dense cross-check


def _run_chain(transducers, t):
    for T in transducers:
        if t is None:
            return None
        t = apply(T, t)
    return t


def _dense(t: PerfectTree, seq, n):
    return tuple(run_circuit(list(t.leaves), seq, n))


def run_case(case: Case) -> Verdict:
    if case.kind == VERIFY:
        return verify_triple(case.pre, materialize(case.circuit), case.post, case.mode)
    return equivalent_circuits(case.bases, materialize(case.left), materialize(case.right))


def dense_agreement(case: Case, j: int) -> dict:
    """Compare the symbolic pipeline with dense simulation on every input of instance j.

    For a verify case the post automaton must give the same tree on the same
    word; for an equivalence case all four results must coincide.
    """
    if case.kind == VERIFY:
        n, seq = case.gates(j)
        src = case.pre
    else:
        n, seq_l, seq_r = case.gates(j)
        src = case.bases
    circuit, left, right = (materialize(x) for x in (case.circuit, case.left, case.right))
    checked = 0
    for word in words_of_length(src, n):
        t = evaluate(src, src.root, word)
        if t is None:
            continue
        if case.kind == VERIFY:
            got = _run_chain(circuit, t)
            want = evaluate(case.post, case.post.root, word)
            ok = got is not None and want is not None and got == want and got.leaves == _dense(t, seq, n)
        else:
            a, b = _run_chain(left, t), _run_chain(right, t)
            ok = (
                a is not None
                and b is not None
                and a == b
                and a.leaves == _dense(t, seq_l, n)
                and b.leaves == _dense(t, seq_r, n)
            )
        if not ok:
            return {"qubits": n, "inputs": checked, "agree": False, "word": word}
        checked += 1
    return {"qubits": n, "inputs": checked, "agree": checked > 0}


# ---------------------------------------------------------------- bundles

TASK_SCHEMA = "paramqv-task/1"


def write_bundle(case: Case, directory) -> Path:
    """Write the case as model files plus a task.json; staircases are stored as boxes."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    task = {"schema": TASK_SCHEMA, "name": case.name, "kind": case.kind, "m": case.m}
    written: dict = {}

    def swta(key, A):
        save_model(A, d / f"{key}.swta")
        task[key] = f"{key}.swta"

    def stages(key, items):
        out = []
        for i, s in enumerate(items):
            if isinstance(s, Param):
                fname = f"{s.name}.box.wtt"
                if fname not in written:
                    save_model(s.box.wtt, d / fname)
                    written[fname] = True
                out.append({"param": fname, "offset": s.offset, "dir": s.direction})
            else:
                fname = f"{key}{i + 1}.wtt"
                save_model(s, d / fname)
                out.append(fname)
        task[key] = out

    if case.kind == VERIFY:
        swta("pre", case.pre)
        swta("post", case.post)
        stages("circuit", case.circuit)
        task["mode"] = case.mode
    else:
        swta("bases", case.bases)
        stages("left", case.left)
        stages("right", case.right)
    task["reconstructed"] = case.reconstructed
    task["notes"] = case.notes
    path = d / "task.json"
    path.write_text(json.dumps(task, indent=2) + "\n", encoding="utf-8")
    return path
