"""Transducers for quantum gates.

Qubit i of an m-qubit circuit is the tree level labelled x_i (1-based).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .algebra import DEFAULT_M, AlgebraicComplex, change_modulus, one, zero
from .swta import LinearForm, ModelError
from .wtt import L, R, Wtt, add, compact, compose, state_depths

I_STATE = "id"


class InvalidGate(ModelError):
    pass


class UnsupportedModulus(ModelError):
    pass


@dataclass(frozen=True)
class Unitary2:
    a: AlgebraicComplex
    b: AlgebraicComplex
    c: AlgebraicComplex
    d: AlgebraicComplex

    @property
    def m(self) -> int:
        return self.a.m

    def entries(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    def matmul(self, other: "Unitary2") -> "Unitary2":
        """self @ other."""
        return Unitary2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def dagger(self) -> "Unitary2":
        return Unitary2(self.a.conj(), self.c.conj(), self.b.conj(), self.d.conj())

    def is_unitary(self) -> bool:
        p = self.matmul(self.dagger())
        return p.a == 1 and p.d == 1 and p.b.is_zero() and p.c.is_zero()

    def lifted(self, m: int) -> "Unitary2":
        return Unitary2(*(change_modulus(x, m) for x in self.entries()))


def _omega(j: int, m: int) -> AlgebraicComplex:
    return AlgebraicComplex.omega(j, m)


def _need(m: int, least: int, what: str) -> None:
    if m < least:
        raise UnsupportedModulus(f"{what} needs modulus at least {least}, workspace has {m}")


def identity2(m: int = DEFAULT_M) -> Unitary2:
    return Unitary2(one(m), zero(m), zero(m), one(m))


def pauli_x(m: int = DEFAULT_M) -> Unitary2:
    return Unitary2(zero(m), one(m), one(m), zero(m))


def pauli_z(m: int = DEFAULT_M) -> Unitary2:
    return Unitary2(one(m), zero(m), zero(m), -one(m))


def pauli_y(m: int = DEFAULT_M) -> Unitary2:
    _need(m, 2, "Y")
    i = _omega(m // 2, m)
    return Unitary2(zero(m), -i, i, zero(m))


def hadamard(m: int = DEFAULT_M) -> Unitary2:
    _need(m, 4, "H")
    s = AlgebraicComplex.inv_sqrt2(1, m)
    return Unitary2(s, s, s, -s)


def phase(j: int, m: int = DEFAULT_M) -> Unitary2:
    """diag(1, omega^j)."""
    return Unitary2(one(m), zero(m), zero(m), _omega(j, m))


def s_gate(m: int = DEFAULT_M) -> Unitary2:
    _need(m, 2, "S")
    return phase(m // 2, m)


def sdg_gate(m: int = DEFAULT_M) -> Unitary2:
    _need(m, 2, "Sdg")
    return phase(-m // 2, m)


def t_gate(m: int = DEFAULT_M) -> Unitary2:
    _need(m, 4, "T")
    return phase(m // 4, m)


def tdg_gate(m: int = DEFAULT_M) -> Unitary2:
    _need(m, 4, "Tdg")
    return phase(-m // 4, m)


def rx_half_pi(m: int = DEFAULT_M) -> Unitary2:
    """R_X(pi/2) = (I - iX)/sqrt2."""
    _need(m, 4, "RX")
    s = AlgebraicComplex.inv_sqrt2(1, m)
    mi = -_omega(m // 2, m) * s
    return Unitary2(s, mi, mi, s)


def rz_quarter_pi(m: int = DEFAULT_M) -> Unitary2:
    """R_Z(pi/2) = diag(exp(-i pi/4), exp(i pi/4))."""
    _need(m, 4, "RZ")
    return Unitary2(_omega(-m // 4, m), zero(m), zero(m), _omega(m // 4, m))


def sqrt_x(m: int = DEFAULT_M) -> Unitary2:
    """SX = H S H, the principal square root of X."""
    _need(m, 2, "SX")
    half = AlgebraicComplex.inv_sqrt2(2, m)
    i = _omega(m // 2, m)
    p, q = (1 + i) * half, (1 - i) * half
    return Unitary2(p, q, q, p)


def rotation_k(k: int, m: int = DEFAULT_M) -> Unitary2:
    """R_k = diag(1, exp(2 pi i / 2^k))."""
    step = 2 * m
    if step % (1 << k):
        raise UnsupportedModulus(f"R_{k} needs modulus at least {1 << (k - 1)}, workspace has {m}")
    return phase(step >> k, m)


NAMED = {
    "I": identity2,
    "X": pauli_x,
    "Y": pauli_y,
    "Z": pauli_z,
    "H": hadamard,
    "S": s_gate,
    "SDG": sdg_gate,
    "T": t_gate,
    "TDG": tdg_gate,
    "RX": rx_half_pi,
    "RZ": rz_quarter_pi,
    "SX": sqrt_x,
}


def named_gate(name: str, m: int = DEFAULT_M) -> Unitary2:
    try:
        return NAMED[name.upper()](m)
    except KeyError:
        raise InvalidGate(f"unknown gate {name!r}") from None


def qubit_symbols(n: int, first: int = 1) -> tuple:
    return tuple(f"x{i}" for i in range(first, first + n))


def _gate_forms(U: Unitary2, target: str) -> tuple:
    return (
        LinearForm({(target, L): U.a, (target, R): U.b}),
        LinearForm({(target, L): U.c, (target, R): U.d}),
    )


def _pass_forms(target: str, m: int) -> tuple:
    o = one(m)
    return LinearForm({(target, L): o}), LinearForm({(target, R): o})


def identity_wtt(symbols: Sequence[str], m: int = DEFAULT_M) -> Wtt:
    if not symbols:
        raise InvalidGate("identity transducer needs at least one symbol")
    trans = {(I_STATE, a): _pass_forms(I_STATE, m) for a in symbols}
    return Wtt(I_STATE, frozenset([I_STATE]), trans, tuple(symbols), m=m)


def single_qubit_wtt(U: Unitary2, i: int, n: int, symbols: Optional[Sequence[str]] = None) -> Wtt:
    """U on qubit i of an n-qubit register: counter states q0..qn."""
    if not 1 <= i <= n:
        raise InvalidGate(f"qubit {i} outside 1..{n}")
    symbols = tuple(symbols) if symbols is not None else qubit_symbols(n)
    m = U.m
    trans = {}
    for j in range(n):
        nxt = f"q{j + 1}"
        if j == i - 1:
            trans[(f"q{j}", symbols[j])] = _gate_forms(U, nxt)
        else:
            trans[(f"q{j}", symbols[j])] = _pass_forms(nxt, m)
    return Wtt("q0", frozenset([f"q{n}"]), trans, symbols, m=m)


def zero_side(T: Wtt, symbol: str, side: str, depth: Optional[int] = None) -> Wtt:
    """Zero every coefficient of the chosen child form on transitions over `symbol`.

    With `depth`, only states at that distance from the root are touched,
    which matters when one symbol labels several levels.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    at_depth = None
    if depth is not None:
        at_depth = {q for q, d in state_depths(T).items() if d == depth}
    trans = dict(T.transitions)
    hit = False
    for (q, a), (left, right) in T.transitions.items():
        if a == symbol and (at_depth is None or q in at_depth):
            hit = True
            trans[(q, a)] = (left.zeroed(), right) if side == "left" else (left, right.zeroed())
    if not hit:
        raise InvalidGate(f"no transitions over {symbol!r}")
    return Wtt(T.root, T.leaves, trans, T.alphabet, T.states, T.m)


def controlled_wtt(
    U: Unitary2, target: int, controls: Iterable[int], n: int, symbols: Optional[Sequence[str]] = None
) -> Wtt:
    """Multi-controlled U: active iff every control qubit is 1."""
    controls = list(controls)
    if len(set(controls)) != len(controls) or target in controls:
        raise InvalidGate("control and target qubits must be distinct")
    for j in controls + [target]:
        if not 1 <= j <= n:
            raise InvalidGate(f"qubit {j} outside 1..{n}")
    symbols = tuple(symbols) if symbols is not None else qubit_symbols(n)
    T = single_qubit_wtt(U, target, n, symbols)
    ident = single_qubit_wtt(identity2(U.m), target, n, symbols)
    for j in reversed(controls):
        sym = symbols[j - 1]
        T = compact(add(zero_side(T, sym, "left", j - 1), zero_side(ident, sym, "right", j - 1)), "c")
    return T


def broadcast_wtt(U: Unitary2, symbols: Sequence[str], passthrough: Sequence[str] = ()) -> Wtt:
    """U on every qubit whose level symbol is in `symbols`, for any height."""
    s = "s"
    trans = {(s, a): _gate_forms(U, s) for a in symbols}
    for a in passthrough:
        trans[(s, a)] = _pass_forms(s, U.m)
    return Wtt(s, frozenset([s]), trans, tuple(symbols) + tuple(passthrough), m=U.m)


# --------------------------------------------------------------------- QFT


def qft_modulus(n: int) -> int:
    """Smallest power-of-two modulus in which every R_k, k <= n, is exact."""
    return max(4, 1 << max(n - 1, 0))


def qft_box(i: int, n: int, total: int, first: int = 1, m: int = DEFAULT_M) -> Wtt:
    """H on qubit i followed by controlled rotations R_2..R_{n-i+1} (relative indices).

    Qubits first..first+n-1 of a `total`-qubit register carry the transform.
    """
    if not 1 <= i <= n:
        raise InvalidGate(f"box index {i} outside 1..{n}")
    last = first + n - 1
    if first < 1 or last > total:
        raise InvalidGate(f"QFT range {first}..{last} outside 1..{total}")
    if 2 * m % (1 << n) and n > 1:
        raise UnsupportedModulus(f"QFT on {n} qubits needs modulus at least {qft_modulus(n)}")
    syms = qubit_symbols(total)
    h = AlgebraicComplex.inv_sqrt2(1, m)
    o = one(m)
    ti = first + i - 1  # absolute qubit of the Hadamard
    trans = {}
    for a in range(1, total + 1):
        x = syms[a - 1]
        trans[(f"id{a}", x)] = _pass_forms(f"id{a + 1}", m)
        q, nq, nid = f"q{a}", f"q{a + 1}", f"id{a + 1}"
        if a < ti or a > last:
            trans[(q, x)] = _pass_forms(nq, m)
        elif a == ti:
            trans[(q, x)] = (
                LinearForm({(nid, L): h, (nid, R): h}),
                LinearForm({(nq, L): h, (nq, R): -h}),
            )
        else:
            k = a - ti + 1
            gamma = _omega((2 * m) >> k, m)
            # the left child keeps tracking later rotations
            trans[(q, x)] = (LinearForm({(nq, L): o}), LinearForm({(nq, R): gamma}))
    leaves = frozenset([f"q{total + 1}", f"id{total + 1}"])
    return compact(Wtt("q1", leaves, trans, syms, m=m), f"b{i}_")


def qft_wtt(n: int, total: Optional[int] = None, first: int = 1, m: Optional[int] = None) -> Wtt:
    """QFT without the final qubit reversal, as Box_n after ... after Box_1."""
    total = n if total is None else total
    m = qft_modulus(n) if m is None else m
    T = qft_box(1, n, total, first, m)
    for i in range(2, n + 1):
        T = compact(compose(qft_box(i, n, total, first, m), T), "f")
    return T


def qft_from_gates(n: int, total: Optional[int] = None, first: int = 1, m: Optional[int] = None) -> Wtt:
    """The same transform assembled from H and controlled-R_k gate transducers."""
    total = n if total is None else total
    m = qft_modulus(n) if m is None else m
    seq = []
    for i in range(1, n + 1):
        t = first + i - 1
        seq.append(single_qubit_wtt(hadamard(m), t, total))
        for k in range(2, n - i + 2):
            seq.append(controlled_wtt(rotation_k(k, m), t, [t + k - 1], total))
    T = seq[0]
    for G in seq[1:]:
        T = compact(compose(G, T), "g")
    return T
