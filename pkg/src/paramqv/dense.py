"""Exact dense state-vector simulation, used as an independent oracle.

Index bit (n - i) of a basis index is qubit i, so qubit 1 is the most
significant bit, as in the tree encoding.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .algebra import DEFAULT_M, AlgebraicComplex, one, zero
from .gates import Unitary2


def basis_vector(bits: str, m: int = DEFAULT_M) -> list:
    v = [zero(m)] * (1 << len(bits))
    v[int(bits, 2) if bits else 0] = one(m)
    return v


def apply_gate(vec: Sequence, U: Unitary2, target: int, controls: Iterable[int] = (), n: int = None) -> list:
    """Apply a (multi-)controlled 2x2 unitary to a dense state vector."""
    size = len(vec)
    if n is None:
        n = size.bit_length() - 1
    tb = 1 << (n - target)
    cmask = 0
    for c in controls:
        cmask |= 1 << (n - c)
    out = list(vec)
    for idx in range(size):
        if idx & tb or (idx & cmask) != cmask:
            continue
        lo, hi = vec[idx], vec[idx | tb]
        out[idx] = U.a * lo + U.b * hi
        out[idx | tb] = U.c * lo + U.d * hi
    return out


def run_circuit(vec: Sequence, gates: Iterable, n: int) -> list:
    """gates: iterable of (U, target, controls)."""
    for U, t, cs in gates:
        vec = apply_gate(vec, U, t, cs, n)
    return list(vec)


def bit_reverse(i: int, n: int) -> int:
    return int(f"{i:0{n}b}"[::-1], 2) if n else 0


def qft_no_reversal_column(x: int, n: int, m: int) -> list:
    """Column x of the DFT with rows in bit-reversed order, exactly.

    entry[z] = exp(2 pi i x y / 2^n) / sqrt(2^n) where y = reverse(z).
    """
    size = 1 << n
    step = 2 * m
    if step % size:
        raise ValueError(f"modulus {m} cannot express 2^{n}-th roots of unity")
    unit = step // size
    out = []
    for z in range(size):
        y = bit_reverse(z, n)
        out.append(AlgebraicComplex.omega((x * y * unit) % (2 * m), m) * AlgebraicComplex.inv_sqrt2(n, m))
    return out
