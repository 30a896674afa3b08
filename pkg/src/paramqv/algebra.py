"""Exact amplitude arithmetic.

Scalars are elements of Z[omega, 1/sqrt2] with omega = exp(i*pi/m) and m a
power of two.  A value is stored as an integer coefficient vector over
1, omega, ..., omega^(m-1) together with a power k of the sqrt2 denominator.

The verification engine needs division, so there is a second type,
:class:`FieldScalar`, for elements of the cyclotomic field Q(omega).
"""

from __future__ import annotations

import cmath
import math
import re
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

DEFAULT_M = 4


class InvalidScalar(ValueError):
    pass


class DivisionByZero(ZeroDivisionError):
    pass


class InvalidVector(ValueError):
    pass


def _check_modulus(m: int) -> None:
    if m < 1 or m & (m - 1):
        raise InvalidScalar(f"modulus must be a power of two, got {m}")


def _shift(c: Sequence[int], j: int) -> list:
    """Multiply a coefficient vector by omega^j, using omega^m = -1."""
    m = len(c)
    j %= 2 * m
    out = [0] * m
    for i, a in enumerate(c):
        if a:
            t = i + j
            sign = -1 if (t // m) % 2 else 1
            out[t % m] += sign * a
    return out


def _times_sqrt2(c: Sequence[int]) -> list:
    # sqrt2 = omega^(m/4) - omega^(3m/4)
    m = len(c)
    s = m // 4
    a = _shift(c, s)
    b = _shift(c, 3 * s)
    return [x - y for x, y in zip(a, b)]


def _convolve(x: Sequence, y: Sequence) -> list:
    m = len(x)
    out = [0] * m
    for i, a in enumerate(x):
        if not a:
            continue
        for j, b in enumerate(y):
            if not b:
                continue
            t = i + j
            if t >= m:
                out[t - m] -= a * b
            else:
                out[t] += a * b
    return out


def _canonical(c: list, k: int) -> tuple:
    m = len(c)
    if not any(c):
        return tuple(c), 0
    if m >= 4:
        while k > 0:
            d = _times_sqrt2(c)
            if any(v % 2 for v in d):
                break
            c = [v // 2 for v in d]
            k -= 1
    else:
        while k >= 2 and not any(v % 2 for v in c):
            c = [v // 2 for v in c]
            k -= 2
    return tuple(c), k


class AlgebraicComplex:
    """The number (sum a_i omega^i) / sqrt2^k, kept in canonical form."""

    __slots__ = ("coeffs", "k", "_hash")

    def __init__(self, coeffs: Sequence[int], k: int = 0):
        m = len(coeffs)
        _check_modulus(m)
        if k < 0:
            raise InvalidScalar("negative sqrt2 exponent")
        c, k = _canonical([int(v) for v in coeffs], int(k))
        self.coeffs = c
        self.k = k
        self._hash = None

    @classmethod
    def _raw(cls, coeffs: tuple, k: int) -> "AlgebraicComplex":
        obj = object.__new__(cls)
        obj.coeffs = coeffs
        obj.k = k
        obj._hash = None
        return obj

    @property
    def m(self) -> int:
        return len(self.coeffs)

    @classmethod
    def integer(cls, n: int, m: int = DEFAULT_M) -> "AlgebraicComplex":
        return cls((n,) + (0,) * (m - 1))

    @classmethod
    def omega(cls, j: int = 1, m: int = DEFAULT_M) -> "AlgebraicComplex":
        """omega^j with omega = exp(i*pi/m)."""
        return cls(_shift([1] + [0] * (m - 1), j))

    @classmethod
    def inv_sqrt2(cls, k: int = 1, m: int = DEFAULT_M) -> "AlgebraicComplex":
        return cls((1,) + (0,) * (m - 1), k)

    def _coerce(self, other) -> "AlgebraicComplex":
        if isinstance(other, AlgebraicComplex):
            if other.m != self.m:
                raise InvalidScalar(f"mixed moduli {self.m} and {other.m}")
            return other
        if isinstance(other, int):
            return AlgebraicComplex.integer(other, self.m)
        return NotImplemented

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        a, ka = list(self.coeffs), self.k
        b, kb = list(other.coeffs), other.k
        if ka < kb:
            a, ka, b, kb = b, kb, a, ka
        diff = ka - kb
        if self.m >= 4:
            for _ in range(diff):
                b = _times_sqrt2(b)
        else:
            if diff % 2:
                raise InvalidScalar("cannot align odd sqrt2 powers when m < 4")
            f = 2 ** (diff // 2)
            b = [v * f for v in b]
        c, k = _canonical([x + y for x, y in zip(a, b)], ka)
        return AlgebraicComplex._raw(c, k)

    __radd__ = __add__

    def __neg__(self) -> "AlgebraicComplex":
        return AlgebraicComplex._raw(tuple(-v for v in self.coeffs), self.k)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return AlgebraicComplex._raw((0,) * self.m, 0)
        c, k = _canonical(_convolve(self.coeffs, other.coeffs), self.k + other.k)
        return AlgebraicComplex._raw(c, k)

    __rmul__ = __mul__

    def conj(self) -> "AlgebraicComplex":
        c = self.coeffs
        out = (c[0],) + tuple(-c[self.m - i] for i in range(1, self.m))
        return AlgebraicComplex._raw(out, self.k)

    def abs2(self) -> "AlgebraicComplex":
        return self * self.conj()

    def to_complex(self) -> complex:
        m = self.m
        z = sum(a * cmath.exp(1j * math.pi * i / m) for i, a in enumerate(self.coeffs))
        return complex(z) / math.sqrt(2) ** self.k

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = AlgebraicComplex.integer(other, self.m)
        if not isinstance(other, AlgebraicComplex):
            return NotImplemented
        return self.k == other.k and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.coeffs, self.k))
        return self._hash

    def __repr__(self) -> str:
        return f"AlgebraicComplex({format_scalar(self)})"

    def __str__(self) -> str:
        return format_scalar(self)


def make_number(coeffs: Sequence[int], k: int = 0, m: int = DEFAULT_M) -> AlgebraicComplex:
    if len(coeffs) != m:
        raise InvalidScalar(f"expected {m} coefficients, got {len(coeffs)}")
    return AlgebraicComplex(coeffs, k)


def zero(m: int = DEFAULT_M) -> AlgebraicComplex:
    return AlgebraicComplex._raw((0,) * m, 0)


def one(m: int = DEFAULT_M) -> AlgebraicComplex:
    return AlgebraicComplex.integer(1, m)


def add(x: AlgebraicComplex, y: AlgebraicComplex) -> AlgebraicComplex:
    if x.m != y.m:
        raise InvalidScalar(f"mixed moduli {x.m} and {y.m}")
    return x + y


def multiply(x: AlgebraicComplex, y: AlgebraicComplex) -> AlgebraicComplex:
    if x.m != y.m:
        raise InvalidScalar(f"mixed moduli {x.m} and {y.m}")
    return x * y


def equals(x: AlgebraicComplex, y: AlgebraicComplex) -> bool:
    if x.m != y.m:
        raise InvalidScalar(f"mixed moduli {x.m} and {y.m}")
    return x == y


def change_modulus(x: AlgebraicComplex, m: int) -> AlgebraicComplex:
    """Re-embed x into a larger (or equal) power-of-two modulus."""
    _check_modulus(m)
    if m < x.m or m % x.m:
        raise InvalidScalar(f"cannot move from modulus {x.m} to {m}")
    step = m // x.m
    c = [0] * m
    for i, a in enumerate(x.coeffs):
        c[i * step] = a
    return AlgebraicComplex(c, x.k)


# ---------------------------------------------------------------- literals

_LITERAL = re.compile(
    r"^\s*(?P<sign>-?)\s*(?:\((?P<vec>[^()]*)\)|(?P<int>\d+))\s*(?:/\s*s2\^(?P<k>\d+))?\s*$"
)


def parse_scalar(text: str, m: int = DEFAULT_M) -> AlgebraicComplex:
    """Parse `(a0,...,a{m-1})/s2^k`, an integer, or `1/s2^k` (optionally negated)."""
    mt = _LITERAL.match(text)
    if not mt:
        raise InvalidScalar(f"bad scalar literal {text!r}")
    k = int(mt.group("k") or 0)
    if mt.group("vec") is not None:
        parts = [p.strip() for p in mt.group("vec").split(",")]
        try:
            coeffs = [int(p) for p in parts]
        except ValueError:
            raise InvalidScalar(f"bad coefficient in {text!r}") from None
        if len(coeffs) != m:
            raise InvalidScalar(f"expected {m} coefficients in {text!r}")
    else:
        coeffs = [int(mt.group("int"))] + [0] * (m - 1)
    if mt.group("sign"):
        coeffs = [-c for c in coeffs]
    return AlgebraicComplex(coeffs, k)


def format_scalar(x: AlgebraicComplex) -> str:
    c = x.coeffs
    if not any(c[1:]):
        base = str(c[0])
    else:
        base = "(" + ",".join(str(v) for v in c) + ")"
    if x.k == 0:
        return base
    return f"{base}/s2^{x.k}"


# ------------------------------------------------------------ field scalars


class FieldScalar:
    """Element of Q(omega): integer numerators over one positive denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Sequence[int], den: int = 1):
        if den == 0:
            raise DivisionByZero("zero denominator")
        if den < 0:
            num = [-v for v in num]
            den = -den
        g = reduce(math.gcd, num, den)
        if g > 1:
            num = [v // g for v in num]
            den //= g
        self.num = tuple(num)
        self.den = den

    @property
    def m(self) -> int:
        return len(self.num)

    @property
    def coeffs(self) -> tuple:
        return tuple(Fraction(v, self.den) for v in self.num)

    @classmethod
    def from_fractions(cls, coeffs: Sequence[Fraction]) -> "FieldScalar":
        den = reduce(lambda a, b: a * b // math.gcd(a, b), (Fraction(c).denominator for c in coeffs), 1)
        return cls([int(Fraction(c) * den) for c in coeffs], den)

    @classmethod
    def zero(cls, m: int = DEFAULT_M) -> "FieldScalar":
        return cls((0,) * m)

    @classmethod
    def one(cls, m: int = DEFAULT_M) -> "FieldScalar":
        return cls((1,) + (0,) * (m - 1))

    def is_zero(self) -> bool:
        return not any(self.num)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __add__(self, other: "FieldScalar") -> "FieldScalar":
        if self.den == other.den:
            return FieldScalar([a + b for a, b in zip(self.num, other.num)], self.den)
        return FieldScalar(
            [a * other.den + b * self.den for a, b in zip(self.num, other.num)],
            self.den * other.den,
        )

    def __neg__(self) -> "FieldScalar":
        return FieldScalar([-a for a in self.num], self.den)

    def __sub__(self, other: "FieldScalar") -> "FieldScalar":
        return self + (-other)

    def __mul__(self, other: "FieldScalar") -> "FieldScalar":
        return FieldScalar(_convolve(self.num, other.num), self.den * other.den)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldScalar):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def bit_length(self) -> int:
        return max([abs(v).bit_length() for v in self.num] + [self.den.bit_length()])

    def __repr__(self) -> str:
        return f"FieldScalar({list(self.coeffs)})"


def embed(x: AlgebraicComplex) -> FieldScalar:
    """Map a ring value into the field, folding 1/sqrt2^k into the coefficients."""
    c = list(x.coeffs)
    k = x.k
    if x.m >= 4:
        # 1/sqrt2 = sqrt2/2
        for _ in range(k):
            c = _times_sqrt2(c)
        return FieldScalar(c, 2 ** k)
    if k % 2:
        raise InvalidScalar("odd sqrt2 power is not in Q(omega) for m < 4")
    return FieldScalar(c, 2 ** (k // 2))


def invert(x: FieldScalar) -> FieldScalar:
    """Solve M y = e_0 where M is the matrix of multiplication by x."""
    if x.is_zero():
        raise DivisionByZero("inverse of zero")
    m = x.m
    cols = []
    for j in range(m):
        e = [0] * m
        e[j] = 1
        cols.append(_convolve(x.num, e))
    # rows of the augmented system M | e0, M[i][j] = cols[j][i] / den
    rows = [[Fraction(cols[j][i], x.den) for j in range(m)] + [Fraction(int(i == 0))] for i in range(m)]
    for col in range(m):
        piv = next(r for r in range(col, m) if rows[r][col] != 0)
        rows[col], rows[piv] = rows[piv], rows[col]
        p = rows[col][col]
        rows[col] = [v / p for v in rows[col]]
        for r in range(m):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[col])]
    return FieldScalar.from_fractions([rows[i][m] for i in range(m)])


# ------------------------------------------------------------------ bases

Vector = dict  # sparse: index -> FieldScalar (nonzero entries only)


def vec_scale(v: Vector, a: FieldScalar) -> Vector:
    out = {}
    for i, x in v.items():
        y = x * a
        if y:
            out[i] = y
    return out


def vec_axpy(v: Vector, a: FieldScalar, w: Vector) -> Vector:
    """Return v + a*w."""
    out = dict(v)
    for i, x in w.items():
        y = out.get(i)
        y = x * a if y is None else y + x * a
        if y:
            out[i] = y
        else:
            out.pop(i, None)
    return out


class Basis:
    """Row-echelon basis of a subspace of Q(omega)^d, rows kept sparse.

    Every row has pivot entry 1 and no other row has a nonzero entry in that
    pivot column (reduced echelon form).
    """

    def __init__(self, dim: int, m: int = DEFAULT_M):
        self.dim = dim
        self.m = m
        self.rows: list = []
        self.pivots: list = []

    def copy(self) -> "Basis":
        b = Basis(self.dim, self.m)
        b.rows = list(self.rows)
        b.pivots = list(self.pivots)
        return b

    def __len__(self) -> int:
        return len(self.rows)

    def _check(self, v: Vector) -> None:
        for i in v:
            if not 0 <= i < self.dim:
                raise InvalidVector(f"index {i} outside dimension {self.dim}")

    def reduce(self, v: Vector) -> Vector:
        self._check(v)
        for row, p in zip(self.rows, self.pivots):
            a = v.get(p)
            if a is not None:
                v = vec_axpy(v, -a, row)
        return v

    def contains(self, v: Vector) -> bool:
        return not self.reduce(v)

    def insert(self, v: Vector) -> bool:
        """Add v to the basis in place; return whether the span grew."""
        r = self.reduce(v)
        if not r:
            return False
        p = min(r)
        r = vec_scale(r, invert(r[p]))
        for idx, row in enumerate(self.rows):
            a = row.get(p)
            if a is not None:
                self.rows[idx] = vec_axpy(row, -a, r)
        self.rows.append(r)
        self.pivots.append(p)
        assert len(self.rows) <= self.dim, "basis larger than its dimension"
        return True


def dense_to_vector(values: Sequence[FieldScalar]) -> Vector:
    return {i: x for i, x in enumerate(values) if x}


def span_insert(b: Basis, v) -> tuple:
    """Functional insertion: returns (new basis, added)."""
    if not isinstance(v, dict):
        if len(v) != b.dim:
            raise InvalidVector(f"vector of length {len(v)} for dimension {b.dim}")
        v = dense_to_vector(v)
    nb = b.copy()
    added = nb.insert(v)
    return (nb if added else b), added


def random_scalar(rng, m: int = DEFAULT_M, bound: int = 3, kmax: int = 3) -> AlgebraicComplex:
    return AlgebraicComplex([rng.randint(-bound, bound) for _ in range(m)], rng.randint(0, kmax))


def scalars(values: Iterable, m: int = DEFAULT_M) -> list:
    """Convenience: ints pass through integer(), scalars are kept."""
    out = []
    for v in values:
        if isinstance(v, AlgebraicComplex):
            out.append(v)
        elif isinstance(v, str):
            out.append(parse_scalar(v, m))
        else:
            out.append(AlgebraicComplex.integer(int(v), m))
    return out
