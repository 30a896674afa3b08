"""Small hand-written automata shared by several test modules."""

from paramqv.models import parse_model

A_EX = """swta m=4
root q
leaves u v
colors 1 2
trans q a 1 -> (r + s | r - s)
trans q a 2 -> (r - s | r + s)
trans r a 1 -> (2*u | 0*u)
trans r a 2 -> (0*u | 1/s2^2*u)
trans s a 1 -> (u + v | 0*v)
trans s a 2 -> (u - v | u + -3/s2^2*v)
"""

B_EX = """swta m=4
root f
leaves h
colors 1 2
trans f a 1 -> (4*g | 0*h)
trans f a 2 -> (0*h | k)
trans g a 1 -> (0*h | 1/s2^4*h)
trans g a 2 -> (h | 0*h)
trans k a 1 -> (4*h | 0*h)
trans k a 2 -> (0*h | h)
trans h a 1 -> (h | h)
trans h a 2 -> (h | h)
"""

# the transducer mapping (0,0,0,1) to (0,-1/sqrt2,0,1/sqrt2)
T_EX = """wtt m=4
root p
leaves p
trans p a -> (1/s2^1*z(L) + 1/s2^1*z(R) | 1/s2^1*z(L) + -1/s2^1*z(R))
trans z a -> (p(L) | -1*p(R))
"""

# all computational basis states, any height
A_BASES = """swta m=4
root q
leaves q
colors 1 2
trans q a 1 -> (q | 0*q)
trans q a 2 -> (0*q | q)
"""

T_H = """wtt m=4
root s
leaves s
trans s a -> (1/s2^1*s(L) + 1/s2^1*s(R) | 1/s2^1*s(L) + -1/s2^1*s(R))
"""

# RX(pi/2) on even qubits
T_RX_EVEN = """wtt m=4
root u
leaves u
trans u a -> (1/s2^1*v(L) + (0,0,-1,0)/s2^1*v(R) | (0,0,-1,0)/s2^1*v(L) + 1/s2^1*v(R))
trans v a -> (u(L) | u(R))
"""

MAJ = """wtt m=4
root a
leaves id
trans a x -> (b(L) + c(R) | e(L) + d(R))
trans b x -> (f(L) | f(R))
trans c x -> (h(R) | h(L))
trans d x -> (f(L) | k(R))
trans e x -> (h(R) | g(L))
trans f x -> (id(L) | 0*id(R))
trans g x -> (id(R) | 0*id(L))
trans h x -> (0*id(L) | id(R))
trans k x -> (0*id(R) | id(L))
trans id x -> (id(L) | id(R))
trans id x' -> (id(L) | id(R))
"""


def load(text):
    return parse_model(text)


def a_ex():
    return load(A_EX)


def b_ex():
    return load(B_EX)


def t_ex():
    return load(T_EX)


def a_bases():
    return load(A_BASES)


def t_h():
    return load(T_H)


def t_rx_even():
    return load(T_RX_EVEN)


def maj():
    return load(MAJ)


# the BV result after H, CX-oracle and H, with states renamed
A_RES = """swta m=4
root g
leaves sigma
colors 1
trans g w 1 -> (1/s2^2*d + 1/s2^2*e | 1/s2^2*d + -1/s2^2*e)
trans g a 1 -> (0*sigma | sigma)
trans d w 1 -> (g | 0*g)
trans d a 1 -> (0*sigma | sigma)
trans e w 1 -> (mu | 0*mu)
trans e a 1 -> (0*sigma | -1*sigma)
trans mu w 1 -> (1/s2^2*e + 1/s2^2*d | 1/s2^2*e + -1/s2^2*d)
trans mu a 1 -> (0*sigma | -1*sigma)
"""


def a_res():
    return load(A_RES)


# the two intermediate BV stages, states renamed
BV_STAGE1 = """swta m=4
root alpha
leaves beta
colors 1
trans alpha w 1 -> (1/s2^1*alpha | 1/s2^1*alpha)
trans alpha a 1 -> (1/s2^1*beta | -1/s2^1*beta)
"""

BV_STAGE2 = """swta m=4
root g
leaves sigma
colors 1
trans g w 1 -> (1/s2^1*d | 1/s2^1*e)
trans g a 1 -> (1/s2^1*sigma | -1/s2^1*sigma)
trans d w 1 -> (1/s2^1*g | 1/s2^1*g)
trans d a 1 -> (1/s2^1*sigma | -1/s2^1*sigma)
trans e w 1 -> (1/s2^1*mu | 1/s2^1*mu)
trans e a 1 -> (-1/s2^1*sigma | 1/s2^1*sigma)
trans mu w 1 -> (1/s2^1*e | 1/s2^1*d)
trans mu a 1 -> (-1/s2^1*sigma | 1/s2^1*sigma)
"""


def bv_stage1():
    return load(BV_STAGE1)


def bv_stage2():
    return load(BV_STAGE2)
