"""
From degree 2 to locality 3
===========================

A polynomial output T1 + ... + Tk becomes 2k bits, each reading at most
three variables. The parity of a block gives back the original output, and
any block with the right parity has a preimage, so a point avoided by the
encoded circuit decodes to a point avoided by the polynomial map.
"""

from rangeavoid import (GF2Vector, PolyFunction, brute_force_avoid, decode, encode_degree_d,
                        encoding_witness, in_range, solve_degree2)

P = PolyFunction.from_monomials(3, [[(0, 1), (2,)]])  # x0 x1 + x2
E = encode_degree_d(P)
print("encoded shape:", E.fhat.n, "->", E.fhat.m, " locality", E.fhat.max_arity)

x = GF2Vector.from_str("110")
z = GF2Vector.from_str("110" + "10" + "1")  # x, then r, then s
yhat = E.fhat(z)
print("fhat(x, r, s) =", yhat, " decodes to", decode(E, yhat), " P(x) =", P(x))

# %%
# Any block with parity P(x) is reachable from x.
target = GF2Vector.from_str("1000")
w = encoding_witness(E, x, target)
print("witness", w, "->", E.fhat(w))

# %%
# Avoiding a small degree-2 map through its encoding.
Q = PolyFunction.from_monomials(2, [[(0, 1)], [(0,), (1,)], [()]])
yhat = brute_force_avoid(encode_degree_d(Q).fhat)
y = solve_degree2(Q)
print("avoided by fhat:", yhat, " decoded:", y, " in range of Q?", in_range(Q, y))
