"""
Shrinking an affine subspace with one 2-local output
====================================================

Fixing the value of a function that reads two inputs splits an affine
subspace into two affine pieces whose sizes add up to at most 3/2 of the
original. This is the step every local solver here is built from.
"""

from rangeavoid import AffineSubspace, affine_reduce, classify_two_local

S = AffineSubspace.full(4).intersect_many([(0b0011, 1)])  # x0 + x1 = 1
print("start:", S.dimension(), "dims,", S.size(), "points")

# AND of x1 and x2, then XOR of x2 and x3
for table, idx in [([0, 0, 0, 1], (1, 2)), ([0, 1, 1, 0], (2, 3))]:
    f = classify_two_local(table, idx)
    S0, S1 = affine_reduce(S, f)
    print(f"{f.kind.name:9s} on x{idx}: |S0|={S0.size():2d} |S1|={S1.size():2d}  "
          f"bound {3 * S.size() // 2}")

# %%
# Keep the smaller side, as the NC0_2 solver does, until one point is left.
S0, S1 = affine_reduce(S, classify_two_local([0, 0, 0, 1], (1, 2)))
T = S1 if S1.size() <= S0.size() else S0
print("kept:", [str(p) for p in T.enumerate_points()])
