"""
Rigid matrices and the low-rank plus sparse map
===============================================

The map g(L, R, X) = L R + S(X) covers every matrix that is not rigid, with
S(X) produced by a degree-2 encoder whose range holds all row-sparse
matrices. A point outside its range is a rigid matrix. At the smallest
size the map has more inputs than outputs, and its range is everything.
"""

import warnings

from rangeavoid import (GF2Matrix, build_rigid_instance, build_sparse_encoder, is_rigid,
                        is_rigid_by_sparse, rigid_pipeline)
from rangeavoid.errors import StretchError

warnings.simplefilter("ignore")

H = build_sparse_encoder(4, 1, 2)
print("encoder: vertices", H.ell, "edges", H.edges)

RI = build_rigid_instance(4, 1, 1)
print("g:", RI.g.n, "inputs ->", RI.g.m, "outputs")

# %%
# Rigid 4x4 matrices do exist for r = s = 1 ...
M = GF2Matrix.from_strs(["0011", "1100", "0101", "1010"])
print("rigid?", is_rigid(M, 1, 1).rigid, "(second method:", is_rigid_by_sparse(M, 1, 1).rigid, ")")
print("identity rigid?", is_rigid(GF2Matrix.identity(4), 1, 1).rigid)

# %%
# ... but they are all in the range of g at this size, so exhaustive avoidance finds nothing.
try:
    rigid_pipeline(4, 1, 1)
except StretchError as exc:
    print("pipeline:", exc)
