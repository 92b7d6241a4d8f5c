"""
SubspaceUnion on a toy circuit and on random NC0_3 instances
============================================================

The solver branches on every assignment of a small, densely read input set.
Below each branch, the remaining outputs are 2-local, so each output fix
shrinks the union of branch subspaces by at least a quarter.
"""

import math

from rangeavoid import (LocalCircuit, SolverTrace, gen_random_nc0, in_range,
                        select_dense_sets, subspace_union)

# nine copies of AND(x0, x1, x2): the range is {000000000, 111111111}
C = LocalCircuit.from_tables(3, [((0, 1, 2), [0] * 7 + [1])] * 9)
trace = SolverTrace()
y = subspace_union(C, trace=trace)
print("y =", y, " branches:", trace.branches, " union sizes:", trace.union_sizes)
print("in range?", in_range(C, y))

# %%
# On random instances the union shrinks geometrically.
C = gen_random_nc0(12, 36, 3, seed=4)
trace = SolverTrace()
y = subspace_union(C, trace=trace)
sizes = [1 << 12] + trace.union_sizes
print("sizes:", sizes)
print("worst ratio:", max(b / a for a, b in zip(sizes, sizes[1:]) if a))
print("in range?", in_range(C, y))

# %%
# More outputs means fewer branches: t = ceil(3 n^2 / m) for k = 3.
for m in (36, 72, 144):
    sel = select_dense_sets(gen_random_nc0(12, m, 3, seed=0))
    print(f"m={m:3d}  t={sel.t:2d}  formula={math.ceil(3 * 144 / m)}  outputs={len(sel.outputs)}")
