"""Range-avoidance solvers.

Every solver returns a point ``y`` of length ``m`` that no input maps to.
Ties are broken towards 0 and then lexicographically, so results are
reproducible.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable, Union

from .circuit import (LocalCircuit, PartialAssignment, PolyFunction, TwoLocalFunction,
                      TwoLocalKind, classify_output, pad_to_arity, restrict_output)
from .encoding import decode, encode_degree_d
from .enumeration import least_avoided_key, vector_from_key
from .errors import BudgetError, LocalityError, ParameterError, StretchError
from .gf2 import AffineSubspace, GF2Vector

Function = Union[LocalCircuit, PolyFunction]

DEFAULT_MAX_BRANCHES = 26


def default_max_branches() -> int:
    return int(os.environ.get("RANGEAVOID_MAX_BRANCHES", DEFAULT_MAX_BRANCHES))


@dataclass
class SolverTrace:
    """Counters filled in by a solver run.

    ``on_step`` (if set) is called after every output fix with the partial
    assignment and the list of live subspaces.
    """

    branches: int = 0
    iterations: int = 0
    union_sizes: list[int] = field(default_factory=list)
    on_step: Callable[[PartialAssignment, list[AffineSubspace]], None] | None = None

    def record(self, y: PartialAssignment, live: list[AffineSubspace]) -> None:
        self.iterations += 1
        self.union_sizes.append(sum(S.size() for S in live))
        if self.on_step is not None:
            self.on_step(y, live)


def _require_stretch(n: int, m: int) -> None:
    if m <= n:
        raise StretchError(f"range avoidance needs m > n, got n={n}, m={m}")


def brute_force_avoid(C: Function, limit: int | None = None, workers: int = 1,
                      require_stretch: bool = True) -> GF2Vector:
    """Lexicographically least point outside the range, by full enumeration.

    ``require_stretch=False`` also searches maps with ``m <= n``, whose
    range may or may not be everything.
    """
    if require_stretch:
        _require_stretch(C.n, C.m)
    return vector_from_key(least_avoided_key(C, limit, workers, require_stretch), C.m)


def affine_reduce(S: AffineSubspace, f: TwoLocalFunction) -> tuple[AffineSubspace, AffineSubspace]:
    """Subspaces ``(S0, S1)`` of ``S`` where ``S_b`` holds every point of S with ``f = b``.

    ``|S0| + |S1| <= 3|S|/2``.
    """
    n = S.ambient_dim
    empty = AffineSubspace.empty(n)
    if S.is_empty:
        return S, S
    if f.kind is TwoLocalKind.CONSTANT:
        return (S, empty) if f.c == 0 else (empty, S)
    i = f.indices[0]
    j = f.indices[1] if len(f.indices) > 1 else None
    if f.kind is TwoLocalKind.AFFINE:
        a = (f.a1 << i) | ((f.a2 << j) if j is not None else 0)
        return S.intersect_hyperplane_int(a, f.c), S.intersect_hyperplane_int(a, 1 ^ f.c)
    # quadratic: f = 1 - c exactly on {x_i = 1 + a1, x_j = 1 + a2}
    hit = S.intersect_many([(1 << i, 1 ^ f.a1), (1 << j, 1 ^ f.a2)])
    rest = S if hit.dimension() < S.dimension() else empty
    return (rest, hit) if f.c == 0 else (hit, rest)


def _pick(S0: AffineSubspace, S1: AffineSubspace) -> int:
    return 0 if S0.size() <= S1.size() else 1


def solve_nc02(C: LocalCircuit, trace: SolverTrace | None = None) -> GF2Vector:
    """Fix outputs in order, each time keeping the smaller AffineReduce side."""
    if C.max_arity > 2:
        raise LocalityError(f"solver needs locality <= 2, circuit has {C.max_arity}")
    _require_stretch(C.n, C.m)
    trace = trace if trace is not None else SolverTrace()
    y = PartialAssignment(C.m)
    S = AffineSubspace.full(C.n)
    for j, out in enumerate(C.outputs):
        if S.is_empty:
            break
        if S.dimension() == 0:
            x = S.point().bits
            y.set(j, 1 ^ out.value(x))
            S = AffineSubspace.empty(C.n)
        else:
            S0, S1 = affine_reduce(S, classify_output(out))
            b = _pick(S0, S1)
            y.set(j, b)
            S = (S0, S1)[b]
        trace.record(y, [S] if not S.is_empty else [])
    if not S.is_empty:
        raise RuntimeError("internal invariant violated: subspace not empty after all outputs")
    return y.complete(0)


@dataclass(frozen=True)
class DenseSelection:
    inputs: tuple[int, ...]
    outputs: tuple[int, ...]
    c: float
    subsets: tuple[tuple[int, ...], ...] = ()

    @property
    def t(self) -> int:
        return len(self.inputs)


def dense_subset_count(n: int, m: int, k: int, c: float) -> int:
    """Number of (k-2)-subsets to pick: ceil(c n binom(n, k-2) / m), at most binom(n, k-2)."""
    total = math.comb(n, k - 2)
    return min(total, math.ceil(c * n * total / m))


def select_dense_sets(C: LocalCircuit, c: float = 3) -> DenseSelection:
    """Small input set I and at least ``c n`` outputs that read >= k-2 inputs from I.

    Picks the highest-degree (k-2)-subsets of inputs in the bipartite
    subset/output incidence graph; ties go to the lexicographically least subset.
    """
    k = C.k
    if k < 3:
        raise ParameterError(f"dense selection needs k >= 3, got {k}")
    n, m = C.n, C.m
    if m < c * n ** (k - 2):
        raise StretchError(f"dense selection needs m >= {c} n^{k - 2} = {c * n ** (k - 2)}, got m={m}")
    if any(o.arity != k for o in C.outputs):
        C = pad_to_arity(C, k)
    degree: dict[tuple[int, ...], int] = {}
    for o in C.outputs:
        for sub in combinations(o.inputs, k - 2):
            degree[sub] = degree.get(sub, 0) + 1
    t = dense_subset_count(n, m, k, c)
    ranked = sorted(combinations(range(n), k - 2), key=lambda sub: (-degree.get(sub, 0), sub))
    chosen = ranked[:t]
    inputs = tuple(sorted({i for sub in chosen for i in sub}))
    chosen_set = set(chosen)
    outputs = tuple(j for j, o in enumerate(C.outputs)
                    if any(sub in chosen_set for sub in combinations(o.inputs, k - 2)))
    return DenseSelection(inputs, outputs, c, tuple(chosen))


def subspace_union(C: LocalCircuit, max_branches: int | None = None,
                   trace: SolverTrace | None = None) -> GF2Vector:
    """Branch on every assignment of a dense input set, then shrink the union of branches.

    Each step fixes one selected output to the bit minimising the total size
    of the branch subspaces, which shrinks the union by a factor >= 4/3.
    """
    if max_branches is None:
        max_branches = default_max_branches()
    trace = trace if trace is not None else SolverTrace()
    n, m = C.n, C.m
    k = max(C.k, 3)
    if n < k:
        raise ParameterError(f"need n >= k, got n={n}, k={k}")
    if m < 3 * n ** (k - 2):
        raise StretchError(f"SubspaceUnion needs m >= 3 n^{k - 2} = {3 * n ** (k - 2)}, got m={m}")
    padded = pad_to_arity(C, k)
    sel = select_dense_sets(padded, 3)
    t = sel.t
    if t > max_branches:
        raise BudgetError(f"SubspaceUnion would branch on {t} inputs, cap is {max_branches}")
    trace.branches = t
    I = sel.inputs
    steps = sel.outputs[: 3 * n]

    live: list[tuple[dict[int, int], AffineSubspace]] = []
    for j in range(1 << t):
        fixing = {i: (j >> pos) & 1 for pos, i in enumerate(I)}
        live.append((fixing, AffineSubspace.from_fixing(n, fixing)))

    y = PartialAssignment(m)
    for o in steps:
        if not live:
            break
        out = padded.outputs[o]
        cache: dict[tuple[int, ...], TwoLocalFunction] = {}
        sides: list[tuple[AffineSubspace, AffineSubspace]] = []
        total = [0, 0]
        for fixing, U in live:
            key = tuple(fixing[i] for i in out.inputs if i in fixing)
            f = cache.get(key)
            if f is None:
                f = classify_output(restrict_output(out, fixing))
                cache[key] = f
            U0, U1 = affine_reduce(U, f)
            sides.append((U0, U1))
            total[0] += U0.size()
            total[1] += U1.size()
        b = 0 if total[0] <= total[1] else 1
        y.set(o, b)
        live = [(fixing, pair[b]) for (fixing, _), pair in zip(live, sides) if not pair[b].is_empty]
        trace.record(y, [U for _, U in live])
    if live:
        raise RuntimeError("internal invariant violated: branch union not empty after 3n steps")
    return y.complete(0)


def _hyperplane_through(points: list[int], width: int) -> tuple[int, int]:
    """Least ``(a, c)`` (a != 0, lexicographic over a_0..a_{w-1}, c) with ``a . p = c`` on all points."""
    for bits in product((0, 1), repeat=width + 1):
        a = sum(b << t for t, b in enumerate(bits[:width]))
        c = bits[width]
        if a and all((a & p).bit_count() & 1 == c for p in points):
            return a, c
    raise RuntimeError(f"no hyperplane through {len(points)} points in dimension {width}")


def _local_hull_constraints(points: list[int], width: int) -> list[tuple[int, int]]:
    """Constraints ``(a, c)`` in local coordinates cutting out the affine hull of 1 or 2 points."""
    base = points[0]
    diffs = 0
    for p in points[1:]:
        diffs |= p ^ base
    cons = []
    anchor = None
    for t in range(width):
        bit = (base >> t) & 1
        if not (diffs >> t) & 1:
            cons.append((1 << t, bit))
        elif anchor is None:
            anchor = t
        else:
            cons.append(((1 << t) | (1 << anchor), bit ^ ((base >> anchor) & 1)))
    return cons


def _lift(a_local: int, variables: tuple[int, ...]) -> int:
    return sum(1 << v for t, v in enumerate(variables) if (a_local >> t) & 1)


def _shared_pair(C: LocalCircuit, open_outputs: list[int]) -> tuple[int, int] | None:
    seen: dict[tuple[int, int], int] = {}
    for j in open_outputs:
        for pair in combinations(C.outputs[j].inputs, 2):
            if pair in seen:
                return seen[pair], j
            seen[pair] = j
    return None


def one_subspace(C: LocalCircuit, trace: SolverTrace | None = None) -> GF2Vector:
    """Keep a single affine subspace of consistent inputs and cut its dimension every round.

    A round either runs AffineReduce on an output reading <= 2 inputs, or
    fixes two outputs that share a pair of inputs so that the consistent
    local patterns lie in a hyperplane.
    """
    n, m = C.n, C.m
    if C.max_arity > 3:
        raise LocalityError(f"OneSubspace needs locality <= 3, circuit has {C.max_arity}")
    if 3 * m < math.comb(n, 2) + 6 * n:
        raise StretchError(f"OneSubspace needs m >= binom(n,2)/3 + 2n = "
                           f"{(math.comb(n, 2) + 6 * n) / 3:g}, got m={m}")
    trace = trace if trace is not None else SolverTrace()
    y = PartialAssignment(m)
    S = AffineSubspace.full(n)
    empty = AffineSubspace.empty(n)

    for _ in range(n):
        if S.is_empty:
            break
        before = S.dimension()
        open_outputs = y.unassigned()
        small = next((j for j in open_outputs if C.outputs[j].arity <= 2), None)
        if small is not None:
            S0, S1 = affine_reduce(S, classify_output(C.outputs[small]))
            b = _pick(S0, S1)
            y.set(small, b)
            S = (S0, S1)[b]
        else:
            pair = _shared_pair(C, open_outputs)
            if pair is None:
                raise RuntimeError("internal invariant violated: no two outputs share an input pair")
            S = _fix_shared_pair(C, S, y, *pair)
        if not (S.is_empty or S.dimension() < before):
            raise RuntimeError("internal invariant violated: dimension did not drop")
        trace.record(y, [S] if not S.is_empty else [])

    if not S.is_empty:
        # dimension 0: flip one more output against the single remaining input
        x = S.point().bits
        j = y.unassigned()[0]
        y.set(j, 1 ^ C.outputs[j].value(x))
        S = empty
        trace.record(y, [])
    return y.complete(0)


def _fix_shared_pair(C: LocalCircuit, S: AffineSubspace, y: PartialAssignment,
                     j1: int, j2: int) -> AffineSubspace:
    o1, o2 = C.outputs[j1], C.outputs[j2]
    variables = tuple(sorted(set(o1.inputs) | set(o2.inputs)))
    width = len(variables)
    n = S.ambient_dim

    def lift(p: int) -> int:
        return _lift(p, variables)

    values: dict[int, tuple[int, int]] = {}
    for p in range(1 << width):
        x = lift(p)
        values[p] = (o1.value(x), o2.value(x))
    targets = list(product((0, 1), repeat=2))

    # some output pair has at most a quarter of the local patterns
    b1, b2 = next(v for v in targets if sum(1 for w in values.values() if w == v) <= (1 << width) // 4)
    A = [p for p, w in values.items() if w == (b1, b2)]
    a, c = _hyperplane_through(A, width)
    cut = S.intersect_hyperplane_int(lift(a), c)
    if cut != S:
        y.set(j1, b1)
        y.set(j2, b2)
        return cut

    plane = [p for p in values if (a & p).bit_count() & 1 == c]
    counts = {v: sum(1 for p in plane if values[p] == v) for v in targets}
    missing = next((v for v in targets if counts[v] == 0), None)
    if missing is not None:
        y.set(j1, missing[0])
        y.set(j2, missing[1])
        return AffineSubspace.empty(n)

    c1, c2 = next(v for v in targets if counts[v] <= 2)
    U = [p for p in plane if values[p] == (c1, c2)]
    hull = [(lift(a_l), c_l) for a_l, c_l in _local_hull_constraints(U, width)]
    cut = S.intersect_many(hull)
    if cut != S:
        y.set(j1, c1)
        y.set(j2, c2)
        return cut
    # every input of S produces (c1, c2) on this pair
    y.set(j1, 1 ^ c1)
    y.set(j2, c2)
    return AffineSubspace.empty(n)


STRATEGIES = ("brute", "nc02", "subspace-union", "one-subspace")


def admissible_strategies(C: LocalCircuit, limit: int | None = None,
                          max_branches: int | None = None) -> list[str]:
    """Strategies whose shape preconditions hold for ``C``."""
    from .enumeration import default_enum_limit

    if limit is None:
        limit = default_enum_limit()
    if max_branches is None:
        max_branches = default_max_branches()
    n, m = C.n, C.m
    out = []
    if m > n and n < 64 and (1 << n) <= limit:
        out.append("brute")
    if C.max_arity <= 2 and m > n:
        out.append("nc02")
    k = max(C.k, 3)
    if n >= k and m >= 3 * n ** (k - 2):
        t_bound = dense_subset_count(n, m, k, 3) * (k - 2)
        if min(t_bound, n) <= max_branches:
            out.append("subspace-union")
    if C.max_arity <= 3 and 3 * m >= math.comb(n, 2) + 6 * n:
        out.append("one-subspace")
    return out


def solve_local(C: LocalCircuit, strategy: str, limit: int | None = None,
                max_branches: int | None = None, trace: SolverTrace | None = None,
                workers: int = 1) -> GF2Vector:
    if strategy == "brute":
        return brute_force_avoid(C, limit, workers)
    if strategy == "nc02":
        return solve_nc02(C, trace)
    if strategy == "subspace-union":
        return subspace_union(C, max_branches, trace)
    if strategy == "one-subspace":
        return one_subspace(C, trace)
    raise ParameterError(f"unknown strategy {strategy!r}; choose from {', '.join(STRATEGIES)}")


def solve_degree2(P: PolyFunction, strategy: str = "brute", limit: int | None = None,
                  max_branches: int | None = None, trace: SolverTrace | None = None,
                  workers: int = 1) -> GF2Vector:
    """Encode ``P`` into a local circuit, avoid its range, and decode."""
    if P.d > 2:
        raise ParameterError(f"expected a map of degree <= 2, got degree {P.d}")
    _require_stretch(P.n, P.m)
    E = encode_degree_d(P)
    ok = admissible_strategies(E.fhat, limit, max_branches)
    if strategy not in ok:
        if strategy == "brute":
            raise BudgetError(f"brute force on the encoded circuit needs 2^{E.fhat.n} evaluations; "
                              f"admissible: {', '.join(ok) or 'none'}")
        raise StretchError(
            f"strategy {strategy!r} does not apply to the encoded circuit "
            f"(n={E.fhat.n}, m={E.fhat.m}, k={E.fhat.k}); admissible: {', '.join(ok) or 'none'}")
    yhat = solve_local(E.fhat, strategy, limit, max_branches, trace, workers)
    return decode(E, yhat)


__all__ = [
    "DenseSelection", "SolverTrace", "STRATEGIES", "admissible_strategies", "affine_reduce",
    "brute_force_avoid", "dense_subset_count", "one_subspace", "select_dense_sets", "solve_degree2",
    "solve_local", "solve_nc02", "subspace_union",
]
