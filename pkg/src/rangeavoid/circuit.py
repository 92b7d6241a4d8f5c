"""Local circuits, low-degree polynomial maps and their helpers.

Truth-table convention used everywhere: for an output reading the sorted
inputs ``i_0 < i_1 < ... < i_{l-1}``, position ``p`` of the table is the value
on the assignment where ``x[i_t]`` equals bit ``t`` of ``p``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DimensionMismatchError, ParameterError
from .gf2 import GF2Vector

RNG_SCHEME = "numpy-pcg64-seedseq/1"


def _gather(x: int, indices: Sequence[int]) -> int:
    p = 0
    for t, i in enumerate(indices):
        p |= ((x >> i) & 1) << t
    return p


@dataclass(frozen=True)
class LocalOutput:
    inputs: tuple[int, ...]
    table: int  # bit p is the value at local pattern p

    @property
    def arity(self) -> int:
        return len(self.inputs)

    def value(self, x: int) -> int:
        return (self.table >> _gather(x, self.inputs)) & 1

    def table_bits(self) -> list[int]:
        return [(self.table >> p) & 1 for p in range(1 << self.arity)]


@dataclass(frozen=True)
class LocalCircuit:
    """Multi-output circuit where output ``j`` reads at most ``k`` inputs."""

    n: int
    m: int
    k: int
    outputs: tuple[LocalOutput, ...]

    def __post_init__(self):
        if self.n < 0 or self.m < 0 or self.k < 0:
            raise ParameterError("n, m, k must be non-negative")
        if len(self.outputs) != self.m:
            raise ParameterError(f"expected {self.m} outputs, got {len(self.outputs)}")
        for j, out in enumerate(self.outputs):
            idx = out.inputs
            if list(idx) != sorted(set(idx)):
                raise ParameterError(f"output {j}: inputs must be sorted and distinct")
            if idx and (idx[0] < 0 or idx[-1] >= self.n):
                raise ParameterError(f"output {j}: input index out of range")
            if len(idx) > self.k:
                raise ParameterError(f"output {j}: reads {len(idx)} inputs, locality is {self.k}")
            if out.table < 0 or out.table >> (1 << len(idx)):
                raise ParameterError(f"output {j}: truth table too long")

    @classmethod
    def from_tables(cls, n: int, outputs: Sequence[tuple[Sequence[int], Sequence[int]]],
                    k: int | None = None) -> LocalCircuit:
        """Build from ``(inputs, table bits)`` pairs; ``k`` defaults to the largest arity."""
        outs = []
        for j, (inputs, bits) in enumerate(outputs):
            inputs = tuple(inputs)
            bits = list(bits)
            if len(bits) != 1 << len(inputs):
                raise ParameterError(f"output {j}: truth table has {len(bits)} entries, "
                                     f"expected {1 << len(inputs)}")
            order = sorted(range(len(inputs)), key=lambda t: inputs[t])
            if order != list(range(len(inputs))):
                # permute the table so the inputs come out sorted
                sorted_inputs = tuple(inputs[t] for t in order)
                new = [0] * len(bits)
                for q in range(len(bits)):
                    p = 0
                    for pos, t in enumerate(order):
                        p |= ((q >> pos) & 1) << t
                    new[q] = bits[p]
                inputs, bits = sorted_inputs, new
            outs.append(LocalOutput(inputs, sum(int(b) << p for p, b in enumerate(bits))))
        if k is None:
            k = max((o.arity for o in outs), default=0)
        return cls(n, len(outs), k, tuple(outs))

    @property
    def max_arity(self) -> int:
        return max((o.arity for o in self.outputs), default=0)

    def eval_int(self, x: int) -> int:
        y = 0
        for j, out in enumerate(self.outputs):
            y |= out.value(x) << j
        return y

    def __call__(self, x: GF2Vector) -> GF2Vector:
        return eval_circuit(self, x)


def eval_circuit(C: LocalCircuit, x: GF2Vector) -> GF2Vector:
    if x.length != C.n:
        raise DimensionMismatchError(f"input of length {x.length} for a circuit on {C.n} inputs")
    return GF2Vector(C.m, C.eval_int(x.bits))


def _canonical_monomials(monos: Iterable[Iterable[int]]) -> tuple[tuple[int, ...], ...]:
    # lexicographic on sorted index tuples: () first, then x0, x0*x1, ..., x1, ...
    return tuple(sorted(tuple(sorted(mono)) for mono in monos))


@dataclass(frozen=True)
class PolyFunction:
    """Multi-output polynomial map over GF(2).

    Each output is a tuple of monomials; a monomial is a sorted tuple of
    distinct variable indices and ``()`` is the constant 1.
    """

    n: int
    m: int
    d: int
    outputs: tuple[tuple[tuple[int, ...], ...], ...]
    _masks: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.outputs) != self.m:
            raise ParameterError(f"expected {self.m} outputs, got {len(self.outputs)}")
        canon = []
        for j, monos in enumerate(self.outputs):
            cm = _canonical_monomials(monos)
            if len(set(cm)) != len(cm):
                raise ParameterError(f"output {j}: duplicate monomial")
            for mono in cm:
                if len(set(mono)) != len(mono):
                    raise ParameterError(f"output {j}: repeated variable in monomial")
                if len(mono) > self.d:
                    raise ParameterError(f"output {j}: monomial of degree {len(mono)} exceeds {self.d}")
                if mono and (mono[0] < 0 or mono[-1] >= self.n):
                    raise ParameterError(f"output {j}: variable index out of range")
            canon.append(cm)
        object.__setattr__(self, "outputs", tuple(canon))
        object.__setattr__(self, "_masks", tuple(
            tuple(sum(1 << i for i in mono) for mono in monos) for monos in canon))

    @classmethod
    def from_monomials(cls, n: int, outputs: Sequence[Iterable[Iterable[int]]],
                       d: int | None = None) -> PolyFunction:
        outs = tuple(_canonical_monomials(monos) for monos in outputs)
        if d is None:
            d = max((len(mono) for monos in outs for mono in monos), default=0)
        return cls(n, len(outs), d, outs)

    @property
    def masks(self) -> tuple[tuple[int, ...], ...]:
        return self._masks

    def eval_int(self, x: int) -> int:
        y = 0
        for j, masks in enumerate(self._masks):
            v = 0
            for mask in masks:
                v ^= (x & mask) == mask
            y |= v << j
        return y

    def __call__(self, x: GF2Vector) -> GF2Vector:
        return eval_poly(self, x)


def eval_poly(P: PolyFunction, x: GF2Vector) -> GF2Vector:
    if x.length != P.n:
        raise DimensionMismatchError(f"input of length {x.length} for a map on {P.n} inputs")
    return GF2Vector(P.m, P.eval_int(x.bits))


class PartialAssignment:
    """Output bits over {0, 1, unset}; a set position is never overwritten."""

    def __init__(self, m: int):
        self._values: list[int | None] = [None] * m

    def __len__(self) -> int:
        return len(self._values)

    def __getitem__(self, j: int) -> int | None:
        return self._values[j]

    def is_set(self, j: int) -> bool:
        return self._values[j] is not None

    def set(self, j: int, b: int) -> None:
        if self._values[j] is not None:
            raise ParameterError(f"output {j} is already assigned")
        self._values[j] = int(b) & 1

    def assigned(self) -> dict[int, int]:
        return {j: v for j, v in enumerate(self._values) if v is not None}

    def unassigned(self) -> list[int]:
        return [j for j, v in enumerate(self._values) if v is None]

    def complete(self, fill: int = 0) -> GF2Vector:
        return GF2Vector.from_bits(fill if v is None else v for v in self._values) \
            if self._values else GF2Vector(0)

    def __str__(self) -> str:
        return "".join("*" if v is None else str(v) for v in self._values)


class TwoLocalKind(Enum):
    CONSTANT = "constant"
    AFFINE = "affine"
    QUADRATIC = "quadratic"


@dataclass(frozen=True)
class TwoLocalFunction:
    """A function of at most two watched inputs in one of three normal forms.

    constant:  c
    affine:    a1*x_i + a2*x_j + c
    quadratic: (x_i + a1)(x_j + a2) + c
    A missing second index is treated as a zero coefficient.
    """

    kind: TwoLocalKind
    indices: tuple[int, ...]
    a1: int = 0
    a2: int = 0
    c: int = 0

    def value(self, x: int) -> int:
        xi = (x >> self.indices[0]) & 1 if len(self.indices) > 0 else 0
        xj = (x >> self.indices[1]) & 1 if len(self.indices) > 1 else 0
        if self.kind is TwoLocalKind.CONSTANT:
            return self.c
        if self.kind is TwoLocalKind.AFFINE:
            return (self.a1 & xi) ^ (self.a2 & xj) ^ self.c
        return ((xi ^ self.a1) & (xj ^ self.a2)) ^ self.c


def classify_two_local(table: Sequence[int] | int, indices: Sequence[int]) -> TwoLocalFunction:
    """Normal form of a function of at most two inputs, from its algebraic normal form."""
    indices = tuple(indices)
    if isinstance(table, int):
        bits = [(table >> p) & 1 for p in range(1 << len(indices))]
    else:
        bits = [int(b) for b in table]
    if len(bits) not in (1, 2, 4) or len(bits) != 1 << len(indices):
        raise ParameterError(f"truth table of length {len(bits)} for {len(indices)} inputs")
    # widen to a table over (x_i, x_j) that ignores the missing inputs
    f = [bits[p % len(bits)] for p in range(4)]
    c0 = f[0]
    ci = f[0] ^ f[1]
    cj = f[0] ^ f[2]
    cij = f[0] ^ f[1] ^ f[2] ^ f[3]
    if cij:
        # x_i x_j + ci x_i + cj x_j + c0 = (x_i + cj)(x_j + ci) + c0 + ci cj
        return TwoLocalFunction(TwoLocalKind.QUADRATIC, indices, cj, ci, c0 ^ (ci & cj))
    if ci or cj:
        return TwoLocalFunction(TwoLocalKind.AFFINE, indices, ci, cj, c0)
    return TwoLocalFunction(TwoLocalKind.CONSTANT, indices, 0, 0, c0)


def classify_output(out: LocalOutput) -> TwoLocalFunction:
    if out.arity > 2:
        raise ParameterError(f"output reads {out.arity} inputs, expected at most 2")
    return classify_two_local(out.table, out.inputs)


def pad_to_arity(C: LocalCircuit, k: int) -> LocalCircuit:
    """Make every output read exactly ``k`` inputs, padding with the lowest unused indices."""
    if C.n < k:
        raise ParameterError(f"cannot pad to arity {k} with only {C.n} inputs")
    outs = []
    for out in C.outputs:
        if out.arity == k:
            outs.append(out)
            continue
        if out.arity > k:
            raise ParameterError(f"output already reads {out.arity} > {k} inputs")
        used = set(out.inputs)
        extra = [i for i in range(C.n) if i not in used][: k - out.arity]
        new_inputs = tuple(sorted(out.inputs + tuple(extra)))
        table = 0
        for p in range(1 << k):
            x = 0
            for t, i in enumerate(new_inputs):
                x |= ((p >> t) & 1) << i
            table |= out.value(x) << p
        outs.append(LocalOutput(new_inputs, table))
    return LocalCircuit(C.n, C.m, max(C.k, k), tuple(outs))


def restrict_output(out: LocalOutput, fixing: Mapping[int, int]) -> LocalOutput:
    keep = tuple(i for i in out.inputs if i not in fixing)
    if len(keep) == out.arity:
        return out
    base = 0
    for i in out.inputs:
        if i in fixing:
            base |= (int(fixing[i]) & 1) << i
    table = 0
    for q in range(1 << len(keep)):
        x = base
        for t, i in enumerate(keep):
            x |= ((q >> t) & 1) << i
        table |= out.value(x) << q
    return LocalOutput(keep, table)


def restrict_inputs(C: LocalCircuit, fixing: Mapping[int, int]) -> LocalCircuit:
    """Substitute fixed input values into every truth table; numbering is unchanged."""
    for i in fixing:
        if not 0 <= i < C.n:
            raise ParameterError(f"fixed index {i} out of range for {C.n} inputs")
    return LocalCircuit(C.n, C.m, C.k, tuple(restrict_output(o, fixing) for o in C.outputs))


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed) & ((1 << 64) - 1))))


def gen_random_nc0(n: int, m: int, k: int, seed: int) -> LocalCircuit:
    if k < 0 or n < k:
        raise ParameterError(f"need n >= k >= 0, got n={n}, k={k}")
    if m < 1:
        raise ParameterError("need at least one output")
    rng = _rng(seed)
    outs = []
    for _ in range(m):
        inputs = tuple(sorted(int(i) for i in rng.choice(n, size=k, replace=False)))
        bits = rng.integers(0, 2, size=1 << k)
        outs.append(LocalOutput(inputs, sum(int(b) << p for p, b in enumerate(bits))))
    return LocalCircuit(n, m, k, tuple(outs))


def all_monomials(n: int, d: int) -> list[tuple[int, ...]]:
    return [mono for deg in range(d + 1) for mono in combinations(range(n), deg)]


def gen_random_poly(n: int, m: int, d: int, seed: int, density: float = 0.2) -> PolyFunction:
    """Each monomial of degree <= d (the constant included) appears with probability ``density``."""
    if n < 0 or d < 0 or m < 1:
        raise ParameterError(f"bad parameters n={n}, m={m}, d={d}")
    if not 0.0 <= density <= 1.0:
        raise ParameterError("density must lie in [0, 1]")
    rng = _rng(seed)
    monos = all_monomials(n, d)
    outs = []
    for _ in range(m):
        keep = rng.random(len(monos)) < density
        outs.append(tuple(mono for mono, kept in zip(monos, keep) if kept))
    return PolyFunction(n, m, d, tuple(outs))
