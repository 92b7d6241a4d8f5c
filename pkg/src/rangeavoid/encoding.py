"""Constructive encodings.

* ``encode_degree_d`` turns a degree-d polynomial map into a circuit of
  locality d+1 together with a parity decoder, such that any point avoided by
  the circuit decodes to a point avoided by the polynomial map.
* ``build_sparse_encoder`` is a degree-d map whose range holds every vector
  of weight at most s.
* ``build_rigid_instance`` is a degree-2 map whose range holds every matrix of
  the form (rank <= r) + (row sparsity <= s).

All arithmetic is over GF(2), so subtraction is addition.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from itertools import combinations, islice

from .circuit import LocalCircuit, LocalOutput, PolyFunction
from .errors import DimensionMismatchError, ParameterError, ParseError, PreconditionError
from .gf2 import GF2Matrix, GF2Vector, parity


@dataclass(frozen=True)
class EncodingLayout:
    """Where each source output's block lives in the encoded circuit.

    Source output ``i`` owns outputs ``[out_offset[i], out_offset[i] + 2k)``,
    inputs ``[r_offset[i], r_offset[i] + k)`` for the r-chain and
    ``[s_offset[i], s_offset[i] + k - 1)`` for the s-chain.
    """

    n: int
    m: int
    k: int
    out_offsets: tuple[int, ...]
    r_offsets: tuple[int, ...]
    s_offsets: tuple[int, ...]

    @classmethod
    def standard(cls, n: int, m: int, k: int) -> EncodingLayout:
        return cls(n, m, k,
                   tuple(2 * k * i for i in range(m)),
                   tuple(n + k * i for i in range(m)),
                   tuple(n + k * m + (k - 1) * i for i in range(m)))

    @property
    def n_hat(self) -> int:
        return self.n + (2 * self.k - 1) * self.m

    @property
    def m_hat(self) -> int:
        return 2 * self.k * self.m

    def to_text(self) -> str:
        lines = ["layout 1", f"source {self.n} {self.m} {self.k}",
                 f"encoded {self.n_hat} {self.m_hat}"]
        for i in range(self.m):
            lines.append(f"{i}: out {self.out_offsets[i]} r {self.r_offsets[i]} s {self.s_offsets[i]}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> EncodingLayout:
        rows = [(no, line.split("#", 1)[0].strip()) for no, line in enumerate(text.splitlines(), 1)]
        rows = [(no, line) for no, line in rows if line]
        if len(rows) < 3 or rows[0][1] != "layout 1":
            raise ParseError("expected 'layout 1' header", rows[0][0] if rows else 1)
        try:
            tag, *vals = rows[1][1].split()
            n, m, k = (int(v) for v in vals)
            assert tag == "source"
            tag, *vals = rows[2][1].split()
            n_hat, m_hat = (int(v) for v in vals)
            assert tag == "encoded"
        except (ValueError, AssertionError):
            raise ParseError("malformed source/encoded line", rows[1][0]) from None
        if k < 1 or len(rows) != 3 + m:
            raise ParseError(f"expected {m} block lines", rows[-1][0])
        outs, rs, ss = [], [], []
        for i, (no, line) in enumerate(rows[3:]):
            parts = line.replace(":", " ").split()
            if len(parts) != 7 or parts[0] != str(i) or (parts[1], parts[3], parts[5]) != ("out", "r", "s"):
                raise ParseError(f"malformed block line for output {i}", no)
            try:
                outs.append(int(parts[2]))
                rs.append(int(parts[4]))
                ss.append(int(parts[6]))
            except ValueError:
                raise ParseError("offsets must be integers", no) from None
        layout = cls(n, m, k, tuple(outs), tuple(rs), tuple(ss))
        if (n_hat, m_hat) != (layout.n_hat, layout.m_hat):
            raise ParseError("encoded shape disagrees with the source shape", rows[2][0])
        for i, off in enumerate(outs):
            if not 0 <= off <= m_hat - 2 * k:
                raise ParseError(f"output block {i} out of range", rows[3 + i][0])
        if sorted(outs) != [2 * k * i for i in range(m)]:
            raise ParseError("output blocks must tile the encoded outputs", rows[3][0])
        used = sorted(v for i in range(m) for v in
                      [*range(rs[i], rs[i] + k), *range(ss[i], ss[i] + k - 1)])
        if used != list(range(n, n_hat)):
            raise ParseError("r- and s-variables must tile the encoded inputs after the source inputs",
                             rows[3][0])
        return layout


@dataclass(frozen=True)
class EncodedCircuit:
    source: PolyFunction
    fhat: LocalCircuit
    layout: EncodingLayout

    @property
    def k(self) -> int:
        return self.layout.k


def _monomial_mask(mono: tuple[int, ...]) -> int:
    return sum(1 << i for i in mono)


def _xor_output(terms: list[tuple[int, ...]]) -> LocalOutput:
    """Local output computing the GF(2) sum of the given monomials."""
    inputs = tuple(sorted({i for t in terms for i in t}))
    pos = {i: t for t, i in enumerate(inputs)}
    local_masks = [sum(1 << pos[i] for i in t) for t in terms]
    table = 0
    for p in range(1 << len(inputs)):
        v = 0
        for mask in local_masks:
            v ^= (p & mask) == mask
        table |= v << p
    return LocalOutput(inputs, table)


def encode_degree_d(P: PolyFunction) -> EncodedCircuit:
    """Encode each output T_1 + ... + T_k as the 2k bits

    (T_1+r_1, ..., T_k+r_k, r_1+s_1, s_1+r_2+s_2, ..., s_{k-2}+r_{k-1}+s_{k-1}, s_{k-1}+r_k)

    with private r, s variables per output. Outputs with fewer than ``k``
    monomials are padded with zero terms.
    """
    if P.d < 0:
        raise ParameterError("degree must be non-negative")
    k = max(1, max((len(monos) for monos in P.outputs), default=0))
    layout = EncodingLayout.standard(P.n, P.m, k)
    outs: list[LocalOutput] = []
    for i, monos in enumerate(P.outputs):
        terms: list[tuple[int, ...] | None] = list(monos) + [None] * (k - len(monos))
        r = [layout.r_offsets[i] + j for j in range(k)]
        s = [layout.s_offsets[i] + j for j in range(k - 1)]
        for j, term in enumerate(terms):
            outs.append(_xor_output([(r[j],)] if term is None else [term, (r[j],)]))
        if k == 1:
            outs.append(_xor_output([(r[0],)]))
            continue
        outs.append(_xor_output([(r[0],), (s[0],)]))
        for j in range(1, k - 1):
            outs.append(_xor_output([(s[j - 1],), (r[j],), (s[j],)]))
        outs.append(_xor_output([(s[k - 2],), (r[k - 1],)]))
    locality = max((o.arity for o in outs), default=0)
    fhat = LocalCircuit(layout.n_hat, layout.m_hat, locality, tuple(outs))
    return EncodedCircuit(P, fhat, layout)


def decode_with_layout(layout: EncodingLayout, yhat: GF2Vector) -> GF2Vector:
    if yhat.length != layout.m_hat:
        raise DimensionMismatchError(f"encoded point has length {yhat.length}, expected {layout.m_hat}")
    block = (1 << (2 * layout.k)) - 1
    return GF2Vector.from_bits(parity((yhat.bits >> off) & block) for off in layout.out_offsets) \
        if layout.m else GF2Vector(0)


def decode(E: EncodedCircuit, yhat: GF2Vector) -> GF2Vector:
    """Parity of each output block."""
    return decode_with_layout(E.layout, yhat)


def encoding_witness(E: EncodedCircuit, x: GF2Vector, yhat: GF2Vector) -> GF2Vector:
    """Full encoded input ``(x, r, s)`` with ``fhat(x, r, s) == yhat``.

    Requires ``decode(yhat) == P(x)``.
    """
    P, lay = E.source, E.layout
    if x.length != P.n:
        raise DimensionMismatchError(f"input of length {x.length}, expected {P.n}")
    if decode(E, yhat) != P(x):
        raise PreconditionError("decode(yhat) differs from P(x); no witness exists")
    k = lay.k
    bits = x.bits
    for i, monos in enumerate(P.outputs):
        y = [(yhat.bits >> (lay.out_offsets[i] + j)) & 1 for j in range(2 * k)]
        terms = [int((x.bits & _monomial_mask(t)) == _monomial_mask(t)) for t in monos]
        terms += [0] * (k - len(monos))
        r = [terms[j] ^ y[j] for j in range(k)]
        s = []
        if k > 1:
            s.append(r[0] ^ y[k])
            for j in range(1, k - 1):
                s.append(s[j - 1] ^ r[j] ^ y[k + j])
        for j, b in enumerate(r):
            bits |= b << (lay.r_offsets[i] + j)
        for j, b in enumerate(s):
            bits |= b << (lay.s_offsets[i] + j)
    return GF2Vector(lay.n_hat, bits)


def sparse_vertex_count(n: int, d: int) -> int:
    """Least ``l >= d`` with ``binomial(l, d) >= n``."""
    ell = max(d, 1)
    while math.comb(ell, d) < n:
        ell += 1
    return ell


@dataclass(frozen=True)
class HypergraphEncoder:
    """Degree-d map on an ``s x l`` label matrix whose range holds all s-sparse vectors.

    Label entry ``X[row, v]`` is input ``row * l + v``; output ``i`` is
    ``sum_row prod_{v in edges[i]} X[row, v]``.
    """

    n: int
    s: int
    d: int
    ell: int
    edges: tuple[tuple[int, ...], ...]
    f: PolyFunction

    def var(self, row: int, v: int) -> int:
        return row * self.ell + v


def build_sparse_encoder(n: int, s: int, d: int) -> HypergraphEncoder:
    if n < 1 or d < 1 or s < 0:
        raise ParameterError(f"need n >= 1, d >= 1, s >= 0; got n={n}, s={s}, d={d}")
    if not s < n ** (1 - 1 / d) / d:
        warnings.warn(f"sparsity s={s} is outside s < n^(1-1/d)/d for n={n}, d={d}; "
                      "the encoder is still complete but not input-efficient", stacklevel=2)
    ell = sparse_vertex_count(n, d)
    edges = tuple(islice(combinations(range(ell), d), n))
    outs = tuple(tuple(tuple(row * ell + v for v in edge) for row in range(s)) for edge in edges)
    f = PolyFunction(s * ell, n, d, outs)
    return HypergraphEncoder(n, s, d, ell, edges, f)


def sparse_witness(H: HypergraphEncoder, y: GF2Vector) -> GF2Vector:
    """Labels with ``H.f(X) == y``: row ``k`` marks the vertices of the k-th support edge."""
    if y.length != H.n:
        raise DimensionMismatchError(f"target of length {y.length}, expected {H.n}")
    support = [i for i, b in enumerate(y) if b]
    if len(support) > H.s:
        raise PreconditionError(f"target has weight {len(support)} > sparsity {H.s}")
    bits = 0
    for row, i in enumerate(support):
        for v in H.edges[i]:
            bits |= 1 << H.var(row, v)
    return GF2Vector(H.f.n, bits)


@dataclass(frozen=True)
class RigidInstance:
    """Degree-2 map ``(L, R, X_1..X_n) -> L R + S`` with row ``i`` of S encoded by X_i.

    Inputs: L (n x r, row-major), then R (r x n, row-major), then one
    sparse-encoder label block per row. Output ``(i, j)`` is index ``i*n + j``.
    """

    n: int
    r: int
    s: int
    encoder: HypergraphEncoder
    g: PolyFunction

    def l_var(self, i: int, t: int) -> int:
        return i * self.r + t

    def r_var(self, t: int, j: int) -> int:
        return self.n * self.r + t * self.n + j

    def block_offset(self, i: int) -> int:
        return 2 * self.n * self.r + i * self.encoder.f.n

    def to_matrix(self, y: GF2Vector) -> GF2Matrix:
        if y.length != self.n * self.n:
            raise DimensionMismatchError(f"need {self.n * self.n} outputs, got {y.length}")
        mask = (1 << self.n) - 1
        return GF2Matrix(self.n, self.n, tuple((y.bits >> (i * self.n)) & mask for i in range(self.n)))


def build_rigid_instance(n: int, r: int, s: int) -> RigidInstance:
    root = math.isqrt(n)
    if n < 1 or root * root != n:
        raise ParameterError(f"matrix side n={n} must be a perfect square")
    if not 1 <= r <= n:
        raise ParameterError(f"rank budget r={r} must lie in [1, {n}]")
    if s < 0 or s > n:
        raise ParameterError(f"sparsity budget s={s} must lie in [0, {n}]")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        enc = build_sparse_encoder(n, s, 2)
    if not s < root / 2:
        warnings.warn(f"sparsity s={s} is outside s < sqrt(n)/2 for n={n}", stacklevel=2)
    inst = RigidInstance(n, r, s, enc, PolyFunction(0, 0, 2, ()))
    outs = []
    for i in range(n):
        off = inst.block_offset(i)
        for j in range(n):
            monos = [(inst.l_var(i, t), inst.r_var(t, j)) for t in range(r)]
            monos += [tuple(off + v for v in mono) for mono in enc.f.outputs[j]]
            outs.append(tuple(monos))
    n_inputs = 2 * n * r + n * enc.f.n
    g = PolyFunction(n_inputs, n * n, 2, tuple(outs))
    return RigidInstance(n, r, s, enc, g)


def rigid_witness(RI: RigidInstance, L: GF2Matrix, R: GF2Matrix, S: GF2Matrix) -> GF2Vector:
    """Input of ``g`` evaluating to ``L R + S``."""
    n, r = RI.n, RI.r
    if L.shape != (n, r) or R.shape != (r, n) or S.shape != (n, n):
        raise DimensionMismatchError(
            f"expected shapes {(n, r)}, {(r, n)}, {(n, n)}; got {L.shape}, {R.shape}, {S.shape}")
    bits = 0
    for i in range(n):
        for t in range(r):
            bits |= L[i, t] << RI.l_var(i, t)
    for t in range(r):
        for j in range(n):
            bits |= R[t, j] << RI.r_var(t, j)
    for i in range(n):
        labels = sparse_witness(RI.encoder, S.row(i))
        bits |= labels.bits << RI.block_offset(i)
    return GF2Vector(RI.g.n, bits)
