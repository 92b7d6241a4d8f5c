import random
import warnings

import pytest

from oracles import image
from rangeavoid.circuit import PolyFunction, gen_random_poly
from rangeavoid.encoding import (EncodingLayout, build_rigid_instance, build_sparse_encoder,
                                 decode, encode_degree_d, encoding_witness, rigid_witness,
                                 sparse_vertex_count, sparse_witness)
from rangeavoid.errors import DimensionMismatchError, ParameterError, ParseError, PreconditionError
from rangeavoid.gf2 import GF2Matrix, GF2Vector


def V(s):
    return GF2Vector.from_str(s)


def _input(n_hat, x_bits, assignments):
    bits = x_bits
    for idx, b in assignments.items():
        bits |= b << idx
    return GF2Vector(n_hat, bits)


def test_block_example():
    # x0 x1 + x2, two monomials: r at 3, 4 and s at 5
    P = PolyFunction.from_monomials(3, [[(0, 1), (2,)]])
    E = encode_degree_d(P)
    assert E.k == 2
    assert (E.fhat.n, E.fhat.m) == (3 + 3 * 1, 4)
    assert E.layout.r_offsets == (3,) and E.layout.s_offsets == (5,)
    x = _input(6, 0b011, {3: 1, 4: 0, 5: 1})
    yhat = E.fhat(x)
    assert str(yhat) == "0001"
    assert str(decode(E, yhat)) == "1"
    assert decode(E, GF2Vector.zeros(4)) == GF2Vector.zeros(1)


def test_single_monomial_block():
    P = PolyFunction.from_monomials(2, [[(0, 1)]])
    E = encode_degree_d(P)
    assert E.k == 1 and E.layout.s_offsets == (2 + 1,)  # no s-variables are used
    assert E.fhat.n == 3 and E.fhat.m == 2
    for x in range(8):
        r = (x >> 2) & 1
        t = (x & 1) & ((x >> 1) & 1)
        assert E.fhat.eval_int(x) == (t ^ r) | (r << 1)


def test_padding_with_zero_terms():
    P = PolyFunction.from_monomials(3, [[(0,), (1,), (2,)], [(0, 2)]])
    E = encode_degree_d(P)
    assert E.k == 3
    assert (E.fhat.n, E.fhat.m) == (3 + 5 * 2, 12)
    for x in range(1 << E.fhat.n):
        assert decode(E, GF2Vector(E.fhat.m, E.fhat.eval_int(x))).bits == P.eval_int(x & 7)


def test_locality_bound_random():
    for seed in range(30):
        P = gen_random_poly(6, 4, 2, seed, density=0.3)
        E = encode_degree_d(P)
        # the middle chain bits read three variables even for linear terms
        assert E.fhat.max_arity <= max(3, P.d + 1)
        for o in E.fhat.outputs:
            assert o.arity <= 3


def test_decode_inverts_forward_random():
    rng = random.Random(2)
    for seed in range(20):
        P = gen_random_poly(5, 3, 2, seed, density=0.3)
        E = encode_degree_d(P)
        for _ in range(50):
            z = rng.getrandbits(E.fhat.n)
            assert decode(E, GF2Vector(E.fhat.m, E.fhat.eval_int(z))).bits == P.eval_int(z & 31)


def test_decode_length_mismatch():
    E = encode_degree_d(PolyFunction.from_monomials(1, [[(0,)]]))
    with pytest.raises(DimensionMismatchError):
        decode(E, V("1"))


def test_witness_examples():
    P = PolyFunction.from_monomials(3, [[(0, 1), (2,)]])
    E = encode_degree_d(P)
    x = V("110")
    w = encoding_witness(E, x, V("1000"))
    assert E.fhat(w) == V("1000")
    zero = E.fhat(_input(6, x.bits, {}))
    w0 = encoding_witness(E, x, zero)
    assert w0.bits == x.bits
    with pytest.raises(PreconditionError):
        encoding_witness(E, x, V("0000"))


def test_witness_random_fibers():
    rng = random.Random(4)
    for seed in range(20):
        P = gen_random_poly(4, 3, 2, seed, density=0.4)
        E = encode_degree_d(P)
        for _ in range(30):
            xb = rng.getrandbits(4)
            yhat = GF2Vector(E.fhat.m, rng.getrandbits(E.fhat.m))
            x = GF2Vector(4, xb)
            if decode(E, yhat).bits == P.eval_int(xb):
                assert E.fhat(encoding_witness(E, x, yhat)) == yhat
            else:
                with pytest.raises(PreconditionError):
                    encoding_witness(E, x, yhat)


def test_avoid_transfer_small():
    for seed in range(10):
        P = gen_random_poly(2, 2, 2, seed, density=0.5)
        E = encode_degree_d(P)
        if E.fhat.n > 14:
            continue
        img_hat = image(E.fhat, E.fhat.n)
        img = image(P, P.n)
        for yb in range(1 << E.fhat.m):
            if yb not in img_hat:
                assert decode(E, GF2Vector(E.fhat.m, yb)).bits not in img


def test_layout_roundtrip_and_corruption():
    lay = EncodingLayout.standard(3, 2, 2)
    assert lay.n_hat == 3 + 3 * 2 and lay.m_hat == 8
    assert lay.out_offsets == (0, 4)
    assert lay.r_offsets == (3, 5)
    assert lay.s_offsets == (7, 8)
    assert EncodingLayout.from_text(lay.to_text()) == lay
    with pytest.raises(ParseError):
        EncodingLayout.from_text(lay.to_text().replace("out 4", "out 5"))
    with pytest.raises(ParseError):
        EncodingLayout.from_text("garbage\n")


def test_sparse_vertex_count():
    assert sparse_vertex_count(4, 2) == 4
    assert sparse_vertex_count(9, 2) == 5
    assert sparse_vertex_count(6, 2) == 4
    assert sparse_vertex_count(1, 3) == 3


def test_sparse_encoder_example():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        H = build_sparse_encoder(4, 1, 2)
    assert H.ell == 4
    assert H.edges == ((0, 1), (0, 2), (0, 3), (1, 2))
    assert str(H.f(V("1100"))) == "1000"
    assert H.f(GF2Vector.zeros(4)) == GF2Vector.zeros(4)
    assert sparse_witness(H, GF2Vector.zeros(4)) == GF2Vector.zeros(4)
    assert str(sparse_witness(H, V("1000"))) == "1100"
    with pytest.raises(PreconditionError):
        sparse_witness(H, V("1100"))


def test_sparse_encoder_warns_outside_hypothesis():
    with pytest.warns(UserWarning):
        build_sparse_encoder(4, 1, 2)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        build_sparse_encoder(100, 2, 2)
    with pytest.raises(ParameterError):
        build_sparse_encoder(4, -1, 2)


def test_sparse_encoder_degree_and_distinct_edges():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        H = build_sparse_encoder(20, 3, 3)
    assert len(set(H.edges)) == 20
    for monos in H.f.outputs:
        assert all(len(mono) == 3 for mono in monos)
        assert len(monos) == 3


def test_rigid_instance_counts():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        RI = build_rigid_instance(4, 1, 1)
    assert (RI.g.n, RI.g.m, RI.g.d) == (24, 16, 2)
    assert RI.g(GF2Vector.zeros(24)) == GF2Vector.zeros(16)


def test_rigid_instance_rejects_bad_parameters():
    for args in [(3, 1, 1), (4, 0, 1), (4, 5, 1), (4, 1, 5), (4, 1, -1)]:
        with pytest.raises(ParameterError):
            build_rigid_instance(*args)


def test_rigid_witness_example():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        RI = build_rigid_instance(4, 1, 1)
    L = GF2Matrix.from_strs(["1", "1", "0", "0"])
    R = GF2Matrix.from_strs(["1010"])
    S = GF2Matrix.from_strs(["1000", "0000", "0000", "0000"])
    w = rigid_witness(RI, L, R, S)
    M = RI.to_matrix(RI.g(w))
    assert M.to_strs() == ["0010", "1010", "0000", "0000"]
    zero = rigid_witness(RI, GF2Matrix.zeros(4, 1), GF2Matrix.zeros(1, 4), GF2Matrix.zeros(4, 4))
    assert zero.bits == 0
    with pytest.raises(PreconditionError):
        rigid_witness(RI, L, R, GF2Matrix.from_strs(["1100", "0000", "0000", "0000"]))
    with pytest.raises(DimensionMismatchError):
        rigid_witness(RI, R, L, S)


@pytest.mark.parametrize("r", [1, 2])
def test_rigid_witness_round_trips(r):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        RI = build_rigid_instance(4, r, 1)
    rng = random.Random(r)
    for _ in range(200):
        L = GF2Matrix(4, r, tuple(rng.getrandbits(r) for _ in range(4)))
        R = GF2Matrix(r, 4, tuple(rng.getrandbits(4) for _ in range(r)))
        S = GF2Matrix(4, 4, tuple(0 if rng.random() < 0.4 else 1 << rng.randrange(4)
                                  for _ in range(4)))
        w = rigid_witness(RI, L, R, S)
        assert RI.to_matrix(RI.g(w)) == (L @ R) + S
