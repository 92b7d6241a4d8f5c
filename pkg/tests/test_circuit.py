import random
from itertools import product

import numpy as np
import pytest

from rangeavoid.circuit import (LocalCircuit, PartialAssignment, PolyFunction, TwoLocalKind,
                                classify_two_local, eval_circuit, gen_random_nc0,
                                gen_random_poly, pad_to_arity, restrict_inputs)
from rangeavoid.errors import DimensionMismatchError, ParameterError, ParseError
from rangeavoid.formats import (parse_nc0, parse_poly, parse_vec, write_nc0, write_poly,
                                write_vec)
from rangeavoid.gf2 import GF2Vector

AND = [0, 0, 0, 1]


def V(s):
    return GF2Vector.from_str(s)


def test_eval_circuit_examples():
    C = LocalCircuit.from_tables(2, [((0, 1), AND)])
    assert str(eval_circuit(C, V("11"))) == "1"
    assert str(eval_circuit(C, V("10"))) == "0"
    dup = LocalCircuit.from_tables(1, [((0,), [0, 1]), ((0,), [0, 1])])
    assert str(dup(V("1"))) == "11"
    with pytest.raises(DimensionMismatchError):
        eval_circuit(C, V("1"))


def test_from_tables_sorts_inputs():
    # y = x1 AND NOT x0, given with inputs listed as (1, 0): pattern bit 0 is x1
    C = LocalCircuit.from_tables(2, [((1, 0), [0, 1, 0, 0])])
    assert C.outputs[0].inputs == (0, 1)
    for x in range(4):
        x0, x1 = x & 1, x >> 1
        assert C.eval_int(x) == (x1 & (1 - x0))


def test_eval_poly_examples():
    P = PolyFunction.from_monomials(3, [[(0, 1), (2,)]])
    assert str(P(V("110"))) == "1"
    assert str(P(V("101"))) == "1"
    Q = PolyFunction.from_monomials(3, [[(), (0,)], [(1, 2)], [()]])
    assert str(Q(V("000"))) == "101"


def test_poly_rejects_duplicates_and_high_degree():
    with pytest.raises(ParameterError):
        PolyFunction(2, 1, 2, (((0,), (0,)),))
    with pytest.raises(ParameterError):
        PolyFunction(3, 1, 1, (((0, 1),),))


def test_classify_examples():
    f = classify_two_local(AND, (0, 1))
    assert (f.kind, f.a1, f.a2, f.c) == (TwoLocalKind.QUADRATIC, 0, 0, 0)
    f = classify_two_local([0, 1, 1, 0], (0, 1))
    assert (f.kind, f.a1, f.a2, f.c) == (TwoLocalKind.AFFINE, 1, 1, 0)
    f = classify_two_local([1, 0, 0, 0], (0, 1))  # NOR
    assert (f.kind, f.a1, f.a2, f.c) == (TwoLocalKind.QUADRATIC, 1, 1, 0)
    with pytest.raises(ParameterError):
        classify_two_local([0, 1, 1], (0, 1))


@pytest.mark.parametrize("code", range(16))
def test_classify_all_two_input_tables(code):
    table = [(code >> p) & 1 for p in range(4)]
    f = classify_two_local(table, (3, 5))
    for p in range(4):
        x = ((p & 1) << 3) | ((p >> 1) << 5)
        assert f.value(x) == table[p]
    degree2 = table[0] ^ table[1] ^ table[2] ^ table[3]
    assert (f.kind is TwoLocalKind.QUADRATIC) == bool(degree2)


@pytest.mark.parametrize("table", [[0], [1], [0, 1], [1, 0], [0, 0], [1, 1]])
def test_classify_small_tables(table):
    idx = (2,) if len(table) == 2 else ()
    f = classify_two_local(table, idx)
    for x in range(8):
        assert f.value(x) == table[(x >> 2) & 1 if idx else 0]


def test_pad_to_arity_example():
    C = LocalCircuit.from_tables(4, [((0,), [0, 1])])
    P = pad_to_arity(C, 3)
    assert P.outputs[0].inputs == (0, 1, 2)
    assert len(P.outputs[0].table_bits()) == 8
    for x in range(16):
        assert P.eval_int(x) == C.eval_int(x)
    same = LocalCircuit.from_tables(4, [((0, 1, 3), [0, 1, 1, 0, 1, 0, 0, 1])])
    assert pad_to_arity(same, 3) == same
    with pytest.raises(ParameterError):
        pad_to_arity(LocalCircuit.from_tables(2, [((0,), [0, 1])]), 3)


def test_pad_preserves_evaluation_random():
    for seed in range(20):
        C = gen_random_nc0(6, 8, 2, seed)
        P = pad_to_arity(C, 4)
        assert all(o.arity == 4 for o in P.outputs)
        for x in range(64):
            assert P.eval_int(x) == C.eval_int(x)


def test_restrict_examples():
    C = LocalCircuit.from_tables(2, [((0, 1), AND)])
    one = restrict_inputs(C, {0: 1})
    assert one.outputs[0].inputs == (1,)
    assert one.outputs[0].table_bits() == [0, 1]
    zero = restrict_inputs(C, {0: 0})
    assert zero.outputs[0].table_bits() == [0, 0]
    xor3 = LocalCircuit.from_tables(3, [((0, 1, 2), [bin(p).count("1") % 2 for p in range(8)])])
    r = restrict_inputs(xor3, {0: 1})
    for x in range(8):
        x1, x2 = (x >> 1) & 1, (x >> 2) & 1
        assert r.eval_int(x) == 1 ^ x1 ^ x2
    with pytest.raises(ParameterError):
        restrict_inputs(C, {5: 0})


def test_restrict_commutes_with_evaluation_exhaustive():
    rng = random.Random(5)
    for seed in range(15):
        n = rng.randint(3, 10)
        C = gen_random_nc0(n, 6, 3, seed)
        fixed = rng.sample(range(n), rng.randint(1, n))
        for vals in product((0, 1), repeat=len(fixed)):
            rho = dict(zip(fixed, vals))
            R = restrict_inputs(C, rho)
            base = sum(v << i for i, v in rho.items())
            free = [i for i in range(n) if i not in rho]
            for fv in range(1 << min(len(free), 4)):
                x = base | sum(((fv >> t) & 1) << i for t, i in enumerate(free[:4]))
                assert R.eval_int(x) == C.eval_int(x)


def test_partial_assignment_is_write_once():
    y = PartialAssignment(3)
    y.set(1, 1)
    assert str(y) == "*1*"
    with pytest.raises(ParameterError):
        y.set(1, 0)
    assert str(y.complete()) == "010"


def test_nc0_format_examples():
    C = parse_nc0("nc0 2 1 2\n0: 0 1 : 0001\n")
    assert C == LocalCircuit.from_tables(2, [((0, 1), AND)])
    assert parse_nc0(write_nc0(C)) == C
    with pytest.raises(ParseError) as err:
        parse_nc0("nc0 2 1 2\n0: 0 1 : 001\n")
    assert err.value.line == 2
    with pytest.raises(ParseError):
        parse_nc0("nc0 2 1 2\n0: 1 1 : 0001\n")
    with pytest.raises(ParseError):
        parse_nc0("nc0 2 2 2\n0: 0 1 : 0001\n")


def test_nc0_comments_and_whitespace():
    text = "# hello\nnc0 3 2 2   # header\n\n0 : 2 : 0 1\n1:: 1\n"
    C = parse_nc0(text)
    assert C.outputs[0].inputs == (2,) and C.outputs[1].inputs == ()
    assert write_nc0(parse_nc0(write_nc0(C))) == write_nc0(C)


def test_poly_format_examples():
    P = parse_poly("poly 3 1 2\n0: x0*x1 + x2\n")
    assert P == PolyFunction.from_monomials(3, [[(0, 1), (2,)]])
    Q = parse_poly("poly 2 2 2\n0: 1 + x1*x0\n1: 0\n")
    assert Q.outputs == (((), (0, 1)), ())
    assert parse_poly(write_poly(Q)) == Q
    with pytest.raises(ParseError) as err:
        parse_poly("poly 3 1 1\n0: x0*x1\n")
    assert err.value.line == 2
    with pytest.raises(ParseError):
        parse_poly("poly 3 1 2\n0: x0 + x0\n")


def test_format_roundtrip_random():
    for seed in range(10):
        C = gen_random_nc0(7, 9, 3, seed)
        assert parse_nc0(write_nc0(C)) == C
        P = gen_random_poly(5, 4, 2, seed)
        assert parse_poly(write_poly(P)) == P


def test_vec_format():
    assert parse_vec("0101\n") == V("0101")
    assert write_vec(V("110")) == "110\n"
    with pytest.raises(ParseError):
        parse_vec("012")


def test_generators_deterministic():
    assert gen_random_nc0(8, 24, 3, 7) == gen_random_nc0(8, 24, 3, 7)
    assert gen_random_nc0(8, 24, 3, 7) != gen_random_nc0(8, 24, 3, 8)
    C = gen_random_nc0(4, 12, 3, 0)
    assert all(o.arity == 3 for o in C.outputs)
    assert gen_random_poly(5, 3, 2, 1) == gen_random_poly(5, 3, 2, 1)
    with pytest.raises(ParameterError):
        gen_random_nc0(2, 4, 3, 0)


def test_generator_table_weight_distribution():
    k = 3
    weights = [sum(gen_random_nc0(5, 1, k, seed).outputs[0].table_bits()) for seed in range(1000)]
    # table weight ~ Binomial(2^k, 1/2); the mean of 1000 draws has sd sqrt(2^k/4 / 1000)
    sd = np.sqrt((1 << k) / 4 / 1000)
    assert abs(np.mean(weights) - (1 << k) / 2) < 3 * sd
