"""Deterministic range-avoidance algorithms for local circuits and low-degree maps over GF(2)."""

from .circuit import (LocalCircuit, LocalOutput, PartialAssignment, PolyFunction, TwoLocalFunction,
                      TwoLocalKind, classify_two_local, eval_circuit, eval_poly, gen_random_nc0,
                      gen_random_poly, pad_to_arity, restrict_inputs)
from .encoding import (EncodedCircuit, EncodingLayout, HypergraphEncoder, RigidInstance,
                       build_rigid_instance, build_sparse_encoder, decode, encode_degree_d,
                       encoding_witness, rigid_witness, sparse_witness)
from .errors import (AvoidError, BudgetError, DimensionMismatchError, LocalityError, ParameterError,
                     ParseError, PreconditionError, StretchError, VerificationError)
from .formats import parse_nc0, parse_poly, parse_vec, write_nc0, write_poly, write_vec
from .gf2 import AffineSubspace, GF2Matrix, GF2Vector, rank, subspace_from_constraints
from .solvers import (DenseSelection, SolverTrace, affine_reduce, brute_force_avoid, one_subspace,
                      select_dense_sets, solve_degree2, solve_nc02, subspace_union)
from .verify import (RigidityCertificate, check_avoid_solution, in_range, is_rigid,
                     is_rigid_by_sparse, rigid_pipeline)

__version__ = "0.1.0"

__all__ = [
    "LocalCircuit",
    "LocalOutput",
    "PartialAssignment",
    "PolyFunction",
    "TwoLocalFunction",
    "TwoLocalKind",
    "classify_two_local",
    "eval_circuit",
    "eval_poly",
    "gen_random_nc0",
    "gen_random_poly",
    "pad_to_arity",
    "restrict_inputs",
    "EncodedCircuit",
    "EncodingLayout",
    "HypergraphEncoder",
    "RigidInstance",
    "build_rigid_instance",
    "build_sparse_encoder",
    "decode",
    "encode_degree_d",
    "encoding_witness",
    "rigid_witness",
    "sparse_witness",
    "AvoidError",
    "BudgetError",
    "DimensionMismatchError",
    "LocalityError",
    "ParameterError",
    "ParseError",
    "PreconditionError",
    "StretchError",
    "VerificationError",
    "parse_nc0",
    "parse_poly",
    "parse_vec",
    "write_nc0",
    "write_poly",
    "write_vec",
    "AffineSubspace",
    "GF2Matrix",
    "GF2Vector",
    "rank",
    "subspace_from_constraints",
    "DenseSelection",
    "SolverTrace",
    "affine_reduce",
    "brute_force_avoid",
    "one_subspace",
    "select_dense_sets",
    "solve_degree2",
    "solve_nc02",
    "subspace_union",
    "RigidityCertificate",
    "check_avoid_solution",
    "in_range",
    "is_rigid",
    "is_rigid_by_sparse",
    "rigid_pipeline",
]
