"""Command-line entry point.

Exit codes: 0 success, 2 parse/parameter error, 3 stretch or locality
violation, 4 budget exceeded, 5 failed verification.
"""

from __future__ import annotations

import argparse
import ast
import csv
import math
import operator
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .circuit import RNG_SCHEME, LocalCircuit, PolyFunction, gen_random_nc0, gen_random_poly
from .encoding import (EncodingLayout, build_rigid_instance, build_sparse_encoder,
                       decode_with_layout, encode_degree_d)
from .errors import AvoidError, BudgetError, ParameterError, VerificationError
from .formats import (header_comments, load_instance, parse_vec, write_nc0, write_poly,
                      write_vec)
from .solvers import SolverTrace, brute_force_avoid, solve_degree2, solve_local
from .verify import in_range, rigid_pipeline

ALGORITHMS = ("brute", "nc02", "subspace-union", "one-subspace", "degree2")


@dataclass
class RunReport:
    """Line-oriented ``key=value`` record of one command run."""

    command: str
    fields: dict[str, object] = field(default_factory=dict)

    def __setitem__(self, key: str, value: object) -> None:
        self.fields[key] = value

    def to_text(self) -> str:
        lines = [f"command={self.command}"]
        lines += [f"{k}={v}" for k, v in self.fields.items()]
        return "\n".join(lines) + "\n"


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParameterError(f"cannot read {path}: {exc.strerror or exc}") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _load(path: str) -> LocalCircuit | PolyFunction:
    _read(path)
    return load_instance(path)


def _solve(instance: LocalCircuit | PolyFunction, alg: str, args, trace: SolverTrace):
    limit = args.limit
    if alg == "degree2":
        if not isinstance(instance, PolyFunction):
            raise ParameterError("--alg degree2 expects a .poly instance")
        return solve_degree2(instance, args.strategy, limit, args.max_branches, trace, args.workers)
    if alg == "brute":
        return brute_force_avoid(instance, limit, args.workers)
    if not isinstance(instance, LocalCircuit):
        raise ParameterError(f"--alg {alg} expects a .nc0 instance")
    try:
        return solve_local(instance, alg, limit, args.max_branches, trace, args.workers)
    except BudgetError:
        if not args.fallback_brute:
            raise
        trace.fallback = True
        return brute_force_avoid(instance, limit, args.workers)


def cmd_solve(args, report: RunReport) -> int:
    instance = _load(args.inp)
    report["input"] = args.inp
    report["n"] = instance.n
    report["m"] = instance.m
    report["alg"] = args.alg
    if args.seed_report:
        for i, line in enumerate(header_comments(_read(args.inp))):
            report[f"header{i}"] = line
    trace = SolverTrace()
    start = time.perf_counter()
    y = _solve(instance, args.alg, args, trace)
    report["micros"] = int((time.perf_counter() - start) * 1e6)
    report["t"] = trace.branches
    report["iterations"] = trace.iterations
    if getattr(trace, "fallback", False):
        report["fallback"] = "brute"
    report["y"] = str(y)
    _write(args.out, write_vec(y))
    report["output"] = args.out or "-"
    if args.verify:
        member = in_range(instance, y, args.limit, args.workers)
        report["verified"] = not member
        if member:
            raise VerificationError(f"solver output {y} lies in the range")
    return 0


def cmd_gen(args, report: RunReport) -> int:
    report["kind"] = args.kind
    if args.kind == "random-nc0":
        C = gen_random_nc0(args.n, args.m, args.k, args.seed)
        text = write_nc0(C, (f"generator {RNG_SCHEME} seed={args.seed}",
                             f"random-nc0 n={args.n} m={args.m} k={args.k}"))
    elif args.kind == "random-poly":
        P = gen_random_poly(args.n, args.m, args.d, args.seed, args.density)
        text = write_poly(P, (f"generator {RNG_SCHEME} seed={args.seed}",
                              f"random-poly n={args.n} m={args.m} d={args.d} density={args.density}"))
    elif args.kind == "sparse-encoder":
        H = build_sparse_encoder(args.n, args.s, args.d)
        text = write_poly(H.f, (f"sparse-encoder n={args.n} s={args.s} d={args.d} vertices={H.ell}",))
    else:
        inst = build_rigid_instance(args.n, args.r, args.s)
        text = write_poly(inst.g, (f"rigid n={args.n} r={args.r} s={args.s}",
                                   "inputs: L row-major, R row-major, then per-row encoder labels",
                                   "output (i, j) is index i*n + j"))
    _write(args.out, text)
    report["output"] = args.out or "-"
    return 0


def cmd_encode(args, report: RunReport) -> int:
    P = _load(args.inp)
    if not isinstance(P, PolyFunction):
        raise ParameterError("encode expects a .poly instance")
    E = encode_degree_d(P)
    _write(args.out, write_nc0(E.fhat, (f"encoding of {args.inp}: k={E.k}",)))
    Path(args.layout).write_text(E.layout.to_text())
    report["n_hat"] = E.fhat.n
    report["m_hat"] = E.fhat.m
    report["locality"] = E.fhat.k
    return 0


def cmd_decode(args, report: RunReport) -> int:
    layout = EncodingLayout.from_text(_read(args.layout))
    yhat = parse_vec(_read(args.inp))
    y = decode_with_layout(layout, yhat)
    _write(args.out, write_vec(y))
    report["y"] = str(y)
    return 0


def cmd_verify(args, report: RunReport) -> int:
    C = _load(args.circuit)
    y = parse_vec(_read(args.point))
    member = in_range(C, y, args.limit, args.workers)
    report["in_range"] = member
    if member:
        raise VerificationError(f"{y} lies in the range")
    return 0


def cmd_rigid_pipeline(args, report: RunReport) -> int:
    start = time.perf_counter()
    res = rigid_pipeline(args.n, args.r, args.s, args.alg, args.limit, args.max_branches,
                         workers=args.workers)
    report["micros"] = int((time.perf_counter() - start) * 1e6)
    report["inputs"] = res.n_inputs
    report["verdict"] = "rigid" if res.certificate.rigid else "non-rigid"
    report["matrix"] = "/".join(res.M.to_strs())
    _write(args.cert, res.certificate.to_text())
    return 0


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.FloorDiv: operator.floordiv, ast.Pow: operator.pow}
_FUNCS = {"ceil": math.ceil, "floor": math.floor, "comb": math.comb, "log2": math.log2,
          "sqrt": math.sqrt}


def eval_m_rule(expr: str, n: int) -> int:
    """Evaluate an arithmetic rule in ``n`` such as ``3*n``, ``n^2/4`` or ``comb(n,2)/3+2*n``.

    The result is rounded up.
    """
    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return node.value
        if isinstance(node, ast.Name) and node.id == "n":
            return n
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -ev(node.operand)
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in _FUNCS:
            return _FUNCS[node.func.id](*(ev(a) for a in node.args))
        raise ParameterError(f"unsupported m-rule expression: {expr!r}")

    try:
        tree = ast.parse(expr.strip().replace("^", "**"), mode="eval")
    except SyntaxError:
        raise ParameterError(f"cannot parse m-rule {expr!r}") from None
    return math.ceil(ev(tree))


def split_rules(text: str) -> list[str]:
    """Split on commas that are not inside parentheses."""
    rules, depth, cur = [], 0, ""
    for ch in text:
        depth += (ch == "(") - (ch == ")")
        if ch == "," and depth == 0:
            rules.append(cur)
            cur = ""
        else:
            cur += ch
    rules.append(cur)
    return [r.strip() for r in rules if r.strip()]


def _int_range(text: str) -> list[int]:
    try:
        if ":" in text:
            lo, hi = (int(v) for v in text.split(":"))
            return list(range(lo, hi + 1))
        return [int(v) for v in text.split(",")]
    except ValueError:
        raise ParameterError(f"bad range {text!r}; use LO:HI or a comma list") from None


BENCH_FIELDS = ["n", "m", "k", "alg", "t", "iters", "micros", "verified"]


def bench_rows(k: int, ns: list[int], rules: list[str], seeds: int, algs: list[str],
               verify: bool, limit: int | None = None, max_branches: int | None = None):
    for n in ns:
        for rule in rules:
            m = eval_m_rule(rule, n)
            for seed in range(seeds):
                C = gen_random_nc0(n, m, k, seed)
                for alg in algs:
                    trace = SolverTrace()
                    start = time.perf_counter()
                    try:
                        y = solve_local(C, alg, limit, max_branches, trace)
                    except AvoidError as exc:
                        row = dict(n=n, m=m, k=k, alg=alg, t="", iters="", micros="",
                                   verified=f"error:{type(exc).__name__}")
                        yield row
                        continue
                    micros = int((time.perf_counter() - start) * 1e6)
                    t = C.n if alg == "brute" else trace.branches
                    verified = "" if not verify else str(not in_range(C, y, limit)).lower()
                    yield dict(n=n, m=m, k=k, alg=alg, t=t, iters=trace.iterations,
                               micros=micros, verified=verified)


def cmd_bench(args, report: RunReport) -> int:
    ns = _int_range(args.n_range)
    rules = split_rules(args.m_rule)
    algs = [a.strip() for a in args.algs.split(",")]
    out = sys.stdout if args.csv in (None, "-") else open(args.csv, "w", newline="")
    try:
        writer = csv.DictWriter(out, fieldnames=BENCH_FIELDS, lineterminator="\n")
        writer.writeheader()
        count = 0
        for row in bench_rows(args.k, ns, rules, args.seeds, algs, args.verify, args.limit,
                              args.max_branches):
            writer.writerow(row)
            count += 1
    finally:
        if out is not sys.stdout:
            out.close()
    report["rows"] = count
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rangeavoid", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--report", help="write the run report here instead of stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def limits(p):
        p.add_argument("--limit", type=int, default=None,
                       help="max inputs to enumerate (env RANGEAVOID_ENUM_LIMIT)")
        p.add_argument("--max-branches", type=int, default=None,
                       help="SubspaceUnion branch cap (env RANGEAVOID_MAX_BRANCHES)")
        p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("solve", help="find a point outside the range")
    p.add_argument("--alg", choices=ALGORITHMS, required=True)
    p.add_argument("--strategy", default="brute",
                   help="local-circuit solver used by --alg degree2")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out")
    p.add_argument("--verify", action="store_true")
    p.add_argument("--fallback-brute", action="store_true",
                   help="use brute force when the branch cap is exceeded")
    p.add_argument("--seed-report", action="store_true",
                   help="copy the instance's header comments (generator, seed) into the report")
    limits(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("gen", help="write an instance")
    gsub = p.add_subparsers(dest="kind", required=True)
    g = gsub.add_parser("random-nc0")
    for name in ("--n", "--m", "--k", "--seed"):
        g.add_argument(name, type=int, required=True)
    g = gsub.add_parser("random-poly")
    for name in ("--n", "--m", "--d", "--seed"):
        g.add_argument(name, type=int, required=True)
    g.add_argument("--density", type=float, default=0.2)
    g = gsub.add_parser("sparse-encoder")
    for name in ("--n", "--s", "--d"):
        g.add_argument(name, type=int, required=True)
    g = gsub.add_parser("rigid")
    for name in ("--n", "--r", "--s"):
        g.add_argument(name, type=int, required=True)
    for g in gsub.choices.values():
        g.add_argument("--out")
        g.set_defaults(func=cmd_gen)

    p = sub.add_parser("encode", help="encode a .poly map as a local circuit")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out")
    p.add_argument("--layout", required=True)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="decode an encoded point with a layout file")
    p.add_argument("--layout", required=True)
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("verify", help="check that a point is outside the range")
    p.add_argument("--circuit", required=True)
    p.add_argument("--point", required=True)
    limits(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("rigid-pipeline", help="construct and certify a rigid matrix")
    for name in ("--n", "--r", "--s"):
        p.add_argument(name, type=int, required=True)
    p.add_argument("--alg", default="brute",
                   help="'brute' on the degree-2 map, or a local-circuit strategy on its encoding")
    p.add_argument("--cert")
    limits(p)
    p.set_defaults(func=cmd_rigid_pipeline)

    p = sub.add_parser("bench", help="time solvers on seeded random instances")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n-range", required=True, help="LO:HI or a comma list")
    p.add_argument("--m-rule", required=True, help="comma list of expressions in n, e.g. '3*n,6*n'")
    p.add_argument("--seeds", type=int, default=1)
    p.add_argument("--algs", default="subspace-union")
    p.add_argument("--csv")
    p.add_argument("--verify", action="store_true")
    limits(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    report = RunReport(" ".join(sys.argv[:1] + (argv if argv is not None else sys.argv[1:])))
    for name in ("limit", "max_branches", "workers"):
        if not hasattr(args, name):
            setattr(args, name, None if name != "workers" else 1)
    try:
        code = args.func(args, report)
    except AvoidError as exc:
        code = exc.exit_code
        report["error"] = f"{type(exc).__name__}: {exc}"
    except OSError as exc:
        code = 2
        report["error"] = f"OSError: {exc}"
    report["status"] = code
    text = report.to_text()
    if args.report:
        Path(args.report).write_text(text)
    else:
        sys.stderr.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
