"""Plain-text formats: ``.nc0`` circuits, ``.poly`` maps and ``.vec`` points.

.nc0::

    nc0 <n> <m> <k>
    <j>: <i1> ... <il> : <2^l table bits>

.poly::

    poly <n> <m> <d>
    <j>: x0*x1 + x2 + 1

``#`` starts a comment. An output with no monomials is written as ``0``.
"""

from __future__ import annotations

import re
from pathlib import Path

from .circuit import LocalCircuit, LocalOutput, PolyFunction
from .errors import ParameterError, ParseError
from .gf2 import GF2Vector

_VAR = re.compile(r"^x(\d+)$")


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _header(lines, magic: str) -> tuple[int, int, int, int]:
    try:
        lineno, line = next(lines)
    except StopIteration:
        raise ParseError(f"missing '{magic}' header") from None
    parts = line.split()
    if len(parts) != 4 or parts[0] != magic:
        raise ParseError(f"expected '{magic} <n> <m> <{'k' if magic == 'nc0' else 'd'}>'", lineno)
    try:
        a, b, c = (int(p) for p in parts[1:])
    except ValueError:
        raise ParseError("header fields must be integers", lineno) from None
    if min(a, b, c) < 0:
        raise ParseError("header fields must be non-negative", lineno)
    return lineno, a, b, c


def _output_index(lineno: int, head: str, expected: int) -> None:
    try:
        j = int(head)
    except ValueError:
        raise ParseError(f"bad output index {head!r}", lineno) from None
    if j != expected:
        raise ParseError(f"expected output {expected}, found {j}", lineno)


def parse_nc0(text: str) -> LocalCircuit:
    lines = _content_lines(text)
    hline, n, m, k = _header(lines, "nc0")
    outs = []
    last = hline
    for lineno, line in lines:
        last = lineno
        parts = line.split(":")
        if len(parts) != 3:
            raise ParseError("expected '<j>: <inputs> : <table>'", lineno)
        _output_index(lineno, parts[0].strip(), len(outs))
        try:
            inputs = tuple(int(t) for t in parts[1].split())
        except ValueError:
            raise ParseError("input indices must be integers", lineno) from None
        table = "".join(parts[2].split())
        if any(ch not in "01" for ch in table):
            raise ParseError("truth table must consist of 0/1", lineno)
        if len(table) != 1 << len(inputs):
            raise ParseError(f"truth table has {len(table)} bits, expected {1 << len(inputs)}", lineno)
        if list(inputs) != sorted(set(inputs)):
            raise ParseError("input indices must be sorted and distinct", lineno)
        if inputs and (inputs[0] < 0 or inputs[-1] >= n):
            raise ParseError(f"input index out of range for n={n}", lineno)
        if len(inputs) > k:
            raise ParseError(f"output reads {len(inputs)} inputs, locality is {k}", lineno)
        outs.append(LocalOutput(inputs, sum(int(ch) << p for p, ch in enumerate(table))))
    if len(outs) != m:
        raise ParseError(f"expected {m} outputs, found {len(outs)}", last)
    return LocalCircuit(n, m, k, tuple(outs))


def write_nc0(C: LocalCircuit, comments: tuple[str, ...] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"nc0 {C.n} {C.m} {C.k}")
    for j, out in enumerate(C.outputs):
        idx = " ".join(str(i) for i in out.inputs)
        bits = "".join(str(b) for b in out.table_bits())
        lines.append(f"{j}: {idx} : {bits}" if idx else f"{j}: : {bits}")
    return "\n".join(lines) + "\n"


def _parse_monomial(lineno: int, token: str) -> tuple[int, ...]:
    token = "".join(token.split())
    if token == "1":
        return ()
    mono = []
    for factor in token.split("*"):
        match = _VAR.match(factor)
        if not match:
            raise ParseError(f"bad monomial {token!r}", lineno)
        mono.append(int(match.group(1)))
    if len(set(mono)) != len(mono):
        raise ParseError(f"repeated variable in {token!r}", lineno)
    return tuple(sorted(mono))


def parse_poly(text: str) -> PolyFunction:
    lines = _content_lines(text)
    hline, n, m, d = _header(lines, "poly")
    outs = []
    last = hline
    for lineno, line in lines:
        last = lineno
        head, sep, body = line.partition(":")
        if not sep:
            raise ParseError("expected '<j>: <monomials>'", lineno)
        _output_index(lineno, head.strip(), len(outs))
        body = body.strip()
        monos: list[tuple[int, ...]] = []
        if body not in ("", "0"):
            monos = [_parse_monomial(lineno, tok) for tok in body.split("+")]
        if len(set(monos)) != len(monos):
            raise ParseError("duplicate monomial", lineno)
        for mono in monos:
            if len(mono) > d:
                raise ParseError(f"monomial of degree {len(mono)} exceeds d={d}", lineno)
            if mono and mono[-1] >= n:
                raise ParseError(f"variable index out of range for n={n}", lineno)
        outs.append(tuple(monos))
    if len(outs) != m:
        raise ParseError(f"expected {m} outputs, found {len(outs)}", last)
    return PolyFunction(n, m, d, tuple(outs))


def _format_monomial(mono: tuple[int, ...]) -> str:
    return "*".join(f"x{i}" for i in mono) if mono else "1"


def write_poly(P: PolyFunction, comments: tuple[str, ...] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"poly {P.n} {P.m} {P.d}")
    for j, monos in enumerate(P.outputs):
        body = " + ".join(_format_monomial(mono) for mono in monos) or "0"
        lines.append(f"{j}: {body}")
    return "\n".join(lines) + "\n"


def parse_vec(text: str) -> GF2Vector:
    lines = [line for _, line in _content_lines(text)]
    if len(lines) > 1:
        raise ParseError("a .vec file holds a single line", 2)
    body = lines[0] if lines else ""
    if any(ch not in "01" for ch in body):
        raise ParseError("vector must consist of 0/1 characters", 1)
    return GF2Vector.from_str(body) if body else GF2Vector(0)


def write_vec(v: GF2Vector) -> str:
    return f"{v}\n"


def header_comments(text: str) -> list[str]:
    """Leading ``#`` comment lines, without the marker."""
    out = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if not line.startswith("#"):
            break
        out.append(line[1:].strip())
    return out


def load_instance(path: str | Path) -> LocalCircuit | PolyFunction:
    """Read a ``.nc0`` or ``.poly`` file, dispatching on the header keyword."""
    text = Path(path).read_text()
    for _, line in _content_lines(text):
        word = line.split()[0]
        if word == "nc0":
            return parse_nc0(text)
        if word == "poly":
            return parse_poly(text)
        break
    raise ParameterError(f"{path}: not an nc0 or poly file")
