"""Line-oriented instance files for two-stage, n-fold and 4-block programs.

    # comment
    NFOLD
    LOCALS 3
    LINKROWS 1
    LOCALROWS 2
    C
    0 0 1
    a 8
    BRICK x2
    D
    1 1 0
    -3 0 1
    b 1 0
    c 0 0 0
    ENDBRICK
    END

Matrix keywords (A, D, C, Bmat) are followed by one line per row; vectors (a, b, c) sit on
the keyword line. A matrix with no columns has no row lines.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from blockip.errors import ContractViolation, InstanceParseError
from blockip.numerics.vectors import IntMat, Vector
from blockip.programs.models import (
    FourBlockBrick,
    FourBlockProgram,
    NFoldBrick,
    NFoldProgram,
    TwoStageBrick,
    TwoStageProgram,
)

Program = TwoStageProgram | NFoldProgram | FourBlockProgram

HEADERS = ("TWOSTAGE", "NFOLD", "FOURBLOCK")
DIMENSIONS = {
    "TWOSTAGE": ("GLOBALS", "LOCALS", "LOCALROWS"),
    "NFOLD": ("LOCALS", "LINKROWS", "LOCALROWS"),
    "FOURBLOCK": ("GLOBALS", "LOCALS", "LINKROWS", "LOCALROWS"),
}
BRICK_RE = re.compile(r"^BRICK(?:\s+x(?P<mult>\d+))?$")
INT_RE = re.compile(r"^-?\d+$")
TOKEN_RE = re.compile(r"\S+")

OBJECTIVE_REJECTED = "two-stage optimization is not supported (objective line)"


@dataclass
class _Line:
    number: int
    text: str
    indent: int


class _Reader:
    def __init__(self, text: str):
        self.lines = []
        for number, raw in enumerate(text.splitlines(), start=1):
            body = raw.split("#", 1)[0]
            if body.strip():
                self.lines.append(_Line(number, body.strip(), len(body) - len(body.lstrip())))
        self.pos = 0
        self.last = len(text.splitlines()) or 1

    def peek(self) -> _Line | None:
        return self.lines[self.pos] if self.pos < len(self.lines) else None

    def next(self, expected: str) -> _Line:
        line = self.peek()
        if line is None:
            raise InstanceParseError(self.last, 1, f"unexpected end of file, expected {expected}")
        self.pos += 1
        return line

    def ints(self, line: _Line, skip: int = 0) -> list[int]:
        values = []
        for match in list(TOKEN_RE.finditer(line.text))[skip:]:
            if not INT_RE.match(match.group()):
                column = line.indent + match.start() + 1
                raise InstanceParseError(
                    line.number, column, f"expected an integer, got {match.group()!r}"
                )
            values.append(int(match.group()))
        return values

    def vector(self, line: _Line, length: int) -> Vector:
        keyword = line.text.split()[0]
        values = self.ints(line, skip=1)
        if len(values) != length:
            raise InstanceParseError(
                line.number, 1, f"{keyword} has {len(values)} entries, expected {length}"
            )
        return tuple(values)

    def matrix(self, keyword: str, rows: int, cols: int) -> IntMat:
        if cols == 0:
            return IntMat.of([()] * rows, ncols=0)
        out = []
        for _ in range(rows):
            line = self.next(f"a row of {keyword}")
            values = self.ints(line)
            if len(values) != cols:
                raise InstanceParseError(
                    line.number, 1, f"row of {keyword} has {len(values)} entries, expected {cols}"
                )
            out.append(values)
        return IntMat.of(out, ncols=cols)


def _dimensions(reader: _Reader, kind: str) -> dict[str, int]:
    dims = {}
    for name in DIMENSIONS[kind]:
        line = reader.next(f"{name} n")
        fields = line.text.split()
        if len(fields) != 2 or fields[0] != name or not INT_RE.match(fields[1]):
            raise InstanceParseError(line.number, line.indent + 1, f"expected '{name} n'")
        dims[name] = int(fields[1])
        if dims[name] < 0:
            raise InstanceParseError(line.number, line.indent + 1, f"{name} must be nonnegative")
    return dims


def _section(
    reader: _Reader,
    kind: str,
    shapes: dict[str, tuple[int, int]],
    vectors: dict[str, int],
    stop: Iterable[str],
) -> tuple[dict[str, IntMat | Vector], _Line]:
    """Read keyword blocks until one of the stop words; returns the blocks and the stop line."""
    found: dict[str, IntMat | Vector] = {}
    stop = tuple(stop)
    while True:
        line = reader.next(" or ".join(stop))
        keyword = line.text.split()[0]
        if keyword in stop:
            return found, line
        if keyword in found:
            raise InstanceParseError(line.number, line.indent + 1, f"{keyword} given twice")
        if keyword == "c" and kind == "TWOSTAGE":
            raise InstanceParseError(line.number, line.indent + 1, OBJECTIVE_REJECTED)
        if keyword in shapes:
            if len(line.text.split()) != 1:
                column = line.indent + len(keyword) + 2
                raise InstanceParseError(line.number, column, f"{keyword} takes no values")
            found[keyword] = reader.matrix(keyword, *shapes[keyword])
        elif keyword in vectors:
            found[keyword] = reader.vector(line, vectors[keyword])
        else:
            raise InstanceParseError(line.number, line.indent + 1, f"unexpected {keyword!r}")


def _require(found: dict, names: Iterable[str], line: _Line, where: str) -> None:
    for name in names:
        if name not in found:
            raise InstanceParseError(line.number, line.indent + 1, f"{where} is missing {name}")


def _bricks(reader: _Reader, kind: str, dims: dict[str, int], start: _Line):
    """Yield (multiplicity, blocks, line) for every BRICK ... ENDBRICK group until END."""
    line = start
    while line.text != "END":
        match = BRICK_RE.match(line.text)
        if not match:
            raise InstanceParseError(line.number, line.indent + 1, "expected BRICK or END")
        mult = int(match.group("mult") or 1)
        if mult < 1:
            raise InstanceParseError(line.number, line.indent + 1, "multiplicity must be >= 1")
        rows = dims["LOCALROWS"]
        shapes = {"D": (rows, dims["LOCALS"])}
        vectors = {"b": rows}
        if kind != "NFOLD":
            shapes["A"] = (rows, dims["GLOBALS"])
        if kind == "NFOLD":
            vectors["c"] = dims["LOCALS"]
        if kind == "FOURBLOCK":
            shapes["C"] = (dims["LINKROWS"], dims["LOCALS"])
        blocks, end = _section(reader, kind, shapes, vectors, ("ENDBRICK",))
        required = ["D", "b"] + (["A"] if kind != "NFOLD" else [])
        required += ["C"] if kind == "FOURBLOCK" else []
        _require(blocks, required, end, f"brick at line {line.number}")
        yield mult, blocks, line
        line = reader.next("BRICK or END")
    if reader.peek() is not None:
        extra = reader.peek()
        raise InstanceParseError(extra.number, extra.indent + 1, "content after END")


def parse_instance(text: str) -> Program:
    """Parse one program; every problem is reported with its line and column."""
    reader = _Reader(text)
    header = reader.next("a header")
    kind = header.text
    if kind not in HEADERS:
        raise InstanceParseError(
            header.number, header.indent + 1, f"expected one of {', '.join(HEADERS)}"
        )
    dims = _dimensions(reader, kind)
    try:
        if kind == "TWOSTAGE":
            return _parse_twostage(reader, dims)
        if kind == "NFOLD":
            return _parse_nfold(reader, dims)
        return _parse_fourblock(reader, dims)
    except ContractViolation as exc:
        raise InstanceParseError(header.number, 1, f"dimension mismatch: {exc}") from exc


def _parse_twostage(reader: _Reader, dims: dict[str, int]) -> TwoStageProgram:
    found, line = _section(reader, "TWOSTAGE", {}, {}, ("BRICK", "END"))
    bricks = []
    for mult, blocks, _ in _bricks(reader, "TWOSTAGE", dims, line):
        bricks.extend([TwoStageBrick(blocks["A"], blocks["D"], blocks["b"])] * mult)
    return TwoStageProgram(dims["GLOBALS"], dims["LOCALS"], dims["LOCALROWS"], tuple(bricks))


def _parse_nfold(reader: _Reader, dims: dict[str, int]) -> NFoldProgram:
    shapes = {"C": (dims["LINKROWS"], dims["LOCALS"])}
    found, line = _section(reader, "NFOLD", shapes, {"a": dims["LINKROWS"]}, ("BRICK", "END"))
    _require(found, ("C", "a"), line, "NFOLD header")
    bricks = []
    for mult, blocks, _ in _bricks(reader, "NFOLD", dims, line):
        cost = blocks.get("c", (0,) * dims["LOCALS"])
        bricks.append(NFoldBrick(blocks["D"], blocks["b"], cost, mult))
    return NFoldProgram(found["C"], found["a"], tuple(bricks))


def _parse_fourblock(reader: _Reader, dims: dict[str, int]) -> FourBlockProgram:
    shapes = {"Bmat": (dims["LINKROWS"], dims["GLOBALS"])}
    found, line = _section(reader, "FOURBLOCK", shapes, {"a": dims["LINKROWS"]}, ("BRICK", "END"))
    _require(found, ("Bmat", "a"), line, "FOURBLOCK header")
    bricks = []
    for mult, blocks, _ in _bricks(reader, "FOURBLOCK", dims, line):
        brick = FourBlockBrick(blocks["D"], blocks["b"], blocks["A"], blocks["C"])
        bricks.extend([brick] * mult)
    return FourBlockProgram(found["Bmat"], found["a"], tuple(bricks))


def format_vector(keyword: str, values: Iterable[int]) -> str:
    return " ".join([keyword, *(str(v) for v in values)])


def _matrix_lines(keyword: str, m: IntMat) -> list[str]:
    lines = [keyword]
    if m.ncols:
        lines += [" ".join(str(v) for v in row) for row in m.rows]
    return lines


def format_instance(program: Program) -> str:
    """Canonical text: no comments, bricks in program order, multiplicities kept for n-fold."""
    if isinstance(program, TwoStageProgram):
        lines = [
            "TWOSTAGE",
            f"GLOBALS {program.num_globals}",
            f"LOCALS {program.num_locals}",
            f"LOCALROWS {program.num_rows}",
        ]
        for brick in program.bricks:
            lines += ["BRICK", *_matrix_lines("A", brick.A), *_matrix_lines("D", brick.D)]
            lines += [format_vector("b", brick.b), "ENDBRICK"]
    elif isinstance(program, NFoldProgram):
        lines = [
            "NFOLD",
            f"LOCALS {program.num_locals}",
            f"LINKROWS {len(program.a)}",
            f"LOCALROWS {program.num_local_rows}",
            *_matrix_lines("C", program.C),
            format_vector("a", program.a),
        ]
        for brick in program.bricks:
            lines.append("BRICK" if brick.multiplicity == 1 else f"BRICK x{brick.multiplicity}")
            lines += _matrix_lines("D", brick.D)
            lines += [format_vector("b", brick.b), format_vector("c", brick.c), "ENDBRICK"]
    elif isinstance(program, FourBlockProgram):
        lines = [
            "FOURBLOCK",
            f"GLOBALS {program.num_globals}",
            f"LOCALS {program.num_locals}",
            f"LINKROWS {program.num_link_rows}",
            f"LOCALROWS {program.num_local_rows}",
            *_matrix_lines("Bmat", program.Bhat),
            format_vector("a", program.a),
        ]
        for brick in program.bricks:
            lines += ["BRICK", *_matrix_lines("A", brick.A), *_matrix_lines("D", brick.D)]
            lines += [*_matrix_lines("C", brick.C), format_vector("b", brick.b), "ENDBRICK"]
    else:
        raise ContractViolation(f"cannot format {type(program).__name__}")
    lines.append("END")
    return "\n".join(lines) + "\n"


def format_solution(parts: Iterable[tuple[str, Sequence[int]]]) -> str:
    """Witness dump: one named vector per line between SOLUTION and END."""
    lines = ["SOLUTION", *(format_vector(name, values) for name, values in parts), "END"]
    return "\n".join(lines) + "\n"
