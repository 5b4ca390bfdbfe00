"""Tests for reading and writing instance files."""

from pathlib import Path

import pytest

from blockip.errors import InstanceParseError
from blockip.numerics.vectors import IntMat
from blockip.parsing.instance_parser import (
    OBJECTIVE_REJECTED,
    format_instance,
    format_solution,
    parse_instance,
)
from blockip.programs.models import FourBlockProgram, NFoldProgram, TwoStageProgram

FIXTURES_DIR = Path(__file__).parent / "fixtures"

NFOLD_TEXT = """# comment
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
-3 0 1   # trailing comment
b 1 0
ENDBRICK
END
"""


def _fixture(name: str) -> str:
    return (FIXTURES_DIR / name).read_text(encoding="utf-8")


def test_parse_two_stage_fixture():
    program = parse_instance(_fixture("twostage_small.txt"))
    assert isinstance(program, TwoStageProgram)
    assert program.num_globals == program.num_locals == program.num_rows == 1
    brick = program.bricks[0]
    assert brick.A == IntMat.of([[1]])
    assert brick.D == IntMat.of([[2]])
    assert brick.b == (5,)


def test_parse_nfold_keeps_multiplicity_and_default_cost():
    program = parse_instance(NFOLD_TEXT)
    assert isinstance(program, NFoldProgram)
    assert len(program.bricks) == 1
    assert program.bricks[0].multiplicity == 2
    assert program.bricks[0].c == (0, 0, 0)
    assert program.count == 2
    assert "BRICK x2" in format_instance(program)


def test_parse_fourblock_fixture():
    program = parse_instance(_fixture("fourblock_small.txt"))
    assert isinstance(program, FourBlockProgram)
    assert program.is_uniform
    assert program.a == (5,)
    assert program.check((1,), ((1, 0), (0, 1))) == []


def test_two_stage_multiplicity_is_expanded():
    text = "TWOSTAGE\nGLOBALS 1\nLOCALS 1\nLOCALROWS 1\nBRICK x3\nA\n1\nD\n1\nb 2\nENDBRICK\nEND\n"
    program = parse_instance(text)
    assert len(program.bricks) == 3


@pytest.mark.parametrize(
    "name", ["twostage_small.txt", "nfold_subset_sum.txt", "fourblock_small.txt"]
)
def test_canonical_text_parses_to_same_program(name):
    program = parse_instance(_fixture(name))
    text = format_instance(program)
    assert parse_instance(text) == program
    assert format_instance(parse_instance(text)) == text


def test_zero_globals_have_no_rows():
    text = "TWOSTAGE\nGLOBALS 0\nLOCALS 1\nLOCALROWS 1\nBRICK\nA\nD\n1\nb 4\nENDBRICK\nEND\n"
    program = parse_instance(text)
    assert program.num_globals == 0
    assert program.bricks[0].A.ncols == 0


def test_objective_line_rejected_for_two_stage():
    text = "TWOSTAGE\nGLOBALS 1\nLOCALS 1\nLOCALROWS 1\nBRICK\nA\n1\nD\n1\nc 1\n"
    with pytest.raises(InstanceParseError) as exc:
        parse_instance(text)
    assert exc.value.line == 10
    assert OBJECTIVE_REJECTED in str(exc.value)


@pytest.mark.parametrize(
    "text,line,column,fragment",
    [
        ("", 1, 1, "unexpected end of file"),
        ("THREESTAGE\n", 1, 1, "expected one of"),
        ("NFOLD\nLOCALS x\n", 2, 1, "LOCALS n"),
        ("NFOLD\nLOCALS 1\nLINKROWS 1\nLOCALROWS 1\nC\n  1 x\n", 6, 5, "integer"),
        ("NFOLD\nLOCALS 2\nLINKROWS 1\nLOCALROWS 1\nC\n1 1\na 1 2\n", 7, 1, "expected 1"),
        ("NFOLD\nLOCALS 1\nLINKROWS 1\nLOCALROWS 1\nC\n1\nEND\n", 7, 1, "missing a"),
        ("NFOLD\nLOCALS 1\nLINKROWS 1\nLOCALROWS 1\nC\n1\nC\n", 7, 1, "given twice"),
        (
            "NFOLD\nLOCALS 1\nLINKROWS 1\nLOCALROWS 1\nC\n1\na 1\nBRICK\nD\n1\nENDBRICK\n",
            11,
            1,
            "missing b",
        ),
        (
            "NFOLD\nLOCALS 1\nLINKROWS 1\nLOCALROWS 1\nC\n1\na 1\nBRICK x0\n",
            8,
            1,
            "multiplicity",
        ),
        ("NFOLD\nLOCALS 1\nLINKROWS 1\nLOCALROWS 1\nC\n1\na 1\nEND\nBRICK\n", 9, 1, "after END"),
    ],
)
def test_parse_errors_carry_position(text, line, column, fragment):
    with pytest.raises(InstanceParseError) as exc:
        parse_instance(text)
    assert (exc.value.line, exc.value.column) == (line, column)
    assert fragment in str(exc.value)


def test_format_solution():
    assert format_solution([("u", (1,)), ("v0", (2, -3))]) == "SOLUTION\nu 1\nv0 2 -3\nEND\n"
