"""End-to-end tests for the blockip command line."""

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from blockip import __version__
from blockip.cli import cli, main
from blockip.parsing.instance_parser import parse_instance
from blockip.programs.models import FourBlockProgram, NFoldProgram, TwoStageProgram

FIXTURES_DIR = Path(__file__).parent / "fixtures"
TWOSTAGE = str(FIXTURES_DIR / "twostage_small.txt")
PARITY = str(FIXTURES_DIR / "twostage_parity.txt")
SUBSET_SUM = str(FIXTURES_DIR / "nfold_subset_sum.txt")
FOURBLOCK = str(FIXTURES_DIR / "fourblock_small.txt")


@pytest.fixture
def runner():
    return CliRunner()


def test_version(runner):
    result = runner.invoke(cli, ["--version"])
    assert result.exit_code == 0
    assert __version__ in result.output


def test_solve_two_stage(runner):
    result = runner.invoke(cli, ["solve", "two-stage", TWOSTAGE, "--threads", "1"])
    assert result.exit_code == 0
    assert result.output == "FEASIBLE\n"


def test_solve_two_stage_with_solution(runner):
    result = runner.invoke(cli, ["solve", "two-stage", TWOSTAGE, "--solution", "--threads", "1"])
    assert result.exit_code == 0
    assert result.output == "FEASIBLE\nSOLUTION\nu 1\nv0 2\nEND\n"


@pytest.mark.parametrize("engine", ["residue", "direct"])
def test_solve_two_stage_infeasible(runner, engine):
    result = runner.invoke(cli, ["solve", "two-stage", PARITY, "--engine", engine])
    assert result.exit_code == 0
    assert result.output == "INFEASIBLE\n"


def test_solve_two_stage_json(runner):
    result = runner.invoke(
        cli, ["solve", "two-stage", TWOSTAGE, "--engine", "direct", "--json"]
    )
    assert result.exit_code == 0
    data = json.loads(result.output)
    assert data["status"] == "FEASIBLE"
    assert data["engine"] == "direct"
    assert [v["name"] for v in data["solution"]] == ["u", "v0"]


def test_solve_two_stage_budget_exit_code(runner):
    result = runner.invoke(cli, ["solve", "two-stage", TWOSTAGE, "--budget", "10"])
    assert result.exit_code == 3
    assert "RESOURCE_LIMIT" in result.output


def test_solve_nfold(runner):
    result = runner.invoke(cli, ["solve", "nfold", SUBSET_SUM, "--threads", "2"])
    assert result.exit_code == 0
    assert result.output == "OPTIMUM 2\n"


def test_solve_nfold_direct_json(runner):
    result = runner.invoke(cli, ["solve", "nfold", SUBSET_SUM, "--engine", "direct", "--json"])
    assert result.exit_code == 0
    data = json.loads(result.output)
    assert data["status"] == "OPTIMAL"
    assert data["value"] == "2"
    assert len(data["solution"]) == 3


def test_solve_rejects_wrong_kind(runner):
    result = runner.invoke(cli, ["solve", "nfold", TWOSTAGE])
    assert result.exit_code == 2
    assert "expected NFoldProgram" in result.output


def test_parse_error_exit_code(runner, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("TWOSTAGE\nGLOBALS one\n", encoding="utf-8")
    result = runner.invoke(cli, ["solve", "two-stage", str(bad)])
    assert result.exit_code == 2
    assert "line 2, column 1" in result.output


def test_gen_subset_sum(runner, tmp_path):
    out = tmp_path / "ss.txt"
    result = runner.invoke(
        cli, ["gen", "subset-sum", "--items", "3,5,7", "--target", "8", "-o", str(out)]
    )
    assert result.exit_code == 0
    assert "Written" in result.output
    program = parse_instance(out.read_text(encoding="utf-8"))
    assert isinstance(program, NFoldProgram)
    assert program.a == (8,)


def test_gen_subset_sum_bad_items(runner):
    result = runner.invoke(cli, ["gen", "subset-sum", "--items", "3,x", "--target", "3"])
    assert result.exit_code == 2


def test_gen_sat3(runner, tmp_path):
    out = tmp_path / "sat.txt"
    args = ["gen", "sat3", "--vars", "3", "--clauses", "2", "--seed", "1", "-o", str(out)]
    result = runner.invoke(cli, args)
    assert result.exit_code == 0
    program = parse_instance(out.read_text(encoding="utf-8"))
    assert isinstance(program, TwoStageProgram)
    assert len(program.bricks) == 2


def test_gen_sat3_from_dimacs(runner, tmp_path):
    cnf = tmp_path / "f.cnf"
    cnf.write_text("p cnf 3 1\n1 -2 3 0\n", encoding="utf-8")
    out = tmp_path / "sat.txt"
    result = runner.invoke(cli, ["gen", "sat3", "--dimacs", str(cnf), "-o", str(out)])
    assert result.exit_code == 0
    assert len(parse_instance(out.read_text(encoding="utf-8")).bricks) == 1


def test_gen_sat3_needs_a_formula(runner):
    result = runner.invoke(cli, ["gen", "sat3"])
    assert result.exit_code == 2
    assert "--dimacs" in result.output


@pytest.mark.parametrize(
    "kind,expected",
    [("two-stage", TwoStageProgram), ("nfold", NFoldProgram), ("fourblock", FourBlockProgram)],
)
def test_gen_random(runner, tmp_path, kind, expected):
    out = tmp_path / f"{kind}.txt"
    result = runner.invoke(cli, ["gen", "random", kind, "--seed", "3", "-o", str(out)])
    assert result.exit_code == 0
    assert isinstance(parse_instance(out.read_text(encoding="utf-8")), expected)


def test_gen_random_unknown_kind(runner):
    result = runner.invoke(cli, ["gen", "random", "threestage", "--seed", "1"])
    assert result.exit_code == 2


def test_transform_shrink_4block(runner, tmp_path):
    out = tmp_path / "shrunk.txt"
    result = runner.invoke(cli, ["transform", "shrink-4block", FOURBLOCK, str(out)])
    assert result.exit_code == 0
    shrunk = parse_instance(out.read_text(encoding="utf-8"))
    assert isinstance(shrunk, FourBlockProgram)
    assert shrunk.Bhat.norm_inf() <= 1
    assert all(b.A.norm_inf() <= 1 and b.C.norm_inf() <= 1 for b in shrunk.bricks)


def test_transform_rejects_two_stage(runner, tmp_path):
    result = runner.invoke(cli, ["transform", "shrink-4block", TWOSTAGE, str(tmp_path / "x")])
    assert result.exit_code == 2


def test_analyze_two_stage(runner):
    result = runner.invoke(cli, ["analyze", TWOSTAGE, "--certificate", "1", "--threads", "1"])
    assert result.exit_code == 0
    assert "TwoStageProgram: 1 bricks" in result.output
    assert "B = 296" in result.output
    assert "certificate type 0 r = [1] mod 296: empty" in result.output


def test_analyze_json_with_graver(runner):
    result = runner.invoke(cli, ["analyze", SUBSET_SUM, "--graver", "--json"])
    assert result.exit_code == 0
    data = json.loads(result.output)
    assert data["bricks"] == 3
    assert len(data["types"]) == 3
    assert all(t["graver"] for t in data["types"])
    assert data["types"][0]["modulus"] is None


def test_analyze_certificate_length(runner):
    result = runner.invoke(cli, ["analyze", TWOSTAGE, "--certificate", "1,2"])
    assert result.exit_code == 2


@pytest.mark.parametrize("path,box", [(TWOSTAGE, 5), (PARITY, 3), (SUBSET_SUM, 7)])
def test_check_agrees(runner, path, box):
    result = runner.invoke(cli, ["check", path, "--oracle-box", str(box), "--threads", "1"])
    assert result.exit_code == 0
    assert result.output.endswith("AGREE\n")


def test_check_json(runner):
    result = runner.invoke(cli, ["check", SUBSET_SUM, "--oracle-box", "7", "--json"])
    assert result.exit_code == 0
    data = json.loads(result.output)
    assert data["agree"] is True
    assert data["solver_value"] == data["oracle_value"] == "2"


def test_check_rejects_fourblock(runner):
    result = runner.invoke(cli, ["check", FOURBLOCK, "--oracle-box", "2"])
    assert result.exit_code == 2
    assert "shrink-4block" in result.output


def test_main_exits_with_command_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["solve", "two-stage", PARITY, "--threads", "1"])
    assert exc.value.code == 0
    assert capsys.readouterr().out == "INFEASIBLE\n"
    with pytest.raises(SystemExit) as exc:
        main(["solve", "nfold", PARITY])
    assert exc.value.code == 2


@pytest.mark.parametrize(
    "args",
    [
        ["solve", "two-stage", TWOSTAGE, "--solution"],
        ["solve", "two-stage", PARITY, "--json"],
        ["solve", "nfold", SUBSET_SUM, "--solution"],
        ["solve", "nfold", SUBSET_SUM, "--json"],
        ["analyze", TWOSTAGE, "--certificate", "1"],
        ["analyze", SUBSET_SUM, "--graver", "--json"],
        ["check", TWOSTAGE, "--oracle-box", "5"],
    ],
)
def test_output_does_not_depend_on_thread_count(runner, args):
    single = runner.invoke(cli, [*args, "--threads", "1"])
    pooled = runner.invoke(cli, [*args, "--threads", "4"])
    assert single.exit_code == pooled.exit_code == 0
    assert single.output == pooled.output


@pytest.mark.parametrize("kind", ["two-stage", "nfold", "cnf", "fourblock"])
def test_gen_random_is_reproducible(runner, tmp_path, kind):
    first, second = tmp_path / "first.txt", tmp_path / "second.txt"
    for out in (first, second):
        result = runner.invoke(cli, ["gen", "random", kind, "--seed", "11", "-o", str(out)])
        assert result.exit_code == 0
    assert first.read_bytes() == second.read_bytes()
