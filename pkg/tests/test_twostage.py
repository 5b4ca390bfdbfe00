"""Tests for the two-stage residue engine and the direct engine."""

from unittest.mock import patch

import pytest

from blockip.generators.random_instances import random_twostage
from blockip.generators.reductions import (
    first_primes,
    gen_3sat,
    random_cnf,
    sat3_global_bound,
)
from blockip.mip.branch_bound import mip_solve
from blockip.mip.model import SolveOutcome, Status
from blockip.numerics.vectors import IntMat
from blockip.oracles.brute_force import sat_bf, solve_bf
from blockip.programs.models import CnfFormula, TwoStageBrick, TwoStageProgram
from blockip.solvers.twostage import (
    normalize_twostage,
    solve_twostage_direct,
    solve_twostage_residue,
    twostage_mixed,
)


def _program(*bricks):
    """One global, one local row; each brick is (A, D row, b)."""
    out = [
        TwoStageBrick(IntMat.of([[a]]), IntMat.of([list(d)]), (b,)) for a, d, b in bricks
    ]
    locals_ = len(bricks[0][1])
    return TwoStageProgram(1, locals_, 1, tuple(out))


def test_residue_engine_finds_smallest_residue():
    """u + 2v = 5 needs odd u; residue 1 is the first that works."""
    program = _program((1, (2,), 5))
    verdict = solve_twostage_residue(program, workers=1)
    assert verdict.status is Status.FEASIBLE
    assert verdict.u == (1,)
    assert verdict.vs == ((2,),)
    assert verdict.residue == (1,)
    assert verdict.check(program) == []


def test_residue_engine_refutes_parity():
    """2u + 2v = 3 has a feasible relaxation but no integer point."""
    program = _program((2, (2,), 3))
    verdict = solve_twostage_residue(program, workers=2)
    assert verdict.status is Status.INFEASIBLE


def test_residue_engine_refutes_by_relaxation():
    program = _program((1, (1,), -1))
    verdict = solve_twostage_residue(program, workers=1)
    assert verdict.status is Status.INFEASIBLE
    assert "relaxation" in verdict.message


def test_residue_engine_shares_types_across_bricks():
    program = _program((1, (2, 2), 5), (3, (2, 2), 7))
    verdict = solve_twostage_residue(program, workers=2)
    assert verdict.status is Status.FEASIBLE
    assert verdict.u == (1,)
    assert verdict.check(program) == []


def test_residue_engine_respects_budget():
    program = _program((1, (2,), 5))
    verdict = solve_twostage_residue(program, budget=10, workers=1)
    assert verdict.status is Status.RESOURCE_LIMIT
    assert "budget" in verdict.message


def test_residue_engine_reports_facet_cap():
    program = _program((1, (2,), 5))
    with patch("blockip.config.FACET_CAP", 0):
        verdict = solve_twostage_residue(program, workers=1)
    assert verdict.status is Status.RESOURCE_LIMIT


def test_residue_engine_reports_screen_node_limit():
    """A screen that runs out of nodes must not read as an empty residue class."""

    def limited(program):
        if program.name.startswith("screen"):
            return SolveOutcome(Status.RESOURCE_LIMIT, nodes=7)
        return mip_solve(program)

    program = _program((1, (2,), 5))
    with patch("blockip.solvers.twostage.mip_solve", side_effect=limited):
        verdict = solve_twostage_residue(program, workers=1)
    assert verdict.status is Status.RESOURCE_LIMIT
    assert "screen" in verdict.message


@pytest.mark.parametrize("seed", range(100))
def test_residue_engine_on_planted_instances(seed):
    """Huge A entries, D entries up to 2, up to four bricks; the planted u is below B."""
    bricks = 1 + seed % 4
    locals_ = 2 + seed % 2
    instance = random_twostage(seed, bricks=bricks, locals_=locals_, delta=2, big=10**9)
    verdict = solve_twostage_residue(instance.program, workers=2)
    assert verdict.status is Status.FEASIBLE
    assert verdict.check(instance.program) == []


@pytest.mark.parametrize("seed", range(40))
def test_residue_engine_matches_oracle_on_perturbed_instances(seed):
    """One local per brick keeps every minimal solution inside the oracle box."""
    instance = random_twostage(
        seed, bricks=2 + seed % 3, locals_=1, delta=1, big=3, perturb=True
    )
    verdict = solve_twostage_residue(instance.program, workers=2)
    oracle = solve_bf(instance.program, 80)
    assert verdict.status is oracle.status
    if verdict.status is Status.FEASIBLE:
        assert verdict.check(instance.program) == []


def test_empty_program_is_feasible():
    program = TwoStageProgram(2, 1, 1, ())
    assert solve_twostage_residue(program).u == (0, 0)
    assert solve_twostage_direct(program).status is Status.FEASIBLE


def test_normalize_removes_duplicate_columns():
    program = TwoStageProgram(
        1,
        3,
        2,
        (
            TwoStageBrick(IntMat.of([[0], [0]]), IntMat.of([[1, 0, 1], [0, 1, 0]]), (1, 1)),
            TwoStageBrick(IntMat.of([[1], [0]]), IntMat.of([[1, 0, 0], [0, 1, 0]]), (1, 1)),
        ),
    )
    norm = normalize_twostage(program)
    assert norm.column_maps == ((0, 1), (0, 1, 2))
    assert norm.brick_types == (0, 1)
    assert norm.lift(0, (4, 5)) == (4, 5, 0)


def test_direct_engine_matches_residue_engine():
    for program in (_program((1, (2,), 5)), _program((2, (2,), 3))):
        direct = solve_twostage_direct(program, global_upper=10)
        residue = solve_twostage_residue(program, workers=1)
        assert direct.status is residue.status


def test_direct_engine_on_planted_instance():
    instance = random_twostage(seed=7, bricks=3, locals_=2, big=20)
    verdict = solve_twostage_direct(instance.program)
    assert verdict.status is Status.FEASIBLE
    assert verdict.check(instance.program) == []


def test_direct_engine_agrees_with_brute_force():
    program = _program((1, (2, 3), 4), (-1, (1, 2), 1))
    verdict = solve_twostage_direct(program, global_upper=6)
    oracle = solve_bf(program, 6)
    assert verdict.status is oracle.status is Status.FEASIBLE


def test_mixed_encoding_has_one_row_per_brick_row():
    program = _program((1, (2,), 5), (3, (2,), 7))
    mixed = twostage_mixed(program, global_upper=4)
    assert mixed.variable_names == ["u0", "v0_0", "v1_0"]
    assert mixed.variable("u0").upper == 4
    assert [row.name for row in mixed.constraints] == ["b0_0", "b1_0"]


def test_sat_gadget_satisfiable():
    """x1 true means the first prime does not divide u."""
    formula = CnfFormula(1, ((1, 1, 1),))
    program = gen_3sat(formula)
    verdict = solve_twostage_direct(program, global_upper=sat3_global_bound(formula))
    assert verdict.status is Status.FEASIBLE
    assert verdict.u[0] % first_primes(1)[0] != 0
    assert sat_bf(formula) == (True,)


def test_sat_gadget_unsatisfiable():
    formula = CnfFormula(1, ((1, 1, 1), (-1, -1, -1)))
    program = gen_3sat(formula)
    verdict = solve_twostage_direct(program, global_upper=sat3_global_bound(formula))
    assert verdict.status is Status.INFEASIBLE
    assert sat_bf(formula) is None


@pytest.mark.parametrize("seed", range(30))
def test_sat_gadget_matches_brute_force(seed):
    formula = random_cnf(3 + seed % 2, 1 + seed % 5, seed)
    program = gen_3sat(formula)
    verdict = solve_twostage_direct(program, global_upper=sat3_global_bound(formula))
    assert verdict.feasible == (sat_bf(formula) is not None)
    if verdict.feasible:
        assert verdict.check(program) == []


def test_sat_gadget_with_repeated_literals_is_unsatisfiable():
    """Every sign pattern of two variables is excluded."""
    clauses = tuple((s, s, 2 * t) for s in (1, -1) for t in (1, -1))
    formula = CnfFormula(2, clauses)
    program = gen_3sat(formula)
    verdict = solve_twostage_direct(program, global_upper=sat3_global_bound(formula))
    assert sat_bf(formula) is None
    assert verdict.status is Status.INFEASIBLE
