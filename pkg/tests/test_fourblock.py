"""Tests for 4-block entry shrinking."""

import pytest

from blockip.errors import ContractViolation
from blockip.generators.fourblock import fourblock_to_mixed, shrink_4block
from blockip.generators.random_instances import random_fourblock
from blockip.mip.branch_bound import mip_solve
from blockip.mip.model import Status
from blockip.numerics.vectors import IntMat
from blockip.programs.models import FourBlockBrick, FourBlockProgram


def _program(bhat, a, A, C, bricks):
    """Uniform program; bricks are (D rows, b)."""
    a_mat = IntMat.of(A, ncols=len(bhat[0]))
    c_mat = IntMat.of(C)
    return FourBlockProgram(
        IntMat.of(bhat),
        tuple(a),
        tuple(FourBlockBrick(IntMat.of(d), tuple(b), a_mat, c_mat) for d, b in bricks),
    )


def _example():
    """Feasible with x = 1, y = (1, 0) and (0, 1)."""
    return _program([[2]], [5], [[-2]], [[2, 1]], [([[1, 1]], [-1]), ([[1, 2]], [0])])


def _small_entries(m: IntMat) -> bool:
    return all(abs(e) <= 1 for row in m.rows for e in row)


def _witness(mixed_outcome, program):
    x = tuple(mixed_outcome.int_value(f"x{j}") for j in range(program.num_globals))
    ys = tuple(
        tuple(mixed_outcome.int_value(f"y{t}_{k}") for k in range(program.num_locals))
        for t in range(len(program.bricks))
    )
    return x, ys


def test_shrunk_entries_are_unit():
    program = _example()
    shrunk, _ = shrink_4block(program)
    first = shrunk.bricks[0]
    assert _small_entries(shrunk.Bhat)
    assert _small_entries(first.A)
    assert _small_entries(first.C)
    assert shrunk.is_uniform


def test_square_padding():
    program = _example()
    shrunk, _ = shrink_4block(program, square=True)
    sizes = {
        shrunk.num_globals,
        shrunk.num_locals,
        shrunk.num_link_rows,
        shrunk.num_local_rows,
    }
    assert len(sizes) == 1


def test_lift_maps_solutions_to_solutions():
    """A planted solution lifts to a solution of the shrunk program and projects back."""
    for seed in range(5):
        instance = random_fourblock(seed, bricks=2, globals_=1, locals_=2)
        x, ys = instance.witness
        assert instance.program.check(x, ys) == []
        shrunk, mapping = shrink_4block(instance.program)
        lx, lys = mapping.lift(x, ys)
        assert shrunk.check(lx, lys) == []
        assert mapping.project(lx, lys) == (tuple(x), tuple(tuple(y) for y in ys))


def test_shrunk_solution_projects_to_original():
    program = _example()
    shrunk, mapping = shrink_4block(program, square=False)
    outcome = mip_solve(fourblock_to_mixed(shrunk))
    assert outcome.is_feasible
    x, ys = mapping.project(*_witness(outcome, shrunk))
    assert program.check(x, ys) == []


def test_infeasibility_is_preserved():
    """2x = 1 stays infeasible after shrinking."""
    program = _program([[2]], [1], [[0]], [[0]], [([[1]], [0]), ([[1]], [0])])
    shrunk, _ = shrink_4block(program, square=False)
    assert mip_solve(fourblock_to_mixed(program)).status is Status.INFEASIBLE
    assert mip_solve(fourblock_to_mixed(shrunk)).status is Status.INFEASIBLE


def test_entry_larger_than_brick_count():
    program = _program([[3]], [3], [[0]], [[0]], [([[1]], [0]), ([[1]], [0])])
    with pytest.raises(ContractViolation, match="Bmat"):
        shrink_4block(program)


def test_non_uniform_program_rejected():
    d = IntMat.of([[1]])
    program = FourBlockProgram(
        IntMat.of([[1]]),
        (1,),
        (
            FourBlockBrick(d, (0,), IntMat.of([[1]]), IntMat.of([[1]])),
            FourBlockBrick(d, (0,), IntMat.of([[0]]), IntMat.of([[1]])),
        ),
    )
    assert not program.is_uniform
    with pytest.raises(ContractViolation):
        shrink_4block(program)


def test_program_without_bricks_rejected():
    with pytest.raises(ContractViolation):
        shrink_4block(FourBlockProgram(IntMat.of([[1]]), (0,), ()))


def test_flat_encoding_names_and_bounds():
    program = _program([[1]], [1], [[1]], [[1, 0]], [([[1, 1]], [1])])
    mixed = fourblock_to_mixed(program, upper=5)
    assert mixed.variable_names == ["x0", "y0_0", "y0_1"]
    assert all(v.upper == 5 for v in mixed.variables)
    assert [row.name for row in mixed.constraints] == ["link0", "b0_0"]
