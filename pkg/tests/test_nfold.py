"""Tests for the n-fold model solver and its flat reference encoding."""

import numpy as np
import pytest

from blockip.generators.random_instances import random_nfold
from blockip.generators.reductions import gen_subset_sum
from blockip.mip.branch_bound import mip_solve
from blockip.mip.model import Status
from blockip.mip.rounding import tu_round
from blockip.numerics.vectors import IntMat
from blockip.oracles.brute_force import solve_bf, subset_sum_dp
from blockip.programs.models import NFoldBrick, NFoldProgram
from blockip.solvers.faithful import faithful_check
from blockip.solvers.nfold import (
    build_model,
    decompose_bricks,
    expand_program,
    nfold_mixed,
    solve_nfold,
    solve_nfold_direct,
)


def test_subset_sum_optimum():
    """Items 3, 5, 7 with unit costs: 8 = 3 + 5 costs 2."""
    program = gen_subset_sum([3, 5, 7], 8, costs=[1, 1, 1])
    result = solve_nfold(program, workers=2)
    assert result.status is Status.OPTIMAL
    assert result.value == 2
    assert program.check(result.witness) == []
    chosen = tuple(i for i, y in enumerate(result.witness) if y[0] == 1)
    assert chosen == subset_sum_dp([3, 5, 7], 8)


def test_subset_sum_infeasible():
    program = gen_subset_sum([3, 5, 7], 4)
    assert solve_nfold(program, workers=1).status is Status.INFEASIBLE


def test_subset_sum_matches_oracle():
    program = gen_subset_sum([2, 3, 4], 7, costs=[3, 1, 1])
    result = solve_nfold(program, workers=2)
    oracle = solve_bf(program, 4)
    assert result.status is oracle.status is Status.OPTIMAL
    assert result.value == oracle.value == 2


def test_collapsed_and_bounded_variants_agree():
    program = gen_subset_sum([3, 5, 7, 2], 10, costs=[2, 1, 3, 1])
    plain = solve_nfold(program, workers=1)
    collapsed = solve_nfold(program, collapse_omega=True, workers=1)
    bounded = solve_nfold(program, base="bounded", workers=1)
    assert plain.value == collapsed.value == bounded.value
    assert plain.value == solve_nfold_direct(program).value


def test_multiplicity_is_unrolled_in_witness():
    d = IntMat.of([[1, 1]])
    c_mat = IntMat.of([[1, 0]])
    program = NFoldProgram(c_mat, (2,), (NFoldBrick(d, (1,), (0, 1), multiplicity=3),))
    result = solve_nfold(program, workers=1)
    assert result.status is Status.OPTIMAL
    assert result.value == 1
    assert len(result.witness) == 3
    assert program.check(result.witness) == []


def test_unbounded_objective():
    """A nonnegative kernel direction with negative cost and no link effect."""
    d = IntMat.of([[1, -1]])
    program = NFoldProgram(IntMat.of([[0, 0]]), (0,), (NFoldBrick(d, (0,), (-1, 0)),))
    assert solve_nfold(program, workers=1).status is Status.UNBOUNDED
    assert solve_nfold_direct(program).status is Status.UNBOUNDED


def test_program_without_bricks():
    empty = NFoldProgram(IntMat.of([[1, 1]]), (0,), ())
    assert solve_nfold(empty).value == 0
    impossible = NFoldProgram(IntMat.of([[1, 1]]), (1,), ())
    assert solve_nfold(impossible).status is Status.INFEASIBLE


def test_decompose_bricks_keeps_zero_rhs_whole():
    d = IntMat.of([[1, 1]])
    program = NFoldProgram(
        IntMat.of([[1, 0]]),
        (0,),
        (NFoldBrick(d, (0,), (0, 0)), NFoldBrick(d, (9,), (0, 0))),
    )
    parts = decompose_bricks(program, xi=4, workers=1)
    assert parts[(d.key(), (0,))] == (((0,), 1),)
    assert sum(k * p[0] for p, k in parts[(d.key(), (9,))]) == 9


def test_expand_program_counts_types():
    program = gen_subset_sum([3, 3, 5], 6)
    expanded = expand_program(program, workers=1)
    assert expanded.count == 3
    assert sorted(b.multiplicity for b in expanded.bricks) == [1, 2]


def test_model_has_integral_zeta_and_continuous_omega():
    program = gen_subset_sum([3, 5], 5, costs=[1, 2])
    model = build_model(expand_program(program, workers=1))
    integer = set(model.program.integer_vars)
    assert set(model.zeta.values()) <= integer
    assert not set(model.omega.values()) & integer


def test_flat_encoding_shape():
    program = gen_subset_sum([3, 5], 5)
    mixed = nfold_mixed(program)
    assert len(mixed.variables) == 6
    assert [row.name for row in mixed.constraints][0] == "link0"


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_model_matches_direct_on_planted_instances(seed):
    instance = random_nfold(seed, bricks=2, locals_=3, big=5)
    result = solve_nfold(instance.program, workers=2)
    direct = solve_nfold_direct(instance.program)
    assert result.status is direct.status is Status.OPTIMAL
    assert result.value == direct.value
    assert result.value <= instance.value_bound


@pytest.mark.parametrize("seed", range(100))
def test_model_matches_oracle_on_random_instances(seed):
    """Linking entries up to 10^6 pin the column sums, so the optimum sits near the plant."""
    instance = random_nfold(
        seed,
        bricks=2 + seed % 3,
        locals_=2 + seed % 2,
        local_rows=1 + (seed // 2) % 2,
        link_rows=1 + (seed // 4) % 2,
        big=10**6,
    )
    program = instance.program
    result = solve_nfold(program, workers=2)
    oracle = solve_bf(program, 4)
    assert result.status is oracle.status is Status.OPTIMAL
    assert program.check(result.witness) == []
    assert result.value <= oracle.value <= instance.value_bound
    if max(max(y) for y in result.witness) <= 4:
        assert result.value == oracle.value

    bricks = {(brick.D.key(), brick.b): brick.D for brick in program.bricks}
    for (key, b), parts in decompose_bricks(program, workers=2).items():
        if any(b):
            assert faithful_check(bricks[(key, b)], b, dict(parts))


def test_tu_rounding_is_integral_on_generated_models():
    """Repeated items with different costs give every type a nontrivial transportation part."""
    rng = np.random.default_rng(13)
    for _ in range(100):
        n = int(rng.integers(2, 6))
        items = rng.integers(1, 4, size=n).tolist()
        costs = rng.integers(0, 4, size=n).tolist()
        chosen = rng.random(n) < 0.5
        chosen[int(rng.integers(n))] = True
        target = sum(a for a, keep in zip(items, chosen) if keep)
        model = build_model(expand_program(gen_subset_sum(items, target, costs), workers=1))
        outcome = mip_solve(model.program)
        assert outcome.is_feasible
        fixed = {name: outcome.int_value(name) for name in model.program.integer_vars}
        values = tu_round(model.program, fixed)
        assert all(isinstance(values[name], int) for name in model.omega.values())
