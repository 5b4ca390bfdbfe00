"""Tests for faithful decompositions of brick right-hand sides."""

import pytest

from blockip.errors import ContractViolation
from blockip.numerics.vectors import IntMat
from blockip.solvers.faithful import faithful_check, faithful_decompose, faithful_step


def test_trivial_decomposition_is_faithful():
    d = IntMat.of([[2, 3]])
    assert faithful_check(d, (6,), {(6,): 1})


def test_halving_two_three_is_not_faithful():
    """6 = 3 + 3 fails for 2x + 3y: the solution (3, 0) has no split."""
    d = IntMat.of([[2, 3]])
    assert not faithful_check(d, (6,), {(3,): 2})
    assert not faithful_check(d, (6,), {(2,): 3})


def test_infeasible_right_hand_side_is_vacuously_faithful():
    assert faithful_check(IntMat.of([[2]]), (3,), {(1,): 3})


def test_parts_must_sum_to_target():
    d = IntMat.of([[1]])
    with pytest.raises(ContractViolation):
        faithful_check(d, (6,), {(5,): 1})
    with pytest.raises(ContractViolation):
        faithful_check(d, (6,), {(-1,): 1, (7,): 1})


def test_faithful_step_prefers_largest_covered_mass():
    step = faithful_step(IntMat.of([[1]]), (10,), 4)
    assert step == ((4,), 2, (2,))


def test_faithful_step_rejects_small_target():
    with pytest.raises(ContractViolation):
        faithful_step(IntMat.of([[1]]), (3,), 4)


def test_decompose_unit_row():
    decomposition = faithful_decompose(IntMat.of([[1]]), (10,), xi=4)
    assert decomposition.parts == (((2,), 1), ((4,), 2))
    assert decomposition.xi == 4


def test_decompose_one_two_row():
    """9 = 4·2 + 1 is faithful for x + 2y: every solution splits along it."""
    d = IntMat.of([[1, 2]])
    decomposition = faithful_decompose(d, (9,), xi=2)
    assert decomposition.parts == (((1,), 1), ((2,), 4))
    assert faithful_check(d, (9,), decomposition.as_dict())


def test_decompose_parts_are_small_and_sum_to_target():
    d = IntMat.of([[1, 1, 0], [-3, 0, 1]])
    b = (1, 9)
    decomposition = faithful_decompose(d, b, xi=4)
    total = [0, 0]
    for part, k in decomposition.parts:
        assert max(abs(a) for a in part) <= decomposition.xi
        total = [s + k * p for s, p in zip(total, part)]
    assert tuple(total) == b
    assert faithful_check(d, b, decomposition.as_dict())


def test_decompose_rejects_zero():
    with pytest.raises(ContractViolation):
        faithful_decompose(IntMat.of([[1]]), (0,))
