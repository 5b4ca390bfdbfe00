"""Tests for the exact vector and matrix helpers."""

from fractions import Fraction

import numpy as np
import pytest

from blockip.errors import ContractViolation
from blockip.numerics.vectors import (
    IntMat,
    IntVec,
    RatVec,
    conformal_leq,
    int_det,
    mat_apply,
    norms,
    primitive,
    xgcd,
)


def test_conformal_examples():
    """Sign patterns must agree and magnitudes may only grow."""
    assert conformal_leq((1, 0, -2), (3, 1, -2))
    assert not conformal_leq((1, -1), (2, 1))
    assert conformal_leq((0, 0), (-5, 7))
    assert not conformal_leq((2,), (1,))


def test_conformal_length_mismatch():
    """Vectors of different length are rejected."""
    with pytest.raises(ContractViolation):
        conformal_leq((1, 2), (1, 2, 3))


def test_conformal_is_partial_order():
    """Reflexive, antisymmetric and transitive on random small vectors."""
    rng = np.random.default_rng(11)
    vecs = [tuple(rng.integers(-2, 3, size=3).tolist()) for _ in range(40)]
    for u in vecs:
        assert conformal_leq(u, u)
        for v in vecs:
            if conformal_leq(u, v) and conformal_leq(v, u):
                assert u == v
            for w in vecs:
                if conformal_leq(u, v) and conformal_leq(v, w):
                    assert conformal_leq(u, w)


def test_mat_apply_example():
    """[3 5]·(1, 1) = (8)."""
    m = IntMat.of([[3, 5]])
    assert tuple(mat_apply(m, (1, 1))) == (8,)


def test_mat_apply_big_entries_linear():
    """M(u + v) = Mu + Mv exactly for entries far beyond 64 bits."""
    big = 10**30
    m = IntMat.of([[big, -1], [7, big * 3]])
    u, v = (big, 2), (-5, big + 1)
    total = tuple(a + b for a, b in zip(u, v))
    lhs = tuple(mat_apply(m, total))
    rhs = tuple(a + b for a, b in zip(mat_apply(m, u), mat_apply(m, v)))
    assert lhs == rhs


def test_mat_apply_length_check():
    """A vector of the wrong length is a contract violation."""
    with pytest.raises(ContractViolation):
        mat_apply(IntMat.of([[1, 2]]), (1,))


def test_mat_apply_checks_named_index():
    """Named vectors must match the column index."""
    m = IntMat.of([[1, 2]], column_index=("a", "b"))
    assert tuple(mat_apply(m, IntVec((1, 1), ("a", "b")))) == (3,)
    with pytest.raises(ContractViolation):
        mat_apply(m, IntVec((1, 1), ("b", "a")))


def test_intvec_arithmetic_and_alignment():
    """Addition needs equal indices."""
    u = IntVec((1, 2))
    assert tuple(u + u) == (2, 4)
    assert tuple(-u) == (-1, -2)
    with pytest.raises(ContractViolation):
        u + IntVec((1, 2), ("p", "q"))


def test_ratvec_to_int():
    """Only integral rational vectors convert."""
    assert tuple(RatVec((Fraction(4, 2), 3)).to_int()) == (2, 3)
    with pytest.raises(ContractViolation):
        RatVec((Fraction(1, 2),)).to_int()


def test_empty_generator_set_keeps_dimension():
    """A matrix with no columns still knows its row count."""
    m = IntMat.from_columns([], 2)
    assert m.shape == (2, 0)
    assert m.columns == ()


def test_ragged_rows_rejected():
    """Rows of unequal length are rejected."""
    with pytest.raises(ContractViolation):
        IntMat.of([[1, 2], [3]])


def test_norms_and_primitive():
    """ℓ∞, ℓ1 and gcd reduction."""
    assert norms((3, -4, 0)) == (4, 7)
    assert norms(()) == (0, 0)
    assert primitive((4, -6, 0)) == (2, -3, 0)
    assert primitive((0, 0)) == (0, 0)


def test_xgcd_identity():
    """x·a + y·b = gcd(a, b)."""
    for a, b in [(240, 46), (-12, 18), (7, 0), (0, 0), (10**20 + 1, 10**10)]:
        x, y, g = xgcd(a, b)
        assert x * a + y * b == g
        assert g >= 0


def test_int_det():
    """Bareiss determinant with a row swap."""
    assert int_det([[0, 1], [1, 0]]) == -1
    assert int_det([[2, 3], [4, 6]]) == 0
    assert int_det([[2, 0, 1], [1, 3, 2], [1, 1, 2]]) == 6
    assert int_det([]) == 1
