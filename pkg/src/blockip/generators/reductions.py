"""Hardness reductions as instance generators: 3-SAT to two-stage, Subset-Sum to n-fold."""

from __future__ import annotations

import logging
from math import prod
from typing import Sequence

import numpy as np

from blockip.errors import ContractViolation, InstanceParseError
from blockip.numerics.vectors import IntMat
from blockip.programs.models import (
    CnfFormula,
    NFoldBrick,
    NFoldProgram,
    TwoStageBrick,
    TwoStageProgram,
)

logger = logging.getLogger(__name__)

GADGET_ROWS = 10
GADGET_LOCALS = 16


def first_primes(n: int) -> list[int]:
    """The first n primes by trial division."""
    primes: list[int] = []
    candidate = 2
    while len(primes) < n:
        if all(candidate % p for p in primes if p * p <= candidate):
            primes.append(candidate)
        candidate += 1
    return primes


def _clause_brick(clause: Sequence[int], primes: list[int]) -> TwoStageBrick:
    d = [[0] * GADGET_LOCALS for _ in range(GADGET_ROWS)]
    a = [[0] for _ in range(GADGET_ROWS)]
    b = [0] * GADGET_ROWS
    negatives = 0
    for j, literal in enumerate(clause):
        p = primes[abs(literal) - 1]
        row, col = 3 * j, 5 * j
        # -x + p·a + b + c = 0
        a[row][0] = -1
        d[row][col : col + 3] = [p, 1, 1]
        # (p-2)·b - c - d = 0
        d[row + 1][col + 1 : col + 4] = [p - 2, -1, -1]
        # b + e = 1
        d[row + 2][col + 1] = 1
        d[row + 2][col + 4] = 1
        b[row + 2] = 1
        sign = 1 if literal > 0 else -1
        negatives += sign < 0
        d[9][col + 1] = sign
    d[9][15] = -1
    b[9] = 1 - negatives
    return TwoStageBrick(IntMat.of(a, ncols=1), IntMat.of(d, ncols=GADGET_LOCALS), tuple(b))


def gen_3sat(formula: CnfFormula) -> TwoStageProgram:
    """One global x, one 10×16 gadget brick per clause; feasible iff the formula is satisfiable.

    Variable k is false exactly when the k-th prime divides x.
    """
    primes = first_primes(formula.num_vars)
    bricks = tuple(_clause_brick(clause, primes) for clause in formula.clauses)
    logger.debug(f"3-SAT gadget: {formula.num_vars} variables, {len(bricks)} clauses")
    return TwoStageProgram(1, GADGET_LOCALS, GADGET_ROWS, bricks)


def sat3_global_bound(formula: CnfFormula) -> int:
    """Product of the primes minus one: a satisfiable formula has a witness with x below it."""
    return prod(first_primes(formula.num_vars)) - 1


def parse_dimacs(text: str) -> CnfFormula:
    """Read a DIMACS CNF (``p cnf N M`` header, ``c`` comments, clauses ended by 0)."""
    num_vars = None
    literals: list[int] = []
    clauses = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("c") or stripped.startswith("%"):
            continue
        if stripped.startswith("p"):
            fields = stripped.split()
            if len(fields) != 4 or fields[1] != "cnf":
                raise InstanceParseError(lineno, 1, "expected 'p cnf <vars> <clauses>'")
            num_vars = int(fields[2])
            continue
        if num_vars is None:
            raise InstanceParseError(lineno, 1, "clause before the 'p cnf' header")
        for token in stripped.split():
            try:
                value = int(token)
            except ValueError:
                raise InstanceParseError(lineno, line.find(token) + 1, f"bad literal {token!r}")
            if value == 0:
                if len(literals) != 3:
                    raise InstanceParseError(lineno, 1, f"clause with {len(literals)} literals")
                clauses.append(tuple(literals))
                literals = []
            else:
                literals.append(value)
    if num_vars is None:
        raise InstanceParseError(1, 1, "missing 'p cnf' header")
    if literals:
        raise InstanceParseError(len(text.splitlines()), 1, "last clause is not terminated by 0")
    return CnfFormula(num_vars, tuple(clauses))


def format_dimacs(formula: CnfFormula) -> str:
    lines = [f"p cnf {formula.num_vars} {len(formula.clauses)}"]
    lines += [" ".join(str(lit) for lit in clause) + " 0" for clause in formula.clauses]
    return "\n".join(lines) + "\n"


def random_cnf(num_vars: int, num_clauses: int, seed: int) -> CnfFormula:
    """Clauses over three distinct variables with random signs."""
    if num_vars < 3:
        raise ContractViolation("random 3-CNF needs at least 3 variables")
    rng = np.random.default_rng(seed)
    clauses = []
    for _ in range(num_clauses):
        chosen = rng.choice(num_vars, size=3, replace=False) + 1
        signs = rng.choice([-1, 1], size=3)
        clauses.append(tuple(int(v) * int(s) for v, s in zip(chosen, signs)))
    return CnfFormula(num_vars, tuple(clauses))


def gen_subset_sum(
    items: Sequence[int], target: int, costs: Sequence[int] | None = None
) -> NFoldProgram:
    """Brick i: y + y′ = 1 and s - a_i·y = 0; the uniform linking row is ∑ s_i = t."""
    if any(a <= 0 for a in items):
        raise ContractViolation("subset-sum items must be positive")
    if costs is not None and len(costs) != len(items):
        raise ContractViolation("one cost per item expected")
    bricks = []
    for i, a in enumerate(items):
        d = IntMat.of([[1, 1, 0], [-a, 0, 1]], ncols=3)
        cost = costs[i] if costs is not None else 0
        bricks.append(NFoldBrick(d, (1, 0), (cost, 0, 0)))
    return NFoldProgram(IntMat.of([[0, 0, 1]], ncols=3), (target,), tuple(bricks))
