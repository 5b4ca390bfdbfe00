"""Seeded random instances, most of them with a planted solution."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from blockip.errors import ContractViolation
from blockip.generators.reductions import gen_3sat, random_cnf
from blockip.numerics.vectors import IntMat, mat_apply
from blockip.programs.models import (
    FourBlockBrick,
    FourBlockProgram,
    NFoldBrick,
    NFoldProgram,
    TwoStageBrick,
    TwoStageProgram,
)

logger = logging.getLogger(__name__)

KINDS = ("two-stage", "two-stage-perturbed", "nfold", "cnf", "fourblock")


@dataclass
class GeneratedInstance:
    program: TwoStageProgram | NFoldProgram | FourBlockProgram
    witness: tuple | None = None
    value_bound: int | None = None
    note: str = ""


def _ints(rng: np.random.Generator, low: int, high: int, shape) -> list:
    return rng.integers(low, high, size=shape, endpoint=True).tolist()


def _nonzero_matrix(rng: np.random.Generator, rows: int, cols: int, delta: int) -> IntMat:
    """Random entries in [-delta, delta] with no all-zero column."""
    m = _ints(rng, -delta, delta, (rows, cols))
    for j in range(cols):
        if all(m[i][j] == 0 for i in range(rows)):
            magnitude = int(rng.integers(1, delta + 1))
            m[int(rng.integers(rows))][j] = magnitude if rng.random() < 0.5 else -magnitude
    return IntMat.of(m, ncols=cols)


def random_twostage(
    seed: int,
    bricks: int = 3,
    locals_: int = 2,
    delta: int = 2,
    big: int = 10**9,
    perturb: bool = False,
) -> GeneratedInstance:
    """One global, one local row; A entries up to ``big``, D entries up to ``delta``.

    The perturbed variant adds one to a single b entry of the planted program, so it may or
    may not stay feasible.
    """
    rng = np.random.default_rng(seed)
    u = tuple(_ints(rng, 0, 4, 1))
    vs = []
    out = []
    for _ in range(bricks):
        a = IntMat.of([_ints(rng, -big, big, 1)], ncols=1)
        d = _nonzero_matrix(rng, 1, locals_, delta)
        v = tuple(_ints(rng, 0, 4, locals_))
        b = tuple(p + q for p, q in zip(mat_apply(a, u), mat_apply(d, v)))
        out.append(TwoStageBrick(a, d, b))
        vs.append(v)
    if perturb and out:
        k = int(rng.integers(len(out)))
        brick = out[k]
        out[k] = TwoStageBrick(brick.A, brick.D, (brick.b[0] + 1,))
        program = TwoStageProgram(1, locals_, 1, tuple(out))
        return GeneratedInstance(program, None, None, f"perturbed b of brick {k} (seed {seed})")
    program = TwoStageProgram(1, locals_, 1, tuple(out))
    return GeneratedInstance(program, (u, tuple(vs)), None, f"planted two-stage (seed {seed})")


def random_nfold(
    seed: int,
    bricks: int = 3,
    locals_: int = 3,
    local_rows: int = 1,
    link_rows: int = 1,
    delta: int = 2,
    big: int = 10**6,
) -> GeneratedInstance:
    """Planted uniform n-fold program with nonnegative costs.

    The planted cost is an upper bound on the optimum.
    """
    rng = np.random.default_rng(seed)
    c_mat = IntMat.of(_ints(rng, -big, big, (link_rows, locals_)), ncols=locals_)
    ys = []
    out = []
    link = [0] * link_rows
    for _ in range(bricks):
        d = _nonzero_matrix(rng, local_rows, locals_, delta)
        y = tuple(_ints(rng, 0, 3, locals_))
        cost = tuple(_ints(rng, 0, 5, locals_))
        out.append(NFoldBrick(d, tuple(mat_apply(d, y)), cost))
        link = [s + p for s, p in zip(link, mat_apply(c_mat, y))]
        ys.append(y)
    program = NFoldProgram(c_mat, tuple(link), tuple(out))
    return GeneratedInstance(
        program, tuple(ys), program.objective(ys), f"planted n-fold (seed {seed})"
    )


def random_fourblock(
    seed: int, bricks: int = 2, globals_: int = 1, locals_: int = 2, delta: int = 2
) -> GeneratedInstance:
    """Planted uniform 4-block program with A, B̂ and C entries bounded by the brick count."""
    rng = np.random.default_rng(seed)
    n = bricks
    bhat = IntMat.of(_ints(rng, -n, n, (1, globals_)), ncols=globals_)
    a_mat = IntMat.of(_ints(rng, -n, n, (1, globals_)), ncols=globals_)
    c_mat = IntMat.of(_ints(rng, -n, n, (1, locals_)), ncols=locals_)
    x = tuple(_ints(rng, 0, 2, globals_))
    link = list(mat_apply(bhat, x))
    ys = []
    out = []
    for _ in range(bricks):
        d = _nonzero_matrix(rng, 1, locals_, delta)
        y = tuple(_ints(rng, 0, 2, locals_))
        b = tuple(p + q for p, q in zip(mat_apply(a_mat, x), mat_apply(d, y)))
        out.append(FourBlockBrick(d, b, a_mat, c_mat))
        link = [s + p for s, p in zip(link, mat_apply(c_mat, y))]
        ys.append(y)
    program = FourBlockProgram(bhat, tuple(link), tuple(out))
    return GeneratedInstance(program, (x, tuple(ys)), None, f"planted 4-block (seed {seed})")


def gen_random(kind: str, seed: int, bricks: int = 3, **sizes) -> GeneratedInstance:
    """Deterministic instance of the given kind; the same seed always gives the same program."""
    if kind == "two-stage":
        instance = random_twostage(seed, bricks=bricks, **sizes)
    elif kind == "two-stage-perturbed":
        instance = random_twostage(seed, bricks=bricks, perturb=True, **sizes)
    elif kind == "nfold":
        instance = random_nfold(seed, bricks=bricks, **sizes)
    elif kind == "cnf":
        num_vars = sizes.get("num_vars", 3)
        formula = random_cnf(num_vars, bricks, seed)
        instance = GeneratedInstance(
            gen_3sat(formula), None, None, f"3-SAT gadget for {formula.clauses} (seed {seed})"
        )
    elif kind == "fourblock":
        instance = random_fourblock(seed, bricks=bricks, **sizes)
    else:
        raise ContractViolation(f"unknown instance kind {kind!r}; expected one of {KINDS}")
    logger.debug(f"generated {kind} instance: {instance.note}")
    return instance
