"""Brute-force reference implementations.

Every oracle takes an explicit search box and only answers for what lies inside it. These
share nothing with the solver packages beyond the numerics helpers and the program types.
"""

from __future__ import annotations

import itertools
import logging
from collections import deque
from dataclasses import dataclass
from math import prod
from typing import Sequence

import numpy as np

from blockip import config
from blockip.errors import ContractViolation, ResourceLimitError
from blockip.mip.model import Status
from blockip.numerics.vectors import IntMat, Vector, int_det, mat_apply
from blockip.programs.models import (
    CnfFormula,
    FourBlockProgram,
    NFoldProgram,
    TwoStageProgram,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SearchBox:
    """Inclusive per-coordinate bounds."""

    lows: Vector
    highs: Vector

    def __post_init__(self):
        object.__setattr__(self, "lows", tuple(int(a) for a in self.lows))
        object.__setattr__(self, "highs", tuple(int(a) for a in self.highs))
        if len(self.lows) != len(self.highs):
            raise ContractViolation("box bounds have different lengths")
        for lo, hi in zip(self.lows, self.highs):
            if lo > hi:
                raise ContractViolation(f"empty box coordinate [{lo}, {hi}]")

    @classmethod
    def uniform(cls, dim: int, low: int, high: int) -> SearchBox:
        return cls((low,) * dim, (high,) * dim)

    @property
    def size(self) -> int:
        return prod(hi - lo + 1 for lo, hi in zip(self.lows, self.highs))

    def contains(self, v: Sequence[int]) -> bool:
        return all(lo <= a <= hi for lo, a, hi in zip(self.lows, v, self.highs))

    def points(self) -> np.ndarray:
        """All integer points, one per row, in lexicographic order."""
        axes = [np.arange(lo, hi + 1, dtype=np.int64) for lo, hi in zip(self.lows, self.highs)]
        if not axes:
            return np.zeros((1, 0), dtype=np.int64)
        grid = np.meshgrid(*axes, indexing="ij")
        return np.stack([g.ravel() for g in grid], axis=1)


@dataclass
class BruteForceResult:
    status: Status
    value: int | None = None
    witness: tuple | None = None
    box: int = 0
    box_bounded: bool = True


def _guard(count: int, limit: int | None, what: str) -> None:
    limit = config.ORACLE_LIMIT if limit is None else limit
    if count > limit:
        raise ResourceLimitError("oracle state limit", count, what)


def steinitz_box(d: IntMat, v: Sequence[int]) -> SearchBox:
    """Partial sums of some ordering of any representation of v stay inside this box.

    By Steinitz they stay within 2tΔ of the segment from 0 to v in ∞-norm.
    """
    slack = 2 * d.nrows * d.norm_inf()
    return SearchBox(
        tuple(min(0, a) - slack for a in v), tuple(max(0, a) + slack for a in v)
    )


def intcone_member_bf(
    d: IntMat, v: Sequence[int], box: SearchBox, limit: int | None = None
) -> bool:
    """Is v a nonnegative integer combination of the columns of d? BFS over partial sums in box."""
    target = tuple(int(a) for a in v)
    start = (0,) * d.nrows
    if target == start:
        return True
    if not box.contains(start) or not box.contains(target):
        return False
    generators = [g for g in d.columns if any(g)]
    seen = {start}
    queue = deque([start])
    while queue:
        point = queue.popleft()
        for g in generators:
            nxt = tuple(p + q for p, q in zip(point, g))
            if nxt == target:
                return True
            if nxt not in seen and box.contains(nxt):
                seen.add(nxt)
                _guard(len(seen), limit, "integer cone search")
                queue.append(nxt)
    return False


def _solution_table(
    d: IntMat, box: int, limit: int | None
) -> dict[Vector, list[Vector]]:
    """Dv for every v in [0, box]^locals, grouped by value in lexicographic order of v."""
    if d.ncols == 0:
        return {(0,) * d.nrows: [()]}
    points = SearchBox.uniform(d.ncols, 0, box)
    _guard(points.size, limit, "local enumeration")
    grid = points.points().astype(object)
    images = grid @ np.array(d.rows, dtype=object).reshape(d.nrows, d.ncols).T
    table: dict[Vector, list[Vector]] = {}
    for v, image in zip(grid.tolist(), images.tolist()):
        table.setdefault(tuple(image), []).append(tuple(v))
    return table


def _solve_twostage(program: TwoStageProgram, box: int, limit: int | None) -> BruteForceResult:
    tables: dict[tuple, dict] = {}
    for brick in program.bricks:
        if brick.D.key() not in tables:
            tables[brick.D.key()] = _solution_table(brick.D, box, limit)
    _guard((box + 1) ** program.num_globals, limit, "global enumeration")
    for u in itertools.product(range(box + 1), repeat=program.num_globals):
        vs = []
        for brick in program.bricks:
            rest = tuple(p - q for p, q in zip(brick.b, mat_apply(brick.A, u)))
            options = tables[brick.D.key()].get(rest)
            if not options:
                break
            vs.append(options[0])
        else:
            return BruteForceResult(Status.FEASIBLE, witness=(tuple(u), tuple(vs)), box=box)
    return BruteForceResult(Status.INFEASIBLE, box=box)


def _link_dp(
    options: list[dict[Vector, tuple[int, Vector]]], width: int
) -> dict[Vector, tuple[int, tuple[Vector, ...]]]:
    """Cheapest choice per reachable linking sum, one option per brick."""
    states: dict[Vector, tuple[int, tuple[Vector, ...]]] = {(0,) * width: (0, ())}
    for brick_options in options:
        nxt: dict[Vector, tuple[int, tuple[Vector, ...]]] = {}
        for total, (cost, chosen) in states.items():
            for image, (c, y) in brick_options.items():
                key = tuple(p + q for p, q in zip(total, image))
                candidate = (cost + c, chosen + (y,))
                if key not in nxt or candidate < nxt[key]:
                    nxt[key] = candidate
        states = nxt
    return states


def _brick_options(
    b: Vector, link: IntMat, cost: Sequence[int], table: dict
) -> dict[Vector, tuple[int, Vector]]:
    best: dict[Vector, tuple[int, Vector]] = {}
    for y in table.get(b, []):
        image = tuple(mat_apply(link, y))
        candidate = (sum(c * a for c, a in zip(cost, y)), y)
        if image not in best or candidate < best[image]:
            best[image] = candidate
    return best


def _solve_nfold(program: NFoldProgram, box: int, limit: int | None) -> BruteForceResult:
    tables: dict[tuple, dict] = {}
    options = []
    for brick in program.concrete_bricks():
        if brick.D.key() not in tables:
            tables[brick.D.key()] = _solution_table(brick.D, box, limit)
        table = tables[brick.D.key()]
        options.append(_brick_options(brick.b, program.C, brick.c, table))
    states = _link_dp(options, len(program.a))
    if program.a not in states:
        return BruteForceResult(Status.INFEASIBLE, box=box)
    value, ys = states[program.a]
    return BruteForceResult(Status.OPTIMAL, value=value, witness=ys, box=box)


def _solve_fourblock(program: FourBlockProgram, box: int, limit: int | None) -> BruteForceResult:
    tables: dict[tuple, dict] = {}
    for brick in program.bricks:
        if brick.D.key() not in tables:
            tables[brick.D.key()] = _solution_table(brick.D, box, limit)
    zero = (0,) * program.num_locals
    _guard((box + 1) ** program.num_globals, limit, "global enumeration")
    for x in itertools.product(range(box + 1), repeat=program.num_globals):
        options = []
        for brick in program.bricks:
            rest = tuple(p - q for p, q in zip(brick.b, mat_apply(brick.A, x)))
            options.append(_brick_options(rest, brick.C, zero, tables[brick.D.key()]))
        states = _link_dp(options, program.num_link_rows)
        target = tuple(p - q for p, q in zip(program.a, mat_apply(program.Bhat, x)))
        if target in states:
            witness = (tuple(x), states[target][1])
            return BruteForceResult(Status.FEASIBLE, witness=witness, box=box)
    return BruteForceResult(Status.INFEASIBLE, box=box)


def solve_bf(
    program: TwoStageProgram | NFoldProgram | FourBlockProgram,
    box: int,
    limit: int | None = None,
) -> BruteForceResult:
    """Exhaustive answer with every variable restricted to 0..box.

    The verdict only speaks about the box: INFEASIBLE means no solution inside it.
    """
    if box < 0:
        raise ContractViolation("oracle box must be nonnegative")
    if isinstance(program, TwoStageProgram):
        result = _solve_twostage(program, box, limit)
    elif isinstance(program, NFoldProgram):
        result = _solve_nfold(program, box, limit)
    elif isinstance(program, FourBlockProgram):
        result = _solve_fourblock(program, box, limit)
    else:
        raise ContractViolation(f"no oracle for {type(program).__name__}")
    logger.debug(f"brute force in box 0..{box}: {result.status.value}")
    return result


def circuit_box(d: IntMat) -> SearchBox:
    """Box holding the Graver basis: ‖g‖∞ <= (n - rank) times the largest absolute minor."""
    n = d.ncols
    rank, largest = 0, 1
    for k in range(1, min(d.nrows, n) + 1):
        minors = [
            abs(int_det([[d.rows[i][j] for j in cols] for i in rows]))
            for rows in itertools.combinations(range(d.nrows), k)
            for cols in itertools.combinations(range(n), k)
        ]
        if not any(minors):
            break
        rank, largest = k, max(largest, max(minors))
    bound = (n - rank) * largest
    return SearchBox.uniform(n, -bound, bound)


def graver_bf(d: IntMat, box: SearchBox, limit: int | None = None) -> tuple[Vector, ...]:
    """⊑-minimal nonzero kernel vectors inside box, sorted."""
    if len(box.lows) != d.ncols:
        raise ContractViolation(f"box has dimension {len(box.lows)}, expected {d.ncols}")
    _guard(box.size, limit, "Graver enumeration")
    points = box.points()
    m = np.array(d.rows, dtype=np.int64).reshape(d.nrows, d.ncols)
    kernel = points[np.all(points @ m.T == 0, axis=1) & np.any(points != 0, axis=1)]
    minimal = []
    for g in kernel:
        below = np.all((kernel * g >= 0) & (np.abs(kernel) <= np.abs(g)), axis=1)
        if int(below.sum()) == 1:
            minimal.append(tuple(int(a) for a in g))
    return tuple(sorted(minimal))


def sat_bf(formula: CnfFormula) -> tuple[bool, ...] | None:
    """First satisfying assignment in lexicographic order (False before True), or None."""
    for assignment in itertools.product((False, True), repeat=formula.num_vars):
        if formula.satisfied_by(assignment):
            return assignment
    return None


def subset_sum_dp(items: Sequence[int], target: int) -> tuple[int, ...] | None:
    """Indices of a subset of positive items summing to target, or None."""
    reach: dict[int, tuple[int, ...]] = {0: ()}
    for i, a in enumerate(items):
        for total, chosen in list(reach.items()):
            if total + a <= target and total + a not in reach:
                reach[total + a] = chosen + (i,)
    return reach.get(target)
