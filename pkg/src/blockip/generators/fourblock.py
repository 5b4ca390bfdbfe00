"""Entry shrinking for uniform 4-block programs, and their flat MIP encoding.

Large coefficients of the shared blocks A, B̂ and C are emulated with new global variables
and copies of globals inside the bricks, so that every entry of A, B̂ and C ends up in
{-1, 0, 1}. A coefficient m with |m| <= n can be produced because there are n bricks to
hold the copies.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

from blockip.errors import ContractViolation
from blockip.mip.model import MixedProgram, Sense
from blockip.numerics.vectors import IntMat, Vector
from blockip.programs.models import FourBlockBrick, FourBlockProgram

logger = logging.getLogger(__name__)


@dataclass
class ShrinkMap:
    """How every added variable is computed from a solution of the original program.

    Steps are kept in creation order; each reads only values that exist by then.
    ("global", ("sum", j)): ∑ over bricks of local j
    ("global", ("scale", j, m)): m · global j
    ("local", ("copy", j, m)): global j in the first m bricks, 0 after (m None: every brick)
    ("global"/"local", ("zero",)): padding
    """

    num_globals: int
    num_locals: int
    steps: list[tuple[str, tuple]] = field(default_factory=list)

    def lift(
        self, x: Sequence[int], ys: Sequence[Sequence[int]]
    ) -> tuple[Vector, tuple[Vector, ...]]:
        gx = list(x)
        ly = [list(y) for y in ys]
        for kind, rule in self.steps:
            if kind == "global":
                if rule[0] == "sum":
                    gx.append(sum(y[rule[1]] for y in ly))
                elif rule[0] == "scale":
                    gx.append(rule[2] * gx[rule[1]])
                else:
                    gx.append(0)
            else:
                for t, y in enumerate(ly):
                    if rule[0] == "copy":
                        m = rule[2]
                        y.append(gx[rule[1]] if m is None or t < m else 0)
                    else:
                        y.append(0)
        return tuple(gx), tuple(tuple(y) for y in ly)

    def project(
        self, x: Sequence[int], ys: Sequence[Sequence[int]]
    ) -> tuple[Vector, tuple[Vector, ...]]:
        return tuple(x[: self.num_globals]), tuple(tuple(y[: self.num_locals]) for y in ys)


class _Builder:
    def __init__(self, program: FourBlockProgram):
        first = program.bricks[0]
        self.bhat = [list(r) for r in program.Bhat.rows]
        self.a = list(program.a)
        self.A = [list(r) for r in first.A.rows]
        self.C = [list(r) for r in first.C.rows]
        self.D = [[list(r) for r in brick.D.rows] for brick in program.bricks]
        self.b = [list(brick.b) for brick in program.bricks]
        self.nglobals = program.num_globals
        self.nlocals = program.num_locals
        self.map = ShrinkMap(program.num_globals, program.num_locals)

    def add_global(self, rule: tuple) -> int:
        for row in self.bhat + self.A:
            row.append(0)
        self.nglobals += 1
        self.map.steps.append(("global", rule))
        return self.nglobals - 1

    def add_local(self, rule: tuple) -> int:
        for row in self.C:
            row.append(0)
        for block in self.D:
            for row in block:
                row.append(0)
        self.nlocals += 1
        self.map.steps.append(("local", rule))
        return self.nlocals - 1

    def add_link_row(self) -> int:
        self.bhat.append([0] * self.nglobals)
        self.C.append([0] * self.nlocals)
        self.a.append(0)
        return len(self.a) - 1

    def add_local_row(self) -> int:
        self.A.append([0] * self.nglobals)
        for block, rhs in zip(self.D, self.b):
            block.append([0] * self.nlocals)
            rhs.append(0)
        return len(self.A) - 1

    def copies(self, j: int, m: int) -> int:
        """Locals q (x_j in the first m bricks, else 0), q′ = x_j, and global z = m·x_j."""
        q = self.add_local(("copy", j, m))
        q_prime = self.add_local(("copy", j, None))
        row = self.add_local_row()
        self.A[row][j] = -1
        for block in self.D:
            block[row][q_prime] = 1
        row = self.add_local_row()
        for t, block in enumerate(self.D):
            block[row][q] = 1
            if t < m:
                block[row][q_prime] = -1
        z = self.add_global(("scale", j, m))
        link = self.add_link_row()
        self.bhat[link][z] = -1
        self.C[link][q] = 1
        return z

    def shrink_C(self) -> None:
        for i, row in enumerate([list(r) for r in self.C]):
            for j, c in enumerate(row):
                if abs(c) > 1:
                    z = self.add_global(("sum", j))
                    link = self.add_link_row()
                    self.bhat[link][z] = -1
                    self.C[link][j] = 1
                    self.C[i][j] = 0
                    self.bhat[i][z] = c

    def shrink_A(self) -> None:
        for i, row in enumerate([list(r) for r in self.A]):
            for j, a in enumerate(row):
                if abs(a) > 1:
                    z = self.copies(j, abs(a))
                    self.A[i][j] = 0
                    self.A[i][z] = 1 if a > 0 else -1

    def shrink_Bhat(self) -> None:
        for i, row in enumerate([list(r) for r in self.bhat]):
            for j, a in enumerate(row):
                if abs(a) > 1:
                    z = self.copies(j, abs(a))
                    self.bhat[i][j] = 0
                    self.bhat[i][z] = 1 if a > 0 else -1

    def pad_square(self) -> None:
        k = max(self.nglobals, self.nlocals, len(self.a), len(self.A))
        while self.nglobals < k:
            self.add_global(("zero",))
        while self.nlocals < k:
            self.add_local(("zero",))
        while len(self.a) < k:
            self.add_link_row()
        while len(self.A) < k:
            self.add_local_row()

    def build(self) -> FourBlockProgram:
        bhat = IntMat.of(self.bhat, ncols=self.nglobals)
        A = IntMat.of(self.A, ncols=self.nglobals)
        C = IntMat.of(self.C, ncols=self.nlocals)
        bricks = tuple(
            FourBlockBrick(IntMat.of(block, ncols=self.nlocals), tuple(rhs), A, C)
            for block, rhs in zip(self.D, self.b)
        )
        return FourBlockProgram(bhat, tuple(self.a), bricks)


def shrink_4block(
    program: FourBlockProgram, square: bool = True
) -> tuple[FourBlockProgram, ShrinkMap]:
    """Equivalent uniform program whose A, B̂ and C entries all lie in {-1, 0, 1}."""
    if not program.bricks:
        raise ContractViolation("a 4-block program needs at least one brick")
    if not program.is_uniform:
        raise ContractViolation("entry shrinking needs a uniform program (shared A and C)")
    n = len(program.bricks)
    first = program.bricks[0]
    for name, m in (("A", first.A), ("Bmat", program.Bhat), ("C", first.C)):
        if m.norm_inf() > n:
            raise ContractViolation(f"{name} has an entry of size {m.norm_inf()} > n = {n}")
    builder = _Builder(program)
    builder.shrink_C()
    builder.shrink_A()
    builder.shrink_Bhat()
    if square:
        builder.pad_square()
    out = builder.build()
    logger.info(
        f"shrink: globals {program.num_globals}->{out.num_globals}, "
        f"locals {program.num_locals}->{out.num_locals}"
    )
    return out, builder.map


def fourblock_to_mixed(program: FourBlockProgram, upper: int | None = None) -> MixedProgram:
    """Flat MIP of a 4-block program; ``upper`` optionally bounds every variable."""
    mixed = MixedProgram(name="fourblock-flat")
    for j in range(program.num_globals):
        mixed.add_variable(f"x{j}", lower=0, upper=upper)
    for t in range(len(program.bricks)):
        for k in range(program.num_locals):
            mixed.add_variable(f"y{t}_{k}", lower=0, upper=upper)
    for i, row in enumerate(program.Bhat.rows):
        coeffs = {f"x{j}": a for j, a in enumerate(row)}
        for t, brick in enumerate(program.bricks):
            coeffs.update({f"y{t}_{k}": c for k, c in enumerate(brick.C.rows[i])})
        mixed.add_constraint(coeffs, Sense.EQ, program.a[i], name=f"link{i}")
    for t, brick in enumerate(program.bricks):
        for i in range(program.num_local_rows):
            coeffs = {f"x{j}": a for j, a in enumerate(brick.A.rows[i])}
            coeffs.update({f"y{t}_{k}": c for k, c in enumerate(brick.D.rows[i])})
            mixed.add_constraint(coeffs, Sense.EQ, brick.b[i], name=f"b{t}_{i}")
    return mixed
