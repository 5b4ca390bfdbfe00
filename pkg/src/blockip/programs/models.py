"""Block-structured program data classes: two-stage, n-fold, 4-block and 3-CNF formulas.

Matrices follow the IntMat convention: one row per constraint, one column per variable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from blockip.errors import ContractViolation
from blockip.mip.model import Status
from blockip.numerics.vectors import IntMat, Vector, mat_apply


def _shape_check(what: str, m: IntMat, rows: int, cols: int) -> None:
    if m.shape != (rows, cols):
        raise ContractViolation(f"{what} has shape {m.shape}, expected {(rows, cols)}")


def _vector(entries: Sequence[int]) -> Vector:
    return tuple(int(a) for a in entries)


@dataclass(frozen=True)
class TwoStageBrick:
    A: IntMat  # local rows × globals
    D: IntMat  # local rows × locals
    b: Vector

    def __post_init__(self):
        object.__setattr__(self, "b", _vector(self.b))


@dataclass(frozen=True)
class TwoStageProgram:
    """A_i u + D_i v_i = b_i for every brick i, with u >= 0 and v_i >= 0."""

    num_globals: int
    num_locals: int
    num_rows: int
    bricks: tuple[TwoStageBrick, ...]

    def __post_init__(self):
        object.__setattr__(self, "bricks", tuple(self.bricks))
        for i, brick in enumerate(self.bricks):
            _shape_check(f"A of brick {i}", brick.A, self.num_rows, self.num_globals)
            _shape_check(f"D of brick {i}", brick.D, self.num_rows, self.num_locals)
            if len(brick.b) != self.num_rows:
                raise ContractViolation(f"b of brick {i} has length {len(brick.b)}")

    @property
    def delta(self) -> int:
        return max((brick.D.norm_inf() for brick in self.bricks), default=0)


@dataclass
class TwoStageVerdict:
    status: Status
    u: Vector | None = None
    vs: tuple[Vector, ...] | None = None
    message: str = ""
    residue: Vector | None = None

    @property
    def feasible(self) -> bool:
        return self.status is Status.FEASIBLE

    def check(self, program: TwoStageProgram) -> list[str]:
        """Exact re-substitution of the witness; empty list when it is valid."""
        if self.u is None or self.vs is None:
            return ["no witness"]
        problems = []
        if len(self.u) != program.num_globals or any(a < 0 for a in self.u):
            problems.append(f"global part {self.u} is not a nonnegative vector of the right size")
        if len(self.vs) != len(program.bricks):
            return problems + [f"{len(self.vs)} local parts for {len(program.bricks)} bricks"]
        for i, (brick, v) in enumerate(zip(program.bricks, self.vs)):
            if len(v) != program.num_locals or any(a < 0 for a in v):
                problems.append(f"brick {i}: local part {v} is not nonnegative")
                continue
            lhs = [p + q for p, q in zip(mat_apply(brick.A, self.u), mat_apply(brick.D, v))]
            if tuple(lhs) != brick.b:
                problems.append(f"brick {i}: {tuple(lhs)} != {brick.b}")
        return problems


@dataclass(frozen=True)
class NFoldBrick:
    D: IntMat  # local rows × locals
    b: Vector
    c: Vector
    multiplicity: int = 1

    def __post_init__(self):
        object.__setattr__(self, "b", _vector(self.b))
        object.__setattr__(self, "c", _vector(self.c))
        if self.multiplicity < 1:
            raise ContractViolation(f"brick multiplicity must be >= 1, got {self.multiplicity}")

    def type_key(self) -> tuple:
        return (self.D.key(), self.b, self.c)


@dataclass(frozen=True)
class NFoldProgram:
    """min ∑ c_i·y_i subject to ∑ C y_i = a, D_i y_i = b_i, y_i >= 0 (uniform C)."""

    C: IntMat  # link rows × locals
    a: Vector
    bricks: tuple[NFoldBrick, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", _vector(self.a))
        object.__setattr__(self, "bricks", tuple(self.bricks))
        if len(self.a) != self.C.nrows:
            raise ContractViolation(f"a has length {len(self.a)} for {self.C.nrows} link rows")
        rows = self.bricks[0].D.nrows if self.bricks else 0
        for i, brick in enumerate(self.bricks):
            _shape_check(f"D of brick {i}", brick.D, rows, self.C.ncols)
            if len(brick.b) != rows or len(brick.c) != self.C.ncols:
                raise ContractViolation(f"brick {i}: b or c has the wrong length")

    @property
    def num_locals(self) -> int:
        return self.C.ncols

    @property
    def num_local_rows(self) -> int:
        return self.bricks[0].D.nrows if self.bricks else 0

    @property
    def count(self) -> int:
        return sum(brick.multiplicity for brick in self.bricks)

    def concrete_bricks(self) -> list[NFoldBrick]:
        """Bricks with multiplicity unrolled, in file order."""
        out = []
        for brick in self.bricks:
            out.extend([brick] * brick.multiplicity)
        return out

    def objective(self, ys: Sequence[Sequence[int]]) -> int:
        return sum(
            sum(c * y for c, y in zip(brick.c, v)) for brick, v in zip(self.concrete_bricks(), ys)
        )

    def check(self, ys: Sequence[Sequence[int]]) -> list[str]:
        """Exact feasibility check of one local vector per concrete brick."""
        bricks = self.concrete_bricks()
        if len(ys) != len(bricks):
            return [f"{len(ys)} local parts for {len(bricks)} bricks"]
        problems = []
        link = [0] * len(self.a)
        for i, (brick, v) in enumerate(zip(bricks, ys)):
            if len(v) != self.num_locals or any(a < 0 for a in v):
                problems.append(f"brick {i}: {tuple(v)} is not nonnegative")
                continue
            if tuple(mat_apply(brick.D, v)) != brick.b:
                problems.append(f"brick {i}: local rows violated")
            link = [s + p for s, p in zip(link, mat_apply(self.C, v))]
        if not problems and tuple(link) != self.a:
            problems.append(f"linking rows give {tuple(link)} != {self.a}")
        return problems


@dataclass
class NFoldResult:
    status: Status
    value: Fraction | int | None = None
    witness: tuple[Vector, ...] | None = None
    message: str = ""


@dataclass(frozen=True)
class FourBlockBrick:
    D: IntMat  # local rows × locals
    b: Vector
    A: IntMat  # local rows × globals
    C: IntMat  # link rows × locals

    def __post_init__(self):
        object.__setattr__(self, "b", _vector(self.b))


@dataclass(frozen=True)
class FourBlockProgram:
    """B̂ x + ∑ C_i y_i = a, A_i x + D_i y_i = b_i, x >= 0, y_i >= 0."""

    Bhat: IntMat  # link rows × globals
    a: Vector
    bricks: tuple[FourBlockBrick, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", _vector(self.a))
        object.__setattr__(self, "bricks", tuple(self.bricks))
        if len(self.a) != self.Bhat.nrows:
            raise ContractViolation("a does not match the rows of Bmat")
        if self.bricks:
            first = self.bricks[0]
            for i, brick in enumerate(self.bricks):
                _shape_check(f"A of brick {i}", brick.A, first.D.nrows, self.Bhat.ncols)
                _shape_check(f"D of brick {i}", brick.D, first.D.nrows, first.D.ncols)
                _shape_check(f"C of brick {i}", brick.C, self.Bhat.nrows, first.D.ncols)
                if len(brick.b) != first.D.nrows:
                    raise ContractViolation(f"b of brick {i} has length {len(brick.b)}")

    @property
    def num_globals(self) -> int:
        return self.Bhat.ncols

    @property
    def num_locals(self) -> int:
        return self.bricks[0].D.ncols if self.bricks else 0

    @property
    def num_link_rows(self) -> int:
        return self.Bhat.nrows

    @property
    def num_local_rows(self) -> int:
        return self.bricks[0].D.nrows if self.bricks else 0

    @property
    def is_uniform(self) -> bool:
        return all(
            brick.A.rows == self.bricks[0].A.rows and brick.C.rows == self.bricks[0].C.rows
            for brick in self.bricks
        )

    def check(self, x: Sequence[int], ys: Sequence[Sequence[int]]) -> list[str]:
        if len(x) != self.num_globals or any(a < 0 for a in x):
            return [f"global part {tuple(x)} is not a nonnegative vector of the right size"]
        if len(ys) != len(self.bricks):
            return [f"{len(ys)} local parts for {len(self.bricks)} bricks"]
        problems = []
        link = list(mat_apply(self.Bhat, x))
        for i, (brick, y) in enumerate(zip(self.bricks, ys)):
            if len(y) != self.num_locals or any(a < 0 for a in y):
                problems.append(f"brick {i}: {tuple(y)} is not nonnegative")
                continue
            local = [p + q for p, q in zip(mat_apply(brick.A, x), mat_apply(brick.D, y))]
            if tuple(local) != brick.b:
                problems.append(f"brick {i}: local rows violated")
            link = [s + p for s, p in zip(link, mat_apply(brick.C, y))]
        if not problems and tuple(link) != self.a:
            problems.append(f"linking rows give {tuple(link)} != {self.a}")
        return problems


@dataclass(frozen=True)
class CnfFormula:
    """3-CNF over variables 1..num_vars; literal k > 0 is x_k, k < 0 is ¬x_|k|."""

    num_vars: int
    clauses: tuple[tuple[int, int, int], ...] = field(default_factory=tuple)

    def __post_init__(self):
        clauses = tuple(tuple(int(lit) for lit in clause) for clause in self.clauses)
        object.__setattr__(self, "clauses", clauses)
        for clause in clauses:
            if len(clause) != 3:
                raise ContractViolation(f"clause {clause} does not have exactly 3 literals")
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ContractViolation(f"literal {lit} out of range 1..{self.num_vars}")

    def satisfied_by(self, assignment: Sequence[bool]) -> bool:
        """assignment[k-1] is the value of x_k."""
        return all(
            any(assignment[abs(lit) - 1] == (lit > 0) for lit in clause) for clause in self.clauses
        )
