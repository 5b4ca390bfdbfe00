"""Two-stage stochastic feasibility: residue engine and direct flat-MIP engine.

The residue engine fixes u modulo B (the lcm of the per-type cone moduli), replaces every
brick's integer-cone condition b_i - A_i u ∈ intCone(D_i) by its certificate polyhedron for
that residue class, and solves the remaining ILP in w where u = B·w + r.
"""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from math import lcm
from typing import Sequence

from blockip import config
from blockip.errors import InternalInconsistency, ResourceLimitError
from blockip.geometry.certificates import certificate_is_empty, construct_Q
from blockip.geometry.cones import ConeConstants, DualRepresentation, cone_constants, weyl_dual
from blockip.mip.branch_bound import mip_solve
from blockip.mip.model import MixedProgram, Sense, Status
from blockip.mip.simplex import lp_solve
from blockip.numerics.vectors import IntMat, Vector, dot, mat_apply
from blockip.programs.models import TwoStageProgram, TwoStageVerdict

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NormalizedTwoStage:
    """Bricks with duplicate local columns removed and grouped by their reduced D."""

    program: TwoStageProgram
    types: tuple[IntMat, ...]
    brick_types: tuple[int, ...]
    column_maps: tuple[tuple[int, ...], ...]  # reduced column k of brick i -> original column

    def lift(self, i: int, v: Sequence[int]) -> Vector:
        out = [0] * self.program.num_locals
        for k, j in enumerate(self.column_maps[i]):
            out[j] = v[k]
        return tuple(out)


def normalize_twostage(program: TwoStageProgram) -> NormalizedTwoStage:
    types: list[IntMat] = []
    index: dict[tuple, int] = {}
    brick_types, column_maps = [], []
    for brick in program.bricks:
        first: dict[Vector, int] = {}
        for j, col in enumerate(brick.D.columns):
            first.setdefault(col, j)
        keep = tuple(first.values())
        reduced = IntMat.from_columns([brick.D.column(j) for j in keep], brick.D.nrows)
        key = reduced.key()
        if key not in index:
            index[key] = len(types)
            types.append(reduced)
        brick_types.append(index[key])
        column_maps.append(keep)
    logger.debug(f"two-stage program: {len(program.bricks)} bricks, {len(types)} D-types")
    return NormalizedTwoStage(program, tuple(types), tuple(brick_types), tuple(column_maps))


def twostage_mixed(
    program: TwoStageProgram, global_upper: int | None = None, name: str = "two-stage"
) -> MixedProgram:
    """Flat MIP encoding: u_j and v_i_k nonnegative integers, one row per brick row."""
    mixed = MixedProgram(name=name)
    for j in range(program.num_globals):
        mixed.add_variable(f"u{j}", lower=0, upper=global_upper)
    for i in range(len(program.bricks)):
        for k in range(program.num_locals):
            mixed.add_variable(f"v{i}_{k}", lower=0)
    for i, brick in enumerate(program.bricks):
        for row in range(program.num_rows):
            coeffs = {f"u{j}": a for j, a in enumerate(brick.A.rows[row])}
            coeffs.update({f"v{i}_{k}": a for k, a in enumerate(brick.D.rows[row])})
            mixed.add_constraint(coeffs, Sense.EQ, brick.b[row], name=f"b{i}_{row}")
    return mixed


def _witness_from(program: TwoStageProgram, assignment) -> tuple[Vector, tuple[Vector, ...]]:
    u = tuple(int(assignment[f"u{j}"]) for j in range(program.num_globals))
    vs = tuple(
        tuple(int(assignment[f"v{i}_{k}"]) for k in range(program.num_locals))
        for i in range(len(program.bricks))
    )
    return u, vs


def _verified(program: TwoStageProgram, verdict: TwoStageVerdict) -> TwoStageVerdict:
    problems = verdict.check(program)
    if problems:
        raise InternalInconsistency(f"two-stage witness fails re-substitution: {problems[:3]}")
    return verdict


def solve_twostage_direct(
    program: TwoStageProgram,
    global_upper: int | None = None,
    node_limit: int | None = None,
) -> TwoStageVerdict:
    """Feasibility of the flat encoding by mip_solve.

    Without ``global_upper`` the global variables are only boxed by the generic solution-size
    bound, which is enough to find solutions but rarely enough to refute them.
    """
    if not program.bricks:
        return TwoStageVerdict(Status.FEASIBLE, (0,) * program.num_globals, ())
    outcome = mip_solve(twostage_mixed(program, global_upper), node_limit=node_limit)
    if outcome.status is Status.INFEASIBLE:
        return TwoStageVerdict(Status.INFEASIBLE)
    if not outcome.is_feasible:
        return TwoStageVerdict(Status.RESOURCE_LIMIT, message=f"mip ended {outcome.status.value}")
    u, vs = _witness_from(program, outcome.assignment)
    return _verified(program, TwoStageVerdict(Status.FEASIBLE, u, vs))


def _recover_locals(d: IntMat, rhs: Vector, name: str) -> Vector | None:
    mixed = MixedProgram(name=name)
    for k in range(d.ncols):
        mixed.add_variable(f"v{k}", lower=0)
    for row, value in zip(d.rows, rhs):
        mixed.add_constraint({f"v{k}": a for k, a in enumerate(row)}, Sense.EQ, value)
    mixed.set_objective({f"v{k}": 1 for k in range(d.ncols)})
    outcome = mip_solve(mixed)
    if not outcome.is_feasible:
        return None
    return tuple(outcome.int_value(f"v{k}") for k in range(d.ncols))


class _ResidueSearch:
    def __init__(
        self,
        norm: NormalizedTwoStage,
        duals: list[DualRepresentation],
        constants: list[ConeConstants],
        modulus: int,
    ):
        self.norm = norm
        self.program = norm.program
        self.duals = duals
        self.constants = constants
        self.modulus = modulus

    def _brick_rhs(self, i: int, u: Sequence[int]) -> Vector:
        brick = self.program.bricks[i]
        return tuple(b - a for b, a in zip(brick.b, mat_apply(brick.A, u)))

    def _w_program(self, r: Vector, rows: list[tuple[Vector, int]], name: str) -> MixedProgram:
        """u = B·w + r with w >= 0; every row (q, a) of brick i reads ⟨q, b_i - A_i u⟩ >= a."""
        mixed = MixedProgram(name=name)
        for j in range(self.program.num_globals):
            mixed.add_variable(f"w{j}", lower=0)
        seen = set()
        for coeffs, rhs in rows:
            if (coeffs, rhs) in seen:
                continue
            seen.add((coeffs, rhs))
            mixed.add_constraint({f"w{j}": c for j, c in enumerate(coeffs)}, Sense.GE, rhs)
        mixed.set_objective({f"w{j}": 1 for j in range(self.program.num_globals)})
        return mixed

    def _row(self, i: int, r: Vector, q: Vector, a: int) -> tuple[Vector, int]:
        brick = self.program.bricks[i]
        qa = tuple(dot(q, brick.A.column(j)) for j in range(self.program.num_globals))
        coeffs = tuple(-self.modulus * c for c in qa)
        return coeffs, a - dot(q, self._brick_rhs(i, r))

    def attempt(self, r: Vector) -> Vector | None:
        """The global part u of a solution with u ≡ r (mod B), or None."""
        bricks = range(len(self.program.bricks))
        screen = [
            self._row(i, r, f, 0)
            for i in bricks
            for f in self.duals[self.norm.brick_types[i]].facets
        ]
        screened = mip_solve(self._w_program(r, screen, f"screen{list(r)}"))
        if screened.status is Status.RESOURCE_LIMIT:
            raise ResourceLimitError("mip node limit", screened.nodes, f"screen {r}")
        if not screened.is_feasible:
            return None
        rows = []
        for i in bricks:
            tau = self.norm.brick_types[i]
            modulus = self.constants[tau].B
            residue = tuple(x % modulus for x in self._brick_rhs(i, r))
            cert = construct_Q(
                self.norm.types[tau], residue, self.duals[tau], self.constants[tau], workers=1
            )
            if certificate_is_empty(cert):
                return None
            rows.extend(self._row(i, r, q, a) for q, a in cert.inequalities)
        outcome = mip_solve(self._w_program(r, rows, f"residue{list(r)}"))
        if outcome.status is Status.RESOURCE_LIMIT:
            raise ResourceLimitError("mip node limit", outcome.nodes, f"residue {r}")
        if not outcome.is_feasible:
            return None
        w = [outcome.int_value(f"w{j}") for j in range(self.program.num_globals)]
        return tuple(self.modulus * wj + rj for wj, rj in zip(w, r))


def solve_twostage_residue(
    program: TwoStageProgram,
    budget: int | None = None,
    workers: int | None = None,
) -> TwoStageVerdict:
    """Decide feasibility by enumerating residues of u modulo B."""
    budget = config.DEFAULT_BUDGET if budget is None else budget
    workers = workers or config.DEFAULT_THREADS
    if not program.bricks:
        return TwoStageVerdict(Status.FEASIBLE, (0,) * program.num_globals, ())

    relaxation = lp_solve(twostage_mixed(program, name="two-stage-lp").relaxed())
    if relaxation.status is Status.INFEASIBLE:
        logger.info("two-stage LP relaxation infeasible")
        return TwoStageVerdict(Status.INFEASIBLE, message="LP relaxation infeasible")

    norm = normalize_twostage(program)
    try:
        duals = [weyl_dual(d) for d in norm.types]
        constants = [cone_constants(d, f, workers=workers) for d, f in zip(norm.types, duals)]
    except ResourceLimitError as exc:
        return TwoStageVerdict(Status.RESOURCE_LIMIT, message=str(exc))
    modulus = 1
    for c in constants:
        modulus = lcm(modulus, c.B)
    residues = modulus**program.num_globals
    logger.info(f"residue engine: B={modulus}, {residues} residues, {len(norm.types)} types")
    if residues > budget:
        return TwoStageVerdict(
            Status.RESOURCE_LIMIT, message=f"B^|x| = {residues} exceeds budget {budget}"
        )

    search = _ResidueSearch(norm, duals, constants, modulus)
    all_residues = itertools.product(range(modulus), repeat=program.num_globals)
    batch_size = 4 * workers
    try:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            while True:
                batch = list(itertools.islice(all_residues, batch_size))
                if not batch:
                    break
                futures = {pool.submit(search.attempt, r): r for r in batch}
                found = {}
                for future in as_completed(futures):
                    u = future.result()
                    if u is not None:
                        found[futures[future]] = u
                if found:
                    r = min(found)
                    return _with_locals(norm, found[r], r)
    except ResourceLimitError as exc:
        return TwoStageVerdict(Status.RESOURCE_LIMIT, message=str(exc))
    return TwoStageVerdict(Status.INFEASIBLE)


def _with_locals(norm: NormalizedTwoStage, u: Vector, r: Vector) -> TwoStageVerdict:
    program = norm.program
    vs = []
    for i, brick in enumerate(program.bricks):
        rhs = tuple(b - a for b, a in zip(brick.b, mat_apply(brick.A, u)))
        v = _recover_locals(norm.types[norm.brick_types[i]], rhs, f"recover{i}")
        if v is None:
            raise InternalInconsistency(f"brick {i}: certificate accepted {rhs} but no v exists")
        vs.append(norm.lift(i, v))
    logger.info(f"residue engine: feasible at residue {r}")
    return _verified(program, TwoStageVerdict(Status.FEASIBLE, u, tuple(vs), residue=r))
