"""Uniform n-fold optimisation through faithful decompositions and the ζ/δ/ω model.

Every brick right-hand side is split into small parts by a faithful decomposition, bricks are
regrouped into types (D, part, c) with counts, and one mixed program decides how many times
each base solution and each nonnegative Graver element is used. Base solution counts ζ and
Graver counts δ are integral; the assignment ω of base solutions to cost classes is
continuous and rounded afterwards on its totally unimodular residual system.
"""

from __future__ import annotations

import logging
from collections import defaultdict, deque
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field

from blockip import config
from blockip.errors import InternalInconsistency, ResourceLimitError
from blockip.graver.engine import base_solutions, minimal_solutions, nonnegative_graver
from blockip.mip.branch_bound import mip_solve
from blockip.mip.model import MixedProgram, Sense, Status
from blockip.mip.rounding import tu_round
from blockip.numerics.vectors import IntMat, Vector, dot, mat_apply
from blockip.programs.models import NFoldBrick, NFoldProgram, NFoldResult
from blockip.solvers.faithful import faithful_decompose

logger = logging.getLogger(__name__)

Parts = tuple[tuple[Vector, int], ...]


def decompose_bricks(
    program: NFoldProgram, xi: int | None = None, workers: int | None = None
) -> dict[tuple, Parts]:
    """Faithful decomposition per distinct (D, b); zero right-hand sides stay whole."""
    workers = workers or config.DEFAULT_THREADS
    distinct: dict[tuple, NFoldBrick] = {}
    for brick in program.bricks:
        distinct.setdefault((brick.D.key(), brick.b), brick)
    out: dict[tuple, Parts] = {}
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = {}
        for key, brick in distinct.items():
            if any(brick.b):
                futures[pool.submit(faithful_decompose, brick.D, brick.b, xi)] = key
            else:
                out[key] = ((brick.b, 1),)
        for future in as_completed(futures):
            out[futures[future]] = future.result().parts
    return {key: out[key] for key in distinct}


def expand_program(
    program: NFoldProgram,
    xi: int | None = None,
    workers: int | None = None,
    decompositions: dict[tuple, Parts] | None = None,
) -> NFoldProgram:
    """High-multiplicity program whose bricks are the types (D, part, c) with their counts."""
    if decompositions is None:
        decompositions = decompose_bricks(program, xi, workers)
    counts: dict[tuple, int] = {}
    first: dict[tuple, tuple[IntMat, Vector, Vector]] = {}
    for brick in program.bricks:
        for part, k in decompositions[(brick.D.key(), brick.b)]:
            key = (brick.D.key(), part, brick.c)
            first.setdefault(key, (brick.D, part, brick.c))
            counts[key] = counts.get(key, 0) + k * brick.multiplicity
    bricks = [NFoldBrick(D, part, c, counts[key]) for key, (D, part, c) in first.items()]
    return NFoldProgram(program.C, program.a, tuple(bricks))


@dataclass
class _DiagType:
    D: IntMat
    rhs: list[Vector] = field(default_factory=list)
    costs: list[Vector] = field(default_factory=list)
    base: dict[Vector, tuple[Vector, ...]] = field(default_factory=dict)
    graver: tuple[Vector, ...] = ()
    best: dict[Vector, int] = field(default_factory=dict)
    collapsed: bool = False


@dataclass
class ModelM:
    program: MixedProgram
    types: list[_DiagType]
    counts: dict[tuple[int, Vector, Vector], int]  # (type, b, c) -> count
    zeta: dict[tuple[int, Vector, Vector], str]  # (type, b, ŵ)
    delta: dict[tuple[int, Vector], str]  # (type, g)
    omega: dict[tuple[int, Vector, Vector, Vector], str]  # (type, b, c, ŵ)


def build_model(
    expanded: NFoldProgram,
    best_costs: dict[tuple, tuple[Vector, ...]] | None = None,
    base: str = "minimal",
    xi: int | None = None,
    collapse_omega: bool = False,
) -> ModelM:
    """The mixed program with integral ζ, δ and continuous ω for a high-multiplicity program.

    ``best_costs`` maps D.key() to every cost vector of the original bricks with that D; by
    default the costs of the expanded bricks are used.
    """
    xi = config.DEFAULT_XI if xi is None else xi
    index: dict[tuple, int] = {}
    types: list[_DiagType] = []
    counts: dict[tuple[int, Vector, Vector], int] = {}
    for brick in expanded.bricks:
        d = index.setdefault(brick.D.key(), len(types))
        if d == len(types):
            types.append(_DiagType(brick.D))
        diag = types[d]
        if brick.b not in diag.rhs:
            diag.rhs.append(brick.b)
        if brick.c not in diag.costs:
            diag.costs.append(brick.c)
        key = (d, brick.b, brick.c)
        counts[key] = counts.get(key, 0) + brick.multiplicity

    model = MixedProgram(name="nfold-model")
    zeta, delta, omega = {}, {}, {}
    link = [defaultdict(int) for _ in expanded.a]
    objective: dict[str, int] = defaultdict(int)
    for d, diag in enumerate(types):
        D = diag.D
        for b in diag.rhs:
            if base == "bounded":
                bound = (2 * D.nrows * (D.norm_inf() + xi) + 1) ** D.nrows
                diag.base[b] = base_solutions(D, b, bound=bound)
            else:
                diag.base[b] = minimal_solutions(D, b)
        diag.graver = nonnegative_graver(D)
        costs = list(diag.costs)
        if best_costs is not None:
            costs += [c for c in best_costs.get(D.key(), ()) if c not in costs]
        diag.best = {g: min(dot(c, g) for c in costs) for g in diag.graver}
        diag.collapsed = collapse_omega and len(diag.costs) == 1

        for bi, b in enumerate(diag.rhs):
            total = sum(counts.get((d, b, c), 0) for c in diag.costs)
            names = []
            for k, w in enumerate(diag.base[b]):
                name = model.add_variable(f"zeta_{d}_{bi}_{k}", lower=0, upper=total)
                zeta[(d, b, w)] = name
                names.append(name)
                for s, value in enumerate(mat_apply(expanded.C, w)):
                    link[s][name] += value
                if diag.collapsed:
                    objective[name] += dot(diag.costs[0], w)
            if diag.collapsed:
                model.add_constraint({n: 1 for n in names}, Sense.EQ, total, name=f"C3_{d}_{bi}")
                continue
            for ci, c in enumerate(diag.costs):
                count = counts.get((d, b, c), 0)
                if not count:
                    continue
                row = {}
                for k, w in enumerate(diag.base[b]):
                    name = model.add_variable(
                        f"omega_{d}_{bi}_{ci}_{k}", lower=0, integer=False
                    )
                    omega[(d, b, c, w)] = name
                    row[name] = 1
                    objective[name] += dot(c, w)
                model.add_constraint(row, Sense.EQ, count, name=f"C3_{d}_{bi}_{ci}")
            for k, w in enumerate(diag.base[b]):
                row = {
                    omega[(d, b, c, w)]: 1 for c in diag.costs if (d, b, c, w) in omega
                }
                row[zeta[(d, b, w)]] = -1
                model.add_constraint(row, Sense.EQ, 0, name=f"C2_{d}_{bi}_{k}")
        for gi, g in enumerate(diag.graver):
            name = model.add_variable(f"delta_{d}_{gi}", lower=0)
            delta[(d, g)] = name
            for s, value in enumerate(mat_apply(expanded.C, g)):
                link[s][name] += value
            objective[name] += diag.best[g]
    for s, row in enumerate(link):
        model.add_constraint(dict(row), Sense.EQ, expanded.a[s], name=f"C1_{s}")
    model.set_objective(dict(objective))
    logger.info(
        f"n-fold model: {len(types)} D-types, {len(zeta)} zeta, {len(delta)} delta, "
        f"{len(omega)} omega"
    )
    return ModelM(model, types, counts, zeta, delta, omega)


def _assemble(
    program: NFoldProgram,
    decompositions: dict[tuple, Parts],
    model: ModelM,
    values: dict[str, int],
) -> tuple[Vector, ...]:
    type_of = {diag.D.key(): d for d, diag in enumerate(model.types)}
    queues: dict[tuple, deque] = defaultdict(deque)
    for (d, b, c, w), name in model.omega.items():
        queues[(d, b, c)].extend([w] * values[name])
    for (d, b, w), name in model.zeta.items():
        diag = model.types[d]
        if diag.collapsed:
            queues[(d, b, diag.costs[0])].extend([w] * values[name])

    bricks = program.concrete_bricks()
    ys = []
    for brick in bricks:
        d = type_of[brick.D.key()]
        y = [0] * program.num_locals
        for part, k in decompositions[(brick.D.key(), brick.b)]:
            for _ in range(k):
                queue = queues[(d, part, brick.c)]
                if not queue:
                    raise InternalInconsistency(f"no base solution left for part {part}")
                y = [a + e for a, e in zip(y, queue.popleft())]
        ys.append(y)
    if any(queues.values()):
        raise InternalInconsistency("base solutions left unassigned")

    for (d, g), name in model.delta.items():
        copies = values[name]
        if not copies:
            continue
        best = model.types[d].best[g]
        target = next(
            i
            for i, brick in enumerate(bricks)
            if type_of[brick.D.key()] == d and dot(brick.c, g) == best
        )
        ys[target] = [a + copies * e for a, e in zip(ys[target], g)]
    return tuple(tuple(y) for y in ys)


def solve_nfold(
    program: NFoldProgram,
    xi: int | None = None,
    base: str = "minimal",
    collapse_omega: bool = False,
    workers: int | None = None,
) -> NFoldResult:
    """Minimum of ∑ c_i·y_i over the uniform n-fold program, with a validated witness."""
    if not program.bricks:
        if any(program.a):
            return NFoldResult(Status.INFEASIBLE)
        return NFoldResult(Status.OPTIMAL, 0, ())
    try:
        decompositions = decompose_bricks(program, xi, workers)
        expanded = expand_program(program, decompositions=decompositions)
        best_costs: dict[tuple, list[Vector]] = defaultdict(list)
        for brick in program.bricks:
            if brick.c not in best_costs[brick.D.key()]:
                best_costs[brick.D.key()].append(brick.c)
        model = build_model(
            expanded,
            best_costs={k: tuple(v) for k, v in best_costs.items()},
            base=base,
            xi=xi,
            collapse_omega=collapse_omega,
        )
    except ResourceLimitError as exc:
        return NFoldResult(Status.RESOURCE_LIMIT, message=str(exc))

    outcome = mip_solve(model.program)
    if outcome.status in (Status.INFEASIBLE, Status.UNBOUNDED):
        return NFoldResult(outcome.status)
    if not outcome.is_feasible:
        return NFoldResult(Status.RESOURCE_LIMIT, message=f"mip ended {outcome.status.value}")

    fixed = {name: outcome.int_value(name) for name in model.program.integer_vars}
    values = tu_round(model.program, fixed) if model.omega else fixed
    witness = _assemble(program, decompositions, model, values)
    problems = program.check(witness)
    value = program.objective(witness)
    # rounding ω never costs more than the incumbent; at an optimum it costs exactly as much
    mismatch = value > outcome.objective_value or (
        outcome.status is Status.OPTIMAL and value != outcome.objective_value
    )
    if problems or mismatch:
        raise InternalInconsistency(
            f"n-fold witness invalid (value {value} vs {outcome.objective_value}): {problems[:3]}"
        )
    logger.info(f"n-fold optimum {value} over {program.count} bricks")
    return NFoldResult(outcome.status, value, witness)


def nfold_mixed(program: NFoldProgram) -> MixedProgram:
    """Flat MIP encoding with one block of variables per concrete brick."""
    mixed = MixedProgram(name="nfold-flat")
    bricks = program.concrete_bricks()
    for i in range(len(bricks)):
        for k in range(program.num_locals):
            mixed.add_variable(f"y{i}_{k}", lower=0)
    for s, row in enumerate(program.C.rows):
        coeffs = {f"y{i}_{k}": a for i in range(len(bricks)) for k, a in enumerate(row) if a}
        mixed.add_constraint(coeffs, Sense.EQ, program.a[s], name=f"link{s}")
    objective = {}
    for i, brick in enumerate(bricks):
        for r, row in enumerate(brick.D.rows):
            mixed.add_constraint(
                {f"y{i}_{k}": a for k, a in enumerate(row)}, Sense.EQ, brick.b[r], name=f"b{i}_{r}"
            )
        objective.update({f"y{i}_{k}": c for k, c in enumerate(brick.c)})
    mixed.set_objective(objective)
    return mixed


def solve_nfold_direct(program: NFoldProgram) -> NFoldResult:
    """Reference optimum of the flat encoding (small instances only)."""
    outcome = mip_solve(nfold_mixed(program))
    if outcome.status in (Status.INFEASIBLE, Status.UNBOUNDED):
        return NFoldResult(outcome.status)
    if not outcome.is_feasible:
        return NFoldResult(Status.RESOURCE_LIMIT, message=f"mip ended {outcome.status.value}")
    bricks = program.concrete_bricks()
    witness = tuple(
        tuple(outcome.int_value(f"y{i}_{k}") for k in range(program.num_locals))
        for i in range(len(bricks))
    )
    return NFoldResult(outcome.status, program.objective(witness), witness)
