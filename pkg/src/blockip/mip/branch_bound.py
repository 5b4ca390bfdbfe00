"""Exact mixed-integer optimisation by best-bound branch-and-bound over lp_solve.

Pure integer programs are presolved first: equality rows are solved over the integers
(x = x₀ + N·z with N an integer kernel basis), single-variable rows become bounds and every
remaining row is divided by the gcd of its coefficients with its right-hand side rounded.
Integer variables without finite bounds are boxed by (n+1)·H, H being the Hadamard bound
on the subdeterminants of the constraint data.
"""

from __future__ import annotations

import heapq
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor, gcd, isqrt

from blockip import config
from blockip.errors import InternalInconsistency
from blockip.mip.model import MixedProgram, Sense, SolveOutcome, Status
from blockip.mip.simplex import lp_solve
from blockip.numerics.lattice import column_echelon, solve_integral
from blockip.numerics.vectors import IntMat, Vector

logger = logging.getLogger(__name__)
models_logger = logging.getLogger("blockip.mip.models")

Bounds = dict[str, tuple[int | None, int | None]]


def _ceil_sqrt(x: int) -> int:
    return 0 if x <= 0 else isqrt(x - 1) + 1


def solution_box(program: MixedProgram) -> int:
    """(n+1)·∏ max(1, ⌈‖column‖₂⌉) over the columns of [A | b] stacked with the objective."""
    squares = {v.name: 0 for v in program.variables}
    rhs_square = 0
    for con in program.constraints:
        for name, a in con.coefficients:
            squares[name] += a * a
        rhs_square += ceil(abs(Fraction(con.rhs))) ** 2
    for v in program.variables:
        squares[v.name] += 1 if (v.lower is not None or v.upper is not None) else 0
        for bound in (v.lower, v.upper):
            if bound is not None:
                rhs_square += ceil(abs(Fraction(bound))) ** 2
    for name, a in program.objective.items():
        squares[name] += a * a
    product = max(1, _ceil_sqrt(rhs_square))
    for sq in squares.values():
        product *= max(1, _ceil_sqrt(sq))
    return (len(program.variables) + 1) * product


@dataclass
class _Substitution:
    """x = origin + kernel·z for the original integer variables."""

    names: list[str]
    origin: Vector
    kernel: list[Vector]

    def expand(self, z: list[int]) -> dict[str, Fraction]:
        values = list(self.origin)
        for zk, col in zip(z, self.kernel):
            if zk:
                values = [a + zk * b for a, b in zip(values, col)]
        return {name: Fraction(v) for name, v in zip(self.names, values)}


def _tighten(
    coefficients: dict[str, int], sense: Sense, rhs: Fraction
) -> tuple[dict[str, int], Sense, Fraction] | None | bool:
    """Divide an integer row by its content; returns True/False for constant rows."""
    coefficients = {v: a for v, a in coefficients.items() if a}
    if not coefficients:
        if sense is Sense.EQ:
            return rhs == 0
        return rhs >= 0 if sense is Sense.LE else rhs <= 0
    g = 0
    for a in coefficients.values():
        g = gcd(g, a)
    coefficients = {v: a // g for v, a in coefficients.items()}
    scaled = Fraction(rhs) / g
    if sense is Sense.LE:
        return coefficients, sense, Fraction(floor(scaled))
    if sense is Sense.GE:
        return coefficients, sense, Fraction(ceil(scaled))
    if scaled.denominator != 1:
        return False
    return coefficients, sense, scaled


def _presolve(program: MixedProgram) -> tuple[MixedProgram, _Substitution | None] | None:
    """Integer presolve of a pure integer program; None means proven infeasible."""
    names = program.variable_names
    equalities = [c for c in program.constraints if c.sense is Sense.EQ]
    substitution = None
    rows: list[tuple[dict[str, int], Sense, Fraction]] = []

    if equalities:
        if any(Fraction(c.rhs).denominator != 1 for c in equalities):
            return None
        pos = {name: i for i, name in enumerate(names)}
        mat_rows = []
        for con in equalities:
            row = [0] * len(names)
            for name, a in con.coefficients:
                row[pos[name]] = a
            mat_rows.append(row)
        form = column_echelon(IntMat.of(mat_rows, ncols=len(names)))
        y = solve_integral(form, [int(c.rhs) for c in equalities])
        if y is None:
            return None
        origin = [0] * len(names)
        for k, yk in enumerate(y):
            if yk:
                origin = [a + yk * b for a, b in zip(origin, form.transform[k])]
        kernel = [form.transform[k] for k in range(form.rank, len(names))]
        substitution = _Substitution(names, tuple(origin), kernel)
        znames = [f"z{k}" for k in range(len(kernel))]

        def substitute(coeffs: dict[str, int], rhs: Fraction):
            new = {zn: 0 for zn in znames}
            const = 0
            for name, a in coeffs.items():
                i = pos[name]
                const += a * origin[i]
                for zn, col in zip(znames, kernel):
                    new[zn] += a * col[i]
            return new, Fraction(rhs) - const

        for con in program.constraints:
            if con.sense is not Sense.EQ:
                coeffs, rhs = substitute(dict(con.coefficients), con.rhs)
                rows.append((coeffs, con.sense, rhs))
        for v in program.variables:
            if v.lower is not None:
                coeffs, rhs = substitute({v.name: 1}, v.lower)
                rows.append((coeffs, Sense.GE, rhs))
            if v.upper is not None:
                coeffs, rhs = substitute({v.name: 1}, v.upper)
                rows.append((coeffs, Sense.LE, rhs))
        objective = {zn: 0 for zn in znames}
        for name, a in program.objective.items():
            for zn, col in zip(znames, kernel):
                objective[zn] += a * col[pos[name]]
        bounds: dict[str, list] = {zn: [None, None] for zn in znames}
    else:
        znames = names
        rows = [(dict(c.coefficients), c.sense, Fraction(c.rhs)) for c in program.constraints]
        objective = dict(program.objective)
        bounds = {v.name: [v.lower, v.upper] for v in program.variables}

    reduced = MixedProgram(name=f"{program.name}:presolved")
    kept: list[tuple[dict[str, int], Sense, Fraction]] = []
    for coeffs, sense, rhs in rows:
        tightened = _tighten(coeffs, sense, rhs)
        if tightened is True:
            continue
        if tightened is False:
            return None
        coeffs, sense, rhs = tightened
        if len(coeffs) == 1 and sense is not Sense.EQ:
            (name, a), = coeffs.items()
            lo, hi = bounds[name]
            # a is ±1 after tightening
            limit = rhs * a
            if (sense is Sense.GE) == (a > 0):
                bounds[name][0] = limit if lo is None else max(lo, limit)
            else:
                bounds[name][1] = limit if hi is None else min(hi, limit)
            continue
        kept.append((coeffs, sense, rhs))
    for name in znames:
        lo, hi = bounds[name]
        lo = None if lo is None else ceil(lo)
        hi = None if hi is None else floor(hi)
        if lo is not None and hi is not None and lo > hi:
            return None
        reduced.add_variable(name, lower=lo, upper=hi, integer=True)
    for i, (coeffs, sense, rhs) in enumerate(kept):
        reduced.add_constraint(coeffs, sense, rhs, name=f"r{i}")
    reduced.set_objective(objective)
    return reduced, substitution


def _most_fractional(program: MixedProgram, assignment: dict[str, Fraction]) -> str | None:
    best, best_score = None, Fraction(0)
    for name in program.integer_vars:
        value = assignment[name]
        frac = value - floor(value)
        score = min(frac, 1 - frac)
        if score > best_score:
            best, best_score = name, score
    return best


def _branch_and_bound(program: MixedProgram, bounds: Bounds, limit: int) -> SolveOutcome:
    counter = itertools.count()
    heap: list = [(Fraction(0), 0, next(counter), bounds)]
    incumbent: SolveOutcome | None = None
    nodes = 0
    while heap:
        bound, neg_depth, _, node_bounds = heapq.heappop(heap)
        if incumbent is not None and nodes and bound >= incumbent.objective_value:
            continue
        if nodes >= limit:
            logger.info(f"node limit {limit} reached in {program.name}")
            if incumbent is not None:
                incumbent.status = Status.FEASIBLE
                incumbent.nodes = nodes
                return incumbent
            return SolveOutcome(Status.RESOURCE_LIMIT, nodes=nodes)
        nodes += 1
        relax = lp_solve(program.with_bounds(node_bounds))
        if relax.status is Status.INFEASIBLE:
            continue
        if relax.status is Status.UNBOUNDED:
            raise InternalInconsistency("relaxation unbounded inside a bounded search box")
        if incumbent is not None and relax.objective_value >= incumbent.objective_value:
            continue
        var = _most_fractional(program, relax.assignment)
        if var is None:
            incumbent = relax
            continue
        value = relax.assignment[var]
        lo, hi = node_bounds[var]
        down = dict(node_bounds)
        down[var] = (lo, floor(value))
        up = dict(node_bounds)
        up[var] = (ceil(value), hi)
        for child in (down, up):
            heapq.heappush(heap, (relax.objective_value, neg_depth - 1, next(counter), child))
    if incumbent is None:
        return SolveOutcome(Status.INFEASIBLE, nodes=nodes)
    incumbent.status = Status.OPTIMAL
    incumbent.nodes = nodes
    return incumbent


def _solve_boxed(program: MixedProgram, limit: int) -> SolveOutcome:
    bounds: Bounds = program.integral_bounds()
    if any(lo is not None and hi is not None and lo > hi for lo, hi in bounds.values()):
        return SolveOutcome(Status.INFEASIBLE)
    root = lp_solve(program.with_bounds(bounds))
    if root.status is Status.INFEASIBLE:
        return root
    if root.status is Status.UNBOUNDED or any(
        lo is None or hi is None for lo, hi in bounds.values()
    ):
        box = solution_box(program)
        logger.debug(f"boxing integer variables of {program.name} to {box}")
        bounds = {
            name: (-box if lo is None else lo, box if hi is None else hi)
            for name, (lo, hi) in bounds.items()
        }
    if root.status is Status.UNBOUNDED:
        feasibility = MixedProgram(
            program.name, program.variables, program.constraints, {}, program._positions
        )
        found = _branch_and_bound(feasibility, bounds, limit)
        if found.is_feasible:
            return SolveOutcome(Status.UNBOUNDED, found.assignment, None, found.nodes)
        return found
    return _branch_and_bound(program, bounds, limit)


def mip_solve(program: MixedProgram, node_limit: int | None = None) -> SolveOutcome:
    """Exact mixed-integer optimum (minimisation) by branch-and-bound."""
    limit = config.MIP_NODE_LIMIT if node_limit is None else node_limit
    if models_logger.isEnabledFor(logging.DEBUG):
        models_logger.debug(program.dump())
    if not program.integer_vars:
        return lp_solve(program)

    if len(program.integer_vars) == len(program.variables):
        presolved = _presolve(program)
        if presolved is None:
            return SolveOutcome(Status.INFEASIBLE)
        reduced, substitution = presolved
        outcome = _solve_boxed(reduced, limit)
        if outcome.assignment:
            if substitution is not None:
                z = [int(outcome.assignment[f"z{k}"]) for k in range(len(substitution.kernel))]
                outcome.assignment = substitution.expand(z)
            if outcome.status is not Status.UNBOUNDED:
                outcome.objective_value = program.objective_value(outcome.assignment)
        elif substitution is not None and not substitution.kernel and outcome.is_feasible:
            outcome.assignment = substitution.expand([])
            outcome.objective_value = program.objective_value(outcome.assignment)
    else:
        outcome = _solve_boxed(program, limit)

    if outcome.assignment:
        problems = program.check(outcome.assignment)
        if problems:
            raise InternalInconsistency(f"{program.name}: solution violates {problems[:3]}")
    logger.debug(f"{program.name}: {outcome.status.value} after {outcome.nodes} nodes")
    return outcome
