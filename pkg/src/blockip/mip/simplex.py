"""Exact two-phase primal simplex on a dense Fraction tableau.

Bounds are folded into standard form (x = lo + x', x = hi - x', x = x⁺ - x⁻, explicit rows
for upper bounds), every row gets one artificial, and Bland's rule guarantees termination.
The returned point is always a basic solution, i.e. a vertex of the feasible region.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

from blockip.mip.model import MixedProgram, Sense, SolveOutcome, Status

logger = logging.getLogger(__name__)

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass
class _StandardForm:
    rows: list[list[Fraction]]
    rhs: list[Fraction]
    cost: list[Fraction]
    ncols: int
    terms: dict[str, list[tuple[int, int]]]
    offsets: dict[str, Fraction]


def _standard_form(program: MixedProgram) -> _StandardForm:
    col = 0
    terms: dict[str, list[tuple[int, int]]] = {}
    offsets: dict[str, Fraction] = {}
    bound_rows: list[tuple[int, Fraction]] = []
    for v in program.variables:
        if v.lower is not None:
            terms[v.name] = [(col, 1)]
            offsets[v.name] = Fraction(v.lower)
            if v.upper is not None:
                bound_rows.append((col, Fraction(v.upper) - Fraction(v.lower)))
            col += 1
        elif v.upper is not None:
            terms[v.name] = [(col, -1)]
            offsets[v.name] = Fraction(v.upper)
            col += 1
        else:
            terms[v.name] = [(col, 1), (col + 1, -1)]
            offsets[v.name] = ZERO
            col += 2
    n_struct = col

    raw: list[tuple[dict[int, Fraction], Sense, Fraction]] = []
    for con in program.constraints:
        coeffs: dict[int, Fraction] = {}
        rhs = Fraction(con.rhs)
        for name, a in con.coefficients:
            rhs -= a * offsets[name]
            for c, s in terms[name]:
                coeffs[c] = coeffs.get(c, ZERO) + a * s
        raw.append((coeffs, con.sense, rhs))
    for c, ub in bound_rows:
        raw.append(({c: ONE}, Sense.LE, ub))

    ncols = n_struct + sum(1 for _, sense, _ in raw if sense is not Sense.EQ)
    rows, rhs_out = [], []
    slack = n_struct
    for coeffs, sense, b in raw:
        row = [ZERO] * ncols
        for c, a in coeffs.items():
            row[c] = Fraction(a)
        if sense is Sense.LE:
            row[slack] = ONE
            slack += 1
        elif sense is Sense.GE:
            row[slack] = -ONE
            slack += 1
        if b < 0:
            row = [-a for a in row]
            b = -b
        rows.append(row)
        rhs_out.append(b)

    cost = [ZERO] * ncols
    for name, a in program.objective.items():
        for c, s in terms[name]:
            cost[c] += a * s
    return _StandardForm(rows, rhs_out, cost, ncols, terms, offsets)


def _pivot(tab: list[list[Fraction]], obj: list[Fraction], basis: list[int], r: int, c: int):
    prow = tab[r]
    p = prow[c]
    if p != 1:
        prow = [a / p for a in prow]
        tab[r] = prow
    nonzero = [j for j, a in enumerate(prow) if a]
    for i, row in enumerate(tab):
        if i != r:
            f = row[c]
            if f:
                for j in nonzero:
                    row[j] -= f * prow[j]
    f = obj[c]
    if f:
        for j in nonzero:
            obj[j] -= f * prow[j]
    basis[r] = c


def _run(tab, obj, basis, allowed: int) -> bool:
    """Minimise until optimal (True) or an unbounded ray is found (False)."""
    while True:
        enter = next((j for j in range(allowed) if obj[j] < 0), None)
        if enter is None:
            return True
        best: tuple[Fraction, int] | None = None
        for i, row in enumerate(tab):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                if (
                    best is None
                    or ratio < best[0]
                    or (ratio == best[0] and basis[i] < basis[best[1]])
                ):
                    best = (ratio, i)
        if best is None:
            return False
        _pivot(tab, obj, basis, best[1], enter)


def lp_solve(program: MixedProgram) -> SolveOutcome:
    """Solve the continuous relaxation exactly; integrality flags are ignored."""
    std = _standard_form(program)
    m, n = len(std.rows), std.ncols

    # Phase 1: minimise the sum of artificials.
    tab = [
        std.rows[i] + [ONE if k == i else ZERO for k in range(m)] + [std.rhs[i]]
        for i in range(m)
    ]
    basis = [n + i for i in range(m)]
    obj = [-sum((tab[i][j] for i in range(m)), ZERO) for j in range(n)]
    obj += [ZERO] * m + [-sum(std.rhs, ZERO)]
    _run(tab, obj, basis, n + m)
    if -obj[-1] > 0:
        return SolveOutcome(Status.INFEASIBLE)

    redundant = []
    for r in range(m):
        if basis[r] >= n:
            c = next((j for j in range(n) if tab[r][j] != 0), None)
            if c is None:
                redundant.append(r)
            else:
                _pivot(tab, obj, basis, r, c)
    if redundant:
        tab = [row for i, row in enumerate(tab) if i not in redundant]
        basis = [b for i, b in enumerate(basis) if i not in redundant]
    tab = [row[:n] + [row[-1]] for row in tab]

    # Phase 2: original costs.
    obj = list(std.cost) + [ZERO]
    for i, b in enumerate(basis):
        cb = std.cost[b]
        if cb:
            row = tab[i]
            for j in range(n + 1):
                if row[j]:
                    obj[j] -= cb * row[j]
    if not _run(tab, obj, basis, n):
        return SolveOutcome(Status.UNBOUNDED)

    x = [ZERO] * n
    for i, b in enumerate(basis):
        x[b] = tab[i][-1]
    assignment = {
        name: std.offsets[name] + sum((s * x[c] for c, s in cols), ZERO)
        for name, cols in std.terms.items()
    }
    return SolveOutcome(Status.OPTIMAL, assignment, program.objective_value(assignment))
