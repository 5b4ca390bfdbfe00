"""Mixed integer program container and solve outcome."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from math import ceil, floor
from typing import Mapping

from blockip.errors import ContractViolation

Number = int | Fraction


class Sense(str, Enum):
    EQ = "="
    LE = "<="
    GE = ">="


class Status(str, Enum):
    OPTIMAL = "OPTIMAL"
    FEASIBLE = "FEASIBLE"
    INFEASIBLE = "INFEASIBLE"
    UNBOUNDED = "UNBOUNDED"
    RESOURCE_LIMIT = "RESOURCE_LIMIT"


@dataclass(frozen=True)
class Variable:
    name: str
    lower: Number | None = 0
    upper: Number | None = None
    integer: bool = True


@dataclass(frozen=True)
class Constraint:
    coefficients: tuple[tuple[str, int], ...]
    sense: Sense
    rhs: Number
    name: str = ""

    def activity(self, assignment: Mapping[str, Number]) -> Fraction:
        return sum((Fraction(a) * assignment[v] for v, a in self.coefficients), Fraction(0))

    def holds(self, assignment: Mapping[str, Number]) -> bool:
        lhs = self.activity(assignment)
        if self.sense is Sense.EQ:
            return lhs == self.rhs
        if self.sense is Sense.LE:
            return lhs <= self.rhs
        return lhs >= self.rhs


@dataclass
class MixedProgram:
    """min c·x subject to linear rows, bounds and integrality on a subset of variables."""

    name: str = ""
    variables: list[Variable] = field(default_factory=list)
    constraints: list[Constraint] = field(default_factory=list)
    objective: dict[str, int] = field(default_factory=dict)
    _positions: dict[str, int] = field(default_factory=dict, repr=False)

    def add_variable(
        self,
        name: str,
        lower: Number | None = 0,
        upper: Number | None = None,
        integer: bool = True,
    ) -> str:
        if name in self._positions:
            raise ContractViolation(f"variable {name!r} declared twice")
        if lower is not None and upper is not None and lower > upper:
            raise ContractViolation(f"variable {name!r} has lower bound above upper bound")
        self._positions[name] = len(self.variables)
        self.variables.append(Variable(name, lower, upper, integer))
        return name

    def add_constraint(
        self, coefficients: Mapping[str, int], sense: Sense, rhs: Number, name: str = ""
    ) -> None:
        for var in coefficients:
            if var not in self._positions:
                raise ContractViolation(f"constraint {name!r} uses unknown variable {var!r}")
        coeffs = tuple((v, int(a)) for v, a in coefficients.items() if a)
        self.constraints.append(Constraint(coeffs, Sense(sense), rhs, name))

    def set_objective(self, coefficients: Mapping[str, int]) -> None:
        for var in coefficients:
            if var not in self._positions:
                raise ContractViolation(f"objective uses unknown variable {var!r}")
        self.objective = {v: int(a) for v, a in coefficients.items() if a}

    @property
    def variable_names(self) -> list[str]:
        return [v.name for v in self.variables]

    @property
    def integer_vars(self) -> list[str]:
        return [v.name for v in self.variables if v.integer]

    def variable(self, name: str) -> Variable:
        return self.variables[self._positions[name]]

    def position(self, name: str) -> int:
        return self._positions[name]

    def with_bounds(
        self, bounds: Mapping[str, tuple[Number | None, Number | None]]
    ) -> MixedProgram:
        """Copy with some variable bounds replaced (constraints are shared, not copied)."""
        variables = [
            replace(v, lower=bounds[v.name][0], upper=bounds[v.name][1]) if v.name in bounds else v
            for v in self.variables
        ]
        return MixedProgram(
            self.name, variables, self.constraints, self.objective, dict(self._positions)
        )

    def relaxed(self) -> MixedProgram:
        """Copy with every variable continuous."""
        variables = [replace(v, integer=False) for v in self.variables]
        return MixedProgram(
            self.name, variables, self.constraints, self.objective, dict(self._positions)
        )

    def integral_bounds(self) -> dict[str, tuple[int | None, int | None]]:
        """Bounds of the integer variables rounded inward."""
        out = {}
        for v in self.variables:
            if v.integer:
                lo = None if v.lower is None else ceil(v.lower)
                hi = None if v.upper is None else floor(v.upper)
                out[v.name] = (lo, hi)
        return out

    def objective_value(self, assignment: Mapping[str, Number]) -> Fraction:
        return sum((Fraction(a) * assignment[v] for v, a in self.objective.items()), Fraction(0))

    def check(self, assignment: Mapping[str, Number]) -> list[str]:
        """Exact violations of bounds, integrality and rows (empty list when feasible)."""
        problems = []
        for v in self.variables:
            value = assignment.get(v.name)
            if value is None:
                problems.append(f"{v.name}: missing")
                continue
            if v.lower is not None and value < v.lower:
                problems.append(f"{v.name}: {value} below {v.lower}")
            if v.upper is not None and value > v.upper:
                problems.append(f"{v.name}: {value} above {v.upper}")
            if v.integer and Fraction(value).denominator != 1:
                problems.append(f"{v.name}: {value} not integral")
        if problems:
            return problems
        for i, row in enumerate(self.constraints):
            if not row.holds(assignment):
                problems.append(f"row {row.name or i} violated")
        return problems

    def dump(self) -> str:
        """Line-oriented text form used for debug logging."""
        lines = [f"MIXED {self.name}".rstrip()]
        for v in self.variables:
            lo = "-inf" if v.lower is None else str(v.lower)
            hi = "inf" if v.upper is None else str(v.upper)
            lines.append(f"VAR {v.name} {lo} {hi} {'int' if v.integer else 'cont'}")
        for row in self.constraints:
            terms = " ".join(f"{a}*{v}" for v, a in row.coefficients) or "0"
            lines.append(f"ROW {row.name} {terms} {row.sense.value} {row.rhs}".replace("  ", " "))
        terms = " ".join(f"{a}*{v}" for v, a in self.objective.items()) or "0"
        lines.append(f"MIN {terms}")
        lines.append("END")
        return "\n".join(lines)


@dataclass
class SolveOutcome:
    status: Status
    assignment: dict[str, Fraction] = field(default_factory=dict)
    objective_value: Fraction | None = None
    nodes: int = 0

    @property
    def is_feasible(self) -> bool:
        return self.status in (Status.OPTIMAL, Status.FEASIBLE)

    def value(self, name: str) -> Fraction:
        return self.assignment[name]

    def int_value(self, name: str) -> int:
        value = self.assignment[name]
        if value.denominator != 1:
            raise ContractViolation(f"{name} = {value} is not integral")
        return int(value)
