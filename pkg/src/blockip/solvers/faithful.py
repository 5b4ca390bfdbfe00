"""Faithful decompositions of brick right-hand sides.

A decomposition of b into parts (with multiplicities) is faithful for D when every
nonnegative solution of Dv = b splits into nonnegative solutions of the parts. It is enough
to check the ⊑-minimal solutions: any other solution adds a nonnegative kernel element,
which can be given to one part.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Mapping, Sequence

from blockip import config
from blockip.errors import ContractViolation, ResourceLimitError
from blockip.graver.engine import minimal_solutions, nonnegative_graver
from blockip.mip.branch_bound import mip_solve
from blockip.mip.model import MixedProgram, Sense, Status
from blockip.numerics.vectors import IntMat, Vector, conformal_leq, norms

logger = logging.getLogger(__name__)

Parts = dict[Vector, int]


@dataclass(frozen=True)
class FaithfulDecomposition:
    target: Vector
    parts: tuple[tuple[Vector, int], ...]  # sorted (part, multiplicity)
    xi: int

    def as_dict(self) -> Parts:
        return dict(self.parts)


def _check_parts(b: Vector, parts: Mapping[Vector, int]) -> None:
    total = [0] * len(b)
    for part, k in parts.items():
        if k < 1 or not any(part) or not conformal_leq(part, b):
            raise ContractViolation(f"part {part} x{k} is not a non-zero conformal part of {b}")
        total = [s + k * p for s, p in zip(total, part)]
    if tuple(total) != b:
        raise ContractViolation(f"parts sum to {tuple(total)}, not {b}")


def _splits(
    v: Vector, parts: Mapping[Vector, int], options: dict, graver: Sequence[Vector]
) -> bool:
    """Does v = ∑_parts ∑ γ·ŵ + ∑ δ·g with ∑ γ = multiplicity for every part?"""
    program = MixedProgram(name="faithful-split")
    columns: list[tuple[str, Vector]] = []
    for p_index, (part, k) in enumerate(parts.items()):
        names = []
        for s_index, sol in enumerate(options[part]):
            name = program.add_variable(f"g{p_index}_{s_index}", lower=0, upper=k)
            names.append(name)
            columns.append((name, sol))
        program.add_constraint({n: 1 for n in names}, Sense.EQ, k, name=f"copies{p_index}")
    for g_index, g in enumerate(graver):
        columns.append((program.add_variable(f"d{g_index}", lower=0), g))
    for i, value in enumerate(v):
        coeffs = {name: vec[i] for name, vec in columns if vec[i]}
        program.add_constraint(coeffs, Sense.EQ, value, name=f"y{i}")
    outcome = mip_solve(program)
    if outcome.status is Status.RESOURCE_LIMIT:
        raise ResourceLimitError("mip node limit", outcome.nodes, "faithful split")
    return outcome.is_feasible


def faithful_check(d: IntMat, b: Sequence[int], parts: Mapping[Vector, int]) -> bool:
    """True iff every minimal solution of Dv = b splits along the parts."""
    b = tuple(int(a) for a in b)
    parts = {tuple(p): k for p, k in parts.items()}
    _check_parts(b, parts)
    targets = minimal_solutions(d, b)
    if not targets:
        return True
    options = {part: minimal_solutions(d, part) for part in parts}
    if any(not sols for sols in options.values()):
        return False
    graver = nonnegative_graver(d)
    return all(_splits(v, parts, options, graver) for v in targets)


def _powers_of_two(limit: int) -> list[int]:
    out, k = [], 1
    while k <= limit:
        out.append(k)
        k *= 2
    return out


def _candidates(b: Vector, xi: int) -> list[tuple[Vector, int]]:
    ranges = [
        range(0, min(a, xi) + 1) if a >= 0 else range(max(a, -xi), 1) for a in b
    ]
    found = []
    for b0 in itertools.product(*ranges):
        if not any(b0):
            continue
        most = min(a // c for a, c in zip(b, b0) if c)
        for alpha in _powers_of_two(most):
            found.append((b0, alpha))
    found.sort(key=lambda item: (-item[1] * norms(item[0])[1], item[1], item[0]))
    return found


def faithful_step(d: IntMat, b: Sequence[int], xi: int) -> tuple[Vector, int, Vector] | None:
    """Split b into α′ copies of b₀ (‖b₀‖∞ <= Ξ) plus a remainder, verified by faithful_check.

    Returns None when no candidate verifies.
    """
    b = tuple(int(a) for a in b)
    if norms(b)[0] <= xi:
        raise ContractViolation(f"‖{b}‖∞ <= Ξ = {xi}; nothing to split")
    for b0, alpha in _candidates(b, xi):
        rest = tuple(a - alpha * c for a, c in zip(b, b0))
        parts: Parts = {b0: alpha}
        if any(rest):
            parts[rest] = parts.get(rest, 0) + 1
        if faithful_check(d, b, parts):
            logger.debug(f"faithful step: {b} = {alpha} x {b0} + {rest}")
            return b0, alpha, rest
    return None


def _decompose(d: IntMat, b: Vector, xi: int) -> Parts | None:
    parts: Parts = {b: 1}
    while True:
        big = next((p for p in sorted(parts) if norms(p)[0] > xi), None)
        if big is None:
            return parts
        step = faithful_step(d, big, xi)
        if step is None:
            return None
        b0, alpha, rest = step
        k = parts.pop(big)
        parts[b0] = parts.get(b0, 0) + k * alpha
        if any(rest):
            parts[rest] = parts.get(rest, 0) + k


def faithful_decompose(
    d: IntMat, b: Sequence[int], xi: int | None = None
) -> FaithfulDecomposition:
    """Faithful decomposition with parts of ℓ∞ norm at most Ξ, doubling Ξ until one exists."""
    b = tuple(int(a) for a in b)
    if not any(b):
        raise ContractViolation("cannot decompose the zero right-hand side")
    xi = config.DEFAULT_XI if xi is None else xi
    while True:
        parts = _decompose(d, b, xi)
        if parts is not None:
            return FaithfulDecomposition(b, tuple(sorted(parts.items())), xi)
        logger.warning(f"no faithful decomposition of {b} with Ξ={xi}; doubling")
        xi *= 2
