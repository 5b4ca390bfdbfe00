"""Graver bases by completion, minimal solutions, base solutions and Graver decompositions.

The completion starts from a lattice basis of ker(D) and its negation, forms sums of pairs
that disagree in sign somewhere, reduces each sum by conformal subtraction and keeps every
non-zero remainder. Candidates are processed from a heap in increasing ℓ1 order. The
⊑-minimal elements of the completed set are the Graver basis.
"""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass
from typing import Sequence

from blockip import config
from blockip.cache import GRAVER_CACHE, MINIMAL_SOLUTIONS_CACHE
from blockip.errors import ContractViolation, InternalInconsistency, ResourceLimitError
from blockip.numerics.lattice import integer_kernel_basis
from blockip.numerics.vectors import IntMat, IntVec, Vector, conformal_leq, mat_apply, norms

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GraverBasis:
    matrix: IntMat
    elements: tuple[Vector, ...]

    def __len__(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class GraverDecomposition:
    base: IntVec
    parts: tuple[tuple[Vector, int], ...]  # (nonnegative Graver element, multiplicity)

    def total(self) -> IntVec:
        entries = list(self.base.entries)
        for g, k in self.parts:
            entries = [a + k * b for a, b in zip(entries, g)]
        return IntVec(tuple(entries), self.base.index)


def graver_norm_bound(d: IntMat) -> int:
    """(2tΔ+1)^t: every Graver element of D has ℓ1 norm at most this."""
    t = d.nrows
    return (2 * t * d.norm_inf() + 1) ** t


def base_norm_bound(d: IntMat, b: Sequence[int]) -> int:
    """(2t(Δ+‖b‖∞)+1)^t: the ℓ∞ bound on base solutions."""
    t = d.nrows
    return (2 * t * (d.norm_inf() + norms(b)[0]) + 1) ** t


def _conflicting(u: Vector, v: Vector) -> bool:
    return any(a * b < 0 for a, b in zip(u, v))


def _reduce(s: Vector, basis: list[Vector]) -> Vector:
    """Normal form of s: subtract elements g ⊑ s until none applies."""
    changed = True
    while changed and any(s):
        changed = False
        for g in basis:
            if conformal_leq(g, s):
                s = tuple(a - b for a, b in zip(s, g))
                changed = True
                if not any(s):
                    break
    return s


def _minimal(elements: list[Vector]) -> list[Vector]:
    ordered = sorted(set(elements), key=lambda g: (norms(g)[1], g))
    kept: list[Vector] = []
    for g in ordered:
        if not any(conformal_leq(h, g) for h in kept):
            kept.append(g)
    return kept


def _complete(d: IntMat, budget: int) -> list[Vector]:
    lattice = integer_kernel_basis(d)
    if not lattice:
        return []
    basis: list[Vector] = []
    heap: list[tuple[int, Vector]] = []
    seen: set[Vector] = set()

    def push(v: Vector) -> None:
        if any(v) and v not in seen:
            seen.add(v)
            heapq.heappush(heap, (norms(v)[1], v))

    for u in lattice:
        push(tuple(u))
        push(tuple(-a for a in u))
    processed = 0
    while heap:
        _, s = heapq.heappop(heap)
        processed += 1
        if processed > budget:
            raise ResourceLimitError("graver budget", budget, f"completion of {d.shape} matrix")
        r = _reduce(s, basis)
        if not any(r):
            continue
        for g in basis:
            if _conflicting(r, g):
                push(tuple(a + b for a, b in zip(r, g)))
        basis.append(r)
    return _minimal(basis)


def graver_basis(d: IntMat, budget: int | None = None) -> GraverBasis:
    """The Graver basis of D (symmetric, ⊑-minimal kernel elements), sorted lexicographically."""
    budget = config.GRAVER_BUDGET if budget is None else budget
    bound = graver_norm_bound(d)
    if bound > budget:
        raise ResourceLimitError("graver budget", budget, f"norm bound {bound}")

    def compute() -> GraverBasis:
        elements = sorted(_complete(d, budget))
        for g in elements:
            if any(mat_apply(d, g)) or norms(g)[1] > bound:
                raise InternalInconsistency(f"Graver element {g} fails its kernel/norm check")
        logger.info(f"graver basis of {d.nrows}x{d.ncols} matrix: {len(elements)} elements")
        return GraverBasis(d, tuple(elements))

    return GRAVER_CACHE.get_or_compute((d.key(),), compute)


def nonnegative_graver(d: IntMat, budget: int | None = None) -> tuple[Vector, ...]:
    """Graver elements with all entries >= 0."""
    return tuple(g for g in graver_basis(d, budget).elements if all(a >= 0 for a in g))


def _extended(d: IntMat, b: Sequence[int]) -> IntMat:
    return IntMat.of([row + (-bi,) for row, bi in zip(d.rows, b)], ncols=d.ncols + 1)


def minimal_solutions(
    d: IntMat, b: Sequence[int], budget: int | None = None
) -> tuple[Vector, ...]:
    """All ⊑-minimal v >= 0 with Dv = b; the zero right-hand side gives {0}."""
    b = tuple(int(a) for a in b)
    if len(b) != d.nrows:
        raise ContractViolation(f"right-hand side of length {len(b)} for {d.nrows} rows")
    if not any(b):
        return ((0,) * d.ncols,)

    def compute() -> tuple[Vector, ...]:
        extended = graver_basis(_extended(d, b), budget)
        found = [
            g[:-1] for g in extended.elements if g[-1] == 1 and all(a >= 0 for a in g[:-1])
        ]
        return tuple(sorted(found))

    return MINIMAL_SOLUTIONS_CACHE.get_or_compute((d.key(), b), compute)


def graver_decompose(
    d: IntMat, b: Sequence[int], w: Sequence[int], budget: int | None = None
) -> GraverDecomposition:
    """Split w into a base solution ŵ plus nonnegative Graver elements of D."""
    w = tuple(int(a) for a in w)
    b = tuple(int(a) for a in b)
    if any(a < 0 for a in w) or tuple(mat_apply(d, w)) != b:
        raise ContractViolation(f"{w} is not a nonnegative solution of Dw = {b}")
    target = w + (1,)
    elements = graver_basis(_extended(d, b), budget).elements
    base = next(
        (g for g in elements if g[-1] == 1 and conformal_leq(g, target)), None
    )
    if base is None:
        raise InternalInconsistency(f"no base element below {target}")
    rest = tuple(a - c for a, c in zip(w, base[:-1]))

    parts: list[tuple[Vector, int]] = []
    candidates = [g[:-1] for g in elements if g[-1] == 0 and all(a >= 0 for a in g)]
    for g in sorted(candidates, key=lambda g: (-norms(g)[1], g)):
        if not any(rest):
            break
        k = min((a // c for a, c in zip(rest, g) if c), default=0)
        if k > 0:
            parts.append((g, k))
            rest = tuple(a - k * c for a, c in zip(rest, g))
    if any(rest):
        raise InternalInconsistency(f"decomposition of {w} left remainder {rest}")
    decomposition = GraverDecomposition(IntVec(base[:-1], d.column_index), tuple(parts))
    if norms(decomposition.base)[0] > base_norm_bound(d, b):
        raise InternalInconsistency("base solution exceeds the base norm bound")
    return decomposition


def _value_range(
    rows: list[tuple[int, ...]],
    residual: list[int],
    k: int,
    bound: int,
) -> tuple[int, int]:
    """Interval for x_k implied by every row, with later variables ranging over [0, bound]."""
    lo, hi = 0, bound
    for row, rhs in zip(rows, residual):
        a = row[k]
        rest_lo = sum(min(0, c * bound) for c in row[k + 1 :])
        rest_hi = sum(max(0, c * bound) for c in row[k + 1 :])
        # a·x_k ∈ [rhs - rest_hi, rhs - rest_lo]
        low, high = rhs - rest_hi, rhs - rest_lo
        if a == 0:
            if low > 0 or high < 0:
                return 1, 0
            continue
        if a < 0:
            low, high, a = -high, -low, -a
        lo = max(lo, -(-low // a))
        hi = min(hi, high // a)
    return lo, hi


def base_solutions(
    d: IntMat, b: Sequence[int], bound: int | None = None, budget: int | None = None
) -> tuple[Vector, ...]:
    """All v >= 0 with Dv = b and ‖v‖∞ <= bound, by depth-first search with propagation."""
    b = tuple(int(a) for a in b)
    if bound is None:
        bound = base_norm_bound(d, b)
    budget = config.GRAVER_BUDGET if budget is None else budget
    rows = list(d.rows)
    n = d.ncols
    found: list[Vector] = []
    nodes = 0

    def search(k: int, prefix: list[int], residual: list[int]) -> None:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise ResourceLimitError("enumeration budget", budget, "base solutions")
        if k == n:
            if not any(residual):
                found.append(tuple(prefix))
            return
        lo, hi = _value_range(rows, residual, k, bound)
        for x in range(lo, hi + 1):
            search(k + 1, prefix + [x], [r - row[k] * x for r, row in zip(residual, rows)])

    search(0, [], list(b))
    return tuple(sorted(found))
