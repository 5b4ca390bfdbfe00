"""Polyhedral cones: facet descriptions, cone membership and the residue modulus B.

A cone is given by its generator set 𝓓 (the columns of an IntMat). ``weyl_dual`` turns it into
a finite list of primitive integer functionals 𝓕 with cone(𝓓) = {v : ⟨f, v⟩ ≥ 0 ∀ f ∈ 𝓕}.
``cone_constants`` then derives the deep threshold M and the modulus B that the polyhedral
certificates are built on.
"""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

import sympy

from blockip import config
from blockip.errors import ContractViolation, ResourceLimitError
from blockip.mip.model import MixedProgram, Sense, Status
from blockip.mip.simplex import lp_solve
from blockip.numerics.lattice import fractionality_constant, to_sympy
from blockip.numerics.vectors import IntMat, Vector, dot, norms, primitive

logger = logging.getLogger(__name__)

Facet = Vector


@dataclass(frozen=True)
class DualRepresentation:
    generators: IntMat
    facets: tuple[Facet, ...]

    def contains(self, v: Sequence) -> bool:
        """All facet products are nonnegative."""
        return all(dot(f, v) >= 0 for f in self.facets)


@dataclass(frozen=True)
class ConeConstants:
    L: int
    M: int
    Mhat: int
    K: int
    B: int
    Bseq: tuple[int, ...]


def _integral(vec) -> Vector:
    """Primitive integer multiple of a sympy rational vector."""
    entries = [sympy.Rational(e) for e in vec]
    scale = 1
    for e in entries:
        scale = lcm(scale, int(e.q))
    return primitive([int(e * scale) for e in entries])


def _orient(f: Vector, generators: Sequence[Vector]) -> Facet | None:
    products = [dot(f, d) for d in generators]
    if all(p >= 0 for p in products):
        return f
    if all(p <= 0 for p in products):
        return tuple(-a for a in f)
    return None


def weyl_dual(d: IntMat) -> DualRepresentation:
    """Facet functionals of cone(𝓓), primitive, deduplicated and sorted."""
    t = d.nrows
    gens = sorted({c for c in d.columns if any(c)})
    facets: set[Facet] = set()

    if not gens:
        for i in range(t):
            unit = tuple(1 if j == i else 0 for j in range(t))
            facets.add(unit)
            facets.add(tuple(-a for a in unit))
        return DualRepresentation(d, tuple(sorted(facets)))

    span = sympy.Matrix([list(g) for g in gens]).T
    for h in span.T.nullspace():
        h = _integral(h)
        facets.add(h)
        facets.add(tuple(-a for a in h))

    _, pivots = span.rref()
    basis = span.extract(list(range(t)), list(pivots))
    k = len(pivots)
    for subset in itertools.combinations(gens, k - 1):
        if k == 1:
            alpha = sympy.Matrix([1])
        else:
            s = sympy.Matrix([list(g) for g in subset])
            if s.rank() != k - 1:
                continue
            kernel = (s * basis).nullspace()
            if len(kernel) != 1:
                continue
            alpha = kernel[0]
        normal = _integral(basis * alpha)
        oriented = _orient(normal, gens)
        if oriented is not None:
            facets.add(oriented)
    logger.debug(f"weyl_dual: {len(gens)} generators in dimension {t}, {len(facets)} facets")
    return DualRepresentation(d, tuple(sorted(facets)))


def orthogonal_subset(d: IntMat, dual: DualRepresentation, g: Sequence[Facet]) -> IntMat:
    """The generators of 𝓓 orthogonal to every functional of G."""
    known = set(dual.facets)
    for f in g:
        if tuple(f) not in known:
            raise ContractViolation(f"{tuple(f)} is not a facet of the dual representation")
    keep = [j for j, col in enumerate(d.columns) if all(dot(f, col) == 0 for f in g)]
    return d.select_columns(keep)


def deep_threshold(d: IntMat, dual: DualRepresentation) -> tuple[int, int]:
    """(L, M) of the deep-in-the-cone argument; M is 0 for an empty 𝓓 or 𝓕."""
    n, delta = d.ncols, d.norm_inf()
    L = (2 + (n + 1) * delta) ** (2 * d.nrows)
    if not dual.facets or n == 0:
        return L, 0
    max_f = max(norms(f)[1] for f in dual.facets)
    return L, L * n * max_f * delta


def cone_constants(
    d: IntMat,
    dual: DualRepresentation,
    facet_cap: int | None = None,
    workers: int | None = None,
) -> ConeConstants:
    """K (lcm of fractionality constants over all 𝓓_G), M̂ and the chain B_0..B_|𝓕|."""
    cap = config.FACET_CAP if facet_cap is None else facet_cap
    workers = workers or config.DEFAULT_THREADS
    facets = dual.facets
    if len(facets) > cap:
        raise ResourceLimitError("facet cap", len(facets), f"{len(facets)} facets > {cap}")

    subsets: dict[tuple, IntMat] = {}
    for size in range(len(facets) + 1):
        for g in itertools.combinations(facets, size):
            sub = orthogonal_subset(d, dual, g)
            subsets.setdefault(sub.key(), sub)

    K = 1
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fractionality_constant, sub) for sub in subsets.values()]
        for future in as_completed(futures):
            K = lcm(K, future.result())

    L, M = deep_threshold(d, dual)
    max_f = max((norms(f)[1] for f in facets), default=0)
    Mhat = max(1, M + d.ncols * max_f * d.norm_inf())
    chain = [K]
    for _ in facets:
        chain.append(Mhat * chain[-1])
    B = 2 * chain[-1]
    logger.info(f"cone constants: |F|={len(facets)} K={K} Mhat={Mhat} B={B}")
    return ConeConstants(L=L, M=M, Mhat=Mhat, K=K, B=B, Bseq=tuple(chain))


def cone_member(d: IntMat, v: Sequence) -> bool:
    """Exact LP test of v ∈ cone(𝓓)."""
    if len(v) != d.nrows:
        raise ContractViolation(f"vector of length {len(v)} for dimension {d.nrows}")
    if d.ncols == 0:
        return not any(v)
    program = MixedProgram(name="cone-member")
    for j in range(d.ncols):
        program.add_variable(f"l{j}", lower=0, integer=False)
    for i, row in enumerate(d.rows):
        program.add_constraint(
            {f"l{j}": a for j, a in enumerate(row)}, Sense.EQ, Fraction(v[i]), name=f"t{i}"
        )
    return lp_solve(program).status is Status.OPTIMAL
