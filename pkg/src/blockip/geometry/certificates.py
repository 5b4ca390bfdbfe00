"""Polyhedral certificates for integer-cone membership on one residue class.

For a generator set 𝓓 and residue r modulo B, the integer cone intCone(𝓓) restricted to
Λ = {v : v ≡ r mod B} coincides with a polyhedron 𝓠_r: the facet inequalities of cone(𝓓)
plus one carve-out per facet pattern G that no point of Λ ∩ intCone(𝓓) can make tight.
Which patterns can be made tight is decided by one small ILP per G.
"""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Sequence

from blockip import config
from blockip.cache import CERTIFICATE_CACHE
from blockip.errors import ContractViolation, ResourceLimitError
from blockip.geometry.cones import ConeConstants, DualRepresentation, cone_constants, weyl_dual
from blockip.mip.branch_bound import mip_solve
from blockip.mip.model import MixedProgram, Sense, Status
from blockip.numerics.vectors import IntMat, Vector, dot

logger = logging.getLogger(__name__)

Pattern = tuple[int, ...]  # sorted facet indices
Inequality = tuple[Vector, int]  # ⟨q, v⟩ >= a


@dataclass(frozen=True)
class PolyhedralCertificate:
    generators: IntMat
    modulus: int
    residue: Vector
    facets: tuple[Vector, ...]
    facet_residues: tuple[int, ...]
    family: tuple[Pattern, ...]
    closure: tuple[Pattern, ...]
    inequalities: tuple[Inequality, ...]


def facet_residue(f: Sequence[int], r: Sequence[int], modulus: int) -> int:
    """p_f in {0..B-1} with p_f ≡ ⟨f, r⟩ (mod B)."""
    return dot(f, r) % modulus


def family_L_member(
    d: IntMat,
    dual: DualRepresentation,
    constants: ConeConstants,
    r: Sequence[int],
    g: Pattern,
) -> bool:
    """Is there v ≡ r (mod B) in intCone(𝓓) that is tight exactly on the facets in G?"""
    facets = dual.facets
    if any(not 0 <= i < len(facets) for i in g):
        raise ContractViolation(f"pattern {g} is not a subset of the {len(facets)} facets")
    B, t = constants.B, d.nrows
    program = MixedProgram(name=f"family-L{list(g)}")
    for i in range(t):
        program.add_variable(f"v{i}", lower=None)
        program.add_variable(f"w{i}", lower=None)
    for j in range(d.ncols):
        program.add_variable(f"lam{j}", lower=0)
    for i in range(t):
        program.add_constraint({f"v{i}": 1, f"w{i}": -B}, Sense.EQ, r[i], name=f"class{i}")
    for k, f in enumerate(facets):
        p = facet_residue(f, r, B)
        coeffs = {f"v{i}": a for i, a in enumerate(f)}
        if k in g:
            program.add_constraint(coeffs, Sense.EQ, p, name=f"tight{k}")
        else:
            program.add_constraint(coeffs, Sense.GE, p + 1, name=f"slack{k}")
    for i, row in enumerate(d.rows):
        coeffs = {f"lam{j}": a for j, a in enumerate(row)}
        coeffs[f"v{i}"] = -1
        program.add_constraint(coeffs, Sense.EQ, 0, name=f"cone{i}")
    outcome = mip_solve(program)
    if outcome.status is Status.RESOURCE_LIMIT:
        raise ResourceLimitError("mip node limit", outcome.nodes, program.name)
    return outcome.is_feasible


def _downward_closure(family: Sequence[Pattern]) -> set[Pattern]:
    closure: set[Pattern] = set()
    for g in family:
        for size in range(len(g) + 1):
            closure.update(itertools.combinations(g, size))
    return closure


def _build(
    d: IntMat,
    r: Vector,
    dual: DualRepresentation,
    constants: ConeConstants,
    workers: int,
) -> PolyhedralCertificate:
    facets = dual.facets
    B = constants.B
    p = tuple(facet_residue(f, r, B) for f in facets)
    indices = range(len(facets))
    patterns = [
        g for size in range(len(facets) + 1) for g in itertools.combinations(indices, size)
    ]
    members: list[Pattern] = []
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = {
            pool.submit(family_L_member, d, dual, constants, r, g): g for g in patterns
        }
        for future in as_completed(futures):
            if future.result():
                members.append(futures[future])
    family = tuple(sorted(members, key=lambda g: (len(g), g)))
    closure = _downward_closure(family)

    inequalities: list[Inequality] = [(f, 0) for f in facets]
    for g in patterns:
        if g in closure:
            continue
        q = tuple(sum(facets[k][i] for k in g) for i in range(d.nrows))
        inequalities.append((q, 1 + sum(p[k] for k in g)))
    logger.debug(
        f"certificate r={r}: {len(family)} tight patterns, "
        f"{len(inequalities) - len(facets)} carve-outs"
    )
    return PolyhedralCertificate(
        generators=d,
        modulus=B,
        residue=r,
        facets=facets,
        facet_residues=p,
        family=family,
        closure=tuple(sorted(closure, key=lambda g: (len(g), g))),
        inequalities=tuple(inequalities),
    )


def construct_Q(
    d: IntMat,
    r: Sequence[int],
    dual: DualRepresentation | None = None,
    constants: ConeConstants | None = None,
    workers: int | None = None,
) -> PolyhedralCertificate:
    """The certificate polyhedron 𝓠_r for residue r modulo B = cone_constants(𝓓).B."""
    r = tuple(int(a) for a in r)
    if len(r) != d.nrows:
        raise ContractViolation(f"residue of length {len(r)} for dimension {d.nrows}")
    workers = workers or config.DEFAULT_THREADS
    if dual is None:
        dual = weyl_dual(d)
    if constants is None:
        constants = cone_constants(d, dual, workers=workers)
    if any(not 0 <= a < constants.B for a in r):
        raise ContractViolation(f"residue {r} not reduced modulo {constants.B}")
    return CERTIFICATE_CACHE.get_or_compute(
        (d.key(), r), lambda: _build(d, r, dual, constants, workers)
    )


def certified_member(cert: PolyhedralCertificate, v: Sequence[int]) -> bool:
    """Evaluate the certificate on v, which must lie in the certificate's residue class."""
    if len(v) != len(cert.residue):
        raise ContractViolation("vector and certificate have different dimensions")
    if any((a - r) % cert.modulus for a, r in zip(v, cert.residue)):
        raise ContractViolation(
            f"{tuple(v)} is not congruent to {cert.residue} mod {cert.modulus}"
        )
    return all(dot(q, v) >= a for q, a in cert.inequalities)


def certificate_is_empty(cert: PolyhedralCertificate) -> bool:
    """True when the certificate contains the unsatisfiable carve-out 0 >= a > 0."""
    return any(not any(q) and a > 0 for q, a in cert.inequalities)
