"""Exact linear algebra over Z and Q: span and lattice membership, fractionality constants.

Rational rank, row echelon forms and solves go through sympy; integer work (lattice
membership with witnesses, integer kernels) uses a unimodular column reduction that keeps
track of its transformation matrix.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import sympy

from blockip.cache import FRACTIONALITY_CACHE
from blockip.errors import ContractViolation, InternalInconsistency
from blockip.numerics.vectors import IntMat, IntVec, Vector, int_det, norms, xgcd

logger = logging.getLogger(__name__)


def to_sympy(m: IntMat) -> sympy.Matrix:
    return sympy.Matrix(m.nrows, m.ncols, [e for row in m.rows for e in row])


def _as_fraction(value) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


@dataclass(frozen=True)
class EchelonForm:
    """M·U = H with U unimodular and H lower trapezoidal (column echelon form)."""

    columns: tuple[Vector, ...]  # columns of H
    transform: tuple[Vector, ...]  # columns of U
    pivots: tuple[tuple[int, int], ...]  # (row, column) of every pivot

    @property
    def rank(self) -> int:
        return len(self.pivots)


def _combine(vectors: list[list[int]], k: int, j: int, x: int, y: int, p: int, q: int) -> None:
    vk, vj = vectors[k], vectors[j]
    vectors[k] = [x * a + y * b for a, b in zip(vk, vj)]
    vectors[j] = [p * a + q * b for a, b in zip(vk, vj)]


def column_echelon(m: IntMat) -> EchelonForm:
    """Unimodular column reduction by repeated extended-gcd combination of columns."""
    t, n = m.shape
    cols = [list(c) for c in m.columns]
    unimodular = [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    pivots: list[tuple[int, int]] = []
    k = 0
    for i in range(t):
        if k == n:
            break
        for j in range(k + 1, n):
            b = cols[j][i]
            if b == 0:
                continue
            a = cols[k][i]
            x, y, g = xgcd(a, b)
            _combine(cols, k, j, x, y, -(b // g), a // g)
            _combine(unimodular, k, j, x, y, -(b // g), a // g)
        if cols[k][i] != 0:
            if cols[k][i] < 0:
                cols[k] = [-a for a in cols[k]]
                unimodular[k] = [-a for a in unimodular[k]]
            pivots.append((i, k))
            k += 1
    return EchelonForm(
        tuple(tuple(c) for c in cols), tuple(tuple(u) for u in unimodular), tuple(pivots)
    )


def solve_integral(form: EchelonForm, v: Sequence[int]) -> list[int] | None:
    """Integer y with H·y = v, or None when v is not in the column lattice of H."""
    n = len(form.columns)
    y = [0] * n
    resid = list(v)
    pivot_col = dict(form.pivots)
    for i in range(len(resid)):
        col = pivot_col.get(i)
        if col is None:
            if resid[i] != 0:
                return None
            continue
        h = form.columns[col][i]
        if resid[i] % h:
            return None
        q = resid[i] // h
        y[col] = q
        if q:
            resid = [r - q * c for r, c in zip(resid, form.columns[col])]
    return y


def integer_kernel_basis(m: IntMat) -> list[Vector]:
    """A lattice basis of ker(M) ∩ Z^n."""
    form = column_echelon(m)
    return [form.transform[k] for k in range(form.rank, m.ncols)]


def span_member(d: IntMat, v: Sequence[int]) -> bool:
    """True iff v is a rational combination of the columns of D."""
    if len(v) != d.nrows:
        raise ContractViolation(f"vector of length {len(v)} for dimension {d.nrows}")
    if d.ncols == 0:
        return not any(v)
    base = to_sympy(d)
    extended = base.row_join(sympy.Matrix(d.nrows, 1, list(v)))
    return base.rank() == extended.rank()


def rational_coefficients(d: IntMat, v: Sequence[int]) -> tuple[Fraction, ...] | None:
    """Basic rational solution of Dλ = v (free coordinates set to zero), or None."""
    if d.ncols == 0:
        return () if not any(v) else None
    try:
        sol, params = to_sympy(d).gauss_jordan_solve(sympy.Matrix(d.nrows, 1, list(v)))
    except ValueError:
        return None
    sol = sol.subs({p: 0 for p in params})
    return tuple(_as_fraction(e) for e in sol)


@dataclass(frozen=True)
class LatticeWitness:
    """Integer coefficients λ with ∑ λ_d·d equal to the witnessed vector."""

    coefficients: tuple[int, ...]
    generators: IntMat

    def vector(self) -> IntVec:
        cols = self.generators.columns
        entries = [
            sum(lam * col[i] for lam, col in zip(self.coefficients, cols))
            for i in range(self.generators.nrows)
        ]
        return IntVec(tuple(entries), self.generators.row_index)

    @property
    def l1(self) -> int:
        return sum(abs(c) for c in self.coefficients)


def witness_bound(d: IntMat, v: Sequence[int]) -> int:
    """(2 + max_d ‖d‖∞ + ‖v‖∞)^(2t): the ℓ1 bound a lattice witness must respect."""
    return (2 + d.norm_inf() + norms(v)[0]) ** (2 * d.nrows)


def _minimal_witness(d: IntMat, v: Sequence[int]) -> tuple[int, ...]:
    from blockip.mip.branch_bound import mip_solve
    from blockip.mip.model import MixedProgram, Sense, Status

    program = MixedProgram(name="lattice-witness")
    for j in range(d.ncols):
        program.add_variable(f"p{j}", lower=0)
        program.add_variable(f"n{j}", lower=0)
    for i, row in enumerate(d.rows):
        coeffs = {}
        for j, a in enumerate(row):
            if a:
                coeffs[f"p{j}"] = a
                coeffs[f"n{j}"] = -a
        program.add_constraint(coeffs, Sense.EQ, v[i], name=f"row{i}")
    program.set_objective({name: 1 for name in program.variable_names})
    outcome = mip_solve(program)
    if outcome.status is not Status.OPTIMAL:
        raise InternalInconsistency(f"minimal lattice witness search ended {outcome.status}")
    return tuple(outcome.int_value(f"p{j}") - outcome.int_value(f"n{j}") for j in range(d.ncols))


def lattice_member(d: IntMat, v: Sequence[int]) -> LatticeWitness | None:
    """Integer witness that v ∈ lattice(D), or None."""
    if len(v) != d.nrows:
        raise ContractViolation(f"vector of length {len(v)} for dimension {d.nrows}")
    if d.ncols == 0:
        return LatticeWitness((), d) if not any(v) else None
    form = column_echelon(d)
    y = solve_integral(form, v)
    if y is None:
        return None
    coeffs = [0] * d.ncols
    for k, yk in enumerate(y):
        if yk:
            coeffs = [c + yk * u for c, u in zip(coeffs, form.transform[k])]
    witness = LatticeWitness(tuple(coeffs), d)
    bound = witness_bound(d, v)
    if witness.l1 > bound:
        logger.warning(f"echelon witness has l1 {witness.l1} > {bound}; searching a minimal one")
        witness = LatticeWitness(_minimal_witness(d, v), d)
        if witness.l1 > bound:
            raise InternalInconsistency(f"minimal lattice witness exceeds bound {bound}")
    if tuple(witness.vector()) != tuple(v):
        raise InternalInconsistency("lattice witness does not reproduce the vector")
    return witness


def _fractionality_constant(d: IntMat) -> int:
    if d.ncols == 0:
        return 1
    m = to_sympy(d)
    _, pivot_cols = m.rref()
    _, pivot_rows = m.T.rref()
    square = [list(d.rows[i]) for i in pivot_rows]
    for j in range(d.ncols):
        if j not in pivot_cols:
            square.append([1 if jj == j else 0 for jj in range(d.ncols)])
    det = int_det(square)
    if det == 0:
        raise InternalInconsistency("padded matrix for the fractionality constant is singular")
    return abs(det)


def fractionality_constant(d: IntMat) -> int:
    """|det D̃| where D̃ keeps the first independent rows of D and pads unit rows.

    Every integer vector of span(D) then has a basic rational solution λ with C·λ integral.
    """
    return FRACTIONALITY_CACHE.get_or_compute((d.key(),), lambda: _fractionality_constant(d))


def regular_lattice_constant(d: IntMat) -> int:
    """Modulus K such that lattice(D) is a union of whole classes of span(D) ∩ Λ^K_r."""
    return fractionality_constant(d)


def regular_lattice_member(v: Sequence[int], modulus: int, residue: Sequence[int]) -> bool:
    """True iff v ≡ residue coordinate-wise modulo the given modulus."""
    if modulus < 1:
        raise ContractViolation(f"modulus must be positive, got {modulus}")
    if len(v) != len(residue):
        raise ContractViolation("vector and residue have different lengths")
    if any(not 0 <= r < modulus for r in residue):
        raise ContractViolation(f"residue {tuple(residue)} not reduced modulo {modulus}")
    return all((a - r) % modulus == 0 for a, r in zip(v, residue))
