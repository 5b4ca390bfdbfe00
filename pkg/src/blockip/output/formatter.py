"""Reports from solver results, and their stable text rendering."""

from __future__ import annotations

from blockip.mip.model import Status
from blockip.output.schema import AnalysisReport, CheckReport, NamedVector, VerdictReport
from blockip.parsing.instance_parser import format_solution
from blockip.programs.models import NFoldResult, TwoStageVerdict


def twostage_report(verdict: TwoStageVerdict, engine: str) -> VerdictReport:
    solution = []
    if verdict.feasible and verdict.u is not None:
        solution.append(NamedVector(name="u", values=list(verdict.u)))
        solution += [NamedVector(name=f"v{i}", values=list(v)) for i, v in enumerate(verdict.vs)]
    return VerdictReport(
        kind="two-stage",
        engine=engine,
        status=verdict.status.value,
        message=verdict.message,
        solution=solution,
    )


def nfold_report(result: NFoldResult, engine: str) -> VerdictReport:
    solution = [
        NamedVector(name=f"y{i}", values=list(y)) for i, y in enumerate(result.witness or ())
    ]
    return VerdictReport(
        kind="nfold",
        engine=engine,
        status=result.status.value,
        value=result.value,
        message=result.message,
        solution=solution,
    )


def answer_line(status: str, value: str | None = None) -> str:
    """The one-line answer: FEASIBLE, INFEASIBLE, OPTIMUM <value>, UNBOUNDED or RESOURCE_LIMIT."""
    if status == Status.OPTIMAL.value:
        return f"OPTIMUM {value}"
    return status


def format_verdict(report: VerdictReport, with_solution: bool = False) -> str:
    text = answer_line(report.status, report.value) + "\n"
    if with_solution and report.solution:
        text += format_solution((v.name, v.values) for v in report.solution)
    return text


def format_analysis(report: AnalysisReport) -> str:
    lines = [f"{report.kind}: {report.bricks} bricks, Δ = {report.delta}"]
    for t in report.types:
        lines.append(f"type {t.index}: D = {t.rows} ({t.bricks} bricks)")
        if t.facets:
            lines.append(f"  facets: {t.facets}")
        if t.modulus is not None:
            lines.append(f"  B = {t.modulus}")
        if t.graver is not None:
            lines.append(f"  Graver basis ({len(t.graver)} elements):")
            lines += [f"    {g}" for g in t.graver]
    for cert in report.certificates:
        state = "empty" if cert.empty else f"{len(cert.inequalities)} inequalities"
        where = f"type {cert.brick_type} r = {cert.residue} mod {cert.modulus}"
        lines.append(f"certificate {where}: {state}")
        lines += [f"  <{q}, v> >= {a}" for q, a in cert.inequalities]
    return "\n".join(lines) + "\n"


def format_check(report: CheckReport) -> str:
    solver = answer_line(report.solver_status, report.solver_value)
    oracle = answer_line(report.oracle_status, report.oracle_value)
    verdict = "AGREE" if report.agree else "DISAGREE"
    return f"solver: {solver}\noracle (box 0..{report.box}): {oracle}\n{verdict}\n"
