"""CLI interface for blockip: exact solvers for block-structured integer programs.

Exit codes: 0 answered, 1 internal error or oracle disagreement, 2 input error,
3 resource limit.
"""

from __future__ import annotations

import logging
import sys
from pathlib import Path
from typing import NoReturn

import click

from blockip import __version__, config
from blockip.errors import (
    ContractViolation,
    InstanceParseError,
    InternalInconsistency,
    ResourceLimitError,
)

EXIT_INTERNAL = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3


def _fail(message: str, code: int) -> NoReturn:
    click.echo(f"Error: {message}", err=True)
    sys.exit(code)


def _load(path: str, expected: type | None = None):
    """Parse an instance file; parse errors exit with code 2."""
    from blockip.parsing.instance_parser import parse_instance

    try:
        program = parse_instance(Path(path).read_text(encoding="utf-8"))
    except InstanceParseError as e:
        _fail(f"{path}: {e}", EXIT_INPUT)
    if expected is not None and not isinstance(program, expected):
        _fail(f"{path} holds a {type(program).__name__}, expected {expected.__name__}", EXIT_INPUT)
    return program


def _write(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
        click.echo(f"Written: {output}", err=True)
    else:
        click.echo(text, nl=False)


def _emit_verdict(report, with_solution: bool, as_json: bool) -> None:
    from blockip.output.formatter import format_verdict

    if as_json:
        click.echo(report.model_dump_json(indent=2))
    else:
        click.echo(format_verdict(report, with_solution), nl=False)
    if report.status == "RESOURCE_LIMIT":
        if report.message:
            click.echo(report.message, err=True)
        sys.exit(EXIT_RESOURCE)


def _integers(text: str | None, what: str) -> list[int] | None:
    if text is None:
        return None
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        _fail(f"{what} must be a comma-separated list of integers", EXIT_INPUT)


@click.group()
@click.version_option(version=__version__, prog_name="blockip")
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
    default=None,
    help="Logging level (default: BLOCKIP_LOG_LEVEL or WARNING).",
)
@click.option(
    "--debug-models",
    is_flag=True,
    default=False,
    help="Log every generated MIP in text form.",
)
def cli(log_level: str | None, debug_models: bool):
    """blockip · two-stage feasibility and uniform n-fold optimisation."""
    logging.basicConfig(
        level=(log_level or config.LOG_LEVEL).upper(),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    if debug_models:
        logging.getLogger("blockip.mip.models").setLevel(logging.DEBUG)


@cli.group()
def solve():
    """Solve an instance file."""


@solve.command(name="two-stage")
@click.argument("path", type=click.Path(exists=True))
@click.option(
    "--engine",
    type=click.Choice(["residue", "direct"]),
    default="residue",
    help="residue: enumeration of u modulo B; direct: flat branch and bound.",
)
@click.option(
    "--global-bound",
    type=int,
    default=None,
    help="Upper bound on every global variable (direct engine only).",
)
@click.option("--solution", is_flag=True, default=False, help="Print the witness.")
@click.option("--budget", type=int, default=None, help="Largest number of residues to try.")
@click.option("--threads", type=int, default=None, help="Worker threads.")
@click.option("--json", "as_json", is_flag=True, default=False, help="Print a JSON report.")
def solve_twostage(
    path: str,
    engine: str,
    global_bound: int | None,
    solution: bool,
    budget: int | None,
    threads: int | None,
    as_json: bool,
):
    """Decide feasibility of a TWOSTAGE instance."""
    from blockip.output.formatter import twostage_report
    from blockip.programs.models import TwoStageProgram
    from blockip.solvers.twostage import solve_twostage_direct, solve_twostage_residue

    program = _load(path, TwoStageProgram)
    try:
        if engine == "direct":
            verdict = solve_twostage_direct(program, global_upper=global_bound)
        else:
            verdict = solve_twostage_residue(program, budget=budget, workers=threads)
    except ContractViolation as e:
        _fail(str(e), EXIT_INPUT)
    except ResourceLimitError as e:
        _fail(str(e), EXIT_RESOURCE)
    except InternalInconsistency as e:
        _fail(f"internal inconsistency: {e}", EXIT_INTERNAL)
    _emit_verdict(twostage_report(verdict, engine), solution, as_json)


@solve.command(name="nfold")
@click.argument("path", type=click.Path(exists=True))
@click.option("--engine", type=click.Choice(["model", "direct"]), default="model")
@click.option("--xi", type=int, default=None, help="Starting part size for decompositions.")
@click.option(
    "--base",
    type=click.Choice(["minimal", "bounded"]),
    default="minimal",
    help="Base solutions: ⊑-minimal ones, or every solution inside the norm bound.",
)
@click.option(
    "--collapse-omega",
    is_flag=True,
    default=False,
    help="Drop the assignment variables when every brick of a type costs the same.",
)
@click.option("--solution", is_flag=True, default=False, help="Print the witness.")
@click.option("--threads", type=int, default=None, help="Worker threads.")
@click.option("--json", "as_json", is_flag=True, default=False, help="Print a JSON report.")
def solve_nfold_cmd(
    path: str,
    engine: str,
    xi: int | None,
    base: str,
    collapse_omega: bool,
    solution: bool,
    threads: int | None,
    as_json: bool,
):
    """Minimise the objective of an NFOLD instance."""
    from blockip.output.formatter import nfold_report
    from blockip.programs.models import NFoldProgram
    from blockip.solvers.nfold import solve_nfold, solve_nfold_direct

    program = _load(path, NFoldProgram)
    try:
        if engine == "direct":
            result = solve_nfold_direct(program)
        else:
            result = solve_nfold(
                program, xi=xi, base=base, collapse_omega=collapse_omega, workers=threads
            )
    except ContractViolation as e:
        _fail(str(e), EXIT_INPUT)
    except ResourceLimitError as e:
        _fail(str(e), EXIT_RESOURCE)
    except InternalInconsistency as e:
        _fail(f"internal inconsistency: {e}", EXIT_INTERNAL)
    _emit_verdict(nfold_report(result, engine), solution, as_json)


@cli.group()
def gen():
    """Generate instance files."""


@gen.command(name="sat3")
@click.option("--vars", "num_vars", type=int, default=None, help="Number of variables.")
@click.option("--clauses", type=int, default=None, help="Number of clauses.")
@click.option("--seed", type=int, default=0, help="Random seed.")
@click.option("--dimacs", type=click.Path(exists=True), default=None, help="Read a CNF file.")
@click.option("--output", "-o", type=click.Path(), default=None, help="Output file.")
def gen_sat3(
    num_vars: int | None, clauses: int | None, seed: int, dimacs: str | None, output: str | None
):
    """Two-stage instance feasible iff a 3-CNF formula is satisfiable."""
    from blockip.generators.reductions import gen_3sat, parse_dimacs, random_cnf
    from blockip.parsing.instance_parser import format_instance

    try:
        if dimacs:
            formula = parse_dimacs(Path(dimacs).read_text(encoding="utf-8"))
        elif num_vars is not None and clauses is not None:
            formula = random_cnf(num_vars, clauses, seed)
        else:
            _fail("give --vars and --clauses, or --dimacs", EXIT_INPUT)
    except (InstanceParseError, ContractViolation) as e:
        _fail(str(e), EXIT_INPUT)
    _write(format_instance(gen_3sat(formula)), output)


@gen.command(name="subset-sum")
@click.option("--items", required=True, help="Comma-separated positive items.")
@click.option("--target", type=int, required=True, help="Target sum.")
@click.option("--costs", default=None, help="Comma-separated item costs.")
@click.option("--output", "-o", type=click.Path(), default=None, help="Output file.")
def gen_subset_sum_cmd(items: str, target: int, costs: str | None, output: str | None):
    """Uniform n-fold instance feasible iff some items sum to the target."""
    from blockip.generators.reductions import gen_subset_sum
    from blockip.parsing.instance_parser import format_instance

    try:
        program = gen_subset_sum(_integers(items, "--items"), target, _integers(costs, "--costs"))
    except ContractViolation as e:
        _fail(str(e), EXIT_INPUT)
    _write(format_instance(program), output)


@gen.command(name="random")
@click.argument("kind")
@click.option("--seed", type=int, required=True, help="Random seed.")
@click.option("--bricks", type=int, default=3, help="Number of bricks (clauses for cnf).")
@click.option("--output", "-o", type=click.Path(), default=None, help="Output file.")
def gen_random_cmd(kind: str, seed: int, bricks: int, output: str | None):
    """Seeded random instance: two-stage, two-stage-perturbed, nfold, cnf or fourblock."""
    from blockip.generators.random_instances import gen_random
    from blockip.parsing.instance_parser import format_instance

    try:
        instance = gen_random(kind, seed, bricks=bricks)
    except ContractViolation as e:
        _fail(str(e), EXIT_INPUT)
    click.echo(instance.note, err=True)
    _write(format_instance(instance.program), output)


@cli.group()
def transform():
    """Rewrite instance files."""


@transform.command(name="shrink-4block")
@click.argument("source", type=click.Path(exists=True))
@click.argument("target", type=click.Path())
@click.option("--no-square", is_flag=True, default=False, help="Skip zero padding.")
def shrink_4block_cmd(source: str, target: str, no_square: bool):
    """Rewrite a uniform FOURBLOCK instance so A, Bmat and C only hold -1, 0 and 1."""
    from blockip.generators.fourblock import shrink_4block
    from blockip.parsing.instance_parser import format_instance
    from blockip.programs.models import FourBlockProgram

    program = _load(source, FourBlockProgram)
    try:
        shrunk, _ = shrink_4block(program, square=not no_square)
    except ContractViolation as e:
        _fail(str(e), EXIT_INPUT)
    _write(format_instance(shrunk), target)


def _distinct_blocks(program) -> list[tuple]:
    """(matrix, brick count) per distinct constraint block, in first-occurrence order."""
    from blockip.programs.models import TwoStageProgram
    from blockip.solvers.twostage import normalize_twostage

    if isinstance(program, TwoStageProgram):
        norm = normalize_twostage(program)
        return [(d, norm.brick_types.count(k)) for k, d in enumerate(norm.types)]
    seen: dict[tuple, list] = {}
    bricks = program.concrete_bricks() if hasattr(program, "concrete_bricks") else program.bricks
    for brick in bricks:
        seen.setdefault(brick.D.key(), [brick.D, 0])[1] += 1
    return [tuple(v) for v in seen.values()]


@cli.command()
@click.argument("path", type=click.Path(exists=True))
@click.option("--graver", is_flag=True, default=False, help="Compute Graver bases.")
@click.option(
    "--certificate",
    default=None,
    help="Comma-separated residue r; builds the cone certificate of every block type.",
)
@click.option("--threads", type=int, default=None, help="Worker threads.")
@click.option("--json", "as_json", is_flag=True, default=False, help="Print a JSON report.")
def analyze(path: str, graver: bool, certificate: str | None, threads: int | None, as_json: bool):
    """Show block types, dual cones, moduli, Graver bases and certificates."""
    from blockip.geometry.certificates import certificate_is_empty, construct_Q
    from blockip.geometry.cones import cone_constants, weyl_dual
    from blockip.graver.engine import graver_basis
    from blockip.output.formatter import format_analysis
    from blockip.output.schema import AnalysisReport, CertificateReport, TypeReport
    from blockip.programs.models import TwoStageProgram

    program = _load(path)
    residue = _integers(certificate, "--certificate")
    blocks = _distinct_blocks(program)
    report = AnalysisReport(
        kind=type(program).__name__,
        bricks=sum(count for _, count in blocks),
        delta=max((d.norm_inf() for d, _ in blocks), default=0),
    )
    try:
        for index, (d, count) in enumerate(blocks):
            entry = TypeReport(index=index, rows=[list(r) for r in d.rows], bricks=count)
            if isinstance(program, TwoStageProgram) or residue is not None:
                dual = weyl_dual(d)
                constants = cone_constants(d, dual, workers=threads)
                entry.facets = [list(f) for f in dual.facets]
                entry.modulus = str(constants.B)
                if residue is not None:
                    if len(residue) != d.nrows:
                        _fail(f"--certificate needs {d.nrows} entries", EXIT_INPUT)
                    r = tuple(a % constants.B for a in residue)
                    cert = construct_Q(d, r, dual, constants, workers=threads)
                    report.certificates.append(
                        CertificateReport(
                            brick_type=index,
                            residue=list(r),
                            modulus=cert.modulus,
                            facets=[list(f) for f in cert.facets],
                            inequalities=[(list(q), a) for q, a in cert.inequalities],
                            empty=certificate_is_empty(cert),
                        )
                    )
            if graver:
                entry.graver = [list(g) for g in graver_basis(d).elements]
            report.types.append(entry)
    except ResourceLimitError as e:
        _fail(str(e), EXIT_RESOURCE)
    if as_json:
        click.echo(report.model_dump_json(indent=2))
    else:
        click.echo(format_analysis(report), nl=False)


def _inside(witness_parts, box: int) -> bool:
    return all(0 <= a <= box for part in witness_parts for a in part)


@cli.command()
@click.argument("path", type=click.Path(exists=True))
@click.option("--oracle-box", type=int, required=True, help="Oracle searches 0..N per variable.")
@click.option("--threads", type=int, default=None, help="Worker threads.")
@click.option("--json", "as_json", is_flag=True, default=False, help="Print a JSON report.")
def check(path: str, oracle_box: int, threads: int | None, as_json: bool):
    """Cross-check the solver against brute force inside a box; exit 1 on disagreement."""
    from blockip.mip.model import Status
    from blockip.oracles.brute_force import solve_bf
    from blockip.output.formatter import format_check
    from blockip.output.schema import CheckReport
    from blockip.programs.models import NFoldProgram, TwoStageProgram
    from blockip.solvers.nfold import solve_nfold
    from blockip.solvers.twostage import solve_twostage_residue

    program = _load(path)
    try:
        oracle = solve_bf(program, oracle_box)
        if isinstance(program, TwoStageProgram):
            verdict = solve_twostage_residue(program, workers=threads)
            status, value = verdict.status, None
            in_box = verdict.feasible and _inside((verdict.u, *verdict.vs), oracle_box)
            if oracle.status is Status.FEASIBLE:
                agree = status is Status.FEASIBLE
            else:
                agree = status is Status.INFEASIBLE or not in_box
        elif isinstance(program, NFoldProgram):
            result = solve_nfold(program, workers=threads)
            status, value = result.status, result.value
            in_box = result.witness is not None and _inside(result.witness, oracle_box)
            if oracle.status is Status.OPTIMAL:
                agree = status is Status.UNBOUNDED or (
                    status in (Status.OPTIMAL, Status.FEASIBLE)
                    and value <= oracle.value
                    and (not in_box or status is not Status.OPTIMAL or value == oracle.value)
                )
            else:
                agree = status in (Status.INFEASIBLE, Status.UNBOUNDED) or not in_box
        else:
            _fail("no solver for 4-block programs; use transform shrink-4block", EXIT_INPUT)
    except ContractViolation as e:
        _fail(str(e), EXIT_INPUT)
    except ResourceLimitError as e:
        _fail(str(e), EXIT_RESOURCE)
    except InternalInconsistency as e:
        _fail(f"internal inconsistency: {e}", EXIT_INTERNAL)
    if status is Status.RESOURCE_LIMIT:
        _fail("solver hit a resource limit", EXIT_RESOURCE)

    report = CheckReport(
        kind=type(program).__name__,
        box=oracle_box,
        solver_status=status.value,
        oracle_status=oracle.status.value,
        solver_value=value,
        oracle_value=oracle.value,
        agree=agree,
    )
    if as_json:
        click.echo(report.model_dump_json(indent=2))
    else:
        click.echo(format_check(report), nl=False)
    if not agree:
        sys.exit(EXIT_INTERNAL)


def main(argv: list[str] | None = None):
    """Entry point for the CLI; exits with the command's exit code."""
    cli(args=argv, prog_name="blockip")


if __name__ == "__main__":
    main()
