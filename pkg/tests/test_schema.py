"""Tests for the JSON report models."""

import json
from fractions import Fraction

from blockip.mip.model import Status
from blockip.output.formatter import answer_line, format_check, format_verdict
from blockip.output.schema import CheckReport, NamedVector, TypeReport, VerdictReport


def test_exact_values_become_strings():
    report = VerdictReport(kind="nfold", engine="model", status="OPTIMAL", value=Fraction(6, 1))
    assert report.value == "6"
    assert VerdictReport(kind="nfold", engine="model", status="OPTIMAL", value=2**70).value == (
        str(2**70)
    )
    third = VerdictReport(kind="nfold", engine="model", status="OPTIMAL", value=Fraction(1, 3))
    assert third.value == "1/3"


def test_missing_value_stays_none():
    report = VerdictReport(kind="two-stage", engine="residue", status="FEASIBLE")
    assert report.value is None
    assert report.solution == []


def test_verdict_json_dump():
    report = VerdictReport(
        kind="two-stage",
        engine="residue",
        status="FEASIBLE",
        solution=[NamedVector(name="u", values=[1]), NamedVector(name="v0", values=[2])],
    )
    data = json.loads(report.model_dump_json())
    assert data["status"] == "FEASIBLE"
    assert data["solution"][1] == {"name": "v0", "values": [2]}


def test_type_report_modulus():
    assert TypeReport(index=0, rows=[[2]], modulus=296).modulus == "296"


def test_check_report_text():
    report = CheckReport(
        kind="nfold",
        box=7,
        solver_status="OPTIMAL",
        oracle_status="OPTIMAL",
        solver_value=2,
        oracle_value=Fraction(2),
        agree=True,
    )
    assert format_check(report) == "solver: OPTIMUM 2\noracle (box 0..7): OPTIMUM 2\nAGREE\n"


def test_answer_lines():
    assert answer_line(Status.OPTIMAL.value, "-4") == "OPTIMUM -4"
    assert answer_line("INFEASIBLE") == "INFEASIBLE"
    report = VerdictReport(
        kind="two-stage",
        engine="direct",
        status="FEASIBLE",
        solution=[NamedVector(name="u", values=[1])],
    )
    assert format_verdict(report) == "FEASIBLE\n"
    assert format_verdict(report, with_solution=True) == "FEASIBLE\nSOLUTION\nu 1\nEND\n"
