"""Pydantic report models behind the CLI's ``--json`` output."""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from pydantic import BaseModel, Field, field_validator


def _exact(v):
    """Exact numbers travel as strings so big integers and fractions survive JSON."""
    if v is None or isinstance(v, str):
        return v
    if isinstance(v, Fraction) and v.denominator == 1:
        return str(v.numerator)
    return str(v)


class NamedVector(BaseModel):
    name: str
    values: list[int] = Field(default_factory=list)


class VerdictReport(BaseModel):
    kind: str
    engine: str
    status: str
    value: Optional[str] = None
    message: str = ""
    solution: list[NamedVector] = Field(default_factory=list)

    @field_validator("value", mode="before")
    @classmethod
    def _coerce_value(cls, v):
        return _exact(v)


class CertificateReport(BaseModel):
    brick_type: int
    residue: list[int]
    modulus: int
    facets: list[list[int]] = Field(default_factory=list)
    inequalities: list[tuple[list[int], int]] = Field(default_factory=list)
    empty: bool = False


class TypeReport(BaseModel):
    """One distinct D block of a program."""

    index: int
    rows: list[list[int]]
    bricks: int = 0
    graver: Optional[list[list[int]]] = None
    facets: list[list[int]] = Field(default_factory=list)
    modulus: Optional[str] = None

    @field_validator("modulus", mode="before")
    @classmethod
    def _coerce_modulus(cls, v):
        return _exact(v)


class AnalysisReport(BaseModel):
    kind: str
    bricks: int
    delta: int
    types: list[TypeReport] = Field(default_factory=list)
    certificates: list[CertificateReport] = Field(default_factory=list)


class CheckReport(BaseModel):
    kind: str
    box: int
    solver_status: str
    oracle_status: str
    solver_value: Optional[str] = None
    oracle_value: Optional[str] = None
    agree: bool

    @field_validator("solver_value", "oracle_value", mode="before")
    @classmethod
    def _coerce_values(cls, v):
        return _exact(v)
