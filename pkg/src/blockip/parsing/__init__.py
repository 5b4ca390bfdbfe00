"""Instance file grammar."""

from blockip.parsing.instance_parser import (
    OBJECTIVE_REJECTED,
    format_instance,
    format_solution,
    format_vector,
    parse_instance,
)

__all__ = [
    "OBJECTIVE_REJECTED",
    "format_instance",
    "format_solution",
    "format_vector",
    "parse_instance",
]
