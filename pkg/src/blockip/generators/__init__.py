"""Instance generators: hardness reductions, 4-block entry shrinking and random instances."""

from blockip.generators.fourblock import ShrinkMap, fourblock_to_mixed, shrink_4block
from blockip.generators.random_instances import KINDS, GeneratedInstance, gen_random
from blockip.generators.reductions import (
    format_dimacs,
    gen_3sat,
    gen_subset_sum,
    parse_dimacs,
    random_cnf,
    sat3_global_bound,
)

__all__ = [
    "KINDS",
    "GeneratedInstance",
    "ShrinkMap",
    "format_dimacs",
    "fourblock_to_mixed",
    "gen_3sat",
    "gen_random",
    "gen_subset_sum",
    "parse_dimacs",
    "random_cnf",
    "sat3_global_bound",
    "shrink_4block",
]
