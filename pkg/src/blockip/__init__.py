"""blockip: exact solvers for block-structured integer programs."""

__version__ = "0.1.0"
