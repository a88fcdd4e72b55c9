"""CDCL with pluggable xor-clause reasoning, explanations and xor learning."""

from .engine import Result, SolverConfig, Stats, Status, solve
from .formula_io import CnfXorFormula, parse_cnfxor, read_file, write_cnfxor
from .xor_algebra import BOTTOM, TOP, XorClause

__all__ = [
    "BOTTOM", "TOP", "CnfXorFormula", "Result", "SolverConfig", "Stats", "Status",
    "XorClause", "parse_cnfxor", "read_file", "solve", "write_cnfxor",
]
