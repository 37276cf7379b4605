"""Numerical engines shared by the bound modules."""
from .ipm import IpmState, SdpSolution, ipm_solve
from .sdp import (SdpaParseError, SdpProblem, export_sdpa, format_sdpa, format_solution, parse_sdpa,
                  parse_solution, read_sdpa, read_solution)
from .simplex import EQ, GE, LE, LpProblem, LpResult, simplex_solve

__all__ = [
    "EQ", "GE", "LE", "IpmState", "LpProblem", "LpResult", "SdpProblem", "SdpSolution",
    "SdpaParseError", "export_sdpa", "format_sdpa", "format_solution", "ipm_solve", "parse_sdpa",
    "parse_solution", "read_sdpa", "read_solution", "simplex_solve",
]
