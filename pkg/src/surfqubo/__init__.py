"""QUBO-based surface code decoding with annealing and matching baselines."""

from .lattice import CodeLattice, build_lattice, extract_syndrome, logical_parity, sample_errors
from .qubo import QuboProblem, build_ising, build_qubo, evaluate, quadratize
from .anneal import AnnealConfig, SolveResult, solve_da, solve_sa

__version__ = "0.1.0"

__all__ = [
    "CodeLattice", "build_lattice", "extract_syndrome", "logical_parity", "sample_errors",
    "QuboProblem", "build_ising", "build_qubo", "evaluate", "quadratize",
    "AnnealConfig", "SolveResult", "solve_da", "solve_sa",
]
