"""Partition Pauli strings into 2^m + 1 commuting families and measure them together."""

from .baselines import GroupingResult, MemoryGuardError, density_sweep, greedy_color, group, scaling_bench
from .circuits import Circuit, Gate, from_qasm3
from .diagonalize import (
    MeasurementPlan,
    build_circuit,
    build_plans,
    diag_generators,
    measurement_coeffs,
    member_phase,
)
from .gf2 import BitMatrix, BitVector, build_symmetric_generator, cholesky_gf2, irreducible_poly
from .measure import (
    AnsatzSpec,
    apply_cut,
    build_ansatz_state,
    exact_probabilities,
    expectation,
    grouped_expectation,
    pauli_decompose,
    sample_counts,
    simulate,
)
from .partition import Solution, build_solution, family_table, group_operator
from .pauli import PauliString, PhasedPauli, WeightedPauliSum, commutes, multiply, parse, qwc_commutes

__version__ = "0.1.0"

__all__ = [
    "AnsatzSpec",
    "BitMatrix",
    "BitVector",
    "Circuit",
    "Gate",
    "GroupingResult",
    "MeasurementPlan",
    "MemoryGuardError",
    "PauliString",
    "PhasedPauli",
    "Solution",
    "WeightedPauliSum",
    "apply_cut",
    "build_ansatz_state",
    "build_circuit",
    "build_plans",
    "build_solution",
    "build_symmetric_generator",
    "cholesky_gf2",
    "commutes",
    "density_sweep",
    "diag_generators",
    "exact_probabilities",
    "expectation",
    "family_table",
    "from_qasm3",
    "greedy_color",
    "group",
    "group_operator",
    "grouped_expectation",
    "irreducible_poly",
    "measurement_coeffs",
    "member_phase",
    "multiply",
    "parse",
    "pauli_decompose",
    "qwc_commutes",
    "sample_counts",
    "scaling_bench",
    "simulate",
]
