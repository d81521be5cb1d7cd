"""Quantum and pseudoclassical dynamics of the kicked rotor near quantum resonance."""

__version__ = "0.1.0"

from .model import (  # noqa: E402
    BranchSpec,
    Case,
    ModelParams,
    ParameterError,
    PhasePoint,
    Wavefunction,
    WindowError,
    branch_spec,
    classify_case,
    coherent_state,
    gauss_sum,
    make_params,
    momentum_eigenstate,
)
