"""Frobenius-series solutions of the radial oscillator with Coulomb and linear
terms, plus the numerical eigensolver used to check them.

The compiled core lives in ``frobenius._frobenius``; everything public is
re-exported here. Models are plain dicts with the same keys as the JSON model
files accepted by the command-line tool.
"""

import json as _json

from ._frobenius import (
    ArgumentError,
    ConditionalFamily,
    ConsistencyError,
    DomainError,
    FormulaCheck,
    HftReport,
    PolynomialSolution,
    RadialProblem,
    SpectrumEstimate,
    admissible_a,
    closed_form_check_n01,
    coefficient_polynomial,
    conditional_family,
    count_nodes,
    exact_coefficients,
    exact_eigenvalue,
    exact_eigenvalue_rational,
    exact_state,
    exponent,
    hft_check,
    log_grid,
    ode_residual,
    second_condition_value,
    solve_spectrum,
    spectrum_vs_formula,
    termination_energy,
)
from . import _frobenius

__version__ = "0.1.0"


def refute(model):
    """Compare a model's claimed energy and HFT partials with the oracle.

    ``model`` is a dict such as ``{"model": "pseudo_confined", "omega": 1, ...}``.
    Returns the refutation report as a dict.
    """
    return _json.loads(_frobenius._refute_json(_json.dumps(model)))


def canonical_form(model):
    """Canonical (gamma, a, b), the energy scale and the claimed energy of a model."""
    return _json.loads(_frobenius._canonical_json(_json.dumps(model)))


__all__ = [name for name in dir() if not name.startswith("_")]
