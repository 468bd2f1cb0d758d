"""Quaternion-valued LMS adaptive filtering with a zero-attracting variant.

The package covers the full sparse-system-identification pipeline:
quaternion scalar/vector algebra, a finite-difference gradient oracle,
the QLMS and ZA-QLMS update rules, seedable signal generation, and a
Monte-Carlo experiment harness with a CSV-emitting CLI (``qlms-sparse``).
"""

from .quaternion import Quaternion, ZERO, ONE, I, J, K
from .qvector import QVector, dot_t, error, conj_elems, l1_norm, sgn_vec, axpy
from .qcalculus import num_grad, num_grad_conj, check_product_rule
from .adaptive import (FilterState, StepRecord, DivergenceError,
                       step, step_qlms, cost_gradient_conj)
from .signal import (RngStream, SparseSystemSpec, white_qgauss,
                     gen_coloring_filter, fir_filter, scale_noise_to_snr,
                     build_system, random_unit_taps)
from .experiment import (ALGO_QLMS, ALGO_ZA_QLMS, ALGORITHMS, ScenarioConfig,
                         LearningCurve, run_single, run_scenario,
                         steady_state_mse, convergence_iteration,
                         resolve_system)
from .cli import ConfigError, parse_config, render_config, emit_csv

__all__ = [
    "Quaternion", "ZERO", "ONE", "I", "J", "K",
    "QVector", "dot_t", "error", "conj_elems", "l1_norm", "sgn_vec", "axpy",
    "num_grad", "num_grad_conj", "check_product_rule",
    "FilterState", "StepRecord", "DivergenceError",
    "step", "step_qlms", "cost_gradient_conj",
    "RngStream", "SparseSystemSpec", "white_qgauss", "gen_coloring_filter",
    "fir_filter", "scale_noise_to_snr", "build_system", "random_unit_taps",
    "ALGO_QLMS", "ALGO_ZA_QLMS", "ALGORITHMS", "ScenarioConfig",
    "LearningCurve", "run_single", "run_scenario", "steady_state_mse",
    "convergence_iteration", "resolve_system",
    "ConfigError", "parse_config", "render_config", "emit_csv",
]

__version__ = "0.1.0"
