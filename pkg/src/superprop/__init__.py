"""Superpropagator kernels on hyperelliptic curves.

The public surface is re-exported here; see the submodules for details.
"""

from .curve import BranchData, PeriodFrame, abel, build_frame, odd_half_period, riemann_constants
from .exceptions import (DiagonalSingularity, FrameInvariantViolation, NonConvergence,
                         QuadratureFailure, SuperpropError, ZeroDenominator)
from .homotopy import (HomotopyOperator, QuadBudget, SampledForm, bilinear_check,
                       cohomology_dims, splitting_suite)
from .kernels import KernelEvaluator, KernelForm, kernel, map_u2, map_u3, relevant_sets
from .numerics import QuadratureConfig
from .theta import Characteristic, PeriodMatrix, theta, theta_gradient
from .verify import SUITES, VerificationReport, run_suite

__version__ = "0.1.0"

__all__ = [
    "BranchData", "PeriodFrame", "abel", "build_frame", "odd_half_period", "riemann_constants",
    "DiagonalSingularity", "FrameInvariantViolation", "NonConvergence", "QuadratureFailure",
    "SuperpropError", "ZeroDenominator",
    "HomotopyOperator", "QuadBudget", "SampledForm", "bilinear_check", "cohomology_dims",
    "splitting_suite",
    "KernelEvaluator", "KernelForm", "kernel", "map_u2", "map_u3", "relevant_sets",
    "QuadratureConfig",
    "Characteristic", "PeriodMatrix", "theta", "theta_gradient",
    "SUITES", "VerificationReport", "run_suite",
]
