"""Heteroclinic orbits of the discrete pendulum equation.

Subpackages follow the computation: :mod:`core` (the map and its equilibria),
:mod:`action` (the action functional and its bounds), :mod:`minimizer`
(constrained minimization and certification), :mod:`portrait` (phase
portraits in the original coordinates) and :mod:`cli`.
"""
from ._kernels import BACKEND
from .action import action, action_partial, alpha, find_delta, gradient, h_inner, h_norm, lemma2_bound
from .core import GAMMA, TWO_PI, Params, PhaseState, Window, nearest_equilibrium, residual, step, step_back
from .minimizer import ConstraintSpec, c_epsilon_sweep, heteroclinic, membership, minimize

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "GAMMA",
    "TWO_PI",
    "ConstraintSpec",
    "Params",
    "PhaseState",
    "Window",
    "action",
    "action_partial",
    "alpha",
    "c_epsilon_sweep",
    "find_delta",
    "gradient",
    "h_inner",
    "h_norm",
    "heteroclinic",
    "lemma2_bound",
    "membership",
    "minimize",
    "nearest_equilibrium",
    "residual",
    "step",
    "step_back",
]
