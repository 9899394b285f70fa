"""Delay bounds and optimal quanta for Deficit Round Robin scheduling."""
from .bounds import (
    BoundReport,
    bound_report,
    deviation,
    exact_delay_bound,
    is_feasible_exact,
    is_feasible_modified,
    modified_delay_bound,
)
from .errors import DrrError, InfeasibleSystem, NoConvergence, ValidationError
from .geometry import GeometryContext, make_context, necessary_condition
from .model import FlowSpec, QuantaVector, SystemSpec, validate
from .optimize import OptimizeResult, n_flow_optimize, optimize, two_flow_optimize
from .scenario import load_scenario, read_scenario, serialize
from .simulator import SimReport, quantize, simulate, validate_quanta

__version__ = "0.1.0"
