"""Fixed-point algorithms for the maximum-sum quanta problem.

Maximizing ``sum(q)`` over the modified-bound feasible set has its optimum on
the boundary system ``sum_{j != i} q_j = H_i(q_i)``.  Two iterations solve it:

* two flows: ``x <- T(x) = H_2(H_1(x))`` on the first quantum;
* any ``n``: ``theta <- Gamma^{-1}(theta)`` on the total, after which each
  quantum is ``g_i^{-1}(theta)``.

Both maps are monotone with a unique positive fixed point, so the iterates
move monotonically toward it from any positive start.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Tuple

from .errors import DeadlineUnachievable, InfeasibleSystem, NoConvergence, NotTwoFlows
from .geometry import (
    GeometryContext,
    Gamma_inv,
    Gamma_slope_at_zero,
    H,
    H_slope_at_zero,
    g_inv,
    make_context,
    necessary_condition,
    required_capacity,
)
from .model import QuantaVector, SystemSpec, validate

log = logging.getLogger(__name__)

# relative guard added to the absolute tolerance so that bit-scale quanta
# (1e4 and up) still terminate once the iterates stop moving in float64
RELATIVE_GUARD = 1e-12


@dataclass(frozen=True)
class FixedPointTrace:
    iterates: Tuple[float, ...]
    converged: bool
    final_residual: float
    iterations: int
    tolerance: float


@dataclass(frozen=True)
class OptimizeResult:
    quanta: QuantaVector
    objective: float
    trace: FixedPointTrace
    algorithm: str


def T_map(ctx: GeometryContext, x: float) -> float:
    """Two-flow composition ``H_2(H_1(x))`` (0-based: ``H(1, H(0, x))``)."""
    if ctx.n != 2:
        raise NotTwoFlows(f"T_map needs exactly 2 flows, got {ctx.n}")
    return H(ctx, 1, H(ctx, 0, x))


def T_slope_at_zero(ctx: GeometryContext) -> float:
    return H_slope_at_zero(ctx, 0) * H_slope_at_zero(ctx, 1)


def _prepare(spec: SystemSpec) -> GeometryContext:
    validate(spec)
    if not necessary_condition(spec):
        raise InfeasibleSystem(
            f"capacity {spec.capacity!r} is below the required "
            f"sum_i (b_i + L)/d_i = {required_capacity(spec)!r}"
        )
    try:
        return make_context(spec)
    except DeadlineUnachievable as exc:
        raise InfeasibleSystem(str(exc)) from exc


def _iterate(step, x0: float, tol: float, max_iter: int, name: str) -> FixedPointTrace:
    xs: List[float] = [float(x0)]
    x = float(x0)
    for k in range(1, max_iter + 1):
        nxt = step(x)
        xs.append(nxt)
        residual = abs(nxt - x)
        threshold = max(tol, RELATIVE_GUARD * abs(nxt))
        x = nxt
        if residual <= threshold:
            log.debug("%s converged after %d iterations at %r", name, k, x)
            return FixedPointTrace(tuple(xs), True, residual, k, threshold)
    err = NoConvergence(f"{name} did not converge within {max_iter} iterations")
    err.trace = FixedPointTrace(tuple(xs), False, abs(xs[-1] - xs[-2]), max_iter, tol)
    raise err


def two_flow_optimize(
    spec: SystemSpec, x0: float = 1.0, tol: float = 1e-9, max_iter: int = 10_000
) -> OptimizeResult:
    """Iterate ``x <- H_2(H_1(x))`` from ``x0`` and return ``(x*, H_1(x*))``."""
    if spec.n != 2:
        raise NotTwoFlows(f"two-flow optimizer needs exactly 2 flows, got {spec.n}")
    if not x0 > 0:
        raise ValueError(f"x0 must be positive, got {x0!r}")
    ctx = _prepare(spec)
    slope = T_slope_at_zero(ctx)
    if not slope > 1:
        raise InfeasibleSystem(f"T'(0) = {slope!r} <= 1: no positive fixed point")

    trace = _iterate(lambda x: T_map(ctx, x), x0, tol, max_iter, "two-flow iteration")
    q1 = trace.iterates[-1]
    q2 = H(ctx, 0, q1)
    return OptimizeResult(QuantaVector((q1, q2)), q1 + q2, trace, "two-flow")


def n_flow_optimize(
    spec: SystemSpec, theta0: float = 0.5, tol: float = 1e-9, max_iter: int = 10_000
) -> OptimizeResult:
    """Iterate ``theta <- Gamma^{-1}(theta)``; quanta are ``g_i^{-1}(theta*)``.

    The objective reported is ``theta*`` itself.
    """
    if not theta0 > 0:
        raise ValueError(f"theta0 must be positive, got {theta0!r}")
    ctx = _prepare(spec)
    slope = Gamma_slope_at_zero(ctx)
    if not slope < 1:
        raise InfeasibleSystem(
            f"sum_i (b_i + L)/(c J_i) = {slope!r} >= 1: no positive fixed point"
        )

    trace = _iterate(lambda t: Gamma_inv(ctx, t), theta0, tol, max_iter, "n-flow iteration")
    theta = trace.iterates[-1]
    quanta = tuple(g_inv(ctx, i, theta) for i in range(ctx.n))
    return OptimizeResult(QuantaVector(quanta), theta, trace, "n-flow")


def optimize(spec: SystemSpec, algorithm: str = "auto", start=None, tol: float = 1e-9,
             max_iter: int = 10_000) -> OptimizeResult:
    """Dispatch to one of the fixed-point algorithms; ``auto`` picks the
    two-flow map exactly when ``n == 2``."""
    if algorithm == "auto":
        algorithm = "two-flow" if spec.n == 2 else "n-flow"
    if algorithm == "two-flow":
        return two_flow_optimize(spec, 1.0 if start is None else start, tol, max_iter)
    if algorithm == "n-flow":
        return n_flow_optimize(spec, 0.5 if start is None else start, tol, max_iter)
    raise ValueError(f"unknown algorithm {algorithm!r}")
