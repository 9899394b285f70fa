"""Boundary functions of the modified-bound feasible set.

For flow ``i`` write ``k`` for the sum of the other flows' quanta.  The
constraint ``deviation(spec, q, i) <= 0`` is equivalent to ``k <= H_i(q_i)``
where ``H_i`` is concave, increasing and vanishes at 0.  With ``n`` flows the
constant ``(n-2)L/c`` latency is folded into an effective deadline
``J_i = d_i - (n-2)L/c``, so the two-flow formulas apply unchanged.

The optimizers work with ``g_i(x) = H_i(x) + x`` (total quanta allowed when
flow ``i`` holds ``x``) and with ``Gamma(theta) = sum_i g_i^{-1}(theta)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from . import _kernels
from .errors import DeadlineUnachievable, NoConvergence
from .model import SystemSpec


@dataclass(frozen=True)
class GeometryContext:
    spec: SystemSpec
    effective_deadlines: Tuple[float, ...]
    # per-flow kernel parameters, see _kernels
    slack: np.ndarray = field(repr=False, compare=False)
    demand: np.ndarray = field(repr=False, compare=False)
    rate: np.ndarray = field(repr=False, compare=False)
    split: np.ndarray = field(repr=False, compare=False)

    @property
    def capacity(self) -> float:
        return float(self.spec.capacity)

    @property
    def n(self) -> int:
        return self.spec.n


def make_context(spec: SystemSpec) -> GeometryContext:
    """Build the geometry context, rejecting flows whose effective deadline
    leaves no room for the initial burst (``c*J_i <= b_i + L``)."""
    n = spec.n
    c = float(spec.capacity)
    L = float(spec.residual_deficit_cap)
    J = tuple(f.deadline - (n - 2) * L / c for f in spec.flows)
    B = np.array([f.burst + L for f in spec.flows], dtype=float)
    for i, Bi in enumerate(B):
        if not c * J[i] > Bi:
            raise DeadlineUnachievable(i, c * J[i], float(Bi), what="c*J (effective)")
    r = np.array(spec.rates, dtype=float)
    return GeometryContext(
        spec=spec,
        effective_deadlines=J,
        slack=c * np.array(J) - B,
        demand=B,
        rate=r,
        split=np.array(J) * r > B,
    )


def necessary_condition(spec: SystemSpec) -> bool:
    """Minimum-capacity test: the burst clearing loads must fit in ``c``.

    Every feasible quanta vector satisfies ``sum_i (b_i + L)/(c d_i) <= 1``.
    """
    L = spec.residual_deficit_cap
    return sum((f.burst + L) / f.deadline for f in spec.flows) <= spec.capacity


def required_capacity(spec: SystemSpec) -> float:
    L = spec.residual_deficit_cap
    return sum((f.burst + L) / f.deadline for f in spec.flows)


def linear_term(ctx: GeometryContext, i: int, q_i: float, k: float) -> float:
    """Argument of the ``(.)^+`` term of the deviation, with ``k`` the sum of
    the other quanta."""
    r = ctx.rate[i]
    c = ctx.capacity
    return float(q_i * (r - c) / (r * c) + k / c)


def h1(ctx: GeometryContext, i: int, q_i: float) -> float:
    return _kernels.h1(ctx.slack[i], ctx.demand[i], float(q_i))


def h2(ctx: GeometryContext, i: int, q_i: float) -> float:
    return _kernels.h2(ctx.slack[i], ctx.demand[i], ctx.rate[i], ctx.capacity, float(q_i))


def H(ctx: GeometryContext, i: int, q_i: float) -> float:
    """Largest admissible sum of the other quanta when flow ``i`` holds
    ``q_i``: ``h1`` alone if ``J_i r_i <= b_i + L``, else ``min(h1, h2)``."""
    return _kernels.H(
        ctx.slack[i], ctx.demand[i], ctx.rate[i], ctx.capacity, ctx.split[i], float(q_i)
    )


def H_branch(ctx: GeometryContext, i: int, q_i: float) -> str:
    """Which of ``h1``/``h2`` attains ``H`` at ``q_i``."""
    if not ctx.split[i]:
        return "h1"
    return "h1" if h1(ctx, i, q_i) <= h2(ctx, i, q_i) else "h2"


def H_slope_at_zero(ctx: GeometryContext, i: int) -> float:
    return float(ctx.capacity * ctx.effective_deadlines[i] / ctx.demand[i] - 1.0)


def g(ctx: GeometryContext, i: int, q_i: float) -> float:
    return H(ctx, i, q_i) + float(q_i)


def g_inv(ctx: GeometryContext, i: int, theta: float) -> float:
    """Unique ``x >= 0`` with ``g(ctx, i, x) == theta``."""
    if theta < 0:
        raise ValueError(f"theta must be non-negative, got {theta!r}")
    x = _kernels.g_inv(
        ctx.slack[i], ctx.demand[i], ctx.rate[i], ctx.capacity, ctx.split[i], float(theta)
    )
    if math.isnan(x):
        raise NoConvergence(f"g_inv did not converge for flow {i} at theta={theta!r}")
    return x


def Gamma(ctx: GeometryContext, theta: float) -> float:
    if theta < 0:
        raise ValueError(f"theta must be non-negative, got {theta!r}")
    x = _kernels.gamma(
        ctx.slack, ctx.demand, ctx.rate, ctx.capacity, ctx.split, float(theta)
    )
    if math.isnan(x):
        raise NoConvergence(f"Gamma did not converge at theta={theta!r}")
    return x


def Gamma_inv(ctx: GeometryContext, target: float) -> float:
    if target < 0:
        raise ValueError(f"target must be non-negative, got {target!r}")
    x = _kernels.gamma_inv(
        ctx.slack, ctx.demand, ctx.rate, ctx.capacity, ctx.split, float(target)
    )
    if math.isnan(x):
        raise NoConvergence(f"Gamma_inv did not converge at target={target!r}")
    return x


def Gamma_slope_at_zero(ctx: GeometryContext) -> float:
    """Limit of ``Gamma'`` at 0, ``(1/c) * sum_j (b_j + L)/J_j``.

    A positive fixed point of ``Gamma`` exists only when this is below 1.
    """
    c = ctx.capacity
    return float(sum(ctx.demand[j] / (c * ctx.effective_deadlines[j]) for j in range(ctx.n)))
