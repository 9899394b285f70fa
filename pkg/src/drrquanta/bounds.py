"""Worst-case DRR delay bounds under leaky-bucket arrivals.

Two bounds are computed for a flow ``i`` given real-valued quanta ``q``:

* the exact network-calculus bound ``D_i`` built from the service-demand
  function ``psi`` and the per-flow interference terms ``phi``;
* the modified bound ``D^_i`` obtained by dropping the floors and replacing
  the residual term by the full quantum.  It dominates ``D_i`` and its
  sublevel sets are convex, which the optimizers rely on.

Flow indices are 0-based throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

from .errors import SameFlow
from .model import SystemSpec, as_quanta

#: relative slack used by the feasibility tests; boundary points are feasible
FEASIBILITY_RTOL = 1e-9


def real_mod(x: float, m: float) -> float:
    """Remainder of ``x`` modulo a real ``m > 0``, in ``[0, m)``.

    Equal to ``x - floor(x/m)*m`` for ``x >= 0``; ``math.fmod`` computes it
    without rounding error.
    """
    if not m > 0:
        raise ValueError(f"modulus must be positive, got {m!r}")
    r = math.fmod(x, m)
    if r < 0:
        r += m
    return r


def tau(spec: SystemSpec, q: Sequence[float], i: int) -> float:
    """Time for flow ``i`` to clear its residual quantum at its arrival rate."""
    q = as_quanta(q)
    f = spec.flows[i]
    L = spec.residual_deficit_cap
    return (q[i] - real_mod(f.burst + L, q[i])) / f.rate


def phi(spec: SystemSpec, q: Sequence[float], i: int, j: int, x: float) -> float:
    """Bits flow ``j`` can be served while flow ``i`` is served ``x`` bits."""
    if i == j:
        raise SameFlow(i)
    q = as_quanta(q)
    L = spec.residual_deficit_cap
    return math.floor((x + L) / q[i]) * q[j] + (q[j] + L)


def psi(spec: SystemSpec, q: Sequence[float], i: int, x: float) -> float:
    q = as_quanta(q)
    return x + sum(phi(spec, q, i, j, x) for j in range(spec.n) if j != i)


def alpha_at_tau(spec: SystemSpec, q: Sequence[float], i: int) -> float:
    """Arrival curve of flow ``i`` evaluated at :func:`tau`.

    Computed as ``b + q - (b + L) mod q``, which equals ``b + r * tau``.
    """
    q = as_quanta(q)
    f = spec.flows[i]
    L = spec.residual_deficit_cap
    return f.burst + q[i] - real_mod(f.burst + L, q[i])


def _psi_rounds(spec: SystemSpec, q: Tuple[float, ...], i: int, x: float, rounds: int) -> float:
    L = spec.residual_deficit_cap
    return x + sum(rounds * q[j] + q[j] + L for j in range(spec.n) if j != i)


def exact_delay_bound(spec: SystemSpec, q: Sequence[float], i: int) -> float:
    """Exact bound ``max(Psi(b)/c, Psi(alpha(tau))/c - tau)``.

    Both arguments sit on known multiples of ``q_i``: ``b + L`` holds
    ``m = floor((b + L)/q_i)`` of them and ``alpha + L`` exactly ``m + 1``.
    The counts come from the exact remainder rather than from flooring
    rounded quotients, which can land one round short at the boundary.
    """
    q = as_quanta(q)
    f = spec.flows[i]
    c = spec.capacity
    B = f.burst + spec.residual_deficit_cap
    rem = real_mod(B, q[i])
    m = round((B - rem) / q[i])
    first = _psi_rounds(spec, q, i, f.burst, m) / c
    second = _psi_rounds(spec, q, i, alpha_at_tau(spec, q, i), m + 1) / c - tau(spec, q, i)
    return max(first, second)


def modified_delay_bound(spec: SystemSpec, q: Sequence[float], i: int) -> float:
    q = as_quanta(q)
    f = spec.flows[i]
    c = spec.capacity
    L = spec.residual_deficit_cap
    others = sum(q[j] for j in range(spec.n) if j != i)
    linear = q[i] * (f.rate - c) / (f.rate * c) + others / c
    return (
        (f.burst + L) / c * (1.0 + others / q[i])
        + others / c
        + (spec.n - 2) * L / c
        + max(linear, 0.0)
    )


def deviation(spec: SystemSpec, q: Sequence[float], i: int) -> float:
    """Signed slack of flow ``i``: modified bound minus its deadline."""
    return modified_delay_bound(spec, q, i) - spec.flows[i].deadline


@dataclass(frozen=True)
class BoundReport:
    flow_index: int
    exact_bound: float
    modified_bound: float
    deviation: float
    branch_active: bool


def bound_report(spec: SystemSpec, q: Sequence[float], i: int) -> BoundReport:
    q = as_quanta(q)
    f = spec.flows[i]
    c = spec.capacity
    others = sum(q[j] for j in range(spec.n) if j != i)
    modified = modified_delay_bound(spec, q, i)
    return BoundReport(
        flow_index=i,
        exact_bound=exact_delay_bound(spec, q, i),
        modified_bound=modified,
        deviation=modified - f.deadline,
        branch_active=q[i] * (f.rate - c) / (f.rate * c) + others / c > 0,
    )


def _meets(value: float, deadline: float) -> bool:
    return value <= deadline * (1.0 + FEASIBILITY_RTOL)


def is_feasible_modified(spec: SystemSpec, q: Sequence[float]) -> bool:
    q = as_quanta(q)
    if len(q) != spec.n or not all(x > 0 for x in q):
        return False
    return all(
        _meets(modified_delay_bound(spec, q, i), spec.flows[i].deadline)
        for i in range(spec.n)
    )


def is_feasible_exact(spec: SystemSpec, q: Sequence[float]) -> bool:
    q = as_quanta(q)
    if len(q) != spec.n or not all(x > 0 for x in q):
        return False
    return all(
        _meets(exact_delay_bound(spec, q, i), spec.flows[i].deadline)
        for i in range(spec.n)
    )
