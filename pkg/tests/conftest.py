"""Shared fixtures and independent oracles for the test suite."""
from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from drrquanta import FlowSpec, SystemSpec

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


@pytest.fixture
def scenario_dir() -> Path:
    return SCENARIOS


def spec_from_arrays(c, L, b, r, d, packet_len=None) -> SystemSpec:
    flows = [FlowSpec(float(bi), float(ri), float(di), packet_len) for bi, ri, di in zip(b, r, d)]
    return SystemSpec(float(c), float(L), tuple(flows))


def random_spec(rng: np.random.Generator, n: int, load=(0.2, 0.85), cap_load=None,
                share_floor: float = 0.1) -> SystemSpec:
    """Random valid spec with controlled burst loads.

    The total ``sum_i (b_i + L)/(c J_i)`` is drawn in ``load`` and split
    randomly, every flow keeping at least ``share_floor/n`` of it; the
    effective deadline follows as ``J_i = (b_i + L)/(c u_i)``.  Rates straddle
    ``c*u_i`` so both branches of H show up.  ``cap_load`` clips every share
    (used when the total may exceed 1).

    The floor bounds how lopsided the deadlines get.  Without it the n-flow
    iteration can face a slope of Gamma at the fixed point within 1e-3 of 1
    and legitimately exhaust its iteration budget (see test_optimize).
    """
    c = float(rng.uniform(10.0, 1000.0))
    L = float(rng.uniform(0.1, 5.0))
    w = share_floor / n + (1.0 - share_floor) * rng.dirichlet(np.ones(n))
    u = w * rng.uniform(*load)
    if cap_load is not None:
        u = np.minimum(u, cap_load)
    b = rng.uniform(0.0, 50.0, n)
    B = b + L
    J = B / (c * u)
    d = J + (n - 2) * L / c
    r = rng.uniform(0.01, 0.9, n) * c / n
    return spec_from_arrays(c, L, b, r, d)


def spec_arrays(spec: SystemSpec):
    b = np.array(spec.bursts, dtype=float)
    r = np.array(spec.rates, dtype=float)
    d = np.array(spec.deadlines, dtype=float)
    return float(spec.capacity), float(spec.residual_deficit_cap), b, r, d


def oracle_modified(spec: SystemSpec, Q: np.ndarray) -> np.ndarray:
    """Vectorized modified bound for a batch of quanta (rows of ``Q``)."""
    c, L, b, r, d = spec_arrays(spec)
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    n = Q.shape[1]
    k = Q.sum(axis=1, keepdims=True) - Q
    lin = Q * (r - c) / (r * c) + k / c
    return (b + L) / c * (1.0 + k / Q) + k / c + (n - 2) * L / c + np.maximum(lin, 0.0)


def oracle_feasible(spec: SystemSpec, Q: np.ndarray, rtol: float = 0.0) -> np.ndarray:
    d = np.array(spec.deadlines, dtype=float)
    return np.all(oracle_modified(spec, Q) <= d * (1.0 + rtol), axis=1)


def bisect(f, lo: float, hi: float, iters: int = 200) -> float:
    """Root of increasing ``f`` on ``[lo, hi]`` by plain bisection."""
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * max(1.0, abs(hi)):
            break
    return 0.5 * (lo + hi)


# acceptance criteria register here and are summarized after the run
_CRITERIA = {}


@pytest.fixture
def record_criterion():
    def record(number: int, ok: bool, detail: str) -> None:
        _CRITERIA[number] = (ok, detail)
        print(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        ok, detail = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
