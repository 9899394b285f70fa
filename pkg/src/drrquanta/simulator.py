"""Packet-level DRR simulator with greedy leaky-bucket sources.

The server is non-preemptive and work conserving.  It visits backlogged
queues in flow-index order; a visit adds the flow's quantum to its deficit
and sends head-of-line packets while the deficit covers them.  A queue that
empties has its deficit reset to zero.  Packets that arrive while a flow is
being served can be sent in the same visit.

When every input (bursts, rates, packet lengths, capacity, quanta) is
integral the clock runs on ``fractions.Fraction`` so that runs are exact;
otherwise floats are used.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence, Tuple

from .bounds import exact_delay_bound, modified_delay_bound
from .errors import QuantumUnderflow
from .model import FlowSpec, QuantaVector, SystemSpec, as_quanta, validate

# fixed-point outputs sit within ~1e-12 relative of their true value; an
# optimum that is mathematically an integer must not floor to the one below
SNAP_RTOL = 1e-9

Arrival = Tuple[float, float]  # (arrival time, length in bits)


class Transmission(NamedTuple):
    flow: int
    visit: int
    arrival: float
    start: float
    end: float
    length: float


class Violation(NamedTuple):
    flow: int
    kind: str  # "deadline" or "modified_bound"
    observed: float
    limit: float


@dataclass(frozen=True)
class SimReport:
    worst_delay: Tuple[float, ...]
    packets_served: Tuple[int, ...]
    rounds: int
    flow_switches: int
    max_residual_deficit_seen: Tuple[float, ...]
    unserved: Tuple[int, ...]
    horizon_too_short: bool
    horizon: float
    exact_arithmetic: bool
    quanta: Tuple[float, ...] = ()
    violations: Tuple[Violation, ...] = ()
    transmissions: Optional[Tuple[Transmission, ...]] = None


def quantize(q: Sequence[float]) -> QuantaVector:
    """Floor every quantum to an integer number of bits (at least 1)."""
    out = []
    for i, x in enumerate(as_quanta(q)):
        k = math.floor(x)
        if x - k >= 1.0 - SNAP_RTOL * max(1.0, abs(x)):
            k += 1
        if k < 1:
            raise QuantumUnderflow(f"quanta[{i}] = {x!r} floors below 1 bit")
        out.append(int(k))
    return QuantaVector(tuple(out))


def _integral(x) -> bool:
    return isinstance(x, int) or (isinstance(x, float) and x.is_integer())


def _convert(x, exact: bool):
    if exact:
        return Fraction(x)
    return float(x)


def generate_greedy_arrivals(
    flow: FlowSpec, horizon: float, packet_len: Optional[float] = None, exact: bool = False
) -> Tuple[Arrival, ...]:
    """Maximally bursty conforming source.

    Packet ``k`` (1-based) arrives at ``max(0, (k*l - b)/r)``: the whole
    packets of the burst at time 0, then one packet every ``l/r`` seconds, up
    to and including ``horizon``.
    """
    ell = flow.packet_len if packet_len is None else packet_len
    if ell is None:
        raise ValueError("packet length is required to generate arrivals")
    if not horizon > 0:
        raise ValueError(f"horizon must be positive, got {horizon!r}")
    if flow.burst < ell:
        raise ValueError(f"burst {flow.burst!r} is smaller than one packet ({ell!r})")
    b = _convert(flow.burst, exact)
    r = _convert(flow.rate, exact)
    ell = _convert(ell, exact)
    h = _convert(horizon, exact)
    out = []
    k = 1
    while True:
        t = max(k * ell - b, 0) / r
        if t > h:
            break
        out.append((t, ell))
        k += 1
    return tuple(out)


def _exact_inputs(spec: SystemSpec, quanta) -> bool:
    values = [spec.capacity, *quanta]
    for f, ell in zip(spec.flows, spec.packet_lengths()):
        values += [f.burst, f.rate, ell]
    return all(_integral(v) for v in values)


def simulate(
    spec: SystemSpec,
    quanta: Sequence[float],
    horizon: float,
    arrivals: Optional[Sequence[Sequence[Arrival]]] = None,
    record: bool = False,
) -> SimReport:
    """Run DRR until ``horizon`` and report per-flow worst delays.

    ``arrivals`` defaults to greedy sources for every flow.  Packets still
    queued (or arrived but not yet admitted) at the horizon are counted in
    ``unserved`` rather than dropped silently.
    """
    validate(spec)
    q_in = as_quanta(quanta)
    if len(q_in) != spec.n:
        raise ValueError(f"expected {spec.n} quanta, got {len(q_in)}")
    if not all(x >= 1 for x in q_in):
        raise QuantumUnderflow(f"quanta must be at least 1 bit, got {q_in!r}")
    if not horizon > 0:
        raise ValueError(f"horizon must be positive, got {horizon!r}")

    n = spec.n
    lengths = spec.packet_lengths()
    if arrivals is None:
        exact = _exact_inputs(spec, q_in)
        arrivals = [
            generate_greedy_arrivals(f, horizon, ell, exact)
            for f, ell in zip(spec.flows, lengths)
        ]
    else:
        exact = _exact_inputs(spec, q_in) and all(
            isinstance(t, (int, Fraction)) and _integral(ell)
            for row in arrivals for t, ell in row
        )
        arrivals = [
            tuple((_convert(t, exact), _convert(ell, exact)) for t, ell in row)
            for row in arrivals
        ]
    h = _convert(horizon, exact)
    c = _convert(spec.capacity, exact)
    q = [_convert(x, exact) for x in q_in]
    zero = _convert(0, exact)

    future = [deque(a for a in row if a[0] <= h) for row in arrivals]
    queues = [deque() for _ in range(n)]
    deficit = [zero] * n
    worst = [zero] * n
    served = [0] * n
    max_residual = [zero] * n
    served_late = [zero] * n  # bits finished in the second half of the run
    backlog_mid = None
    log = [] if record else None

    t = zero
    pos = 0
    last_visited = n  # forces the first visit to open round 1
    rounds = 0
    switches = 0
    last_flow = None
    visit = 0
    idle_visits = 0

    def admit(now):
        for j in range(n):
            fut = future[j]
            while fut and fut[0][0] <= now:
                queues[j].append(fut.popleft())

    def queued_bits():
        return [sum(ell for _, ell in queues[j]) + sum(ell for a, ell in future[j] if a <= h / 2)
                for j in range(n)]

    admit(t)
    stopped = False
    while not stopped:
        if not any(queues):
            pending = [fut[0][0] for fut in future if fut]
            if not pending:
                break
            t = max(t, min(pending))
            admit(t)
            continue

        backlogged = [j for j in range(n) if queues[j]]
        if idle_visits >= len(backlogged):
            # a full cycle sent nothing and no time passed: jump ahead by the
            # whole rounds that would also send nothing
            need = min(
                math.ceil((queues[j][0][1] - deficit[j]) / q[j]) for j in backlogged
            )
            skip = need - 1
            if skip > 0:
                for j in backlogged:
                    deficit[j] += skip * q[j]
                rounds += skip
            idle_visits = 0

        i = pos
        while not queues[i]:
            i = (i + 1) % n
        if i <= last_visited:
            rounds += 1
        last_visited = i
        visit += 1

        deficit[i] += q[i]
        sent = False
        while queues[i] and deficit[i] >= queues[i][0][1]:
            arrival, ell = queues[i][0]
            end = t + ell / c
            if end > h:
                stopped = True
                break
            queues[i].popleft()
            deficit[i] -= ell
            if backlog_mid is None and end > h / 2:
                backlog_mid = queued_bits()
            if end > h / 2:
                served_late[i] += ell
            if log is not None:
                log.append(Transmission(i, visit, arrival, t, end, ell))
            t = end
            sent = True
            served[i] += 1
            delay = end - arrival
            if delay > worst[i]:
                worst[i] = delay
            if last_flow is not None and last_flow != i:
                switches += 1
            last_flow = i
            admit(t)
        if stopped:
            break
        if queues[i]:
            if deficit[i] > max_residual[i]:
                max_residual[i] = deficit[i]
        else:
            deficit[i] = zero
        idle_visits = 0 if sent else idle_visits + 1
        pos = (i + 1) % n

    unserved = [len(queues[j]) + len(future[j]) for j in range(n)]
    end_bits = [sum(ell for _, ell in queues[j]) + sum(ell for _, ell in future[j])
                for j in range(n)]
    if backlog_mid is None:
        backlog_mid = end_bits
    too_short = any(
        end_bits[j] > spec.flows[j].burst + lengths[j] and end_bits[j] >= backlog_mid[j]
        for j in range(n)
    )
    return SimReport(
        worst_delay=tuple(float(w) for w in worst),
        packets_served=tuple(served),
        rounds=rounds,
        flow_switches=switches,
        max_residual_deficit_seen=tuple(float(x) for x in max_residual),
        unserved=tuple(unserved),
        horizon_too_short=too_short,
        horizon=float(horizon),
        exact_arithmetic=exact,
        quanta=tuple(q_in),
        transmissions=tuple(log) if log is not None else None,
    )


def default_horizon(spec: SystemSpec) -> float:
    return 20.0 * max(spec.deadlines)


def validate_quanta(
    spec: SystemSpec, q_real: Sequence[float], horizon: Optional[float] = None
) -> SimReport:
    """Floor the quanta, simulate greedy sources and list any flow whose
    worst observed delay exceeds its deadline or its modified bound."""
    q_int = quantize(q_real)
    if horizon is None:
        horizon = default_horizon(spec)
    report = simulate(spec, q_int.values, horizon)
    violations = []
    for i, f in enumerate(spec.flows):
        w = report.worst_delay[i]
        if w > f.deadline:
            violations.append(Violation(i, "deadline", w, f.deadline))
        bound = modified_delay_bound(spec, q_int.values, i)
        if w > bound:
            violations.append(Violation(i, "modified_bound", w, bound))
    return SimReport(**{**report.__dict__, "violations": tuple(violations)})


def bound_gaps(spec: SystemSpec, report: SimReport) -> Tuple[Tuple[float, float, float], ...]:
    """Per flow ``(worst_delay, D, D^)`` at the simulated quanta."""
    return tuple(
        (report.worst_delay[i],
         exact_delay_bound(spec, report.quanta, i),
         modified_delay_bound(spec, report.quanta, i))
        for i in range(spec.n)
    )
