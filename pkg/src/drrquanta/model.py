"""Domain types shared by the analysis, optimization and simulation code.

Units are fixed everywhere: data in bits, time in seconds, rates in bits/s.
Instances are frozen; :func:`validate` checks the invariants without
modifying anything.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Tuple

from .errors import (
    DeadlineUnachievable,
    NonPositiveParameter,
    ResidualDeficitTooSmall,
    TooFewFlows,
)


@dataclass(frozen=True)
class FlowSpec:
    """Leaky-bucket flow with a delay requirement.

    ``packet_len`` is only consulted by the simulator; when it is ``None`` the
    simulator uses the system's residual-deficit cap as the packet length.
    """

    burst: float
    rate: float
    deadline: float
    packet_len: Optional[float] = None


@dataclass(frozen=True)
class SystemSpec:
    capacity: float
    residual_deficit_cap: float
    flows: Tuple[FlowSpec, ...]

    def __post_init__(self):
        # accept any sequence but store a tuple so the spec stays hashable
        if not isinstance(self.flows, tuple):
            object.__setattr__(self, "flows", tuple(self.flows))

    @property
    def n(self) -> int:
        return len(self.flows)

    @property
    def bursts(self) -> Tuple[float, ...]:
        return tuple(f.burst for f in self.flows)

    @property
    def rates(self) -> Tuple[float, ...]:
        return tuple(f.rate for f in self.flows)

    @property
    def deadlines(self) -> Tuple[float, ...]:
        return tuple(f.deadline for f in self.flows)

    def packet_lengths(self) -> Tuple[float, ...]:
        L = self.residual_deficit_cap
        return tuple(L if f.packet_len is None else f.packet_len for f in self.flows)


@dataclass(frozen=True)
class QuantaVector:
    """Strictly positive per-flow quanta in bits."""

    values: Tuple[float, ...]

    def __post_init__(self):
        values = tuple(self.values)
        object.__setattr__(self, "values", values)
        for i, q in enumerate(values):
            if not q > 0:
                raise NonPositiveParameter(f"quanta[{i}]", q)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[float]:
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]

    @property
    def total(self) -> float:
        return sum(self.values)


def validate(spec: SystemSpec) -> SystemSpec:
    """Check every model invariant and return ``spec`` itself.

    Besides positivity, each flow must satisfy ``c * d_i > b_i + L`` strictly;
    with equality the feasible set has an empty interior.
    """
    if not spec.capacity > 0:
        raise NonPositiveParameter("capacity", spec.capacity)
    if not spec.residual_deficit_cap > 0:
        raise NonPositiveParameter("residual_deficit_cap", spec.residual_deficit_cap)
    for i, f in enumerate(spec.flows):
        if not f.burst >= 0:
            raise NonPositiveParameter(f"flows[{i}].burst", f.burst)
        if not f.rate > 0:
            raise NonPositiveParameter(f"flows[{i}].rate", f.rate)
        if not f.deadline > 0:
            raise NonPositiveParameter(f"flows[{i}].deadline", f.deadline)
        if f.packet_len is not None and not f.packet_len > 0:
            raise NonPositiveParameter(f"flows[{i}].packet_len", f.packet_len)
    if spec.n < 2:
        raise TooFewFlows(spec.n)

    L = spec.residual_deficit_cap
    packets = [f.packet_len for f in spec.flows if f.packet_len is not None]
    if packets and L < max(packets):
        raise ResidualDeficitTooSmall(L, max(packets))

    c = spec.capacity
    for i, f in enumerate(spec.flows):
        if not c * f.deadline > f.burst + L:
            raise DeadlineUnachievable(i, c * f.deadline, f.burst + L)
    return spec


def as_quanta(q: Sequence[float]) -> Tuple[float, ...]:
    """Plain float tuple from a QuantaVector or any sequence of numbers."""
    if isinstance(q, QuantaVector):
        return q.values
    return tuple(float(x) for x in q)
