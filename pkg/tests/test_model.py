import pytest

from drrquanta import FlowSpec, QuantaVector, SystemSpec, validate
from drrquanta.errors import (
    DeadlineUnachievable,
    NonPositiveParameter,
    ResidualDeficitTooSmall,
    TooFewFlows,
    ValidationError,
)
from drrquanta.model import as_quanta


def two_flows(**kw):
    base = dict(capacity=40, residual_deficit_cap=3,
                flows=(FlowSpec(10, 1, 1), FlowSpec(10, 1, 1)))
    base.update(kw)
    return SystemSpec(**base)


def test_valid_spec_returned_unchanged():
    spec = two_flows()
    assert validate(spec) is spec
    assert spec.n == 2
    assert spec.bursts == (10, 10)
    assert spec.packet_lengths() == (3, 3)


def test_flows_list_is_stored_as_tuple():
    spec = SystemSpec(40, 3, [FlowSpec(10, 1, 1), FlowSpec(10, 1, 1)])
    assert isinstance(spec.flows, tuple)
    hash(spec)


@pytest.mark.parametrize("kw, field", [
    (dict(capacity=0), "capacity"),
    (dict(residual_deficit_cap=-1), "residual_deficit_cap"),
    (dict(flows=(FlowSpec(10, 0, 1), FlowSpec(10, 1, 1))), "flows[0].rate"),
    (dict(flows=(FlowSpec(10, 1, 1), FlowSpec(10, 1, 0))), "flows[1].deadline"),
    (dict(flows=(FlowSpec(-1, 1, 1), FlowSpec(10, 1, 1))), "flows[0].burst"),
])
def test_non_positive_fields(kw, field):
    with pytest.raises(NonPositiveParameter) as exc:
        validate(two_flows(**kw))
    assert field in str(exc.value)


def test_needs_two_flows():
    with pytest.raises(TooFewFlows):
        validate(two_flows(flows=(FlowSpec(10, 1, 1),)))


def test_packet_longer_than_cap():
    with pytest.raises(ResidualDeficitTooSmall):
        validate(two_flows(flows=(FlowSpec(10, 1, 1, 4), FlowSpec(10, 1, 1))))


def test_deadline_equality_rejected():
    # c*d == b + L exactly leaves no interior
    with pytest.raises(DeadlineUnachievable):
        validate(two_flows(capacity=13))
    validate(two_flows(capacity=13.001))


def test_errors_are_value_errors():
    with pytest.raises(ValueError):
        validate(two_flows(capacity=0))
    assert issubclass(DeadlineUnachievable, ValidationError)


def test_quanta_vector():
    q = QuantaVector((1.5, 2))
    assert len(q) == 2 and q.total == 3.5 and list(q) == [1.5, 2]
    assert as_quanta(q) == (1.5, 2)
    assert as_quanta([1, 2]) == (1.0, 2.0)
    with pytest.raises(NonPositiveParameter):
        QuantaVector((1.0, 0.0))
