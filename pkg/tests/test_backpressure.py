"""Back-pressure flow model: reference speeds, clamping, monotonicity."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from beadpath.backpressure import MIN_FLOW_FRACTION, FlowModel, speed_for_width
from beadpath.errors import WidthUnreachable


def test_reference_width_gets_reference_speed():
    m = FlowModel(v0=30.0, w0=0.4, h=0.1, k=1.1)
    v, f = speed_for_width(m, 0.4)
    assert v == pytest.approx(30.0)
    assert f == pytest.approx(m.f0)


def test_double_width_worked_example():
    # f0 = 30*0.4*0.1 = 1.2; f(0.8) = 1.2 - 1.1*1 = 0.1; v = 0.1/(0.1*0.8)
    m = FlowModel(v0=30.0, w0=0.4, h=0.1, k=1.1)
    v, f = speed_for_width(m, 0.8)
    assert f == pytest.approx(0.1)
    assert v == pytest.approx(1.25)


def test_zero_k_means_constant_flow():
    m = FlowModel(k=0.0)
    flows = [speed_for_width(m, w)[1] for w in (0.2, 0.4, 0.7, 1.2)]
    assert all(f == pytest.approx(m.f0) for f in flows)
    # speed then falls inversely with width
    assert speed_for_width(m, 0.8)[0] == pytest.approx(15.0)


def test_unreachable_width_raises():
    m = FlowModel(v0=30.0, w0=0.4, h=0.1, k=1.1)
    # f(w) <= 0 once w/w0 - 1 >= f0/k, i.e. w >= 0.4*(1 + 1.2/1.1)
    with pytest.raises(WidthUnreachable):
        speed_for_width(m, 0.9)


def test_clamp_floors_flow_at_five_percent():
    m = FlowModel(v0=30.0, w0=0.4, h=0.1, k=1.1, clamp_min_flow=True)
    v, f = speed_for_width(m, 0.9)
    assert f == pytest.approx(MIN_FLOW_FRACTION * m.f0)
    assert v == pytest.approx(f / (m.h * 0.9))


def test_nonpositive_width_rejected():
    m = FlowModel()
    with pytest.raises(ValueError):
        speed_for_width(m, 0.0)
    with pytest.raises(ValueError):
        speed_for_width(m, -0.4)


@given(w1=st.floats(0.1, 0.8), w2=st.floats(0.1, 0.8),
       k=st.floats(0.0, 1.2))
def test_speed_decreases_with_width(w1, w2, k):
    m = FlowModel(v0=30.0, w0=0.4, h=0.1, k=k, clamp_min_flow=True)
    lo, hi = sorted((w1, w2))
    assert speed_for_width(m, hi)[0] <= speed_for_width(m, lo)[0] + 1e-9
