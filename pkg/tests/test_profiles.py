import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trigauss import CorrelationProfile
from trigauss.errors import ProfileError


class TestConstruction:
    def test_families(self):
        assert CorrelationProfile.constant(2.0).kind == "constant"
        assert CorrelationProfile.linear(1.0, -0.5).kind == "linear"
        assert CorrelationProfile.power(1.0, 1.0, 2.5).kind == "power"
        assert CorrelationProfile.tabulated([(0, 1), (1, 2)]).kind == "tabulated"

    @pytest.mark.parametrize("bad", [
        lambda: CorrelationProfile.constant(0.0),
        lambda: CorrelationProfile.constant(-1.0),
        lambda: CorrelationProfile.linear(1.0, -1.0),       # m(1) = 0
        lambda: CorrelationProfile.linear(1.0, -1.5),       # m(1) < 0
        lambda: CorrelationProfile.power(1.0, 1.0, 0.0),    # gamma <= 0
        lambda: CorrelationProfile.power(1.0, 1.0, -2.0),
        lambda: CorrelationProfile.power(float("nan"), 1.0, 1.0),
        lambda: CorrelationProfile(kind="constant", alpha=1.0, beta=0.5),
        lambda: CorrelationProfile(kind="linear", alpha=1.0, beta=0.5, gamma=2.0),
        lambda: CorrelationProfile(kind="nope"),
    ])
    def test_invalid_parametric(self, bad):
        with pytest.raises(ProfileError):
            bad()

    @pytest.mark.parametrize("knots", [
        [(0.0, 1.0)],                                # too few
        [(0.0, 1.0), (0.0, 2.0)],                    # not strictly increasing
        [(0.1, 1.0), (1.0, 2.0)],                    # misses t=0
        [(0.0, 1.0), (0.9, 2.0)],                    # misses t=1
        [(0.0, 1.0), (1.0, 0.0)],                    # nonpositive m
        [(0.0, 1.0), (1.0, float("inf"))],           # non-finite
    ])
    def test_invalid_tables(self, knots):
        with pytest.raises(ProfileError):
            CorrelationProfile.tabulated(knots)

    def test_immutability(self):
        p = CorrelationProfile.constant(1.0)
        with pytest.raises(AttributeError):
            p.alpha = 2.0


class TestEvaluation:
    def test_parametric_values(self):
        assert CorrelationProfile.constant(2.0).m(0.7) == 2.0
        assert CorrelationProfile.linear(1.0, 1.0).m(0.25) == pytest.approx(1.25)
        assert CorrelationProfile.power(1.0, 2.0, 2.0).m(0.5) == pytest.approx(1.5)

    def test_array_evaluation(self):
        t = np.linspace(0, 1, 11)
        out = CorrelationProfile.linear(1.0, 1.0).m(t)
        np.testing.assert_allclose(out, 1.0 + t)
        assert isinstance(CorrelationProfile.constant(1.0).m(0.5), float)

    def test_tabulated_interpolation(self):
        p = CorrelationProfile.tabulated([(0.0, 1.0), (0.5, 3.0), (1.0, 2.0)])
        assert p.m(0.25) == pytest.approx(2.0)
        assert p.m(0.75) == pytest.approx(2.5)
        assert p.m(0.0) == 1.0 and p.m(1.0) == 2.0

    def test_domain_check(self):
        p = CorrelationProfile.constant(1.0)
        for t in (-0.1, 1.1):
            with pytest.raises(ProfileError):
                p.m(t)
        with pytest.raises(ProfileError):
            p.m(np.array([0.5, 2.0]))


class TestShape:
    def test_is_monotone(self):
        assert CorrelationProfile.constant(1.0).is_monotone
        assert CorrelationProfile.linear(2.0, -1.0).is_monotone
        assert CorrelationProfile.power(1.0, 3.0, 0.5).is_monotone
        up = CorrelationProfile.tabulated([(0, 1), (0.5, 2), (1, 3)])
        down = CorrelationProfile.tabulated([(0, 3), (0.5, 2), (1, 1)])
        wiggle = CorrelationProfile.tabulated([(0, 1), (0.5, 3), (1, 2)])
        assert up.is_monotone and down.is_monotone and not wiggle.is_monotone

    def test_m_range(self):
        assert CorrelationProfile.linear(1.0, 1.0).m_range() == (1.0, 2.0)
        assert CorrelationProfile.linear(2.0, -1.5).m_range() == (0.5, 2.0)
        tab = CorrelationProfile.tabulated([(0, 1), (0.5, 5), (1, 2)])
        assert tab.m_range() == (1.0, 5.0)

    def test_describe(self):
        assert CorrelationProfile.constant(2.0).describe() == {
            "kind": "constant", "alpha": 2.0}
        d = CorrelationProfile.power(1.0, 2.0, 0.5).describe()
        assert d == {"kind": "power", "alpha": 1.0, "beta": 2.0, "gamma": 0.5}

    @given(st.floats(0.01, 10), st.floats(-0.5, 10), st.floats(0.05, 6))
    @settings(max_examples=60, deadline=None)
    def test_positive_on_unit_interval(self, alpha, beta, gamma):
        if alpha + beta <= 0:
            return
        p = CorrelationProfile.power(alpha, beta, gamma)
        t = np.linspace(0, 1, 101)
        m = p.m(t)
        assert np.all(m > 0)
        # monotone family: the range is attained at the endpoints
        lo, hi = p.m_range()
        assert lo == pytest.approx(min(m[0], m[-1]))
        assert hi == pytest.approx(max(m[0], m[-1]))
