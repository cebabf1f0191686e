"""Tests for gas-state conversions and hodograph coefficient functions."""

import math

import numpy as np
import pytest

from sonic_patch.errors import DomainError
from sonic_patch.gas import (
    AngleState,
    GasParams,
    angles_from_velocity,
    char_shift_s,
    char_shift_s_exact,
    char_shift_table,
    char_slope_lambda,
    coefficient_F,
    degenerate_layer_width,
    dxi_dvarpi,
    eigenvalues,
    eigenvalues_from_velocity,
    growth_constant,
    lambda_bracket,
    sound_speed,
    velocity_from_angles,
    xi_of_varpi,
)


@pytest.fixture
def gas():
    return GasParams(gamma=1.4, bernoulli=6.0)


class TestGasParams:
    """Tests for gas constants."""

    def test_kappa_derived(self, gas):
        """kappa should be (gamma - 1)/2."""
        assert gas.kappa == pytest.approx(0.2)

    def test_sonic_speed(self, gas):
        """Sonic speed for B0 = 6 should be 1."""
        assert gas.sonic_speed == pytest.approx(1.0)

    @pytest.mark.parametrize(
        "kwargs,match",
        [
            ({"gamma": 1.0}, "gamma"),
            ({"bernoulli": 0.0}, "bernoulli"),
            ({"entropy_const": -1.0}, "entropy_const"),
        ],
    )
    def test_invalid_values_rejected(self, kwargs, match):
        """Out-of-range constants should raise ValueError naming the field."""
        with pytest.raises(ValueError, match=match):
            GasParams(**kwargs)


class TestAnglesFromVelocity:
    """Tests for velocity to angle conversion."""

    def test_hand_evaluated_state(self, gas):
        """(1.3, 0) should give c = 0.928440 and M = 1.3 / sqrt(0.862) = 1.400199."""
        state = angles_from_velocity(1.3, 0.0, gas)
        assert sound_speed(1.3, gas) == pytest.approx(0.928440, abs=1e-6)
        assert state.mach == pytest.approx(1.400199, abs=1e-6)
        assert state.theta == 0.0

    def test_sonic_state(self, gas):
        """q = c should give omega = pi/2 and varpi = 1."""
        state = angles_from_velocity(1.0, 0.0, gas)
        assert state.varpi == pytest.approx(1.0)
        assert state.omega == pytest.approx(math.pi / 2)
        assert state.mach == pytest.approx(1.0)

    def test_reflection_negates_theta(self, gas):
        """(u, -v) should negate theta and keep omega."""
        up = angles_from_velocity(1.2, 0.5, gas)
        down = angles_from_velocity(1.2, -0.5, gas)
        assert down.theta == pytest.approx(-up.theta)
        assert down.omega == pytest.approx(up.omega)

    def test_subsonic_rejected(self, gas):
        """q < c should be rejected as subsonic."""
        with pytest.raises(DomainError, match="subsonic state"):
            angles_from_velocity(0.5, 0.0, gas)

    def test_non_physical_rejected(self, gas):
        """q^2 >= B0 should be rejected."""
        with pytest.raises(DomainError, match="non-physical"):
            angles_from_velocity(3.0, 0.0, gas)

    def test_angle_state_invariants(self, gas):
        """mach * varpi = 1 and alpha - beta = 2 omega."""
        state = angles_from_velocity(1.1, 0.7, gas)
        assert state.mach * state.varpi == pytest.approx(1.0)
        assert state.alpha - state.beta == pytest.approx(2.0 * state.omega)


class TestVelocityFromAngles:
    """Tests for angle to velocity conversion."""

    def test_sonic_unit_speed(self, gas):
        """theta = 0, varpi = 1 should give c = u = 1, v = 0."""
        state = velocity_from_angles(0.0, 1.0, gas)
        assert state.c == pytest.approx(1.0)
        assert state.u == pytest.approx(1.0)
        assert state.v == pytest.approx(0.0)

    def test_inverse_of_hand_state(self, gas):
        """M = 1.400199 at theta = 0 should recover (1.3, 0)."""
        varpi = angles_from_velocity(1.3, 0.0, gas).varpi
        state = velocity_from_angles(0.0, varpi, gas)
        assert state.u == pytest.approx(1.3, rel=1e-12)
        assert state.v == pytest.approx(0.0, abs=1e-14)

    def test_round_trip_and_bernoulli(self, gas):
        """Random supersonic states should round-trip and keep Bernoulli to 1e-12."""
        rng = np.random.default_rng(0)
        for _ in range(200):
            theta = rng.uniform(-math.pi, math.pi)
            varpi = rng.uniform(0.2, 1.0)
            vel = velocity_from_angles(theta, varpi, gas)
            assert vel.bernoulli_defect(gas) < 1e-12
            back = angles_from_velocity(vel.u, vel.v, gas)
            assert back.theta == pytest.approx(theta, rel=1e-12, abs=1e-12)
            assert back.varpi == pytest.approx(varpi, rel=1e-12)

    def test_density_recovered(self, gas):
        """rho should satisfy c^2 = A gamma rho^(gamma - 1)."""
        state = velocity_from_angles(0.3, 0.8, gas)
        assert state.c**2 == pytest.approx(gas.entropy_const * gas.gamma * state.rho ** (gas.gamma - 1.0))

    @pytest.mark.parametrize("varpi", [0.0, -0.1, 1.5])
    def test_varpi_out_of_range(self, gas, varpi):
        """varpi outside (0, 1] should raise DomainError."""
        with pytest.raises(DomainError):
            velocity_from_angles(0.0, varpi, gas)


class TestEigenvalues:
    """Tests for characteristic slopes."""

    def test_mach_sqrt2(self, gas):
        """theta = 0, omega = pi/4 should give slopes +1 and -1."""
        plus, minus = eigenvalues(AngleState.from_angles(0.0, math.sqrt(0.5), gas))
        assert plus.value == pytest.approx(1.0)
        assert minus.value == pytest.approx(-1.0)

    def test_sonic_families_coincide(self, gas):
        """At omega = pi/2 both directions should be vertical."""
        plus, minus = eigenvalues(AngleState.from_angles(0.0, 1.0, gas))
        assert plus.vertical and minus.vertical

    def test_vertical_is_tagged_not_infinite(self, gas):
        """A vertical characteristic should be tagged with value nan."""
        plus, _ = eigenvalues(AngleState.from_angles(math.pi / 4, math.sqrt(0.5), gas))
        assert plus.vertical
        assert math.isnan(plus.value)

    def test_quotient_form_agrees(self, gas):
        """tan(theta +- omega) should match the velocity quotient form to 1e-10."""
        rng = np.random.default_rng(1)
        checked = 0
        for _ in range(1000):
            theta = rng.uniform(-1.2, 1.2)
            varpi = rng.uniform(0.3, 0.99)
            vel = velocity_from_angles(theta, varpi, gas)
            plus, minus = eigenvalues(AngleState.from_angles(theta, varpi, gas))
            q_plus, q_minus = eigenvalues_from_velocity(vel.u, vel.v, vel.c)
            if plus.vertical or minus.vertical or q_plus.vertical or q_minus.vertical:
                continue
            if max(abs(plus.value), abs(minus.value)) > 1e4:
                continue
            assert abs(plus.value - q_plus.value) / (1 + abs(plus.value)) < 1e-10
            assert abs(minus.value - q_minus.value) / (1 + abs(minus.value)) < 1e-10
            checked += 1
        assert checked > 900


class TestCoefficients:
    """Tests for F, lambda and s."""

    def test_F_values(self, gas):
        """F(0) = kappa + 1 and F(0.5) = 0.7125."""
        assert coefficient_F(0.0, gas) == pytest.approx(1.2)
        assert coefficient_F(0.5, gas) == pytest.approx(0.7125)

    def test_F_rejects_t_one(self, gas):
        """t = 1 lies outside the domain."""
        with pytest.raises(DomainError):
            coefficient_F(1.0, gas)

    def test_lambda_values(self, gas):
        """lambda(0) = 0 and lambda(0.5) = 0.303868."""
        assert char_slope_lambda(0.0, gas) == 0.0
        assert char_slope_lambda(0.5, gas) == pytest.approx(0.303868, abs=1e-6)

    def test_lambda_bracket(self, gas):
        """lambda(t)/t^2 should stay inside the bracket on (0, t0]."""
        k_lo, k_hi = lambda_bracket(0.5, gas)
        assert k_lo == pytest.approx(0.833333, abs=1e-6)
        assert k_hi == pytest.approx(5.773503, abs=1e-6)
        t = np.linspace(1e-3, 0.5, 200)
        ratio = char_slope_lambda(t, gas) / t**2
        assert np.all(ratio >= k_lo) and np.all(ratio <= k_hi)
        assert char_slope_lambda(0.5, gas) / 0.25 == pytest.approx(1.21547, abs=1e-5)

    def test_s_reference_value(self, gas):
        """s(0.5) should be 0.0434027 and agree with the closed form."""
        assert char_shift_s(0.0, gas) == 0.0
        assert char_shift_s(0.5, gas) == pytest.approx(0.0434027, abs=1e-7)
        assert char_shift_s(0.5, gas) == pytest.approx(char_shift_s_exact(0.5, gas), abs=1e-12)

    def test_s_table_matches_closed_form_and_increases(self, gas):
        """Accumulated quadrature should match the closed form and increase strictly."""
        ts = np.linspace(0.0, 0.6, 31)
        table = char_shift_table(ts, gas)
        assert np.max(np.abs(table - char_shift_s_exact(ts, gas))) < 1e-11
        assert np.all(np.diff(table) > 0.0)

    def test_xi_values(self, gas):
        """Xi(1) = -0.227902 and dXi/dvarpi(1) = 0.416667."""
        assert xi_of_varpi(1.0, gas) == pytest.approx(-0.227902, abs=1e-6)
        assert dxi_dvarpi(1.0, gas) == pytest.approx(0.416667, abs=1e-6)

    def test_xi_derivative_matches_difference(self, gas):
        """Centred differences of Xi should match dXi/dvarpi to 1e-6."""
        h = 1e-5
        for varpi in (0.3, 0.6, 0.9):
            fd = (xi_of_varpi(varpi + h, gas) - xi_of_varpi(varpi - h, gas)) / (2 * h)
            assert fd == pytest.approx(dxi_dvarpi(varpi, gas), abs=1e-6)

    def test_bound_constants(self, gas):
        """k0 = (kappa + 2)/(kappa (1 - t0^2)) and eps0 = min(t0, 1/(4 k0))."""
        k0 = growth_constant(0.5, gas)
        assert k0 == pytest.approx(2.2 / (0.2 * 0.75))
        assert degenerate_layer_width(0.5, gas) == pytest.approx(1.0 / (4.0 * k0))
