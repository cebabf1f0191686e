"""Tests for the verification suite: Hoelder fits, exact-flow oracles and refinement studies."""

import math

import numpy as np
import pytest

from sonic_patch.auto_import import ensure_registered
from sonic_patch.gas import GasParams
from sonic_patch.registry import get_preset
from sonic_patch.verify import (
    analytic_oracle_residuals,
    exact_flows,
    holder_fit,
    run_oracle_checks,
    self_test,
)
from sonic_patch.verify.convergence import MIN_ORDER, convergence_study, observed_orders
from sonic_patch.verify.oracle import derive_seed

ensure_registered()


@pytest.fixture(scope="module")
def gas():
    return GasParams(gamma=1.4, bernoulli=6.0)


class TestHolderFit:
    """Tests for the log-log Hoelder regression."""

    def test_lipschitz_data(self):
        """Linear data should fit an exponent of 1."""
        p = np.linspace(0.0, 1.0, 257)
        fit = holder_fit(p, 2.0 * p + 1.0)
        assert fit.exponent == pytest.approx(1.0, abs=0.01)

    def test_cube_root_data(self):
        """t^(1/3) should fit 0.333 +- 0.01."""
        p = np.linspace(0.0, 1.0, 1025)
        fit = holder_fit(p, np.cbrt(p), predicted_exponent=1.0 / 3.0)
        assert fit.exponent == pytest.approx(1.0 / 3.0, abs=0.01)
        assert fit.predicted == pytest.approx(1.0 / 3.0)

    def test_unsorted_positions(self):
        """Sample order should not matter."""
        rng = np.random.default_rng(3)
        p = np.linspace(0.0, 1.0, 129)
        perm = rng.permutation(p.size)
        assert holder_fit(p[perm], np.cbrt(p)[perm]).exponent == pytest.approx(
            holder_fit(p, np.cbrt(p)).exponent
        )

    def test_too_few_samples(self):
        """Fewer than 16 samples should raise ValueError."""
        with pytest.raises(ValueError, match="at least 16"):
            holder_fit(np.arange(10.0), np.arange(10.0))

    def test_constant_data_undefined(self):
        """All-equal values should give an undefined exponent with a reason."""
        fit = holder_fit(np.linspace(0.0, 1.0, 64), np.ones(64))
        assert not fit.defined
        assert math.isnan(fit.exponent)
        assert fit.reason == "all increments vanish"
        assert fit.to_dict()["exponent"] is None

    def test_length_mismatch(self):
        """Positions and values must have the same length."""
        with pytest.raises(ValueError, match="differ in length"):
            holder_fit(np.arange(20.0), np.arange(19.0))


class TestOracle:
    """Tests for the exact-flow oracles."""

    def test_seeds_are_stable(self):
        """Derived seeds depend only on key and seed."""
        assert derive_seed("vortex", 0) == derive_seed("vortex", 0)
        assert derive_seed("vortex", 0) != derive_seed("source", 0)

    def test_fields_are_supersonic(self, gas):
        """Every sample of every family should lie strictly inside the supersonic range."""
        for flow in exact_flows(gas):
            fld = flow.field(500, seed=1)
            q = np.hypot(fld.u, fld.v)
            assert np.all(q > fld.c)
            assert np.all(q * q < gas.bernoulli)

    def test_self_test(self, gas):
        """Bernoulli and irrotationality should hold to 1e-10."""
        for name, values in self_test(gas).items():
            assert values["bernoulli"] < 1e-10, name
            assert values["irrotational"] < 1e-10, name

    def test_analytic_residuals(self, gas):
        """Both characteristic forms should vanish to 1e-8 on 1000 samples per family."""
        reports = run_oracle_checks(gas, n=1000, seed=0)
        assert {r.family for r in reports} == {"vortex", "source"}
        for report in reports:
            assert report.passed, report.residuals
            assert report.n_samples + report.n_skipped == 1000
            for name in ("velocity_plus", "velocity_minus", "angle_plus", "angle_minus"):
                assert report.residuals[name] < 1e-8

    def test_commutator_second_order(self, gas):
        """Halving the difference step should cut the commutator residual about fourfold."""
        for report in run_oracle_checks(gas, n=200, seed=2):
            assert 3.0 < report.commutator["ratio"] < 5.0, report.family

    def test_subsonic_samples_skipped(self, gas):
        """Samples outside the sonic circle should be skipped, not checked."""
        flow = exact_flows(gas)[0]
        fld = flow.field(100, seed=0, radius_range=(0.9, 1.1))
        report = analytic_oracle_residuals(fld, gas)
        assert report.n_skipped > 0
        assert report.n_samples + report.n_skipped == 100
        assert report.commutator == {}


class TestConvergence:
    """Tests for the refinement study."""

    def test_observed_orders(self):
        """Orders are log2 of successive error ratios."""
        assert observed_orders([4.0, 1.0, 0.25]) == pytest.approx([2.0, 2.0])
        assert math.isnan(observed_orders([1.0, 0.0])[0])

    def test_requires_three_levels(self, gas):
        """Fewer than three refinement levels should raise ValueError."""
        with pytest.raises(ValueError, match=">= 3"):
            convergence_study(get_preset("reference").build(), gas, n_levels=2)

    def test_reference_orders(self, gas):
        """Residual, DE slope and closure defect should converge at order >= 1."""
        table = convergence_study(get_preset("reference").build(), gas, n_levels=3)
        assert table.dts == pytest.approx([4e-3, 2e-3, 1e-3])
        assert table.t_min == pytest.approx(4e-3)
        for metric, orders in table.orders.items():
            assert table.monotone(metric), metric
            assert all(order >= MIN_ORDER for order in orders), (metric, orders)
        assert table.passed, table.failures()
        assert table.to_dict()["passed"] is True
