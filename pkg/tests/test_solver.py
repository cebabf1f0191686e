"""Tests for the characteristic mesh, marching, sonic-line closure and diagnostics."""

import numpy as np
import pytest

from sonic_patch.auto_import import ensure_registered
from sonic_patch.boundary import compute_trace, region_corners
from sonic_patch.config import SolverParams
from sonic_patch.errors import MeshError
from sonic_patch.gas import GasParams, char_shift_s_exact
from sonic_patch.registry import get_preset
from sonic_patch.solver import (
    build_mesh,
    close_sonic_line,
    diagnostics,
    march,
    rhs_minus,
    rhs_plus,
    transport_rhs,
)
from sonic_patch.verify.manufactured import manufactured_order, manufactured_problem

ensure_registered()


@pytest.fixture(scope="module")
def gas():
    return GasParams(gamma=1.4, bernoulli=6.0)


@pytest.fixture(scope="module")
def trace(gas):
    return compute_trace(get_preset("reference").build(), gas)


@pytest.fixture(scope="module")
def geometry(trace, gas):
    return region_corners(trace, gas)


def _solve(trace, geometry, gas, **params):
    mesh = build_mesh(trace, geometry, SolverParams(**params))
    marched = march(mesh, trace, gas)
    return marched, close_sonic_line(marched, trace, gas)


@pytest.fixture(scope="module")
def reference_run(trace, geometry, gas):
    return _solve(trace, geometry, gas, dt=2e-3)


class TestKernel:
    """Tests for the right-hand sides."""

    def test_equal_components_share_rhs(self, gas):
        """With U = V the singular terms vanish and both sides equal -(kappa+2-2t^2)/F U t."""
        t = np.array([0.1, 0.3, 0.5])
        assert np.allclose(rhs_plus(t, 1.0, 1.0, gas), rhs_minus(t, 1.0, 1.0, gas))
        assert float(rhs_plus(0.5, 1.0, 1.0, gas)) == pytest.approx(-1.7 / 0.7125 * 0.5)

    def test_singular_terms_cancel_in_sum(self, gas):
        """rhs_plus + rhs_minus should cancel every (U - V) term."""
        t, u, v = 0.2, 1.3, 0.9
        total = rhs_plus(t, u, v, gas) + rhs_minus(t, u, v, gas)
        full = (gas.kappa + 2.0 - 2.0 * t * t) / ((1 - t * t) * (gas.kappa + 1 - t * t))
        assert float(total) == pytest.approx(-full * (u + v) * t)

    def test_transport_regular_at_sonic_line(self, gas):
        """At t = 0 the transport rhs reduces to -(2/(kappa + 1)) S."""
        assert float(transport_rhs(0.0, 1.0, 1.0, 0.1, gas)) == pytest.approx(-2.0 / 1.2 * 0.1)


class TestMesh:
    """Tests for the characteristic mesh."""

    def test_layout(self, reference_run, trace, geometry):
        """Levels from t0 down to the sonic row, nan above the diagonal."""
        mesh = reference_run[1].mesh
        assert mesh.t[0] == pytest.approx(trace.t0)
        assert mesh.t[-1] == 0.0
        assert np.all(np.diff(mesh.t) < 0.0)
        assert np.isnan(mesh.r[0, 1])
        assert mesh.n_nodes == int(np.count_nonzero(np.isfinite(mesh.r)))

    def test_first_characteristic_is_r_check(self, reference_run, geometry):
        """Characteristic 0 should follow r_check from E' to D'."""
        mesh = reference_run[1].mesh
        t, r = mesh.characteristic(0)
        assert np.allclose(r, geometry.r_check(t), atol=1e-11)
        assert r[-1] == pytest.approx(geometry.r_star, abs=1e-11)

    def test_diagonal_on_wall_image(self, reference_run, trace):
        """Each characteristic's foot should lie on the wall image."""
        mesh = reference_run[1].mesh
        for k in (1, 20, mesh.last_marched):
            assert mesh.r[k, k] == pytest.approx(trace.r_tilde(float(mesh.t[k])), abs=1e-12)
        assert mesh.r[-1, -1] == pytest.approx(0.0, abs=1e-14)

    def test_nodes_follow_invariant_labels(self, reference_run, gas):
        """r - s(t) should be constant along each characteristic."""
        mesh = reference_run[1].mesh
        t, r = mesh.characteristic(5)
        labels = r - char_shift_s_exact(t, gas)
        assert np.ptp(labels) < 1e-10
        assert np.all(np.diff(mesh.xi) < 0.0)

    def test_t_min_above_t0(self, trace, geometry):
        """t_min >= t0 should raise MeshError."""
        with pytest.raises(MeshError, match="below t0"):
            build_mesh(trace, geometry, SolverParams(dt=0.4, t_min=0.4))

    def test_too_few_levels(self, trace, geometry):
        """A step leaving fewer than three levels should raise MeshError."""
        with pytest.raises(MeshError, match="at least 3"):
            build_mesh(trace, geometry, SolverParams(dt=0.15, t_min=0.15))


class TestMarch:
    """Tests for the marched (U_bar, V_bar) field."""

    @pytest.mark.parametrize("dt", [4e-3, 2e-3, 1e-3])
    def test_positive_and_bounded(self, trace, geometry, gas, dt):
        """U_bar, V_bar should stay positive and inside [m0_bar/2, 2 e^k0 M0_bar]."""
        marched, _ = _solve(trace, geometry, gas, dt=dt)
        assert marched.positive
        assert marched.n_bound_violations == 0, marched.bound_violations[:3]

    def test_wall_values_seeded(self, reference_run, trace):
        """Diagonal nodes should carry the wall data."""
        marched, _ = reference_run
        mesh = marched.mesh
        k = 30
        data = trace.data_at(np.array([mesh.feet_x[k]]))
        assert marched.u_bar[k, k] == pytest.approx(float(data["a_bar"][0]))
        assert marched.v_bar[k, k] == pytest.approx(float(data["b_bar"][0]))

    def test_sonic_row_left_open(self, reference_run):
        """March should leave the sonic row for closure."""
        marched, _ = reference_run
        assert not marched.closed
        assert np.all(np.isnan(marched.u_bar[-1, :]))

    def test_params_override(self, trace, geometry, gas):
        """Explicit params should override the mesh's interpolation order."""
        mesh = build_mesh(trace, geometry, SolverParams(dt=4e-3))
        cubic = march(mesh, trace, gas)
        linear = march(mesh, trace, gas, SolverParams(dt=4e-3, interp_order=1))
        assert not np.array_equal(cubic.u_bar[mesh.mask], linear.u_bar[mesh.mask])
        scale = float(np.nanmax(np.abs(cubic.u_bar)))
        assert np.nanmax(np.abs(cubic.u_bar - linear.u_bar)) < 1e-3 * scale


class TestClosure:
    """Tests for the sonic-line closure."""

    def test_sonic_row_filled(self, reference_run, trace):
        """U_bar = V_bar on t = 0, with the wall value at P'."""
        _, closed = reference_run
        assert closed.closed
        assert np.array_equal(closed.u_bar[-1, :], closed.v_bar[-1, :])
        assert closed.u_bar[-1, -1] == pytest.approx(float(trace.samples["a_bar"][0]))
        assert np.all(np.isfinite(closed.w_bar[-1, :]))

    def test_input_not_modified(self, reference_run):
        """Closure should return a new solution."""
        marched, closed = reference_run
        assert marched.sonic is None
        assert closed is not marched

    def test_degeneracy_and_coalescence(self, reference_run):
        """|U - V| <= C t at every node and the coalescence discrepancy is not flagged."""
        closure = reference_run[1].closure
        assert closure.degeneracy_ok
        assert not closure.flagged
        assert closure.max_discrepancy < closure.tolerance

    def test_closure_defect_decreases(self, trace, geometry, gas):
        """The quotient/transport mismatch at t_min should shrink as dt is refined."""
        defects = [
            _solve(trace, geometry, gas, dt=dt, t_min=4e-3)[1].closure.closure_defect
            for dt in (4e-3, 2e-3, 1e-3)
        ]
        assert defects[0] > defects[1] > defects[2]


class TestDiagnostics:
    """Tests for the diagnostics report."""

    def test_requires_closed_solution(self, reference_run, trace, gas):
        """An open solution should be rejected."""
        with pytest.raises(ValueError, match="closed solution"):
            diagnostics(reference_run[0], trace, gas)

    def test_reference_report(self, reference_run, trace, gas):
        """The reference run should satisfy every hodograph-side bound."""
        report = diagnostics(reference_run[1], trace, gas)
        assert report.passed
        assert report.constants["r_star"] > 0.0
        assert report.constants["eps0"] <= report.constants["t0"]
        assert report.lambda_bracket["ok"]
        assert report.w_bar["sonic_to_wall_ratio"] <= 3.0

    def test_sonic_holder_exponent(self, reference_run, trace, gas):
        """U_bar on the sonic row should be at least C^0.30."""
        fit = diagnostics(reference_run[1], trace, gas).holder["u_bar_sonic"]
        assert fit.defined
        assert fit.exponent >= 0.30


class TestManufactured:
    """Tests for the manufactured-solution order check."""

    def test_exact_pair_coalesces_on_sonic_line(self, gas):
        """U* = V* at t = 0."""
        problem = manufactured_problem(gas)
        r = np.linspace(0.0, 0.02, 5)
        u, v = problem.exact(np.zeros_like(r), r)
        assert np.array_equal(u, v)

    def test_second_order(self, trace, geometry, gas):
        """Halving dt should cut the error by 3.5 to 4.5, and flipped forcing should be detected."""
        result = manufactured_order(trace, geometry, gas)
        assert 3.5 <= result["ratio"] <= 4.5
        assert result["error_flipped_source"] > 2.0 * result["error_coarse"]
