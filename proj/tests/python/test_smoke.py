"""Smoke tests for the python bindings: each main operation is exercised once
with values cross-checked against the native test suite."""

import math
import os

import pytest

import foulwall as fw


def default_props(diffusivity=3.64e-5):
    return fw.PropertyModel(
        rho_poly=[809.3, 1.542, -0.0030625],
        mu_poly=[0.06711101539444445, -0.0005494060611111111,
                 1.5168722222222221e-06, -1.4055555555555556e-09],
        x_sat_poly=[6.0e-5, -1.2e-7],
        diffusivity=diffusivity,
    )


def test_wall_law_values():
    assert fw.u_plus(0.0) == 0.0
    assert fw.u_plus(11.4) == pytest.approx(8.95353906273091, rel=1e-13)
    assert fw.nu_t_plus(100.0) == pytest.approx(42.0)
    p = fw.WallLawParams()
    inner = fw.u_plus(p.y_star_plus)
    outer = fw.u_plus(p.y_star_plus * (1 + 1e-15))
    assert abs(inner - outer) < 1e-12


def test_friction_velocity_round_trip():
    nu = 8e-7
    u_tau0 = 0.0123
    y = 30.0 * nu / u_tau0
    u_known = u_tau0 * fw.u_plus(30.0)
    assert fw.invert_friction_velocity(u_known, y, nu) == pytest.approx(u_tau0, rel=1e-8)


def test_properties_and_fractions():
    props = default_props()
    at = props.at(303.0)
    assert at.rho == pytest.approx(995.3609375, rel=1e-12)
    assert at.nu == pytest.approx(at.mu / at.rho)
    with pytest.raises(ValueError):
        props.at(500.0)
    z = fw.mass_to_mole_fractions([4.197e-4, 1 - 4.197e-4], [100.09e-3, 18.015e-3])
    assert z[0] == pytest.approx(7.55669751857055e-5, rel=1e-10)


def test_logistic_and_clamp():
    p = fw.LogisticParams(plateau=4e-4, threshold_temperature=340.0, steepness=60.0)
    assert fw.logistic_interface_fraction(340.0, p) == pytest.approx(2e-4, rel=1e-12)
    vp = fw.VelocityPolynomials(
        plateau_coeffs=[4.3e-4, -6.0e-5, 1.0e-5, 0.0],
        threshold_coeffs=[334.0, 16.0, -8.0],
        steepness_coeffs=[55.0, 20.0, -10.0],
        u_min=0.15, u_max=0.45,
    )
    x_sat = 1.8e-5
    assert fw.interface_mass_fraction(380.0, 0.2, vp, x_sat) == x_sat
    assert fw.interface_mass_fraction(300.0, 0.2, vp, x_sat) > 4e-4


def test_logistic_fit_round_trip():
    truth = fw.LogisticParams(plateau=4.1e-4, threshold_temperature=338.0, steepness=55.0)
    T = [300.0 + 2 * i for i in range(40)]
    X = [fw.logistic_interface_fraction(t, truth) for t in T]
    fit = fw.fit_logistic(T, X)
    assert fit.params.plateau == pytest.approx(truth.plateau, rel=1e-3)
    assert fit.params.threshold_temperature == pytest.approx(338.0, rel=1e-3)


def test_two_step_model():
    p = fw.TwoStepParams(gas_constant=8.3145)
    assert fw.rate_constant(343.15, p) == pytest.approx(0.480116369005846, rel=1e-10)
    p_full = fw.TwoStepParams(mass_transfer_coeff=1e-4)
    full = fw.deposition_full(1.1, 1.0, 0.01, 8e-4, 1000.0, 343.15, p_full)
    reduced = fw.deposition_reduced(1.1, 1.0, 0.01, 8e-4, 1000.0, 343.15, p_full)
    assert 0 <= full.j_dep <= min(1e-4 * 0.1, reduced.j_dep) * (1 + 1e-12)
    assert fw.deposition_reduced(0.9, 1.0, 0.01, 8e-4, 1000.0, 343.15, p_full).undersaturated


def test_mesh_and_wall_cell_solve():
    mesh = fw.build_mesh(2.34e-3, n_nodes=300, first_node_ratio=1e-4)
    assert mesh.y[0] == pytest.approx(2.34e-7, rel=1e-13)
    assert len(mesh.y) == 300

    bc = fw.WallCellBC()
    bc.T_wall, bc.T_bulk = 345.0, 303.0
    bc.u_bulk, bc.q_wall = 0.0917, 52500.0
    bc.u_tau, bc.y_bulk = 0.0074, 2.3417e-3
    bc.X_bulk = [4.197e-4, 1 - 4.197e-4]
    bc.wall_bc = [
        fw.SpeciesWallBc(kind=fw.WallBcKind.dirichlet, value=1.0e-4),
        fw.SpeciesWallBc(kind=fw.WallBcKind.zero_gradient),
    ]
    result = fw.solve_wall_cell(bc, default_props())
    assert result.j_dep[0] > 0.0
    assert abs(result.j_dep[1]) < 1e-12 * result.j_dep[0]
    assert result.residuals.energy_flux_deviation < 1e-6
    assert max(result.residuals.species_flux_deviation) < 1e-6
    # profiles are monotone between their boundary values
    temps = result.temperature
    assert all(t2 <= t1 + 1e-12 for t1, t2 in zip(temps, temps[1:]))


def test_channel_march_and_frozen_round_trip(tmp_path):
    cfg = fw.ChannelConfig()
    cfg.inlet_velocity = 0.2
    cfg.inlet_mass_fractions = [4.197e-4, 1 - 4.197e-4]
    field = fw.march_channel(cfg, default_props())
    assert len(field.stations) == cfg.n_axial
    assert all(st.T_wall > st.T_bulk for st in field.stations)

    path = tmp_path / "frozen.txt"
    fw.save_frozen(field, path)
    loaded = fw.load_frozen(path)
    assert [st.u_tau for st in loaded.stations] == [st.u_tau for st in field.stations]


def test_area_average():
    assert fw.area_averaged_rate([4.0, 0.0], [1.0, 3.0]) == pytest.approx(1.0)


def test_run_scenario(tmp_path):
    scenario_dir = os.environ.get("FOULWALL_SCENARIO_DIR")
    if not scenario_dir:
        pytest.skip("FOULWALL_SCENARIO_DIR not set")
    config = os.path.join(scenario_dir, "sweep_u0p20.json")
    summary = fw.run_scenario(config, out=tmp_path / "out", jobs=2)
    assert summary.n_cells == 40
    assert summary.area_averaged["wall_function"] > 0.0
    assert (tmp_path / "out" / "per_cell_wall_function.csv").exists()
    assert (tmp_path / "out" / "manifest.json").exists()
