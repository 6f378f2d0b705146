"""Smoke tests for the python module against the C++ core."""

import math

import pytest

import qbl


def test_triangle_spectrum():
    g = qbl.generate_er(3, 1.0, 1)
    assert g.edge_count == 3
    spectrum, table = qbl.enumerate_spectrum(g, want_table=True)
    assert spectrum.density() == {-1: 6, 3: 2}
    assert spectrum.c_min == -1
    assert spectrum.ground_degeneracy == 6
    assert table.cost_of(0) == 3  # all spins +1


def test_cut_cost_and_flip_symmetry():
    g = qbl.generate_er(6, 0.5, 9)
    spins = [1, -1, 1, 1, -1, 1]
    flipped = [-s for s in spins]
    assert qbl.cut_cost(g, spins) == qbl.cut_cost(g, flipped)
    assert qbl.cut_cost(g, [1] * 6) == g.edge_count


def test_uniform_state_measures_density():
    g = qbl.generate_er(8, 0.5, 4)
    spectrum, table = qbl.enumerate_spectrum(g, want_table=True)
    state = qbl.init_plus(8)
    dist = qbl.measure_distribution(state, table)
    for cost, count in spectrum.density().items():
        assert dist.mass_at(cost) == pytest.approx(count / 2**8, abs=1e-12)
    assert qbl.expected_cost(state, table) == pytest.approx(0.0, abs=1e-12)
    assert qbl.shannon_entropy(state) == pytest.approx(8.0, abs=1e-10)


def test_optimization_improves_the_ratio():
    g = qbl.generate_er(8, 0.5, 21)
    init = qbl.rescale_sk(2, g.average_degree)
    report = qbl.optimize_angles(g, init)
    assert report.final_ratio >= report.initial_ratio - 1e-12
    assert report.final_cost <= report.initial_cost + 1e-9
    assert report.final_ratio > 0.8


def test_temperature_fit_roundtrip():
    g = qbl.generate_er(10, 0.5, 33)
    spectrum, _ = qbl.enumerate_spectrum(g)
    synthetic = qbl.model_cost_distribution(spectrum, qbl.Temperature.finite(2.5))
    fit = qbl.fit_temperature(synthetic, spectrum)
    assert not fit.temperature.infinite
    assert fit.temperature.value == pytest.approx(2.5, rel=1e-6)
    assert fit.tvd < 1e-10


def test_heuristic_temperature_value():
    t = qbl.heuristic_temperature(-29, 23, 2)
    assert t.value == pytest.approx(2.186, abs=2e-3)


def test_boltzmann_entropy_and_solver():
    g = qbl.generate_er(10, 0.5, 17)
    spectrum, _ = qbl.enumerate_spectrum(g)
    t = qbl.solve_boltzmann_temperature(spectrum, -0.3 * abs(spectrum.c_min))
    dist = qbl.model_cost_distribution(spectrum, t)
    assert dist.mean() == pytest.approx(-0.3 * abs(spectrum.c_min), rel=1e-6)
    s = qbl.boltzmann_entropy_bits(spectrum, t)
    assert 0.0 < s < spectrum.n
    assert qbl.fluctuation_entropy_bits(s) == pytest.approx(s - 0.60997, abs=1e-4)


def test_tiny_ensemble_record():
    config = qbl.EnsembleConfig()
    config.sizes = [qbl.SizeSpec(8, 1)]
    config.layers = [2]
    config.thermo = True
    config.random_draws = 4
    records = qbl.run_ensemble(config)
    assert len(records) == 1
    rec = records[0]
    assert rec.error == ""
    assert 0.0 <= rec.r <= 1.0
    assert 0.0 <= rec.r_exp <= 1.0
    assert rec.s_qaoa <= rec.s_boltzmann + 1e-6
    assert not math.isnan(rec.tvd)


def test_quantiles_and_layer_estimate():
    assert qbl.quantiles([1.0, 2.0, 3.0, 4.0], [0.5]) == [2.5]
    estimate = qbl.layers_for_target(100.0, 0.1, 2.75, 0.502)
    assert estimate == pytest.approx(58.9, abs=0.2)
    with pytest.raises(qbl.QblError):
        qbl.layers_for_target(100.0, 3.0, 2.75, 0.502)


def test_error_surface():
    with pytest.raises(qbl.QblError):
        qbl.generate_er(1, 0.5, 0)
    with pytest.raises(qbl.QblError):
        qbl.heuristic_temperature(-1, 100, 1)
