"""End-to-end smoke checks for the python bindings.

The heavy numerics live in the C++ test suites; here we only confirm that the
bound surface is wired correctly: closed forms return the right numbers, the
simulation helpers reproduce them, tables round-trip through manifests, and
the full-model path is reachable.
"""

import json
import math

import pytest

import heraldsim as hs

W3_PAIR_NEGATIVITY = (math.sqrt(5.0) - 1.0) / 6.0


def test_version_is_exposed():
    assert hs.__version__ == "0.1.0"


def test_closed_forms_match_math():
    assert hs.g_optimal(3) == pytest.approx(math.acos(math.sqrt(2.0 / 3.0)), abs=1e-12)
    assert hs.p_max(3) == pytest.approx(4.0 / 27.0, abs=1e-12)
    assert hs.p_max_asymptotic(4) == pytest.approx(math.exp(-1.0) / 4.0, abs=1e-12)
    assert hs.pairwise_negativity_wn(3) == pytest.approx(W3_PAIR_NEGATIVITY, abs=1e-12)

    # resonant heralding: s^2 c^(2(N-1)) with s = sin g, c = cos g
    g = 0.7
    expected = math.sin(g) ** 2 * math.cos(g) ** 4
    assert hs.p_heralding(3, g) == pytest.approx(expected, abs=1e-12)

    amps = hs.local_amplitudes(g, 0.5)
    gt = math.hypot(g, 0.5)
    assert amps.s == pytest.approx(g / gt * math.sin(gt), abs=1e-12)
    assert amps.c_minus.real == pytest.approx(math.cos(gt), abs=1e-12)
    assert amps.c_plus == pytest.approx(amps.c_minus.conjugate(), abs=1e-12)

    eigs = hs.pairwise_pt_eigenvalues(3)
    assert len(eigs) == 4
    assert min(eigs) == pytest.approx(-W3_PAIR_NEGATIVITY, abs=1e-12)


def test_pathway_weights_and_fidelity_law():
    alpha = hs.alpha_weights([0.9, 0.95, 1.0], [0.0, 0.1, -0.1], [0.0, 0.0, 0.0])
    assert len(alpha) == 3
    weights = hs.normalized_pathway_weights(alpha)
    assert sum(weights) == pytest.approx(1.0, abs=1e-12)
    fidelity = hs.fidelity_perturbed(alpha)
    assert 0.0 < fidelity <= 1.0
    # equal amplitudes reach the target exactly
    assert hs.fidelity_perturbed([1.0 + 0.0j] * 3) == pytest.approx(1.0, abs=1e-12)


def test_optimizer_matches_closed_form():
    result = hs.optimize_pulse_area(3)
    assert result.area_optimal == pytest.approx(hs.g_optimal(3), abs=1e-4)
    assert result.p_max == pytest.approx(hs.p_max(3), abs=1e-8)


def test_sweep_table_api_and_manifest_round_trip():
    grid = hs.linspace(0.1, 1.4, 9)
    table = hs.sweep_pulse_area(3, grid)
    assert table.parameter_name == "g"
    assert table.parameter_values == pytest.approx(grid)
    assert set(table.column_names) >= {"p_numeric", "p_analytic", "abs_err"}
    assert max(table.column("abs_err")) < 1e-6

    csv = table.to_csv()
    assert csv.splitlines()[0] == "g,p_numeric,p_analytic,abs_err"
    assert len(csv.splitlines()) == 10

    replay = hs.run_manifest(table.manifest_json)
    (name, replayed), = replay["tables"].items()
    assert replayed.to_csv() == csv
    assert json.loads(replayed.manifest_json) == json.loads(table.manifest_json)


def test_heralded_state_at_the_optimum():
    config = hs.symmetric_rwa_config(3, hs.g_optimal(3))
    result = hs.herald_after_pulse(config)
    assert not result.degenerate
    assert result.probability == pytest.approx(4.0 / 27.0, abs=1e-8)
    assert hs.w_state_fidelity(result) == pytest.approx(1.0, abs=1e-9)

    branches = result.branch_amplitudes
    assert len(branches) == 3
    assert max(abs(b - branches[0]) for b in branches) < 1e-9

    for value in hs.conditional_pair_negativities(result):
        assert value == pytest.approx(W3_PAIR_NEGATIVITY, abs=1e-8)


def test_weighted_resource_fidelity():
    theta, phi = 0.7, 0.4
    weights = [
        math.sin(theta) * math.cos(phi),
        math.sin(theta) * math.sin(phi),
        math.cos(theta),
    ]
    config = hs.symmetric_rwa_config(3, hs.g_optimal(3))
    config.excitation_amplitudes = [complex(w) for w in weights]
    config.ground_amplitude = 0.0
    config.validate()
    result = hs.herald_after_pulse(config)
    assert hs.weighted_state_fidelity(result, [complex(w) for w in weights]) == \
        pytest.approx(1.0, abs=1e-9)


def test_full_model_tracks_rotating_frame():
    omega_t = 30.0
    config = hs.resonant_full_config(3, 0.6, omega_t, 1.0)
    spec = hs.IntegratorSpec()
    spec.method = hs.StepMethod.fixed_step
    spec.tolerance = 1e-6
    spec.steps_per_fast_period = 120
    result = hs.herald_after_pulse(config, spec)
    # counter-rotating corrections enter at (1/omega_t)^2
    assert result.probability == pytest.approx(hs.p_heralding(3, 0.6), abs=5e-3)


def test_check_suite_is_bound():
    assert callable(hs.run_checks)
