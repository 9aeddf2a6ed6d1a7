"""Smoke tests for the pyged extension: the bindings expose the main
operations and agree with the CLI on the bundled scenario."""

import os

import pytest

import pyged


def fixture(name: str) -> str:
    root = os.environ.get(
        "GED_FIXTURE_DIR",
        os.path.join(os.path.dirname(__file__), "..", "..", "fixtures"),
    )
    return os.path.join(root, name)


def test_solve_honey1_matches_the_known_optimum():
    scenario = pyged.honey1()
    report = pyged.solve(scenario.model, scenario.spec)
    assert report.status == "optimal"
    assert report.risk_value <= 0.380000001
    assert report.risk_value == pytest.approx(0.38, abs=1e-6)
    assert pyged.verify_ic(report.policy, report.assignment, scenario.model) <= 1e-6
    for slack in pyged.verify_ir(report.policy, report.assignment, scenario.model).values():
        assert slack >= -1e-6


def test_load_scenario_round_trips():
    model, spec = pyged.load_scenario(fixture("honey1.ged"))
    assert model.states == ["s_prod", "s_honey"]
    assert model.message_mode() == pyged.MessageMode.canonical
    text = pyged.serialize_scenario(model, spec)
    model2, spec2 = pyged.parse_scenario(text)
    assert pyged.serialize_scenario(model2, spec2) == text


def test_posterior_and_best_response():
    scenario = pyged.honey1_state_labeled()
    policy = pyged.full_disclosure_policy(scenario.model)
    belief = pyged.posterior(policy, scenario.model, "s_honey")
    assert belief.probs == pytest.approx([0.0, 1.0])
    legit = scenario.model.user_types[0]
    assert pyged.best_response(legit, belief) == "avoid"
    assert pyged.expected_user_utility(legit, "use", belief) == pytest.approx(-5.0)


def test_oracle_sandwiches_the_lp():
    scenario = pyged.honey1()
    report = pyged.solve(scenario.model, scenario.spec)
    oracle = pyged.brute_force_optimum(scenario.model, scenario.spec, 10)
    assert oracle.found
    assert oracle.risk >= report.risk_value - 1e-9


def test_simulation_is_reproducible():
    scenario = pyged.honey1()
    policy = pyged.full_disclosure_policy(scenario.model)
    config = pyged.SimConfig()
    config.rounds = 2000
    config.seed = 99
    a = pyged.run_overt(scenario.model, policy, scenario.spec, config)
    b = pyged.run_overt(scenario.model, policy, scenario.spec, config)
    assert a.risk_mean == b.risk_mean
    assert abs(a.risk_mean - 0.38) < 5 * a.risk_stderr


def test_covert_runs_flag_the_transparency_violation():
    scenario = pyged.honey1()
    policy = pyged.full_disclosure_policy(scenario.model)
    config = pyged.SimConfig()
    config.rounds = 5000
    config.seed = 3
    config.mode = pyged.Mode.covert
    metrics = pyged.run_covert(scenario.model, policy, scenario.spec, config)
    assert metrics.transparency_violation
    assert metrics.regret_last_decile < metrics.regret_first_decile


def test_case_study_verdicts():
    youtube = pyged.case_study("youtube")
    verdict = pyged.audit(youtube.spec, youtube.model, youtube.mechanism)
    assert not verdict.consistent
    kit = pyged.case_study("ai_testkit", disclosed=True)
    verdict = pyged.audit(kit.spec, kit.model, kit.mechanism)
    assert verdict.consistent


def test_errors_surface_as_ged_error():
    with pytest.raises(pyged.GedError):
        pyged.parse_scenario("[prior]\nx=1\n")
    with pytest.raises(pyged.GedError):
        pyged.case_study("nonexistent")


def test_cli_binding_matches_direct_solve():
    code, out, err = pyged.run_cli(["solve", fixture("honey1.ged")])
    assert code == 0
    scenario = pyged.honey1()
    report = pyged.solve(scenario.model, scenario.spec)
    assert f"risk={report.risk_value:.9g}" in out.replace(" ", "")
