from dataclasses import replace

import numpy as np
import pytest

from app.cli import scenario_registry, to_config
from app.controller import ChainController, ControllerParams, Logic, SwarmState
from app.errors import SafetyBreach
from app.geometry import build_chain
from app.simulator import (
    Outcome, ScenarioConfig, SimulationTrace, detect_deadlock, find_equilibrium, run, step, validate_scenario,
)

SHARP_TURN_START = [(1.235, 1.083), (0.346, 1.451)]


@pytest.fixture
def straight_config(straight_chain, params):
    def make(positions, v_max=1.0, **kwargs):
        return ScenarioConfig(chain=straight_chain, positions=positions, v_max=[v_max] * len(positions),
                              params=params, **kwargs)
    return make


def test_validate_accepts_clear_start(straight_config):
    assert validate_scenario(straight_config([(2, 1), (2, 0.5)])).ok


def test_validate_reports_overlap(straight_config):
    report = validate_scenario(straight_config([(2, 1), (2.3, 1)]))
    assert not report.ok
    assert any("initial overlap" in v for v in report.violations)


def test_validate_reports_disk_outside_tube(straight_config):
    report = validate_scenario(straight_config([(2, 0.1), (6, 1)]))
    assert report.violations == ["disk outside tube: agent 0"]


def test_validate_reports_narrow_tube(params):
    chain = build_chain([[(0, 0), (0, 0.3)], [(4, 0), (4, 0.3)]])
    cfg = ScenarioConfig(chain=chain, positions=[(2, 0.15)], v_max=[1.0], params=params)
    report = validate_scenario(cfg)
    assert any("wide enough" in v for v in report.violations)


def test_step_leaves_arrived_swarm_unchanged(straight_config, straight_chain, params):
    cfg = straight_config([(11.99, 1), (11.995, 0.5)])
    swarm = cfg.initial_state()
    swarm.arrived[:] = True
    following, commands = step(swarm, cfg, ChainController(straight_chain, params))
    np.testing.assert_array_equal(following.positions, swarm.positions)
    np.testing.assert_array_equal(commands, 0.0)


def test_step_moves_lone_agent_at_full_speed(straight_config, straight_chain, params):
    cfg = straight_config([(2, 1)])
    following, commands = step(cfg.initial_state(), cfg, ChainController(straight_chain, params))
    np.testing.assert_allclose(commands[0], [1.0, 0.0], atol=1e-15)
    np.testing.assert_allclose(following.positions[0], [2.001, 1.0], atol=1e-15)
    assert not following.arrived[0]


def test_run_single_agent_arrives(straight_config):
    trace = run(straight_config([(1, 1)], t_end=15.0), workers=1)
    assert trace.outcome is Outcome.COMPLETED
    # arrives once within eps_0 = r_s / 10 of the finishing line at x = 12
    assert trace.arrival_times[0] == pytest.approx(11.0 - 0.02, abs=2e-3)
    assert trace.min_boundary_dist[0] == pytest.approx(1.0)
    assert np.isinf(trace.min_pair_dist[0])


def test_run_starting_on_finishing_line_takes_no_steps(straight_config):
    trace = run(straight_config([(12, 1)]))
    assert trace.outcome is Outcome.COMPLETED
    assert trace.steps == 0
    assert trace.arrival_times[0] == 0.0
    assert detect_deadlock(trace) == []


def test_run_is_independent_of_worker_count(straight_config):
    cfg = straight_config([(1, 1.0), (1.5, 0.4), (1.5, 1.6), (3, 1.0)], t_end=1.0)
    serial, pooled = run(cfg, workers=1), run(cfg, workers=4)
    assert serial.steps == pooled.steps
    for a, b in zip(serial.positions, pooled.positions):
        np.testing.assert_array_equal(a, b)


def test_run_stops_on_safety_breach():
    # flipped avoidance turns the barrier into an attraction
    chain = build_chain([[(0, -3), (0, 3)], [(12, -4), (12, 4)]])
    cfg = ScenarioConfig(chain=chain, positions=[(3, 0.55), (3, -0.55)], v_max=[1.0, 1.0],
                         params=ControllerParams(r_s=0.5, r_a=0.8), logic=Logic.SINGLE_TRAPEZOID_V1,
                         t_end=1.0, avoidance_sign=-1.0)
    with pytest.raises(SafetyBreach) as info:
        run(cfg, workers=1)
    assert info.value.step is not None
    assert "step" in str(info.value)
    assert set(info.value.agents) == {0, 1}
    partial = info.value.partial
    assert partial.outcome is Outcome.BREACH
    assert partial.steps == info.value.step
    assert len(partial.arrival_times) == 2


def test_detect_deadlock_on_synthetic_traces():
    dt, n = 0.01, 300
    trace = SimulationTrace(dt=dt, v_max=np.array([1.0, 1.0]), r_s=0.2)
    trace.times = [k * dt for k in range(n + 1)]
    trace.arrived = [np.array([False, k > 50]) for k in range(n + 1)]
    trace.commands = [np.array([[1e-5, 0.0], [0.0, 0.0]]) for _ in range(n)]
    events = detect_deadlock(trace)
    assert [event.agent for event in events] == [0]
    assert events[0].start == 0.0
    assert events[0].end == pytest.approx(3.0)

    trace.arrived = [np.array([True, True]) for _ in range(n + 1)]
    assert detect_deadlock(trace) == []

    trace.arrived = [np.array([False, False]) for _ in range(n + 1)]
    assert detect_deadlock(trace, window=3.5) == []


@pytest.fixture
def sharp_turn_config(sharp_chain, params):
    return ScenarioConfig(chain=sharp_chain, positions=SHARP_TURN_START, v_max=[0.4, 0.4], params=params,
                          logic=Logic.DIRECT, t_end=3.0)


def test_direct_logic_deadlocks_at_sharp_turn(sharp_turn_config):
    equilibrium = find_equilibrium(sharp_turn_config)
    assert equilibrium.residual < 1e-8
    assert np.linalg.norm(equilibrium.positions - np.array(SHARP_TURN_START)) < 1.0

    cfg = sharp_turn_config.with_positions(equilibrium.positions)
    assert validate_scenario(cfg).ok
    trace = run(cfg, workers=1)
    assert trace.outcome is Outcome.TIMEOUT
    assert len(detect_deadlock(trace)) >= 1


@pytest.mark.slow
def test_modified_logic_clears_sharp_turn(sharp_turn_config):
    equilibrium = find_equilibrium(sharp_turn_config)
    cfg = replace(sharp_turn_config.with_positions(equilibrium.positions), logic=Logic.MODIFIED, t_end=30.0)
    trace = run(cfg, workers=1)
    assert detect_deadlock(trace) == []
    assert trace.outcome is Outcome.COMPLETED


@pytest.mark.slow
def test_bundled_corridor_scenario_keeps_agents_apart():
    cfg = to_config(scenario_registry.load("corridor_20"))
    trace = run(cfg)
    assert trace.outcome is Outcome.COMPLETED
    assert trace.steps >= 15000
    assert min(trace.min_pair_dist) > 2 * cfg.params.r_s
    assert min(trace.min_boundary_dist) > cfg.params.r_s
    assert np.all(np.isfinite(trace.arrival_times))


@pytest.mark.slow
def test_bundled_experiment_scenario_completes():
    cfg = to_config(scenario_registry.load("experiment_4"))
    trace = run(cfg)
    assert trace.outcome is Outcome.COMPLETED
    commands = np.asarray(trace.commands)
    assert np.all(np.hypot(commands[..., 0], commands[..., 1]) <= 0.4 + 1e-12)


def test_initial_state_is_a_fresh_copy(straight_config):
    cfg = straight_config([(2, 1)])
    swarm = cfg.initial_state()
    swarm.positions[0] = (3, 1)
    assert isinstance(swarm, SwarmState)
    np.testing.assert_array_equal(cfg.positions[0], [2, 1])


def test_config_rejects_bad_timing(straight_chain):
    params = ControllerParams(r_s=0.2, r_a=0.8)
    with pytest.raises(ValueError):
        ScenarioConfig(chain=straight_chain, positions=[(2, 1)], v_max=[1.0], params=params, dt=0.0)
    with pytest.raises(ValueError):
        ScenarioConfig(chain=straight_chain, positions=[(2, 1)], v_max=[1.0, 2.0], params=params)


def test_removing_an_arrived_agent_leaves_the_rest_unchanged(straight_chain, params):
    controller = ChainController(straight_chain, params)
    full = SwarmState.from_agents([(11.99, 1.0), (11.2, 0.7), (11.2, 1.3)], [1.0, 1.0, 1.0])
    full.arrived[0] = True
    reduced = SwarmState.from_agents(full.positions[1:].copy(), [1.0, 1.0])
    full_cfg = ScenarioConfig(chain=straight_chain, positions=full.positions, v_max=full.v_max, params=params)
    reduced_cfg = ScenarioConfig(chain=straight_chain, positions=reduced.positions, v_max=reduced.v_max,
                                 params=params)
    for _ in range(500):
        full, _ = step(full, full_cfg, controller)
        reduced, _ = step(reduced, reduced_cfg, controller)
    np.testing.assert_array_equal(full.positions[0], [11.99, 1.0])
    np.testing.assert_array_equal(full.positions[1:], reduced.positions)
    np.testing.assert_array_equal(full.arrived[1:], reduced.arrived)
