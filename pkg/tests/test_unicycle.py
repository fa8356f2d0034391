import math

import numpy as np
import pytest

from flocksim import (UnicycleLimits, UnicycleState, replay_experiment,
                      si_to_unicycle, unicycle_step, wrap_angle)
from flocksim.unicycle import sample_robot_start


def test_wrap_angle_range_and_boundary():
    assert wrap_angle(0.0) == 0.0
    assert wrap_angle(math.pi) == pytest.approx(math.pi)
    assert wrap_angle(-math.pi) == pytest.approx(math.pi)  # boundary maps up
    assert wrap_angle(3 * math.pi) == pytest.approx(math.pi)
    assert wrap_angle(2 * math.pi + 0.3) == pytest.approx(0.3)
    rng = np.random.Generator(np.random.PCG64(1))
    for angle in rng.uniform(-50, 50, 500):
        w = wrap_angle(float(angle))
        assert -math.pi < w <= math.pi


LIMITS = UnicycleLimits(v_lin_max=0.15, omega_max=0.55)


def test_si_to_unicycle_aligned():
    v, omega = si_to_unicycle([0.1, 0.0], heading=0.0, limits=LIMITS, k_omega=2.0)
    assert v == pytest.approx(0.1)
    assert omega == pytest.approx(0.0)


def test_si_to_unicycle_perpendicular():
    v, omega = si_to_unicycle([0.0, 0.1], heading=0.0, limits=LIMITS, k_omega=2.0)
    assert v == pytest.approx(0.0, abs=1e-12)  # cos(pi/2)
    assert omega == pytest.approx(min(2.0 * math.pi / 2, 0.55))


def test_si_to_unicycle_opposed_desired_velocity():
    # desired velocity dead behind: no reversing, saturated turn instead
    v, omega = si_to_unicycle([0.2, 0.0], heading=math.pi, limits=LIMITS, k_omega=2.0)
    assert v == 0.0
    assert omega == pytest.approx(0.55)


def test_si_to_unicycle_zero_input():
    assert si_to_unicycle([0.0, 0.0], heading=1.0, limits=LIMITS) == (0.0, 0.0)


def test_si_to_unicycle_respects_limits():
    rng = np.random.Generator(np.random.PCG64(2))
    for _ in range(500):
        desired = rng.normal(size=2) * float(rng.uniform(0, 3))
        heading = float(rng.uniform(-math.pi, math.pi))
        v, omega = si_to_unicycle(desired, heading, LIMITS, k_omega=2.0)
        assert 0.0 <= v <= LIMITS.v_lin_max
        assert abs(omega) <= LIMITS.omega_max


def test_si_to_unicycle_rotation_equivariant():
    rng = np.random.Generator(np.random.PCG64(3))
    for _ in range(100):
        desired = rng.normal(size=2)
        heading = float(rng.uniform(-1.0, 1.0))
        beta = float(rng.uniform(-1.0, 1.0))
        c, s = math.cos(beta), math.sin(beta)
        rotated = [c * desired[0] - s * desired[1], s * desired[0] + c * desired[1]]
        a = si_to_unicycle(desired, heading, LIMITS, k_omega=2.0)
        b = si_to_unicycle(rotated, wrap_angle(heading + beta), LIMITS, k_omega=2.0)
        assert a[0] == pytest.approx(b[0], abs=1e-12)
        assert a[1] == pytest.approx(b[1], abs=1e-12)


def test_unicycle_step_straight_line():
    state = UnicycleState(position=[0.0, 0.0], heading=0.0, linear_speed=0.0)
    after = unicycle_step(state, v=0.1, omega=0.0, dt=1.0)
    assert np.allclose(after.position, [0.1, 0.0], atol=1e-15)
    assert after.heading == 0.0
    assert after.linear_speed == 0.1


def test_unicycle_step_pure_rotation():
    state = UnicycleState(position=[1.0, 2.0], heading=0.0, linear_speed=0.0)
    after = unicycle_step(state, v=0.0, omega=0.55, dt=math.pi / 0.55)
    assert after.heading == pytest.approx(math.pi, abs=1e-12)
    assert np.allclose(after.position, [1.0, 2.0], atol=1e-15)


def test_unicycle_step_arc_matches_circle():
    # constant (v, omega) traces a circle of radius v/omega
    v, omega, dt, steps = 0.1, 0.1, 0.033, 100
    state = UnicycleState(position=[0.0, 0.0], heading=0.0, linear_speed=0.0)
    for _ in range(steps):
        state = unicycle_step(state, v, omega, dt)
    T = steps * dt
    radius = v / omega
    expected = np.array([radius * math.sin(omega * T),
                         radius * (1.0 - math.cos(omega * T))])
    assert np.linalg.norm(state.position - expected) <= 1e-2


def test_unicycle_heading_stays_wrapped():
    rng = np.random.Generator(np.random.PCG64(4))
    state = UnicycleState(position=[0.0, 0.0], heading=3.0, linear_speed=0.0)
    for _ in range(300):
        state = unicycle_step(state, v=float(rng.uniform(0, 0.15)),
                              omega=float(rng.uniform(-0.55, 0.55)), dt=0.033)
        assert -math.pi < state.heading <= math.pi


def test_unicycle_state_validation():
    with pytest.raises(ValueError):
        UnicycleState(position=[0.0, 0.0], heading=4.0, linear_speed=0.0)
    with pytest.raises(ValueError):
        UnicycleState(position=[0.0, 0.0], heading=0.0, linear_speed=-0.1)
    with pytest.raises(ValueError):
        UnicycleLimits(v_lin_max=0.0)


def test_sample_robot_start_deterministic():
    a = sample_robot_start(9, seed=5)
    b = sample_robot_start(9, seed=5)
    assert all(np.array_equal(x.position, y.position) and x.heading == y.heading
               for x, y in zip(a, b))
    for robot in a:
        assert np.all(np.abs(robot.position) <= 0.5)
        assert robot.linear_speed == 0.0


def test_replay_stationary_when_out_of_range():
    # robots farther apart than the interaction radius never move
    from flocksim.unicycle import EXPERIMENT_PARAMS
    import flocksim.unicycle as uni

    robots = [UnicycleState(position=[2.0 * i, 0.0], heading=0.5, linear_speed=0.0)
              for i in range(3)]
    state = robots[0]
    for _ in range(10):
        v, omega = si_to_unicycle([0.0, 0.0], state.heading, LIMITS)
        state = unicycle_step(state, v, omega, EXPERIMENT_PARAMS.dt)
    assert np.array_equal(state.position, robots[0].position)
    assert uni.EXPERIMENT_N == 9


def test_replay_short_run_properties():
    from dataclasses import replace
    from flocksim.unicycle import EXPERIMENT_PARAMS

    short = replay_experiment(seed=1, params=replace(EXPERIMENT_PARAMS, t_end=5.0))
    assert short.times[0] == 0.0
    assert short.times[-1] >= 5.0
    assert np.all(short.v_cmd >= 0.0)
    assert np.all(short.v_cmd <= 0.15 + 1e-12)
    assert np.all(np.abs(short.omega_cmd) <= 0.55 + 1e-12)
    assert short.metrics[0].gamma is None  # all robots start at rest
    assert len(short.metrics) == len(short.times)
