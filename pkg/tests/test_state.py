import math

import numpy as np
import pytest

from flocksim import ModelParams, SwarmState, Variant, norm
from flocksim.state import AgentState, as_vector


def test_norm_examples():
    assert norm([0.0, 0.0]) == 0.0
    assert norm([3.0, 4.0]) == 5.0
    assert norm([1.0, 1.0, 1.0]) == pytest.approx(math.sqrt(3.0), abs=1e-15)


def test_norm_scaling_and_triangle():
    rng = np.random.Generator(np.random.PCG64(11))
    for _ in range(200):
        d = int(rng.integers(2, 4))
        u = rng.normal(size=d)
        v = rng.normal(size=d)
        a = float(rng.normal()) * 3.0
        assert norm(a * v) == pytest.approx(abs(a) * norm(v), rel=1e-12)
        assert norm(u + v) <= norm(u) + norm(v) + 1e-12


def test_as_vector_rejects_bad_input():
    with pytest.raises(ValueError):
        as_vector([1.0])
    with pytest.raises(ValueError):
        as_vector([1.0, float("nan")])
    with pytest.raises(ValueError):
        as_vector([1.0, float("inf"), 0.0])


def test_agent_state_dimensions_must_match():
    with pytest.raises(ValueError):
        AgentState(position=[0.0, 0.0], velocity=[1.0, 0.0, 0.0])


def test_swarm_state_freezes_arrays():
    state = SwarmState.initial(positions=[[0.0, 0.0], [1.0, 0.0]],
                               velocities=[[0.0, 0.0], [0.0, 0.0]])
    with pytest.raises(ValueError):
        state.positions[0, 0] = 5.0
    with pytest.raises(ValueError):
        state.initial_positions[0, 0] = 5.0


def test_swarm_state_initial_snapshot_is_kept():
    state = SwarmState.initial(positions=[[0.0, 0.0], [2.0, 0.0]],
                               velocities=[[1.0, 0.0], [1.0, 0.0]])
    later = state.advanced(1.0, [[5.0, 5.0], [7.0, 5.0]], state.velocities)
    assert np.array_equal(later.initial_positions, state.positions)
    assert later.time == 1.0


def test_swarm_state_validation():
    with pytest.raises(ValueError):
        SwarmState.initial(positions=[[0.0, 0.0]], velocities=[[0.0, 0.0]])  # n >= 2
    with pytest.raises(ValueError):
        SwarmState(time=-1.0, positions=[[0, 0], [1, 0]],
                   velocities=[[0, 0], [0, 0]], initial_positions=[[0, 0], [1, 0]])
    with pytest.raises(ValueError):
        SwarmState.initial(positions=[[0.0], [1.0]], velocities=[[0.0], [0.0]])


def test_swarm_state_agents_view():
    state = SwarmState.initial(positions=[[0.0, 1.0], [2.0, 3.0]],
                               velocities=[[4.0, 5.0], [6.0, 7.0]])
    agents = state.agents
    assert len(agents) == 2
    assert np.array_equal(agents[1].position, [2.0, 3.0])
    assert np.array_equal(agents[1].velocity, [6.0, 7.0])


def _params(**overrides):
    base = dict(delta=0.2, k=0.1, radius=7.5, v_max=2.5, u_max=5.0,
                variant=Variant.POSITION_THRESHOLD, dt=0.05, t_end=100.0)
    base.update(overrides)
    return ModelParams(**base)


def test_model_params_validation():
    _params()  # valid
    for bad in (dict(delta=-0.1), dict(k=0.0), dict(radius=0.0), dict(v_max=0.0),
                dict(u_max=-1.0), dict(dt=0.0), dict(dt=2.0, t_end=1.0)):
        with pytest.raises(ValueError):
            _params(**bad)


def test_model_params_accepts_minimal_horizon():
    params = _params(dt=0.05, t_end=0.05)
    assert params.t_end == params.dt


def test_variant_parse():
    assert Variant.parse("p-thr") is Variant.POSITION_THRESHOLD
    assert Variant.parse("v-based") is Variant.VELOCITY_BASED
    assert Variant.parse("p-no-thr") is Variant.POSITION_NO_THRESHOLD
    with pytest.raises(ValueError):
        Variant.parse("bogus")
