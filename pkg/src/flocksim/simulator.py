"""Time integration: neighbor search, synchronous control evaluation, stepping.

The step rule, applied to the pre-step snapshot for every agent at once:

    u_i = saturate(raw_i, u_max)
    v_i = saturate(v_i + dt * u_i, v_max)
    p_i = p_i + dt * v_i        (semi-implicit: new velocity moves the agent)

The alignment gain of the position-based variants is evaluated at the
current time, except for the very first step from t=0 where it is evaluated
at t=dt (the gain is undefined at zero; the relative-displacement term is
identically zero there anyway). Everything is deterministic: identical
inputs produce bit-identical trajectories.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .gains import alignment_gain
from .state import ModelParams, SwarmState, Variant

COINCIDENCE_EPS = 1e-9  # m; closer pairs abort the run


class SimulationFault(Exception):
    """A run reached a state the model does not define."""


class CoincidenceError(SimulationFault):
    """Two agents closer than COINCIDENCE_EPS; the pair gain has a pole at 0."""

    def __init__(self, i: int, j: int, time: float, step_index: int | None = None):
        self.i, self.j, self.time, self.step_index = i, j, time, step_index
        super().__init__()

    def __str__(self) -> str:
        suffix = "" if self.step_index is None else f" (step {self.step_index})"
        return (f"agents {self.i} and {self.j} coincident "
                f"(distance < {COINCIDENCE_EPS} m) at t={self.time:.6g} s{suffix}")


@dataclass(frozen=True)
class NeighborGraph:
    """Symmetric, irreflexive interaction graph at one instant."""

    adjacency: np.ndarray  # (n, n) bool, read-only

    def __post_init__(self):
        a = np.array(self.adjacency, dtype=bool)
        a.flags.writeable = False
        object.__setattr__(self, "adjacency", a)

    def neighbors(self, i: int) -> np.ndarray:
        return np.flatnonzero(self.adjacency[i])

    @property
    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)

    def pairs(self) -> np.ndarray:
        """Unordered neighbor pairs as an (m, 2) index array with i < j."""
        iu, ju = np.triu_indices(self.adjacency.shape[0], k=1)
        keep = self.adjacency[iu, ju]
        return np.column_stack([iu[keep], ju[keep]])


def _pair_distances(positions: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    diff = positions[None, :, :] - positions[:, None, :]  # diff[i, j] = p_j - p_i
    dist = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    return diff, dist


def _adjacency(dist: np.ndarray, radius: float) -> np.ndarray:
    adj = dist <= radius
    np.fill_diagonal(adj, False)
    return adj


def compute_neighbors(state: SwarmState, radius: float) -> NeighborGraph:
    """All agents within `radius` (inclusive) of each agent, excluding itself."""
    if radius <= 0.0:
        raise ValueError("radius must be > 0")
    _, dist = _pair_distances(state.positions)
    return NeighborGraph(adjacency=_adjacency(dist, radius))


def _check_coincidence(dist: np.ndarray, time: float):
    close = dist < COINCIDENCE_EPS
    np.fill_diagonal(close, False)
    if close.any():
        i, j = np.argwhere(close)[0]
        raise CoincidenceError(int(i), int(j), time)


def _raw_controls(positions, velocities, initial_positions, t_eval,
                  diff, dist, adj, params: ModelParams) -> np.ndarray:
    """Unsaturated commands for all agents from one snapshot."""
    n, d = positions.shape
    deg = adj.sum(axis=1)
    active = deg > 0
    with np.errstate(divide="ignore", invalid="ignore"):
        psi = 1.0 - (params.delta * deg[:, None]) / dist
    psi = np.where(adj, psi, 0.0)
    if params.variant is Variant.VELOCITY_BASED:
        vdiff = velocities[None, :, :] - velocities[:, None, :]
        u = (np.einsum("ij,ijk->ik", psi, diff)
             + np.einsum("ij,ijk->ik", adj.astype(np.float64), vdiff))
    else:
        thresholded = params.variant is Variant.POSITION_THRESHOLD
        phi = np.zeros(n)
        for i in np.flatnonzero(active):
            phi[i] = alignment_gain(t_eval, int(deg[i]), params.k, thresholded)
        idiff = initial_positions[None, :, :] - initial_positions[:, None, :]
        u = (np.einsum("ij,ijk->ik", psi + np.where(adj, phi[:, None], 0.0), diff)
             - phi[:, None] * np.einsum("ij,ijk->ik", adj.astype(np.float64), idiff))
    u[~active] = 0.0
    return u


def _saturate_rows(arr: np.ndarray, limit: float) -> np.ndarray:
    norms = np.linalg.norm(arr, axis=1)
    scale = np.ones_like(norms)
    nz = norms > 0.0
    scale[nz] = limit * np.tanh(norms[nz] / limit) / norms[nz]
    return arr * scale[:, None]


def step(state: SwarmState, params: ModelParams) -> SwarmState:
    """Advance the swarm by one dt using the synchronous update rule."""
    diff, dist = _pair_distances(state.positions)
    _check_coincidence(dist, state.time)
    adj = _adjacency(dist, params.radius)
    t_eval = state.time if state.time > 0.0 else params.dt
    raw = _raw_controls(state.positions, state.velocities, state.initial_positions,
                        t_eval, diff, dist, adj, params)
    u = _saturate_rows(raw, params.u_max)
    v = _saturate_rows(state.velocities + params.dt * u, params.v_max)
    p = state.positions + params.dt * v
    return state.advanced(time=state.time + params.dt, positions=p, velocities=v)


@dataclass
class Trajectory:
    """Snapshots sampled from a run, always including t=0 and the final state."""

    times: list[float] = field(default_factory=list)
    states: list[SwarmState] = field(default_factory=list)

    def append(self, state: SwarmState):
        self.times.append(state.time)
        self.states.append(state)

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self):
        return iter(zip(self.times, self.states))

    @property
    def final(self) -> SwarmState:
        return self.states[-1]


def n_steps(t_end: float, dt: float, start: float = 0.0) -> int:
    """Step count needed to reach t_end from `start` (robust to float dust)."""
    return max(1, math.ceil((t_end - start) / dt - 1e-9))


def run(initial: SwarmState, params: ModelParams, decimation: int = 1) -> Trajectory:
    """Step from `initial` until time >= t_end, recording every `decimation` steps."""
    if decimation < 1:
        raise ValueError("decimation must be >= 1")
    total = n_steps(params.t_end, params.dt, start=initial.time)
    trajectory = Trajectory()
    trajectory.append(initial)
    state = initial
    for index in range(1, total + 1):
        try:
            state = step(state, params)
        except CoincidenceError as fault:
            fault.step_index = index
            raise
        if index % decimation == 0 or index == total:
            trajectory.append(state)
    return trajectory


def sample_initial(n: int, box: float, v_init_max: float, seed: int,
                   d: int = 2) -> SwarmState:
    """Random start: uniform positions in [0, box]^d, speeds in [0, v_init_max].

    RNG is PCG64 seeded with `seed`; the stream is drawn in a fixed order so
    runs are reproducible across platforms: the (n, d) position block first,
    then velocity directions (angles for d=2, normalized Gaussian triples for
    d=3), then the n speeds. The imprint is the sampled positions.
    """
    if n < 2:
        raise ValueError("need at least 2 agents")
    rng = np.random.Generator(np.random.PCG64(seed))
    positions = rng.uniform(0.0, box, size=(n, d))
    if d == 2:
        angles = rng.uniform(0.0, 2.0 * np.pi, size=n)
        directions = np.column_stack([np.cos(angles), np.sin(angles)])
    else:
        directions = rng.normal(size=(n, d))
        norms = np.linalg.norm(directions, axis=1, keepdims=True)
        while np.any(norms == 0.0):  # probability-zero guard
            redo = norms[:, 0] == 0.0
            directions[redo] = rng.normal(size=(int(redo.sum()), d))
            norms = np.linalg.norm(directions, axis=1, keepdims=True)
        directions /= norms
    speeds = rng.uniform(0.0, v_init_max, size=n)
    return SwarmState.initial(positions=positions,
                              velocities=directions * speeds[:, None])
