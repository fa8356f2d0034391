"""Shared value types: vectors, agent/swarm snapshots, model parameters.

All quantities are 64-bit floats. Positions are meters, velocities m/s,
accelerations m/s^2. A swarm snapshot is immutable: the arrays it exposes
are read-only copies, and the initial-position imprint taken at t=0 is
carried through every later snapshot unchanged.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

Vector = np.ndarray  # shape (d,) float64, d in {2, 3}


class Variant(enum.Enum):
    """Controller selector."""

    VELOCITY_BASED = "v-based"
    POSITION_THRESHOLD = "p-thr"
    POSITION_NO_THRESHOLD = "p-no-thr"

    @classmethod
    def parse(cls, text: str) -> "Variant":
        for variant in cls:
            if variant.value == text:
                return variant
        allowed = ", ".join(v.value for v in cls)
        raise ValueError(f"unknown model '{text}' (expected one of: {allowed})")


def as_vector(value, dim: int | None = None) -> Vector:
    """Validate and freeze a single d-dimensional vector."""
    v = np.array(value, dtype=np.float64)
    if v.ndim != 1 or v.shape[0] not in (2, 3):
        raise ValueError(f"vector must have 2 or 3 components, got shape {v.shape}")
    if dim is not None and v.shape[0] != dim:
        raise ValueError(f"expected {dim} components, got {v.shape[0]}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector components must be finite")
    v.flags.writeable = False
    return v


def norm(v) -> float:
    """Euclidean norm sqrt(sum(v_k^2))."""
    return float(np.linalg.norm(np.asarray(v, dtype=np.float64)))


def _frozen_array(value, name: str) -> np.ndarray:
    a = np.array(value, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError(f"{name} must be a 2-D (n, d) array")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite values")
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class AgentState:
    """Position and velocity of one agent."""

    position: Vector
    velocity: Vector

    def __post_init__(self):
        object.__setattr__(self, "position", as_vector(self.position))
        object.__setattr__(self, "velocity", as_vector(self.velocity, dim=self.position.shape[0]))


@dataclass(frozen=True)
class SwarmState:
    """Immutable swarm snapshot: time, states of all agents, and the imprint.

    `initial_positions` is the frozen t=0 configuration; construction copies
    every array and marks it read-only, so a snapshot can never be mutated
    and the imprint survives any number of steps verbatim.
    """

    time: float
    positions: np.ndarray          # (n, d)
    velocities: np.ndarray         # (n, d)
    initial_positions: np.ndarray  # (n, d)

    def __post_init__(self):
        object.__setattr__(self, "time", float(self.time))
        if not (np.isfinite(self.time) and self.time >= 0.0):
            raise ValueError("time must be finite and >= 0")
        p = _frozen_array(self.positions, "positions")
        v = _frozen_array(self.velocities, "velocities")
        p0 = _frozen_array(self.initial_positions, "initial_positions")
        if p.shape[0] < 2:
            raise ValueError("a swarm needs at least 2 agents")
        if p.shape[1] not in (2, 3):
            raise ValueError("agents must live in 2 or 3 dimensions")
        if v.shape != p.shape or p0.shape != p.shape:
            raise ValueError("positions, velocities and initial_positions must share shape (n, d)")
        object.__setattr__(self, "positions", p)
        object.__setattr__(self, "velocities", v)
        object.__setattr__(self, "initial_positions", p0)

    @classmethod
    def initial(cls, positions, velocities) -> "SwarmState":
        """t=0 snapshot; the imprint is taken from `positions`."""
        return cls(time=0.0, positions=positions, velocities=velocities,
                   initial_positions=positions)

    def advanced(self, time: float, positions, velocities) -> "SwarmState":
        """New snapshot at a later time carrying the same imprint."""
        return SwarmState(time=time, positions=positions, velocities=velocities,
                          initial_positions=self.initial_positions)

    @property
    def n(self) -> int:
        return self.positions.shape[0]

    @property
    def dim(self) -> int:
        return self.positions.shape[1]

    def agent(self, i: int) -> AgentState:
        return AgentState(position=self.positions[i], velocity=self.velocities[i])

    @property
    def agents(self) -> tuple[AgentState, ...]:
        return tuple(self.agent(i) for i in range(self.n))


@dataclass(frozen=True)
class ModelParams:
    """Swarm-global controller and integration parameters.

    delta:  equilibrium distance scale (m), >= 0
    k:      alignment-gain constant (1/s), > 0
    radius: interaction radius (m), > 0
    v_max:  speed saturation limit (m/s), > 0
    u_max:  acceleration saturation limit (m/s^2), > 0
    variant: controller selector
    dt:     integration step (s), 0 < dt <= t_end
    t_end:  run horizon (s)
    """

    delta: float
    k: float
    radius: float
    v_max: float
    u_max: float
    variant: Variant
    dt: float
    t_end: float

    def __post_init__(self):
        checks = [
            (self.delta >= 0.0, "delta must be >= 0"),
            (self.k > 0.0, "k must be > 0"),
            (self.radius > 0.0, "radius must be > 0"),
            (self.v_max > 0.0, "v_max must be > 0"),
            (self.u_max > 0.0, "u_max must be > 0"),
            (self.dt > 0.0, "dt must be > 0"),
            (self.t_end >= self.dt, "t_end must be >= dt"),
        ]
        for ok, message in checks:
            if not ok:
                raise ValueError(message)
        if not isinstance(self.variant, Variant):
            object.__setattr__(self, "variant", Variant.parse(str(self.variant)))
