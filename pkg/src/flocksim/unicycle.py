"""Differential-drive replay of the nine-robot desk experiment.

The planar flocking law produces acceleration commands for a point mass; a
wheeled robot takes (forward speed, turn rate) instead. Each control tick we
rebuild a point-mass shadow of every robot (position from the robot, velocity
from its current commanded motion), evaluate the position-based controller on
it, integrate the shadow velocity, and project the result onto the heading:
forward speed is the along-heading component (never negative), turn rate is
proportional to the heading error. Both are clamped to the platform limits.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .controllers import position_based_control, saturate
from .metrics import MetricsRow, metrics_row
from .simulator import compute_neighbors, n_steps
from .state import ModelParams, SwarmState, Variant

# Desk-scale experiment setup: nine robots, position-based controller with
# the persistence threshold, compact arena.
EXPERIMENT_N = 9
EXPERIMENT_PARAMS = ModelParams(
    delta=0.12, k=0.15, radius=0.75, v_max=0.15, u_max=0.5,
    variant=Variant.POSITION_THRESHOLD, dt=0.033, t_end=120.0,
)
EXPERIMENT_START_BOX = 1.0        # m, side of the centered start region
ARENA_HALF_EXTENTS = (1.6, 1.0)   # m, 3.2 x 2.0 arena centered at the origin
DEFAULT_K_OMEGA = 2.0             # 1/s, heading proportional gain


@dataclass(frozen=True)
class UnicycleLimits:
    """Hard caps on the wheel-level commands."""

    v_lin_max: float = 0.15   # m/s
    omega_max: float = 0.55   # rad/s

    def __post_init__(self):
        if self.v_lin_max <= 0.0 or self.omega_max <= 0.0:
            raise ValueError("unicycle limits must be positive")


@dataclass(frozen=True)
class UnicycleState:
    """Planar pose plus the currently applied forward speed."""

    position: np.ndarray  # (2,)
    heading: float        # rad, in (-pi, pi]
    linear_speed: float   # m/s, >= 0

    def __post_init__(self):
        p = np.array(self.position, dtype=np.float64)
        if p.shape != (2,) or not np.all(np.isfinite(p)):
            raise ValueError("position must be a finite 2-vector")
        p.flags.writeable = False
        object.__setattr__(self, "position", p)
        if not (-math.pi < self.heading <= math.pi):
            raise ValueError("heading must lie in (-pi, pi]")
        if self.linear_speed < 0.0:
            raise ValueError("linear_speed must be >= 0")

    @property
    def planar_velocity(self) -> np.ndarray:
        return self.linear_speed * np.array([math.cos(self.heading),
                                             math.sin(self.heading)])


def wrap_angle(angle: float) -> float:
    """Wrap to (-pi, pi]; the -pi boundary maps to +pi."""
    wrapped = (angle + math.pi) % (2.0 * math.pi) - math.pi
    return math.pi if wrapped == -math.pi else wrapped


def si_to_unicycle(desired_velocity, heading: float, limits: UnicycleLimits,
                   k_omega: float = DEFAULT_K_OMEGA) -> tuple[float, float]:
    """Map a desired planar velocity to clamped (forward speed, turn rate).

    Forward speed is the component of the desired velocity along the heading
    (clamped at zero: the robot never reverses, it turns instead); turn rate
    is proportional to the bearing error. A zero desired velocity stops the
    robot entirely.
    """
    d = np.asarray(desired_velocity, dtype=np.float64)
    speed = float(np.linalg.norm(d))
    if speed == 0.0:
        return 0.0, 0.0
    alpha = wrap_angle(math.atan2(d[1], d[0]) - heading)
    v = min(max(speed * math.cos(alpha), 0.0), limits.v_lin_max)
    omega = min(max(k_omega * alpha, -limits.omega_max), limits.omega_max)
    return v, omega


def unicycle_step(state: UnicycleState, v: float, omega: float,
                  dt: float) -> UnicycleState:
    """Advance unicycle kinematics by dt (heading first, then position)."""
    if dt <= 0.0:
        raise ValueError("dt must be > 0")
    heading = wrap_angle(state.heading + dt * omega)
    position = state.position + dt * v * np.array([math.cos(heading),
                                                   math.sin(heading)])
    return UnicycleState(position=position, heading=heading, linear_speed=v)


@dataclass
class ReplayResult:
    """Full time history of one replay, commands and metrics included."""

    seed: int
    k_omega: float
    params: ModelParams
    limits: UnicycleLimits
    times: np.ndarray            # (m,)
    positions: np.ndarray        # (m, n, 2)
    headings: np.ndarray         # (m, n)
    speeds: np.ndarray           # (m, n) applied forward speeds
    v_cmd: np.ndarray            # (m, n) commanded forward speeds
    omega_cmd: np.ndarray        # (m, n) commanded turn rates
    metrics: list[MetricsRow] = field(default_factory=list)

    @property
    def final_gamma(self) -> float | None:
        return self.metrics[-1].gamma

    def wall_violations(self) -> tuple[int, float | None]:
        """Count of agent samples outside the arena and first violation time."""
        hx, hy = ARENA_HALF_EXTENTS
        outside = (np.abs(self.positions[:, :, 0]) > hx) | \
                  (np.abs(self.positions[:, :, 1]) > hy)
        count = int(outside.sum())
        if count == 0:
            return 0, None
        return count, float(self.times[np.flatnonzero(outside.any(axis=1))[0]])


def sample_robot_start(n: int, seed: int, box: float = EXPERIMENT_START_BOX
                       ) -> list[UnicycleState]:
    """Robots at rest, uniform positions in a centered box, uniform headings.

    Stream order (PCG64): the (n, 2) position block, then the n headings.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    positions = rng.uniform(-box / 2.0, box / 2.0, size=(n, 2))
    headings = rng.uniform(-math.pi, math.pi, size=n)
    return [UnicycleState(position=positions[i], heading=wrap_angle(headings[i]),
                          linear_speed=0.0) for i in range(n)]


def replay_experiment(seed: int, k_omega: float = DEFAULT_K_OMEGA,
                      params: ModelParams = EXPERIMENT_PARAMS,
                      limits: UnicycleLimits | None = None) -> ReplayResult:
    """Run the nine-robot replay and log commands plus metrics every tick."""
    limits = limits or UnicycleLimits()
    robots = sample_robot_start(EXPERIMENT_N, seed)
    imprint = np.array([r.position for r in robots])
    dt = params.dt
    total = n_steps(params.t_end, dt)

    m, n = total + 1, EXPERIMENT_N
    times = np.zeros(m)
    positions = np.zeros((m, n, 2))
    headings = np.zeros((m, n))
    speeds = np.zeros((m, n))
    v_cmd = np.zeros((m, n))
    omega_cmd = np.zeros((m, n))
    rows: list[MetricsRow] = []

    def record(index: int, t: float, fleet: list[UnicycleState]):
        times[index] = t
        for i, r in enumerate(fleet):
            positions[index, i] = r.position
            headings[index, i] = r.heading
            speeds[index, i] = r.linear_speed
        shadow = SwarmState(time=t, positions=positions[index],
                            velocities=np.array([r.planar_velocity for r in fleet]),
                            initial_positions=imprint)
        rows.append(metrics_row(shadow, compute_neighbors(shadow, params.radius)))

    record(0, 0.0, robots)
    t = 0.0
    for index in range(1, total + 1):
        shadow = SwarmState(time=t if t > 0.0 else dt,
                            positions=np.array([r.position for r in robots]),
                            velocities=np.array([r.planar_velocity for r in robots]),
                            initial_positions=imprint)
        graph = compute_neighbors(shadow, params.radius)
        commands = []
        for i, robot in enumerate(robots):
            raw = position_based_control(shadow, i, graph.neighbors(i), params,
                                         thresholded=True)
            u = saturate(raw, params.u_max)
            desired = saturate(shadow.velocities[i] + dt * u, params.v_max)
            commands.append(si_to_unicycle(desired, robot.heading, limits, k_omega))
        robots = [unicycle_step(robot, v, w, dt)
                  for robot, (v, w) in zip(robots, commands)]
        t += dt
        record(index, t, robots)
        v_cmd[index] = [c[0] for c in commands]
        omega_cmd[index] = [c[1] for c in commands]

    return ReplayResult(seed=seed, k_omega=k_omega, params=params, limits=limits,
                        times=times, positions=positions, headings=headings,
                        speeds=speeds, v_cmd=v_cmd, omega_cmd=omega_cmd,
                        metrics=rows)
