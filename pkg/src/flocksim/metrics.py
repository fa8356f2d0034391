"""Per-snapshot flocking observables.

Metrics that need at least one qualifying agent or pair return None when the
snapshot has none (the undefined-metric marker); CSV writers render that as
"nan". All functions are read-only and invariant under global translation
and rotation of the swarm.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .simulator import NeighborGraph
from .state import SwarmState


@dataclass(frozen=True)
class MetricsRow:
    """One timestep of flocking-quality observables."""

    time: float
    gamma: float | None
    dist_min: float | None
    dist_mean: float | None
    dist_max: float | None
    speed_mean: float
    cohesion_radius: float
    pairwise_dist_variance: float


def alignment_metric(state: SwarmState, graph: NeighborGraph) -> float | None:
    """Mean over agents of the mean cosine between own and neighbor velocities.

    Agents with no neighbors or zero speed are left out of the outer mean;
    a zero-speed neighbor contributes cosine 0 to the inner one. Returns
    None when no agent qualifies. Always in [-1, 1] and blind to speeds.
    """
    v = state.velocities
    speeds = np.linalg.norm(v, axis=1)
    moving = speeds > 0.0
    unit = np.zeros_like(v)
    unit[moving] = v[moving] / speeds[moving, None]
    cos = np.clip(unit @ unit.T, -1.0, 1.0)
    deg = graph.degrees
    include = moving & (deg > 0)
    if not include.any():
        return None
    inner = np.where(graph.adjacency, cos, 0.0).sum(axis=1)
    return float(np.mean(inner[include] / deg[include]))


def pair_distance_stats(state: SwarmState,
                        graph: NeighborGraph) -> tuple[float, float, float] | None:
    """(min, mean, max) distance over unordered neighbor pairs, or None if none."""
    pairs = graph.pairs()
    if len(pairs) == 0:
        return None
    d = np.linalg.norm(state.positions[pairs[:, 0]] - state.positions[pairs[:, 1]], axis=1)
    return float(d.min()), float(d.mean()), float(d.max())


def average_speed(state: SwarmState) -> float:
    """Mean velocity norm across the swarm."""
    return float(np.mean(np.linalg.norm(state.velocities, axis=1)))


def cohesion_radius(state: SwarmState) -> float:
    """Largest distance from any agent to the swarm centroid."""
    centroid = state.positions.mean(axis=0)
    return float(np.max(np.linalg.norm(state.positions - centroid, axis=1)))


def pairwise_distance_variance(state: SwarmState) -> float:
    """Population variance of the distances of ALL unordered agent pairs.

    Spans the whole swarm, not just interacting pairs, so it measures how
    rigid the overall shape is independent of the interaction topology.
    """
    iu, ju = np.triu_indices(state.n, k=1)
    d = np.linalg.norm(state.positions[iu] - state.positions[ju], axis=1)
    return float(np.var(d))


def metrics_row(state: SwarmState, graph: NeighborGraph) -> MetricsRow:
    """All observables for one snapshot."""
    stats = pair_distance_stats(state, graph)
    dist_min, dist_mean, dist_max = stats if stats is not None else (None, None, None)
    return MetricsRow(
        time=state.time,
        gamma=alignment_metric(state, graph),
        dist_min=dist_min,
        dist_mean=dist_mean,
        dist_max=dist_max,
        speed_mean=average_speed(state),
        cohesion_radius=cohesion_radius(state),
        pairwise_dist_variance=pairwise_distance_variance(state),
    )
