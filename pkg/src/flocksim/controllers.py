"""Per-agent acceleration commands for the three controller variants.

All controllers are pure functions of an immutable SwarmState snapshot, so
every agent's command for a step can be evaluated independently from the
same pre-step state (synchronous update). An agent with no neighbors gets
the zero command and simply coasts.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .gains import alignment_gain, cohesion_separation_gain
from .state import ModelParams, SwarmState, Vector, as_vector, norm


def saturate(cmd, limit: float) -> Vector:
    """Smooth saturation limit*tanh(|cmd|/limit)*cmd/|cmd|; zero maps to zero.

    Never increases the norm, never changes the direction, and keeps the
    output norm within `limit` for any finite input.
    """
    cmd = np.asarray(cmd, dtype=np.float64)
    n = float(np.linalg.norm(cmd))
    if n == 0.0:
        return np.zeros_like(cmd)
    out = (limit * np.tanh(n / limit) / n) * cmd
    # recomposition can overshoot the bound by an ulp or two; shave it off
    while float(np.linalg.norm(out)) > limit:
        out = np.nextafter(out, 0.0)
    return out


@dataclass(frozen=True)
class ControlCommand:
    """Raw and saturated form of one agent's acceleration command."""

    raw: Vector
    saturated: Vector

    @classmethod
    def from_raw(cls, raw, u_max: float) -> "ControlCommand":
        raw = as_vector(raw)
        return cls(raw=raw, saturated=as_vector(saturate(raw, u_max)))


def velocity_based_control(state: SwarmState, i: int,
                           neighbors: Sequence[int],
                           params: ModelParams) -> Vector:
    """Cohesion-separation plus direct relative-velocity alignment, unsaturated."""
    u = np.zeros(state.dim)
    degree = len(neighbors)
    if degree == 0:
        return u
    for j in neighbors:
        offset = state.positions[j] - state.positions[i]
        psi = cohesion_separation_gain(norm(offset), params.delta, degree)
        u += psi * offset + (state.velocities[j] - state.velocities[i])
    return u


def position_based_control(state: SwarmState, i: int,
                           neighbors: Sequence[int],
                           params: ModelParams,
                           thresholded: bool = True) -> Vector:
    """Position-only command, unsaturated.

    Relative velocity is inferred from how far the current relative positions
    have drifted from the imprinted initial ones, weighted by the
    time-dependent alignment gain. Requires state.time > 0 whenever the
    agent has neighbors.
    """
    u = np.zeros(state.dim)
    degree = len(neighbors)
    if degree == 0:
        return u
    phi = alignment_gain(state.time, degree, params.k, thresholded)
    anchor = np.zeros(state.dim)
    for j in neighbors:
        offset = state.positions[j] - state.positions[i]
        psi = cohesion_separation_gain(norm(offset), params.delta, degree)
        u += (psi + phi) * offset
        anchor += state.initial_positions[j] - state.initial_positions[i]
    return u - phi * anchor
