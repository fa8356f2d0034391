"""Scalar gain functions for the pair forces and the alignment term."""
from __future__ import annotations


def cohesion_separation_gain(distance: float, delta: float, degree: int) -> float:
    """Distance-dependent gain 1 - delta*degree/distance.

    Negative below the equilibrium spacing delta*degree (repulsion), zero at
    it, positive beyond it (attraction). `distance` must be > 0; coincident
    agents are a simulation fault handled upstream.
    """
    if distance <= 0.0:
        raise ValueError(f"pair distance must be > 0, got {distance}")
    return 1.0 - (delta * degree) / distance


def alignment_gain(t: float, degree: int, k: float, thresholded: bool = True) -> float:
    """Time-dependent alignment gain.

    Decays as degree/t, and, when `thresholded`, holds at the floor k*degree
    once t exceeds 1/k so coordination never dies out. Without the threshold
    the gain keeps decaying toward zero. Continuous at t = 1/k where both
    branches equal k*degree. Defined only for t > 0.
    """
    if t <= 0.0:
        raise ValueError(f"alignment gain is undefined for t <= 0, got {t}")
    if thresholded and t > 1.0 / k:
        return k * degree
    return degree / t
