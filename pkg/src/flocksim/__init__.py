"""flocksim: deterministic multi-agent flocking simulation and analysis.

Three controller variants over double-integrator agents (direct velocity
alignment, position-only alignment with a persistence threshold, and the
same without the threshold), per-step flocking metrics, a differential-drive
replay of the desk-scale robot experiment, and a CLI that writes delimited
output plus rendered figures.
"""

__version__ = "0.1.0"

from .config import ConfigError, ScenarioConfig, parse_config
from .controllers import (ControlCommand, position_based_control, saturate,
                          velocity_based_control)
from .gains import alignment_gain, cohesion_separation_gain
from .metrics import (MetricsRow, alignment_metric, average_speed,
                      cohesion_radius, metrics_row, pair_distance_stats,
                      pairwise_distance_variance)
from .simulator import (CoincidenceError, NeighborGraph, SimulationFault,
                        Trajectory, compute_neighbors, run, sample_initial, step)
from .state import AgentState, ModelParams, SwarmState, Variant, norm
from .unicycle import (ReplayResult, UnicycleLimits, UnicycleState,
                       replay_experiment, si_to_unicycle, unicycle_step,
                       wrap_angle)

__all__ = [
    "__version__",
    "AgentState", "ModelParams", "SwarmState", "Variant", "norm",
    "alignment_gain", "cohesion_separation_gain",
    "ControlCommand", "saturate", "velocity_based_control", "position_based_control",
    "NeighborGraph", "Trajectory", "SimulationFault", "CoincidenceError",
    "compute_neighbors", "step", "run", "sample_initial",
    "MetricsRow", "alignment_metric", "pair_distance_stats", "average_speed",
    "cohesion_radius", "pairwise_distance_variance", "metrics_row",
    "UnicycleState", "UnicycleLimits", "ReplayResult", "wrap_angle",
    "si_to_unicycle", "unicycle_step", "replay_experiment",
    "ScenarioConfig", "ConfigError", "parse_config",
]
