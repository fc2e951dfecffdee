"""Dynamic movement primitives for learning and regenerating pen trajectories."""

from .generator import IntegrationBlowupError, Rollout, RolloutRequest, initial_acceleration, rollout
from .kernels import KernelBank, activations, build_bank, forcing_value
from .learner import (
    DegenerateGoalError,
    DmpModel,
    DofModel,
    Formulation,
    TransformParams,
    fit_dmp,
    fit_weights,
    forcing_targets,
)
from .phase import PhaseConfig, PhaseKind, phase_sequence
from .strokes import SegmentationConfig, Stroke, compose, estimate_plane, segment
from .study import SweepReport, goal_change_experiment, sweep_number, sweep_width
from .trajectory import (
    Demonstration,
    DemonstrationFormatError,
    differentiate,
    euclidean_error,
    load_demonstration,
    resample,
    save_demonstration,
)

__version__ = "0.1.0"
