"""Hardware-distortion-aware precoding for integrated sensing and communication."""

from .array import UlaConfig, steering, steering_matrix, beampattern
from .errors import InputError, SolverError
from .metrics import (HardwareProfile, TransmitDesign, ScnrBreakdown, transmit_covariance, comm_sinr,
                      receiver_distortion_cov, clutter_aware_combiner, scnr_general,
                      scnr_exact_clutter_aware, scnr_closed_form, sum_spectral_efficiency)
from .scene import PointScatterer, Scene, UserSet, ScenarioParams, sample_scene, sample_users

__version__ = "0.1.0"
