"""Distances between non-trace-preserving quantum operations.

The main entry points are :func:`bound` (renormalization upper bound) and
:func:`mc_lower_bound` (Monte Carlo lower bound over Haar-random inputs).
"""
from .diamond import SdpSolution, diamond_distance
from .errors import (AnnihilatedStateError, DegenerateSamplingError, DomainError,
                     NumericalFailure, QopdistError, RankDeficiencyError,
                     SdpConvergenceError, ShapeError, SizeError, ValidationError)
from .io import load_operation, save_operation
from .models import (BeamSplitterParams, NsGateParams, beam_splitter,
                     beam_splitter_closed_form, ns_gate_pair)
from .operations import (QuantumOperation, StinespringOperator, ValidationReport, apply,
                         apply_normalized, choi, extend_with_identity, stinespring, validate)
from .renormalization import (BoundOptions, DistanceBound, RenormalizationDecomposition,
                              bound, bound_both_orders, decompose, normalizing_distance,
                              renormalized_channels)
from .sampling import (FeasiblePoint, McReport, feasible_boundary, haar_state,
                       mc_lower_bound, min_cos_theta)

__version__ = "0.1.0"
