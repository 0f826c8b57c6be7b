"""Earth-observation scheduling when the feasibility constraints are hidden.

A yes/no oracle judges complete schedules against a hidden set of
separation and capacity constraints. Learn&Optimize alternates an exact
anytime solver under the learned constraints with oracle queries, learning
one constraint per rejection through conservative acquisition.
"""

from .basis import CandidateBasis, LanguageConfig
from .harness import ExperimentConfig, MetricsRow, exact_frac, run_experiment, summarize
from .instance_gen import GenConfig, generate
from .learn_optimize import RunTrace, StopReason, run
from .model import (
    Assignment,
    Cap,
    Instance,
    InvalidAssignmentError,
    Sep,
    Task,
    dominates,
    is_feasible,
    objective_value,
)
from .oracle import HiddenOracle, OracleStats, QueryKind
from .optsol import BACKEND, SolveResult, brute_force, solve

__version__ = "0.1.0"
