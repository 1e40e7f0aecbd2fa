"""Whittle indexes for scalar Kalman-filter restless bandits."""
from .errors import (ClassificationInconclusive, ConditioningError, ContractViolation,
                     InvalidArgument, ResourceLimitError, SingularityError, WhittleKFError)
from .moebius import ArmParams, Mat2, fixed_point, phi_apply, phi_word, y0, y1
from .threshold import ThresholdClassification, classify, threshold_word_by_orbit, threshold_word_by_tree
from .index import IndexPoint, index_curve, whittle_index, ambivalence_check
from .bandit import BanditInstance, SimResult, brute_force_optimal, simulate_policy

__version__ = "0.1.0"
