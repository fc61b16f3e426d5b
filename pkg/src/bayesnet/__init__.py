"""
Discrete Bayesian networks with exact inference.
"""

from src.bayesnet.base import (
    Assignment,
    BayesNet,
    Cpt,
    Dag,
    EnumerationLimitError,
    IncompleteAssignmentError,
    UnknownVariableError,
    ValidationResult,
    Variable,
    ZeroProbabilityEvidenceError,
    same_structure,
    validate,
)
from src.bayesnet.graph import d_separated, iter_active_trails, markov_blanket, reachable
from src.bayesnet.inference import (
    Distribution,
    conditional_mutual_information,
    event_probability,
    joint_probability,
    joint_table,
    query,
)

__all__ = [
    "Assignment",
    "BayesNet",
    "Cpt",
    "Dag",
    "Distribution",
    "EnumerationLimitError",
    "IncompleteAssignmentError",
    "UnknownVariableError",
    "ValidationResult",
    "Variable",
    "ZeroProbabilityEvidenceError",
    "conditional_mutual_information",
    "d_separated",
    "event_probability",
    "iter_active_trails",
    "joint_probability",
    "joint_table",
    "markov_blanket",
    "query",
    "reachable",
    "same_structure",
    "validate",
]
