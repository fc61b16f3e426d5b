"""
Canonical signal structures, interpreted signals and structure checks.
"""

from src.signals.canonical import (
    FINGERPRINTS,
    CanonicalModel,
    CanonicalParams,
    DsepStatement,
    SignalStructure,
    StructureClassification,
    appendix_a_model,
    build_canonical,
    canonical_interpreted,
    classify_structure,
    fingerprint_holds,
    majority_model,
)
from src.signals.checks import (
    AffiliationReport,
    AffiliationVerdict,
    AffiliationWitness,
    IndependenceReport,
    UnorderedVariableError,
    check_affiliation,
    check_affiliation_pair,
    check_independence,
)
from src.signals.interpreted import (
    AttributeSpace,
    CorrectnessReport,
    CorrelationReport,
    InterpretedModel,
    ModelParameterError,
    TieBreak,
    ZeroProbabilityInterpretationError,
    correctness,
    correctness_correlation,
    predict,
    prediction_table,
    to_bayesnet,
)
from src.signals.search import (
    CorrelationSweepReport,
    InterpretationSearchResult,
    InterpretationWitness,
    SearchBoundError,
    SignalConfiguration,
    missing_attribute_condition,
    predictions_independent,
    search_ci_outcome_functions,
    search_independent_interpretations,
    sweep_correctness_correlation,
)
