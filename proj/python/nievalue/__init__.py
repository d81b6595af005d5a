"""Non-inferiority E-values (NIE) for unmeasured-confounding sensitivity analysis."""

from ._core import (  # noqa: F401
    Basis,
    BoundCheckReport,
    ConfounderScenario,
    ContourCurve,
    ContourPoint,
    ContourRegion,
    Direction,
    EffectSummary,
    EvalueResult,
    Frequency,
    GridSearchResult,
    Measure,
    NieResult,
    OutcomeFrequency,
    ScenarioAssociations,
    StudyParseError,
    StudyRecord,
    StudyValidationError,
    SufficiencyProbe,
    SufficiencyReport,
    analyze,
    analyze_batch_csv,
    associations,
    bias_factor,
    classical_evalue,
    classify_frequency,
    classify_point,
    contour_rr_ud,
    generalized_evalue,
    governing_limit,
    hr_to_rr,
    kappa,
    max_observed_rr,
    nie,
    observed_rr,
    sample_contour,
    study_svg,
    to_rr_scale,
    verify_bound,
    verify_nie_sufficiency,
)

__version__ = "0.1.0"
