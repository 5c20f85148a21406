"""Drawing-process analysis for dementia screening.

Ingests digitizer pen recordings of five drawing tasks, extracts the
38-per-task / 190-per-session feature battery, and trains and evaluates
classifiers and regressors under a repeated nested cross-validation and
permutation-test protocol, with a CLI, a screening HTTP service, and a
synthetic-cohort generator for testing.
"""

from .strokes import (
    DIAGNOSES,
    TASKS,
    DrawingSession,
    PenSample,
    Stroke,
    SubjectRecord,
    TaskRecording,
    parse_session,
    segment_strokes,
    session_to_json_bytes,
    validate_session,
)

__version__ = "0.1.0"

__all__ = [
    "DIAGNOSES",
    "DrawingSession",
    "PenSample",
    "Stroke",
    "SubjectRecord",
    "TASKS",
    "TaskRecording",
    "__version__",
    "parse_session",
    "segment_strokes",
    "session_to_json_bytes",
    "validate_session",
]
