"""Exception types shared across the package."""


class InkError(Exception):
    """Base class for all package errors."""


# -- session parsing / validation --------------------------------------------

class MalformedInput(InkError):
    """Input is not a structurally valid session file."""


class RangeViolation(InkError):
    """A sample field is outside its allowed range."""


class NonMonotonicTime(InkError):
    """Timestamps within a task are not strictly increasing."""


class EmptySession(InkError):
    """Session contains no task recordings."""


# -- feature extraction -------------------------------------------------------

class EvenWindow(InkError):
    """Smoothing window must be an odd, positive sample count."""


class TooShort(InkError):
    """Series too short for the requested derivative."""


# -- learners ------------------------------------------------------------------

class NoRows(InkError):
    """Preprocessor needs at least two training rows."""


class EmptyLabels(InkError):
    """No labels supplied."""


class BadAlpha(InkError):
    """Elastic-net l1_ratio outside [0, 1]."""


class BadC(InkError):
    """Inverse regularization strength must be positive."""


class NonFinite(InkError):
    """Training data contains NaN or infinite values."""


class ShapeMismatch(InkError):
    """Feature count does not match the fitted model."""


class BadDepth(InkError):
    """Forest max_depth must be a positive integer."""


class BadMaxFeatures(InkError):
    """Forest max_features must be in [1, n_features]."""


class BadKernel(InkError):
    """SVM kernel must be 'linear' or 'rbf'."""


class BadGamma(InkError):
    """SVM gamma must be positive."""


class SingleClass(InkError):
    """SVM training labels contain a single class."""


# -- evaluation ----------------------------------------------------------------

class TooFewPerClass(InkError):
    """A class has fewer members than the fold count."""


class TooFew(InkError):
    """Too few values for the requested statistic."""


class DegenerateAUC(InkError):
    """AUC is undefined when the truth contains a single class."""


class Empty(InkError):
    """Metric inputs are empty or mismatched."""


class BadPermCount(InkError):
    """Permutation count must be at least 1."""


# -- synthesis / cli / bundle ---------------------------------------------------

class BadSpec(InkError):
    """Cohort specification fields are out of range."""


class IdMismatch(InkError):
    """Feature and label files do not agree on session ids."""


class BundleVersionMismatch(InkError):
    """Persisted bundle has an unsupported format version."""


class RegistryHashMismatch(InkError):
    """Bundle was built against a different feature registry."""
