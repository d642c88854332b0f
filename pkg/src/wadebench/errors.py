"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid task, model, or plan configuration."""


class FormatError(ValueError):
    """Malformed file or payload (bad CSV, bad dataset header, bad answer arity)."""


class VocabularyError(ValueError):
    """Token or token id outside the active vocabulary."""


class DimensionError(ValueError):
    """Vector or matrix shape does not match the model."""


class UndefinedAccuracyError(ValueError):
    """Accuracy requested over zero masked positions."""
