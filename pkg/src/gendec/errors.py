"""Exception and warning types shared across the package."""


class GendecError(Exception):
    """Base class for all errors raised by this package."""


class MalformedNameError(GendecError):
    """A romaji full name does not have the 'Family Given' shape."""


class MissingDictionaryError(GendecError):
    """A converted-romaji operation was requested without a reading dictionary."""


class SchemaError(GendecError):
    """A CSV row, file header, or serialized document does not match its schema."""


class LabelError(GendecError):
    """A gender label is outside the accepted set."""


class UnknownKanaError(GendecError):
    """A character outside the kana rule table was passed to the transliterator."""


class UnknownKanjiError(GendecError):
    """A kanji name part is absent from the reading dictionary."""


class EmptyInputError(GendecError):
    """An operation that requires at least one element received none."""


class RatioError(GendecError):
    """Split ratios are out of range or do not sum to one."""


class EmptyCorpusError(GendecError):
    """Vocabulary fitting was attempted on an empty document list."""


class MissingIdfError(GendecError):
    """TF-IDF weighting was requested from a vocabulary fitted without idf."""


class NonFiniteError(GendecError):
    """Training produced a NaN or infinite loss or weight (divergence)."""


class DimensionMismatchError(GendecError):
    """A feature matrix column count does not match the model it is fed to."""


class UnsupportedModelError(GendecError):
    """The model kind does not support the requested operation."""


class LengthMismatchError(GendecError):
    """Two label sequences that must align have different lengths."""


class ConfigError(GendecError):
    """An invalid pairing, grid, or hyperparameter configuration."""


class TransliterationWarning(UserWarning):
    """Degenerate kana handled by a documented fallback (e.g. trailing sokuon)."""


class SingleClassWarning(UserWarning):
    """A classifier was trained on labels containing a single class."""
