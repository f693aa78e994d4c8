"""Exception and warning types shared across the package."""


class ParseError(Exception):
    """Malformed source annotation file (XML or brat standoff)."""

    def __init__(self, message, path=None, line=None):
        loc = ""
        if path is not None:
            loc += str(path)
        if line is not None:
            loc += f":{line}"
        super().__init__(f"{loc}: {message}" if loc else message)
        self.path = path
        self.line = line


class ConversionError(Exception):
    """Source graph cannot be mapped onto the joint annotation scheme."""


class FormatError(Exception):
    """Malformed tagged-token, lexicon, stop-word, or review file."""

    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class LexiconSizeWarning(UserWarning):
    """Marker lexicon does not have the expected 255 entries."""


class DegenerateData(Exception):
    """Training data contains fewer than two classes."""


class DimensionMismatch(Exception):
    """Input width does not match the model's feature dimension."""


class TooFewInstances(Exception):
    """Not enough labeled instances of some class to build the requested folds."""


class EmptyPredictionSet(Exception):
    """Metrics requested over zero predictions."""


class MisalignedPredictionSets(Exception):
    """Two prediction sets do not cover the same instances with the same gold labels."""


class ProtocolViolation(Exception):
    """Experiment inputs break the cross-validation protocol (e.g. stale fold plan)."""
