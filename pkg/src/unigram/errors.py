"""Exception hierarchy shared across the package."""


class UnigramError(Exception):
    """Base class for all errors raised by this package."""


# --- grammar / templates ---

class MalformedSignature(UnigramError):
    pass


class DanglingSubstitution(UnigramError):
    pass


class MissingRealizer(UnigramError):
    pass


class UnknownLanguage(UnigramError):
    pass


class GrammarFileError(UnigramError):
    pass


class OpenGrammar(UnigramError):
    """A type is used as rule input but has no producing rule."""


# --- generation ---

class UnexpandedLeaf(UnigramError):
    pass


class NoProducingRule(UnigramError):
    pass


class GenerationExhausted(UnigramError):
    pass


class DepthExceeded(UnigramError):
    pass


class ResidualSlot(UnigramError):
    pass


class LexiconTooSmall(UnigramError):
    pass


class LexiconFileError(UnigramError):
    pass


# --- logic backend ---

class FofSyntaxError(UnigramError):
    """TPTP parse failure; carries the byte offset of the offending token."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class BoundTooSmall(UnigramError):
    pass


class ProverNotFound(UnigramError):
    pass


class ProverCrashed(UnigramError):
    pass


class Undecided(UnigramError):
    """A satisfiability check came back UNKNOWN where a definite verdict was required."""


# --- pipeline ---

class SamplingExhausted(UnigramError):
    pass


class DegenerateLabels(UnigramError):
    pass


class InsufficientNonNeutrals(UnigramError):
    pass


class ConfigError(UnigramError):
    pass


class ValidationFailure(UnigramError):
    pass
