"""Exception taxonomy shared across the package.

Every error that a caller is expected to branch on has its own class so that
CLI exit-code mapping and tests can catch precisely what they mean to catch.
"""


class WaveOracleError(Exception):
    """Base class for all package-specific errors."""


# --- oracle construction / querying ---

class AllShiftersEqual(WaveOracleError):
    """Degenerate shifter set: every internal phase shift is identical."""


class BadShifterValue(WaveOracleError):
    """A binary oracle shifter is not +pi/4 or -pi/4."""


class ValueNotInAlphabet(WaveOracleError):
    """A phase value is not a member of the oracle's phase alphabet."""


class ArityMismatch(WaveOracleError):
    """A query supplied the wrong number of input phases."""


class NoUniqueTarget(WaveOracleError):
    """The oracle does not have exactly one maximally-constructive input."""


class GroundTruthAccessError(WaveOracleError):
    """A test-only ground-truth accessor was called without the access flag."""


# --- search ---

class TieAtStep(WaveOracleError):
    """Both candidate phases produced the same power within tolerance."""


class VerificationFailed(WaveOracleError):
    """The confirmation query did not trip the detector."""


class TieBetweenSegments(WaveOracleError):
    """Two segments tied within tolerance and tie descent was disabled."""


class SpaceTooLarge(WaveOracleError):
    """Exhaustive enumeration was requested above the configured cap."""


# --- period finding / factorization ---

class NotCoprime(WaveOracleError):
    """gcd(base, modulus) != 1. In a factorization flow this is a lucky
    case: the gcd itself is a nontrivial factor."""

    def __init__(self, base: int, modulus: int, common: int):
        super().__init__(f"gcd({base}, {modulus}) = {common} != 1")
        self.base = base
        self.modulus = modulus
        self.common = common


class NotConverged(WaveOracleError):
    """The running superposition phase never settled."""


class FalseMatch(WaveOracleError):
    """Phase recurrences were found but none passed the arithmetic check."""


class OddPeriod(WaveOracleError):
    """The gcd step requires an even period."""


class TrivialCase(WaveOracleError):
    """Both gcd candidates are 1 or the modulus itself."""


class ExhaustedAttempts(WaveOracleError):
    """The factorization retry budget ran out."""


class UnsupportedModulus(WaveOracleError):
    """The factorization target is even, prime, or a prime power."""

    def __init__(self, n: int, reason: str):
        super().__init__(f"N={n}: {reason}")
        self.n = n
        self.reason = reason


# --- tabulated-oracle datasets ---

class MalformedRow(WaveOracleError):
    """A dataset row or header could not be parsed."""


class DuplicateCombination(WaveOracleError):
    """The same phase combination appears twice in a dataset."""


class MixedArity(WaveOracleError):
    """Dataset rows disagree on the number of phase columns."""


class CombinationNotMeasured(WaveOracleError):
    """Lookup of a phase combination absent from the table (no interpolation)."""


class MissingLeafData(WaveOracleError):
    """The winning segment's exhaustive-stage combinations are absent."""
