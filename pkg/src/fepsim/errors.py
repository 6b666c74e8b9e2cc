"""Exception hierarchy shared across the simulator."""


class FepsimError(Exception):
    """Base class for all simulator errors."""


class ConfigError(FepsimError):
    """A configuration file is malformed or violates an invariant.

    Carries ``field`` naming the offending entry when known.
    """

    def __init__(self, message, field=None):
        super().__init__(message if field is None else f"{field}: {message}")
        self.field = field


class RangeError(FepsimError):
    """A query fell outside the supported input range."""


class SingularityError(FepsimError):
    """Pitch attitude entered the guard band around +/-90 deg.

    The offending Euler angles (rad) are attached so the caller can report
    the state that triggered the abort.
    """

    def __init__(self, euler_rad):
        theta_deg = float(euler_rad[1]) * 57.29577951308232
        super().__init__(f"pitch attitude {theta_deg:.3f} deg inside the kinematic guard band")
        self.euler_rad = tuple(float(x) for x in euler_rad)


class TrimError(FepsimError):
    """Trim iteration failed to converge; carries the final residual."""

    def __init__(self, message, residual=None, iterations=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class IdentificationError(FepsimError):
    """Parameter identification could not produce a usable fit."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class DecodeError(FepsimError):
    """Base class for wire-message decoding failures."""


class TruncatedError(DecodeError):
    """Datagram shorter than the declared or minimum length."""


class LengthError(DecodeError):
    """Declared payload length disagrees with the message layout."""


class ChecksumError(DecodeError):
    """Checksum verification failed."""


class UnknownIdError(DecodeError):
    """Message ID is not part of the protocol."""


class ReservedIdError(DecodeError):
    """Message ID is reserved: known to exist but with no published layout."""


class FieldError(DecodeError):
    """A payload field decoded to an invalid value (non-finite, bad enum)."""
