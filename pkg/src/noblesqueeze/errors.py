"""Exception types shared across the package."""


class NobleSqueezeError(Exception):
    """Base class for all package errors."""


class UnsupportedPair(NobleSqueezeError):
    """Requested alkali / noble-gas combination has no tabulated constants."""


class OutOfRangeTemperature(NobleSqueezeError):
    """Temperature outside the validity range of a vapor-pressure model."""


class ParseError(NobleSqueezeError):
    """Config file is malformed or contains unknown keys."""


class ValidationError(NobleSqueezeError):
    """A config or derived value violates an invariant.

    ``field`` carries the dotted path of the offending entry when known.
    """

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class RegimeViolation(NobleSqueezeError):
    """A working-point guard failed (theory validity, not a hard error).

    These guards encode 'much greater than' conditions of the underlying
    approximations and can be overridden explicitly.
    """


class DispersiveRegimeViolation(RegimeViolation):
    """Probe detuning not far enough outside the pressure-broadened line."""


class OffResonanceViolation(RegimeViolation):
    """Spin-frequency mismatch not large against gamma_a, J and Q."""


class StepTooLarge(NobleSqueezeError):
    """Integrator step does not resolve the fastest oscillation."""


class DegenerateMeasurement(NobleSqueezeError):
    """Conditioning on a quadrature with (numerically) zero variance."""
