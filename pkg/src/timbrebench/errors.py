"""Exception hierarchy shared across the harness."""


class TimbreBenchError(Exception):
    """Base class for all harness errors."""


class AudioFormatError(TimbreBenchError):
    """Unreadable, unsupported, or corrupt audio file."""


class ValidationError(TimbreBenchError):
    """A parameter or data file violates its contract."""


class AdapterError(TimbreBenchError):
    """An embedding adapter misbehaved (bad exit, bad response, protocol breach)."""


class FilterInstabilityError(TimbreBenchError):
    """A DSP render produced non-finite samples or an unstable configuration."""
