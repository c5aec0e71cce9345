"""Exception types raised across the package."""


class FulldispError(Exception):
    """Base class for all package errors."""


class DomainError(FulldispError, ValueError):
    """Input outside the admissible domain (bad grid, cavitation, z out of range...)."""


class MultiplierError(FulldispError, ArithmeticError):
    """A Fourier symbol evaluated to a non-finite value."""

    def __init__(self, message, wavenumber=None):
        super().__init__(message)
        self.wavenumber = wavenumber


class NonConvergenceError(FulldispError, RuntimeError):
    """An iterative solver stopped before reaching its tolerance."""

    def __init__(self, message, residual=float("nan"), iterations=0):
        super().__init__(f"{message} (last residual {residual:.3e} after {iterations} iterations)")
        self.residual = residual
        self.iterations = iterations


class InvertibilityError(FulldispError, RuntimeError):
    """The elliptic operator of a V-form model could not be inverted."""

    def __init__(self, message, mu=None, eps=None, zeta_max=None):
        super().__init__(f"{message} (mu={mu}, eps={eps}, max|zeta|={zeta_max})")
        self.mu = mu
        self.eps = eps
        self.zeta_max = zeta_max


class BlowUpError(FulldispError, RuntimeError):
    """Time integration produced non-finite values or lost non-cavitation."""

    def __init__(self, message, t=None, partial=None):
        super().__init__(message)
        self.t = t
        self.partial = partial if partial is not None else []


class ConfigError(FulldispError, ValueError):
    """Invalid run configuration. Carries every problem found, with line numbers."""

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class SnapshotError(FulldispError, ValueError):
    """Malformed or incompatible snapshot file."""
