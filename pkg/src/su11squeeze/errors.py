"""Exception hierarchy shared by the numerical modules."""


class SqueezeError(Exception):
    """Base class for all errors raised by su11squeeze."""


class NumericalOverflowError(SqueezeError, ArithmeticError):
    """A quantity left double-precision range (cosh growth, Bessel growth)."""


class TruncationInsufficient(SqueezeError):
    """The Fock basis is too small for the requested state or evolution."""

    def __init__(self, message, tail_mass=None, n_trunc=None):
        super().__init__(message)
        self.tail_mass = tail_mass
        self.n_trunc = n_trunc


class ConvergenceFailure(SqueezeError):
    """Adaptive truncation hit its size cap without settling."""

    def __init__(self, message, drift=None, n_trunc=None, tail_mass=None):
        super().__init__(message)
        self.drift = drift
        self.n_trunc = n_trunc
        self.tail_mass = tail_mass
