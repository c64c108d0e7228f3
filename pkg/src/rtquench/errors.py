"""Exception taxonomy shared across the package.

Grouping mirrors how failures are reported by the command-line runner:
parameter/validation problems (exit code 2), numerical failures
(exit code 3), and phase-precondition violations (exit code 4).
"""


class ParameterError(ValueError):
    """Invalid model parameter, configuration value, or argument shape."""


class DimensionLimitError(ParameterError):
    """Requested chain length exceeds the dense-matrix guard."""


class EigensolverError(RuntimeError):
    """The dense eigensolver failed to converge.

    Carries whatever diagnostics the backend provided in ``details``.
    """

    def __init__(self, message, details=None):
        super().__init__(message)
        self.details = details


class DefectiveSpectrumError(RuntimeError):
    """A diagonalizable spectrum was required but the matrix is defective.

    Raised by operations that need a complete eigenbasis (biorthogonal
    metric construction, spectral time evolution).  Callers that must
    handle defective matrices should use the matrix-exponential path
    instead.
    """


class BrokenPhaseError(RuntimeError):
    """The initial Hamiltonian is not in the real-spectrum (unbroken) regime.

    Quench protocols require the pre-quench field to exceed the exceptional
    point so the ground state is unambiguous.
    """


class DegenerateModeError(BrokenPhaseError):
    """A momentum-mode block is degenerate (vanishing initial gap).

    Only possible when the pre-quench field does not exceed the exceptional
    point, hence a phase-precondition failure.  The offending momentum is
    attached as ``phi``.
    """

    def __init__(self, message, phi=None):
        super().__init__(message)
        self.phi = phi
