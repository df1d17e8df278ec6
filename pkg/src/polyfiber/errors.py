"""Exception hierarchy shared by the library and the command line front end."""


class PolyfiberError(Exception):
    """Base class for all errors raised by polyfiber."""

    exit_code = 1


class ParseError(PolyfiberError, ValueError):
    exit_code = 2


class InvalidSpectrumError(PolyfiberError, ValueError):
    """The input is not an element of V_d (some multiplier equals 1,
    a residue vanishes, or the residues do not sum to zero)."""

    exit_code = 2


class DomainError(PolyfiberError, ValueError):
    exit_code = 2


class ConsistencyError(PolyfiberError, ArithmeticError):
    """A quantity that must be a non-negative integer came out otherwise.

    ``ledger`` carries whatever intermediate data was available so the
    failure can be diagnosed from the report alone.
    """

    exit_code = 4

    def __init__(self, message, ledger=None):
        super().__init__(message)
        self.ledger = ledger or {}


class CertificationInconclusive(PolyfiberError, RuntimeError):
    """Numerical path tracking could not be completed reliably."""

    exit_code = 3


class CertificationFailure(PolyfiberError, RuntimeError):
    """The numerical solution set is internally inconsistent (for example a
    group image of a solution matches no computed solution)."""

    exit_code = 3
