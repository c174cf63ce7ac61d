"""Exceptions raised by pybprime."""

from typing import Union


class BprimeError(Exception):
    """Base class for all pybprime errors."""


class ZeroPolynomialError(BprimeError, ValueError):
    """An operation needing a nonzero polynomial was given zero."""


class NotHomogeneousError(BprimeError, ValueError):
    """A polynomial is not weighted-homogeneous for the active weights.

    Parameters
    ----------
    msg : str
        The error message.
    component : str, optional
        The name of the offending component, such as ``"h2"`` or ``"f"``.
    """

    def __init__(self, msg: str, component: Union[str, None] = None) -> None:
        super().__init__(msg)
        self.component = component


class ContextMismatchError(BprimeError, ValueError):
    """Operands live in different rings or morphism contexts."""


class NoSolutionError(BprimeError, ValueError):
    """No strictly positive weight system solves the degree equations."""


class ResourceLimitError(BprimeError, RuntimeError):
    """The Groebner computation exceeded its degree bound or pair budget."""


class InfiniteDimensionalError(BprimeError, ValueError):
    """The quotient by an ideal is not a finite-dimensional vector space."""


class NotIsolatedError(InfiniteDimensionalError):
    """A morphism fails the isolated complete intersection hypothesis."""


class DegenerateJacobianError(BprimeError, ValueError):
    """Every maximal minor of a Jacobian matrix vanishes identically."""


class BadArityError(BprimeError, ValueError):
    """A morphism has too many components for its number of variables."""


class UnknownGeneratorError(BprimeError, ValueError):
    """A certificate uses a generator that is neither ``f`` nor a minor."""


class ParseError(BprimeError, ValueError):
    """A polynomial expression could not be parsed.

    Parameters
    ----------
    msg : str
        The error message.
    line : int
        The 1-based line of the offending token.
    column : int
        The 1-based column of the offending token.
    token : str
        The offending token, empty at the end of the input.
    """

    def __init__(self, msg: str, line: int, column: int, token: str) -> None:
        super().__init__(
            f"{msg} at line {line}, column {column} (token {token!r})"
        )
        self.line = line
        self.column = column
        self.token = token
