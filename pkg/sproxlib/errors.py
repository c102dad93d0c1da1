# -*- coding: utf-8 -*-

"""
Exceptions raised by sproxlib.

Licensed under the MIT License, see LICENSE.
"""


class SproxError(Exception):
    """
    sproxlib base exception.
    """
    pass


class InvalidArgumentError(SproxError, ValueError):
    """
    Raised on a bad argument, such as a dimension
    mismatch or a non-positive step size.
    """
    pass


class ConfigurationError(SproxError):
    """
    Raised when a solver or benchmark configuration is invalid.
    """
    pass


class UnsupportedAlgorithmError(SproxError):
    """
    Raised when an algorithm needs a finite-sum oracle,
    but was given a general stochastic one.
    """
    pass


class SolverError(SproxError):
    """
    Raised when a debug check inside a solver run fails.
    """
    pass


class DatasetParseError(SproxError):
    """
    Raised on a malformed dataset line.
    """
    def __init__(self, message, *, path=None, line_number=None):
        """
        Initialize the parse error.

        :param message: What went wrong.
        :type message: str
        :param path: The dataset path.
        :type path: str | None
        :param line_number: The 1-based line number of the bad line.
        :type line_number: int | None
        """
        self.path = path
        self.line_number = line_number

        where = ''
        if path is not None:
            where = f'{path}:'
        if line_number is not None:
            where += f'{line_number}:'

        super().__init__(f'{where} {message}' if where else message)
