"""Exception hierarchy shared by every module.

Each class carries the process exit code the command-line front end maps it to.
"""


class TowerError(Exception):
    exit_code = 1


class SpecError(TowerError, ValueError):
    """Malformed or mathematically inadmissible input (bad tower spec, non-prime p, ...)."""

    exit_code = 4


class PrecisionError(TowerError, ArithmeticError):
    """The working precision (a, b_T, b_s) is too small for the requested answer."""

    exit_code = 2


class CheckFailed(TowerError, AssertionError):
    """An identity that must hold exactly did not hold."""

    exit_code = 3
