"""Exception hierarchy shared by all modules.

Two families matter to the command line: ``DomainError`` (bad input,
failed validation) maps to exit status 1 and ``NumericError`` (evaluation
or integration blew up) maps to exit status 2.
"""


class HamliftError(Exception):
    exit_code = 1


class DomainError(HamliftError, ValueError):
    exit_code = 1


class NumericError(HamliftError, ArithmeticError):
    exit_code = 2


class UnboundCoordinate(NumericError, KeyError):
    def __init__(self, coord):
        super().__init__(f"coordinate {coord} is not bound")
        self.coord = coord

    def __str__(self):
        return self.args[0]


class DivisionByZero(NumericError, ZeroDivisionError):
    pass


class ChartMismatch(DomainError):
    pass


class InvalidBaseExpression(DomainError):
    pass


class InvalidBaseField(DomainError):
    pass


class InvalidBaseForm(DomainError):
    pass


class Underdetermined(DomainError):
    pass


class NotNormalized(DomainError):
    pass


class ParseError(DomainError):
    def __init__(self, message, position, expected=()):
        self.position = position
        self.expected = tuple(sorted(set(expected)))
        detail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{message} at position {position}{detail}")


class UnknownVariable(DomainError):
    def __init__(self, name, position=None):
        self.name = name
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"unknown variable {name!r}{where}")


class EvaluationFailure(NumericError):
    pass


class NonFiniteState(NumericError):
    def __init__(self, step, coord=None):
        self.step = step
        self.coord = coord
        which = f" in {coord}" if coord is not None else ""
        super().__init__(f"non-finite state{which} at step {step}")
