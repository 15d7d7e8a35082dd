"""Exception hierarchy shared by all modules."""


class ShapeAlgError(Exception):
    pass


# scalars
class DivisionByZero(ShapeAlgError, ZeroDivisionError):
    pass


class NotDivisible(ShapeAlgError, ArithmeticError):
    pass


class EvalAtZero(ShapeAlgError, ValueError):
    pass


# freealg
class GeneratorSetMismatch(ShapeAlgError, ValueError):
    pass


class UnknownGenerator(ShapeAlgError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class ExprSyntaxError(ShapeAlgError, ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


# rewrite
class NonInvertibleLead(ShapeAlgError, ValueError):
    pass


class BoundExceeded(ShapeAlgError, RuntimeError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NotConfluent(ShapeAlgError, RuntimeError):
    pass


# presentations
class UnknownPresentation(ShapeAlgError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class PoleAtValue(ShapeAlgError, ValueError):
    pass


class PresentationFormatError(ShapeAlgError, ValueError):
    pass


# weyl
class NegativeWeight(ShapeAlgError, ValueError):
    pass


# repmod
class NoIntertwiner(ShapeAlgError, RuntimeError):
    pass


class NonUnique(ShapeAlgError, RuntimeError):
    def __init__(self, message, dimension):
        super().__init__(message)
        self.dimension = dimension


# oracle
class NotClassical(ShapeAlgError, ValueError):
    pass


class SelectorMismatch(ShapeAlgError, ValueError):
    pass
