"""Exception hierarchy.

Every error carries a ``witness`` dict that is JSON-serializable, and an
``exit_code`` used by the command line front end:

    1  a mathematical property failed
    2  malformed input
    3  size budget exceeded
"""


class FidlError(Exception):
    exit_code = 1

    def __init__(self, message, **witness):
        super().__init__(message)
        self.witness = witness

    def to_json(self):
        return {"error": type(self).__name__, "message": str(self), **self.witness}


class PropertyFailure(FidlError):
    """A hard mathematical property did not hold."""


class MalformedInput(FidlError):
    exit_code = 2


class ShapeMismatch(MalformedInput):
    pass


class KindMismatch(MalformedInput):
    pass


class BudgetExceeded(FidlError):
    exit_code = 3


# order-core
class NotAPoset(PropertyFailure):
    pass


class NoMeetOrJoin(PropertyFailure):
    pass


class NotDistributive(PropertyFailure):
    pass


class NotBounded(PropertyFailure):
    pass


# modules
class AxiomViolation(PropertyFailure):
    def __init__(self, violations):
        names = ", ".join(v["axiom"] for v in violations)
        super().__init__(f"axioms violated: {names}", violations=violations)
        self.violations = violations


class PreconditionFailed(PropertyFailure):
    pass


class SortMismatch(PropertyFailure):
    pass


class EmptyBase(MalformedInput):
    pass


class NotAHomomorphism(PropertyFailure):
    pass


# frames
class ClosureViolation(PropertyFailure):
    pass


class ConditionViolation(PropertyFailure):
    pass


# morphisms
class NotLatticeHom(PropertyFailure):
    pass


class SquareViolation(PropertyFailure):
    pass


class CarrierNotSublattice(PropertyFailure):
    pass


class TargetMismatch(PropertyFailure):
    pass


# congruences
class NotStronglyClosed(PropertyFailure):
    pass
