"""Exception types shared across the package."""


class NTo1Error(Exception):
    """Base class for all package errors."""


class NotPrime(NTo1Error):
    pass


class ReducibleModulus(NTo1Error):
    pass


class DegreeMismatch(NTo1Error):
    pass


class DivisionByZero(NTo1Error):
    pass


class FieldMismatch(NTo1Error):
    pass


class ZeroInput(NTo1Error):
    pass


class FieldTooLarge(NTo1Error):
    pass


class ConstantPolynomial(NTo1Error):
    pass


class DomainTooLarge(NTo1Error):
    pass


class DegreeTooHigh(NTo1Error):
    pass


class WrongCharacteristic(NTo1Error):
    pass


class SetTooLarge(NTo1Error):
    pass


class HypothesesNotVerified(NTo1Error):
    pass


class SingularSystem(NTo1Error):
    pass


class GateExceeded(NTo1Error):
    pass


class HypothesisViolated(NTo1Error):
    """A construction hypothesis failed; carries the hypothesis name and a witness."""

    def __init__(self, name, witness=None):
        self.name = name
        self.witness = witness
        super().__init__(f"hypothesis violated: {name}" + (f" (witness: {witness!r})" if witness is not None else ""))
