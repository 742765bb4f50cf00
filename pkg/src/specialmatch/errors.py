"""Exception hierarchy shared across the package."""


class SpecialMatchError(Exception):
    """Base class for all errors raised by this package."""


class BudgetExceeded(SpecialMatchError):
    """A computation grew past its configured size budget."""


class ClosureBudgetExceeded(BudgetExceeded):
    """The braid-move closure of a word visited too many nodes."""


class InvalidJ(SpecialMatchError):
    pass


class NotADescent(SpecialMatchError):
    pass


class NotAMatching(SpecialMatchError):
    pass


class NotInDomain(SpecialMatchError):
    pass


class PreconditionViolated(SpecialMatchError):
    pass


class DihedralInterval(SpecialMatchError):
    pass


class NotSpecial(SpecialMatchError):
    pass


class NoSpecialMatching(SpecialMatchError):
    pass


class SystemViolation(SpecialMatchError):
    """A candidate triple (J, H, M) fails one of the system axioms.

    ``axiom`` is one of ``"Cs"``, ``"S0"``, ``"S1"``, ``"S2"``.
    """

    def __init__(self, axiom, detail):
        super().__init__(f"{axiom}: {detail}")
        self.axiom = axiom
        self.detail = detail

    def as_dict(self):
        return {"axiom": self.axiom, "detail": self.detail}


class InvalidRightSystem(SpecialMatchError):
    def __init__(self, axiom, detail):
        super().__init__(f"{axiom}: {detail}")
        self.axiom = axiom
        self.detail = detail


class InvalidLeftSystem(InvalidRightSystem):
    pass
