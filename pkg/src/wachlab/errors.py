"""Exception hierarchy shared by all wachlab modules."""


class WachlabError(ValueError):
    pass


class NonMonomialInverse(WachlabError):
    """Inversion was requested for a scalar that is not a unit monomial."""


class ZeroValuation(WachlabError):
    pass


class ParamValuation(WachlabError):
    """A formal family parameter is still present, so no valuation exists."""


class SingularBaseChange(WachlabError):
    pass


class NonMonomialFrobenius(WachlabError):
    pass


class NotDiagonal(WachlabError):
    pass


class NotAdmissible(WachlabError):
    pass


class NonNormalized(WachlabError):
    pass


class EvenDegree(WachlabError):
    pass


class TooLarge(WachlabError):
    pass


class TruncationTooShallow(WachlabError):
    pass


class MissingGammaData(WachlabError):
    pass


class UnsupportedShape(WachlabError):
    pass


class CapExceeded(WachlabError):
    pass
