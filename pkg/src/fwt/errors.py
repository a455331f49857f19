class FWError(Exception):
    """Base class for engine errors."""


class SeriesNotRequested(FWError):
    """A commutator with a function of an even operator needs a truncation policy."""


class SeriesDivergence(FWError):
    """Successive approximation failed to raise the grade of the remainder."""


class NoConvergence(FWError):
    """Iteration cap reached with an odd residue still inside the policy."""


class NonHermitianInput(FWError):
    pass


class NotExact(FWError):
    pass


class NotInvertible(FWError):
    pass


class MixedCores(FWError):
    """Product of functions of two different even operators in one term."""


class UnboundJet(FWError):
    pass


class NonPositiveCore(FWError):
    pass


class GapClosed(FWError):
    pass


class OddTermPresent(FWError):
    pass


class StepRejected(FWError):
    pass


class ParseError(FWError):
    def __init__(self, msg, line=1, col=1, expected=()):
        self.line, self.col, self.expected = line, col, tuple(expected)
        exp = f" (expected one of: {', '.join(sorted(self.expected))})" if self.expected else ""
        super().__init__(f"{line}:{col}: {msg}{exp}")


class UnknownSymbol(ParseError):
    pass
