"""Exception types raised across the package."""


class TraceAtlasError(Exception):
    """Base class for all domain errors; the CLI maps these to exit code 1."""

    kind = "error"

    def to_dict(self):
        return {"error": self.kind, "message": str(self)}


class ParseError(TraceAtlasError, ValueError):
    kind = "parse_error"

    def __init__(self, message, token=None):
        super().__init__(message)
        self.token = token

    def to_dict(self):
        d = super().to_dict()
        if self.token is not None:
            d["token"] = self.token
        return d


class DomainError(TraceAtlasError, ValueError):
    kind = "domain_error"


class EndpointRootError(DomainError):
    """An interval endpoint handed to a Sturm count is itself a root."""

    kind = "endpoint_root"


class ConvergenceError(TraceAtlasError, ArithmeticError):
    kind = "convergence_error"

    def __init__(self, message, achieved_radius=None):
        super().__init__(message)
        self.achieved_radius = achieved_radius

    def to_dict(self):
        d = super().to_dict()
        d["achieved_radius"] = self.achieved_radius
        return d


class PrecisionError(TraceAtlasError, ArithmeticError):
    """A certified root disk straddles a region boundary."""

    kind = "insufficient_precision"

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index

    def to_dict(self):
        d = super().to_dict()
        d["index"] = self.index
        return d


class InfiniteEnergyError(DomainError):
    kind = "infinite_energy"


class ExceptionalRadiusError(DomainError):
    kind = "exceptional_radius"


class NoCandidatesError(DomainError):
    kind = "no_candidates"
