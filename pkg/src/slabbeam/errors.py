"""Exception hierarchy shared by the library and the CLI."""


class SlabError(Exception):
    """Base class for all slabbeam errors."""


class DomainError(SlabError, ValueError):
    """A numeric argument lies outside its documented domain."""


class RegimeError(SlabError, ValueError):
    """The requested quantity does not exist in the current regime."""


class CriticalRegimeError(RegimeError):
    """Incidence sits on the critical angle, where the interface formulas degenerate."""


class SeriesDivergenceError(RegimeError):
    """Multiple-reflection terms were requested in the tunneling regime."""


class QuadratureError(SlabError):
    """The quadrature rule cannot resolve the integrand at the requested point."""
