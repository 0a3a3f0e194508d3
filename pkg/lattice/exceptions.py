# lattice/exceptions.py


class RichardsonError(ValueError):
    """Error base del simulador; los comandos la traducen a códigos de salida."""


class DimensionMismatch(RichardsonError):
    pass


class EmptySiteSet(RichardsonError):
    pass


class OverlappingSets(RichardsonError):
    pass


class InvalidRate(RichardsonError):
    pass


class InvalidStopCondition(RichardsonError):
    pass


class NoEligibleEdge(RichardsonError):
    """Ningún tipo tiene una arista elegible con tiempo finito."""


class ForestError(RichardsonError):
    pass


class PreconditionFailed(RichardsonError):
    pass


class InfertilePair(RichardsonError):
    pass


class InvalidConstruction(RichardsonError):
    """Construcción de la realización desconocida o no admitida en ese uso."""
