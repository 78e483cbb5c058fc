"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class GeometryError(ValueError):
    """Base class for domain errors raised by infgeom."""


class NonFinite(GeometryError):
    """A map evaluation produced a NaN or infinite coordinate."""


class PoleProximity(GeometryError):
    pass


class NotInCodomain(GeometryError):
    pass


class ZeroInput(GeometryError):
    pass


class RayExcluded(GeometryError):
    pass


class NotOnSphere(GeometryError):
    pass


class NotTangent(GeometryError):
    pass


class RankDeficient(GeometryError):
    pass


class NotOrthonormal(GeometryError):
    pass


class Singular(GeometryError):
    pass


class OutsideChart(GeometryError):
    """Input lies outside the domain of a chart.

    ``index`` is the offending grid index when the chart acts on a
    discretized map, otherwise ``None``.
    """

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class OutsideDomain(GeometryError):
    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class UnsupportedOrder(GeometryError):
    pass


class CutLocus(GeometryError):
    pass


class NotDiffeo(GeometryError):
    pass


class FlowBreakdown(GeometryError):
    pass


class UnknownSuite(GeometryError):
    pass


class UnknownDemo(GeometryError):
    pass
