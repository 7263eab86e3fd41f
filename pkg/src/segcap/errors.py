"""Exception types carrying stable machine-readable error codes."""

from __future__ import annotations


class SegcapError(Exception):
    """Base error.  ``code`` is a stable string, ``module`` names the stage
    of the pipeline that raised it."""

    module = "segcap"

    def __init__(self, code: str, message: str = ""):
        super().__init__(message or code)
        self.code = code
        self.message = message or code


class SegmentError(SegcapError, ValueError):
    module = "segments"


class PeriodError(SegcapError):
    module = "periods"


class QuadratureError(SegcapError):
    module = "quadrature"


class ThetaError(SegcapError):
    module = "theta"


class CharacteristicError(SegcapError, ValueError):
    module = "characteristics"


class GreenError(SegcapError):
    module = "capacity"


class OracleError(SegcapError, ValueError):
    module = "oracles"
