"""Error taxonomy.  Each class carries the process exit code used by the CLI."""
from __future__ import annotations


class DimerPolyError(Exception):
    exit_code = 1


class InputError(DimerPolyError):
    exit_code = 2


class NotBipartite(InputError):
    exit_code = 10


class Disconnected(InputError):
    exit_code = 11


class MalformedRotation(InputError):
    exit_code = 12


class EdgeNotOnFace(DimerPolyError):
    exit_code = 13


class PatternMismatch(DimerPolyError):
    exit_code = 14


class DegreeViolation(DimerPolyError):
    exit_code = 15


class SearchExhausted(DimerPolyError):
    exit_code = 16


class VarTableMismatch(DimerPolyError):
    exit_code = 20


class NotDivisible(DimerPolyError):
    exit_code = 21


class NonUnitInverse(DimerPolyError):
    exit_code = 22


class FlipNotApplicable(DimerPolyError):
    exit_code = 30


class NonUniqueMinimum(DimerPolyError):
    exit_code = 31


class FrozenVertex(DimerPolyError):
    exit_code = 40


class NotHomogeneous(DimerPolyError):
    exit_code = 41


class MismatchReport(DimerPolyError):
    """Raised when a verification identity fails; carries the report."""
    exit_code = 42

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class MalformedPD(InputError):
    exit_code = 50


class InconsistentOrientation(InputError):
    exit_code = 51


class SpecializationMismatch(MismatchReport):
    exit_code = 52


class SegmentNotExterior(DimerPolyError):
    exit_code = 53


class EmptyAlpha(InputError):
    exit_code = 54


class TooLarge(DimerPolyError):
    exit_code = 60


class NotReducedAsserted(DimerPolyError):
    exit_code = 70
