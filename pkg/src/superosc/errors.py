"""Exception and warning types.

Every error carries a stable ``code`` string so the CLI can emit
machine-readable failures.
"""


class SuperoscError(Exception):
    code = "SuperoscError"

    def __init__(self, message="", **details):
        super().__init__(message)
        self.details = details

    def to_dict(self):
        out = {"code": self.code, "message": str(self)}
        if self.details:
            out["details"] = {k: str(v) for k, v in self.details.items()}
        return out


class UnsupportedMode(SuperoscError):
    code = "UnsupportedMode"


class ModeMismatch(SuperoscError):
    code = "ModeMismatch"


class InvalidPrecision(SuperoscError):
    code = "InvalidPrecision"


class DegenerateGrid(SuperoscError):
    code = "DegenerateGrid"


class DuplicateNodes(SuperoscError):
    code = "DuplicateNodes"


class SingularSystem(SuperoscError):
    code = "SingularSystem"


class InvalidSignal(SuperoscError):
    code = "InvalidSignal"


class PrecisionInsufficient(SuperoscError):
    code = "PrecisionInsufficient"


class NearZeroSignal(SuperoscError):
    code = "NearZeroSignal"


class InvalidGenerator(SuperoscError):
    code = "InvalidGenerator"


class TailBoundUnavailable(SuperoscError):
    code = "TailBoundUnavailable"


class InvalidParameter(SuperoscError, ValueError):
    code = "InvalidParameter"


class InvalidConfig(SuperoscError):
    code = "InvalidConfig"


class UsageError(SuperoscError):
    code = "UsageError"


class GeneratorHypothesisViolated(UserWarning):
    """Some G^(p)(0) vanishes, so the uniqueness argument does not apply."""

    code = "GeneratorHypothesisViolated"
