"""Exception hierarchy shared by every capsim package."""
from __future__ import annotations

from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from app.models_history import History


class CapsimError(Exception):
    """Base class for all simulator, checker and experiment errors."""


class InvalidSpecError(CapsimError):
    """A scenario or fault description violates its invariants."""


class ScenarioValidationError(CapsimError):
    """A scenario file failed to parse or validate.

    `errors` holds every problem found, each as {"loc": "a.b.0", "msg": "..."}.
    """

    def __init__(self, path: str, errors: list[dict[str, Any]]):
        self.path = path
        self.errors = errors
        lines = "; ".join(f"{e['loc']}: {e['msg']}" for e in errors)
        super().__init__(f"{path}: {lines}")


class NonTerminatingError(CapsimError):
    """Some invoked operation did not complete before quiescence."""

    def __init__(self, history: History, unfinished: list[int]):
        self.history = history
        self.unfinished = unfinished
        super().__init__(
            f"{len(unfinished)} operation(s) did not terminate "
            f"(algorithm={history.algorithm}, op_ids={unfinished})"
        )


class HistoryFormatError(CapsimError):
    """A history file is not a valid record stream."""


class LinkInvariantError(CapsimError):
    """A recorded run duplicated or created a message."""


class IncompleteHistoryError(CapsimError):
    """A predicate needs a history that reached quiescence."""


class CheckError(CapsimError):
    """A checker cannot decide the property for this history."""


class TooLargeError(CheckError):
    pass


class WrongRegisterKindError(CheckError):
    pass


class MissingMetadataError(CheckError):
    pass


class NoProbeReadsError(CheckError):
    pass


class ClassificationGapError(CapsimError):
    """A fitted latency slope landed between the two classification thresholds."""


class BoundViolationError(CapsimError):
    """A measured latency contradicts a known lower bound (a measurement bug)."""
