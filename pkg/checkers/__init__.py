"""Consistency checkers over recorded histories, selectable by property name."""
from typing import Callable

from app.models_history import History, Verdict
from checkers.causal import check_causal
from checkers.eventual import check_eventual
from checkers.linearizability import (
    check_linearizable,
    check_sequential,
    check_terminating_linearizable,
)
from checkers.register_model import legal_sequence, replay_witness

PROPERTIES: dict[str, Callable[[History], Verdict]] = {
    "linearizability": check_linearizable,
    "sequential": check_sequential,
    "causal": check_causal,
    "eventual": check_eventual,
    "terminating-linearizability": check_terminating_linearizable,
}

for _name, _check in PROPERTIES.items():
    _check.property_name = _name  # type: ignore[attr-defined]


def check(history: History, property_name: str) -> Verdict:
    try:
        checker = PROPERTIES[property_name]
    except KeyError:
        raise ValueError(
            f"unknown property '{property_name}' (valid: {', '.join(PROPERTIES)})"
        ) from None
    return checker(history)


__all__ = [
    "PROPERTIES",
    "check",
    "check_causal",
    "check_eventual",
    "check_linearizable",
    "check_sequential",
    "check_terminating_linearizable",
    "legal_sequence",
    "replay_witness",
]
