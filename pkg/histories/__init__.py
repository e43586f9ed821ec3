"""Recorded executions and the predicates defined over them."""
from histories.predicates import (
    check_link_invariants,
    is_loss_free,
    is_partitioned,
    opportunistic,
    opportunistic_implication,
)
from histories.store import dump_history, load_history, read_history, write_history

__all__ = [
    "check_link_invariants",
    "dump_history",
    "is_loss_free",
    "is_partitioned",
    "load_history",
    "opportunistic",
    "opportunistic_implication",
    "read_history",
    "write_history",
]
