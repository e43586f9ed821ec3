"""Link delay sampling and per-process clock skew."""
import numpy as np

from app.models import DelayModel, ProcessLayout


class DelaySampler:
    """Draws one-way message delays from a DelayModel.

    All randomness comes from the simulator's seeded generator, so the
    sequence of delays depends only on the scenario seed and the order of
    sends.
    """

    def __init__(self, model: DelayModel, layout: ProcessLayout, rng: np.random.Generator):
        self.model = model
        self.layout = layout
        self._rng = rng

    def sample(self, sender: int, receiver: int) -> int:
        model = self.model
        if model.kind == "fixed":
            return model.d
        if model.kind == "uniform":
            low = model.d - model.uncertainty
            # floor of a draw over [d-u, d+1), every tick equally likely
            return min(int(self._rng.uniform(low, model.d + 1)), model.d)
        if self.layout.site_of(sender) == self.layout.site_of(receiver):
            return model.d_local or 0
        return model.d_remote or 0


def draw_clock_skews(model: DelayModel, count: int, rng: np.random.Generator) -> list[int]:
    """Constant per-process clock offsets in [0, d)."""
    bound = model.max_delay
    if bound < 1:
        return [0] * count
    return [min(int(rng.uniform(0, bound)), bound - 1) for _ in range(count)]
