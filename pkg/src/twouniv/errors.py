"""Named failures of the embedding stages.

Each exception carries the stage it belongs to so the pipeline can turn it
into a failure report without inspecting messages.
"""

from __future__ import annotations


class StageError(RuntimeError):
    stage = "pipeline"


class CenterCapacityError(StageError):
    stage = "core"

    def __init__(self, requested: int, achievable: int):
        super().__init__(f"need {requested} centres, at most {achievable} available")
        self.requested = requested
        self.achievable = achievable


class PlacementError(StageError):
    stage = "core"


class ClosureError(StageError):
    stage = "core"


class ReservoirShortfall(StageError):
    stage = "core"


class PathSearchError(StageError):
    stage = "middle"


class CycleSearchError(StageError):
    stage = "middle"


class ReservoirUnderflow(StageError):
    stage = "switch"


class SwitchSearchError(StageError):
    stage = "switch"
