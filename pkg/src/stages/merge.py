from __future__ import annotations

import logging

from core.errors import QBCError
from core.models import BreakpointSpec, CompileState
from tools.unitary_synthesis import kept_breakpoints, merge_breakpoints

from .common import note, record_error


def merge_node(logger: logging.Logger | None = None):
    """Build the merge stage: keep only the breakpoints measurements need."""

    def _node(state: CompileState) -> CompileState:
        spec = BreakpointSpec(measured_nodes=tuple(state["options"].measured_nodes))
        matrices = state["era_matrices"]
        try:
            state["breakpoints"] = kept_breakpoints(matrices, spec)
            state["segments"] = merge_breakpoints(matrices, spec, logger=logger)
        except (QBCError, ValueError) as exc:
            return record_error(state, "merge", exc, logger)

        state["repairs"] = []
        state["repair_rounds"] = 0
        note(state, f"merge: segments {[m.label for m in state['segments']]}")
        return state

    return _node
