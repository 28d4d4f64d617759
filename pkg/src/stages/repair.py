from __future__ import annotations

import logging

from core.errors import QBCError
from core.models import CompileState
from tools.unitary_synthesis import check_isometry, repair

from .common import note, record_error


def repair_node(logger: logging.Logger | None = None, max_rounds: int = 64):
    """Build the repair stage: fix the first non-isometric segment per visit.

    `repair_pending` tells the router to come back; once every segment passes
    the pipeline moves on to completion.
    """

    def _node(state: CompileState) -> CompileState:
        tol = state["options"].isometry_tol
        segments = state["segments"]
        failing = next((k for k, s in enumerate(segments) if not check_isometry(s, tol).passed), None)
        if failing is None:
            state["repair_pending"] = False
            return state

        state["repair_rounds"] = state.get("repair_rounds", 0) + 1
        if state["repair_rounds"] > max_rounds:
            return record_error(state, "repair", RuntimeError(f"repair loop guard hit after {max_rounds} rounds"), logger)
        try:
            outcome = repair(segments, failing, tol=tol, gs_tol=state["options"].gs_tol, logger=logger)
        except QBCError as exc:
            state["repair_pending"] = False
            return record_error(state, "repair", exc, logger)

        state["segments"] = list(outcome.matrices)
        state.setdefault("repairs", []).extend(outcome.actions)
        if outcome.removed_breakpoint is not None:
            state["breakpoints"] = tuple(p for p in state.get("breakpoints", ()) if p != outcome.removed_breakpoint)
        state["repair_pending"] = True
        for action in outcome.actions:
            note(state, f"repair ({action.strategy}) {action.segment}: {action.detail}")
        return state

    return _node
