from __future__ import annotations

import logging

from core.errors import QBCError
from core.models import CompileState


def record_error(state: CompileState, stage: str, exc: Exception, logger: logging.Logger | None = None) -> CompileState:
    """Store a stage failure; the pipeline routes to END on the next edge."""

    message = str(exc.args[0]) if isinstance(exc, QBCError) and exc.args else str(exc)
    state["error"] = {"stage": getattr(exc, "stage", stage) if isinstance(exc, QBCError) else stage, "message": message}
    if logger:
        logger.error("[%s] %s", state["error"]["stage"], message)
    return state


def note(state: CompileState, line: str) -> None:
    state["stage_log"] = [*state.get("stage_log", []), line]
