from __future__ import annotations

import logging

from core.errors import QBCError
from core.models import CompileState
from tools.chain_builder import build_all

from .common import note, record_error


def matrices_node(logger: logging.Logger | None = None):
    """Build the delta-insertion stage: appearance bounds, Δ sets and era matrices."""

    def _node(state: CompileState) -> CompileState:
        try:
            build = build_all(state["net"], state["eras"], logger=logger)
        except QBCError as exc:
            return record_error(state, "matrices", exc, logger)

        state["bounds"] = build.bounds
        state["deltas"] = build.deltas
        state["era_matrices"] = list(build.matrices)
        note(state, f"matrices: shapes {[m.shape for m in build.matrices]}")
        return state

    return _node
