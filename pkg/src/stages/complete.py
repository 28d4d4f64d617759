from __future__ import annotations

import logging

from core.errors import QBCError
from core.models import CompileState
from tools.unitary_synthesis import assemble_program

from .common import note, record_error


def complete_node(logger: logging.Logger | None = None):
    """Build the completion stage: N_S, zero padding and Gram-Schmidt unitary extension."""

    def _node(state: CompileState) -> CompileState:
        try:
            program = assemble_program(
                state["segments"],
                state["eras"],
                state["options"],
                repairs=state.get("repairs", []),
                logger=logger,
            )
        except QBCError as exc:
            return record_error(state, "complete", exc, logger)

        state["program"] = program
        state["dims"] = program.dims  # type: ignore[typeddict-item]
        note(state, f"complete: N_S={program.n_s}, {len(program.unitaries)} unitaries")
        return state

    return _node
