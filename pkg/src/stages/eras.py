from __future__ import annotations

import logging

from core.errors import QBCError
from core.models import CompileState
from tools.era_engine import find_eras
from tools.net_model import classify_nodes, validate_net

from .common import note, record_error


def eras_node(logger: logging.Logger | None = None):
    """Build the era stage: validate the net, classify nodes, find eras."""

    def _node(state: CompileState) -> CompileState:
        net, options = state["net"], state["options"]
        report = validate_net(net)
        if not report.ok:
            return record_error(state, "validate", ValueError("; ".join(v.message for v in report.violations)), logger)
        try:
            eras = find_eras(net, options.era_kind, logger=logger)
        except QBCError as exc:
            return record_error(state, "eras", exc, logger)

        state["z_in"], state["z_ex"] = classify_nodes(net)
        state["eras"] = eras
        note(state, f"eras: {options.era_kind}-node, L={eras.count}")
        return state

    return _node
