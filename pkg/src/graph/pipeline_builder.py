from __future__ import annotations

import logging
from typing import Iterator, Optional

from langgraph.graph import END, StateGraph

from core.config import CompileOptions, CompilerConfig, load_config
from core.errors import CompileError, NetValidationError
from core.models import CompileState, QBNet, UnitaryProgram
from stages.complete import complete_node
from stages.eras import eras_node
from stages.matrices import matrices_node
from stages.merge import merge_node
from stages.repair import repair_node
from tools.net_model import validate_net


def build_pipeline(logger: logging.Logger | None = None, max_repair_rounds: int = 64):
    """Construct and compile the LangGraph compile pipeline.

    eras -> matrices -> merge -> repair (loops while a segment was repaired) -> complete.
    Any stage that records an error routes straight to END.
    """

    graph = StateGraph(CompileState)

    graph.add_node("eras", eras_node(logger=logger))
    graph.add_node("matrices", matrices_node(logger=logger))
    graph.add_node("merge", merge_node(logger=logger))
    graph.add_node("repair", repair_node(logger=logger, max_rounds=max_repair_rounds))
    graph.add_node("complete", complete_node(logger=logger))

    def proceed_to(next_stage: str):
        def _route(state: CompileState) -> str:
            return "end" if state.get("error") else next_stage

        return _route

    def route_repair(state: CompileState) -> str:
        if state.get("error"):
            return "end"
        return "repair" if state.get("repair_pending") else "complete"

    graph.set_entry_point("eras")
    graph.add_conditional_edges("eras", proceed_to("matrices"), {"matrices": "matrices", "end": END})
    graph.add_conditional_edges("matrices", proceed_to("merge"), {"merge": "merge", "end": END})
    graph.add_conditional_edges("merge", proceed_to("repair"), {"repair": "repair", "end": END})
    graph.add_conditional_edges(
        "repair",
        route_repair,
        {"repair": "repair", "complete": "complete", "end": END},
    )
    graph.add_edge("complete", END)

    return graph.compile()


def _init_state(net: QBNet, options: CompileOptions) -> CompileState:
    return {
        "net": net,
        "options": options,
        "breakpoints": (),
        "segments": [],
        "repairs": [],
        "repair_pending": False,
        "repair_rounds": 0,
        "program": None,
        "error": None,
        "stage_log": [],
    }


def _run_config(config: Optional[CompilerConfig]) -> dict:
    config = config or load_config()
    return {"recursion_limit": config.recursion_limit}


def stream_compile(
    net: QBNet,
    options: CompileOptions,
    logger: logging.Logger | None = None,
    config: Optional[CompilerConfig] = None,
) -> Iterator[CompileState]:
    """Run the pipeline, yielding the full CompileState after every stage."""

    app = build_pipeline(logger=logger)
    for state in app.stream(_init_state(net, options), config=_run_config(config), stream_mode="values"):
        yield state


def raise_for_error(state: CompileState) -> None:
    error = state.get("error")
    if not error:
        return
    if error["stage"] == "validate":
        raise NetValidationError(validate_net(state["net"]))
    raise CompileError(error["message"], stage=error["stage"])


def run_compile_state(
    net: QBNet,
    options: CompileOptions,
    logger: logging.Logger | None = None,
    config: Optional[CompilerConfig] = None,
) -> CompileState:
    """Execute the whole pipeline once and return the final CompileState, errors included."""

    app = build_pipeline(logger=logger)
    return app.invoke(_init_state(net, options), config=_run_config(config))


def run_compile(
    net: QBNet,
    options: CompileOptions,
    logger: logging.Logger | None = None,
    config: Optional[CompilerConfig] = None,
) -> UnitaryProgram:
    """Compile a net to a unitary program, raising the stage's error on failure."""

    state = run_compile_state(net, options, logger=logger, config=config)
    raise_for_error(state)
    program = state.get("program")
    if program is None:
        raise CompileError("pipeline finished without a program", stage="complete")
    return program
