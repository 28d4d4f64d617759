from __future__ import annotations

import logging
from functools import reduce
from typing import List, Optional

import numpy as np

from core.errors import QBCError
from core.models import QBNet, UnitaryProgram, VerificationReport

from .chain_builder import build_all, combine
from .era_engine import find_eras
from .index_codec import schema_for
from .oracle import DEFAULT_STORY_CAP, external_ids, feynman_vector

INF = float("inf")


def unitarity_residual(unitary: np.ndarray, n_s: int) -> float:
    if unitary.shape != (n_s, n_s):
        return INF
    identity = np.eye(n_s)
    return float(
        max(
            np.max(np.abs(unitary.conj().T @ unitary - identity)),
            np.max(np.abs(unitary @ unitary.conj().T - identity)),
        )
    )


def _true_prefixes(program: UnitaryProgram, net: QBNet) -> List[np.ndarray]:
    """M_b ... M_1 at the end of every segment, rebuilt from the net over full schemas."""

    eras = find_eras(net, program.era_kind)
    matrices = build_all(net, eras).matrices
    prefixes: List[np.ndarray] = []
    vector: Optional[np.ndarray] = None
    for info in program.segments:
        if not 1 <= info.first_era <= info.last_era <= len(matrices):
            raise ValueError(f"segment eras {info.first_era}..{info.last_era} do not exist in this net")
        segment = reduce(lambda acc, m: combine(m, acc), matrices[info.first_era : info.last_era], matrices[info.first_era - 1])
        if segment.rows != info.rows:
            raise ValueError(f"segment rows {segment.rows.node_ids} differ from program rows {info.rows.node_ids}")
        vector = segment.entries[:, 0] if vector is None else segment.entries @ vector
        prefixes.append(vector)
    return prefixes


def _support_fits(support: List[int], size: int, n_s: int) -> bool:
    return len(support) <= n_s and all(0 <= i < size for i in support)


def _states(program: UnitaryProgram) -> List[np.ndarray]:
    v = program.start_vector()
    states = [v] if program.mode == "v1" else []
    for unitary in program.unitaries:
        v = unitary @ v
        states.append(v)
    return states


def verify_program(
    program: UnitaryProgram,
    net: QBNet,
    tol: float = 1e-9,
    story_cap: int = DEFAULT_STORY_CAP,
    logger: logging.Logger | None = None,
) -> VerificationReport:
    """Check unitarity, the block structure of every prefix, and the final vector against the oracle."""

    notes: List[str] = []
    unitarity = tuple(unitarity_residual(u, program.n_s) for u in program.unitaries)

    start_ok = program.mode == "e1" or (program.initial is not None and program.initial.shape == (program.n_s,))
    states = _states(program) if start_ok and all(np.isfinite(unitarity)) else []
    if not states:
        notes.append("program vectors could not be formed (shape mismatch)")

    prefix_top: List[float] = []
    prefix_bottom: List[float] = []
    try:
        prefixes = _true_prefixes(program, net)
    except (QBCError, ValueError, KeyError) as exc:
        notes.append(f"prefix products unavailable: {exc}")
        prefixes = []

    if prefixes and len(states) == len(prefixes):
        for k, (info, state, expected) in enumerate(zip(program.segments, states, prefixes), start=1):
            support = list(info.row_support)
            if not _support_fits(support, expected.size, program.n_s):
                notes.append(f"segment {k} row support {support} does not fit {expected.size} rows and N_S={program.n_s}")
                prefix_top.append(INF)
                prefix_bottom.append(INF)
                continue
            dropped = np.delete(expected, support)
            top = np.abs(state[: len(support)] - expected[support])
            prefix_top.append(float(max(top.max(initial=0.0), np.abs(dropped).max(initial=0.0))))
            prefix_bottom.append(float(np.abs(state[len(support) :]).max(initial=0.0)))
    else:
        prefix_top = [INF] * max(1, len(program.segments))
        prefix_bottom = [INF] * max(1, len(program.segments))

    final_residual = INF
    schema = schema_for(net, external_ids(net))
    if schema != program.external_schema:
        notes.append(
            f"program rows are over nodes {program.external_schema.node_ids}, net external nodes are {schema.node_ids}"
        )
    elif states:
        try:
            fi = feynman_vector(net, schema, story_cap)
        except QBCError as exc:
            notes.append(str(exc))
        else:
            support = list(program.segments[-1].row_support) if program.segments else []
            if not _support_fits(support, fi.size, program.n_s):
                notes.append(f"final row support {support} does not fit {fi.size} external states")
            else:
                final = states[-1]
                residual = np.abs(final[: len(support)] - fi[support]).max(initial=0.0)
                final_residual = float(max(residual, np.abs(np.delete(fi, support)).max(initial=0.0)))

    report = VerificationReport(
        tol=tol,
        unitarity=unitarity,
        prefix_top=tuple(prefix_top),
        prefix_bottom=tuple(prefix_bottom),
        final_residual=final_residual,
        notes=tuple(notes),
    )
    if logger:
        logger.info(
            "[verify] ok=%s unitarity=%s prefix_top=%s prefix_bottom=%s final=%s notes=%s",
            report.ok,
            report.unitarity,
            report.prefix_top,
            report.prefix_bottom,
            report.final_residual,
            report.notes,
        )
    return report
