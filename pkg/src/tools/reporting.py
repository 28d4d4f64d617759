from __future__ import annotations

from typing import Iterable, Sequence

import pandas as pd

from core.models import EraDecomposition, EraMatrix, QBNet, RepairAction, UnitaryProgram, VerificationReport

from .unitary_synthesis import breakpoint_label


def _names(net: QBNet, ids: Iterable[int]) -> str:
    return "{" + ",".join(net.name_of(j) for j in ids) + "}"


def era_table(
    net: QBNet,
    eras: EraDecomposition,
    deltas: Sequence[Sequence[int]],
    matrices: Sequence[EraMatrix],
) -> pd.DataFrame:
    """One row per era: T_a, Γ_a, Δ_a and the dimensions d_a x d_{a-1} of M_a."""

    return pd.DataFrame(
        {
            "era": [f"T_{a}" for a in range(1, eras.count + 1)],
            "nodes": [_names(net, era) for era in eras.eras],
            "gamma": [_names(net, g) for g in eras.gamma],
            "delta": [_names(net, d) for d in deltas],
            "d_a": [m.rows.dimension for m in matrices],
            "d_a-1": [m.cols.dimension for m in matrices],
        }
    )


def program_table(program: UnitaryProgram) -> pd.DataFrame:
    """One row per compiled segment: its era range and matrix dimensions."""

    roles = (["v_1"] if program.mode == "v1" else []) + [f"U_{k}" for k in range(1 if program.mode == "e1" else 2, len(program.segments) + 1)]
    return pd.DataFrame(
        {
            "segment": [f"M'_{k}" for k in range(1, len(program.segments) + 1)],
            "eras": [f"T_{s.first_era}..T_{s.last_era}" if s.first_era != s.last_era else f"T_{s.first_era}" for s in program.segments],
            "rows": [len(s.row_support) for s in program.segments],
            "cols": [s.col_dim for s in program.segments],
            "extended_to": roles,
        }
    )


def dims_summary(program: UnitaryProgram) -> str:
    dims = program.dims
    qubits = program.qubit_count if program.qubit_count is not None else "n/a"
    d = dims.d if dims else ()
    D = dims.D if dims else program.n_s
    return f"d = {d}  D = {D}  N_S = {program.n_s}  qubits = {qubits}"


def breakpoint_lines(program: UnitaryProgram) -> list[str]:
    return [f"breakpoint {breakpoint_label(p)}" for p in program.breakpoints] or ["no breakpoints (single segment)"]


def repair_table(actions: Sequence[RepairAction]) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "strategy": [a.strategy for a in actions],
            "segment": [a.segment for a in actions],
            "detail": [a.detail for a in actions],
        }
    )


def residual_table(report: VerificationReport, first_unitary: int = 1) -> pd.DataFrame:
    rows = [("unitarity", f"U_{k}", r) for k, r in enumerate(report.unitarity, start=first_unitary)]
    rows += [("prefix top", f"after segment {k}", r) for k, r in enumerate(report.prefix_top, start=1)]
    rows += [("prefix zeros", f"after segment {k}", r) for k, r in enumerate(report.prefix_bottom, start=1)]
    rows.append(("oracle", "final vector", report.final_residual))
    frame = pd.DataFrame(rows, columns=["check", "where", "residual"])
    frame["pass"] = frame["residual"] <= report.tol
    return frame
