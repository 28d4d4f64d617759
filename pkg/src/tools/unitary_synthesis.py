from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from core.config import CompileOptions
from core.errors import CompileError
from core.models import (
    BreakpointSpec,
    Dims,
    EraDecomposition,
    EraMatrix,
    IsometryReport,
    RepairAction,
    SegmentInfo,
    UnitaryProgram,
)

from .chain_builder import check_chain, combine, prefix_products
from .gram_schmidt import gram_schmidt


def breakpoint_label(position: int) -> str:
    return f"between M_{position + 1} and M_{position}"


def kept_breakpoints(matrices: Sequence[EraMatrix], spec: BreakpointSpec) -> Tuple[int, ...]:
    """Breakpoint positions (a means between M_{a+1} and M_a) forced by measurements.

    A measured node keeps the breakpoint right after the last matrix whose rows
    still carry its value.
    """

    positions = set()
    for node_id in spec.measured_nodes:
        holders = [i for i, matrix in enumerate(matrices, start=1) if node_id in matrix.rows.node_ids]
        if not holders:
            raise ValueError(f"measured node {node_id} is not carried by any era matrix")
        last = max(holders)
        if last < len(matrices):
            positions.add(matrices[last - 1].last_era)
    return tuple(sorted(positions))


def merge_breakpoints(
    matrices: Sequence[EraMatrix],
    spec: BreakpointSpec,
    logger: logging.Logger | None = None,
) -> List[EraMatrix]:
    """Multiply adjacent matrices wherever no kept breakpoint separates them."""

    check_chain(matrices)
    keep = set(kept_breakpoints(matrices, spec))
    merged: List[EraMatrix] = []
    for matrix in matrices:
        if merged and merged[-1].last_era not in keep:
            merged[-1] = combine(matrix, merged[-1])
        else:
            merged.append(matrix)
    if logger:
        logger.info(
            "[merge] measured=%s kept=%s segments=%s",
            spec.measured_nodes,
            [breakpoint_label(p) for p in sorted(keep)],
            [m.label for m in merged],
        )
    return merged


def check_isometry(matrix: EraMatrix | np.ndarray, tol: float = 1e-9) -> IsometryReport:
    entries = matrix.entries if isinstance(matrix, EraMatrix) else np.asarray(matrix, dtype=np.complex128)
    rows, cols = entries.shape
    if cols == 0:
        return IsometryReport(residual=0.0, rows=rows, cols=0, passed=True)
    residual = float(np.max(np.abs(entries.conj().T @ entries - np.eye(cols))))
    return IsometryReport(residual=residual, rows=rows, cols=cols, passed=residual <= tol and cols <= rows)


@dataclass(frozen=True)
class RepairOutcome:
    matrices: Tuple[EraMatrix, ...]
    actions: Tuple[RepairAction, ...] = ()
    removed_breakpoint: Optional[int] = None


def _prune_zero_rows(
    matrices: List[EraMatrix], a0: int, tol: float
) -> Optional[RepairAction]:
    previous, current = matrices[a0 - 1], matrices[a0]
    norms = np.linalg.norm(previous.entries, axis=1)
    keep = np.flatnonzero(norms > tol)
    if keep.size == 0 or keep.size == norms.size:
        return None
    support = tuple(previous.row_support[i] for i in keep)
    matrices[a0 - 1] = replace(previous, entries=previous.entries[keep], row_support=support)
    matrices[a0] = replace(current, entries=current.entries[:, keep], col_support=support)
    dropped = sorted(set(previous.row_support) - set(support))
    return RepairAction(
        "i",
        current.label,
        f"removed zero rows {dropped} of {previous.label} and the matching columns of {current.label}",
    )


def _replace_flagged_columns(
    matrices: List[EraMatrix], a0: int, tol: float, gs_tol: float
) -> Optional[RepairAction]:
    current = matrices[a0]
    prefix = prefix_products(matrices[:a0])[-1]
    flagged = np.flatnonzero(np.abs(prefix) <= tol)
    if flagged.size == 0:
        return None
    rows, cols = current.shape
    unflagged = np.setdiff1d(np.arange(cols), flagged)
    if cols > rows or not check_isometry(current.entries[:, unflagged], tol).passed:
        return None

    basis = [current.entries[:, c] for c in unflagged]
    identity = np.eye(rows, dtype=np.complex128)
    outputs = gram_schmidt(basis + [identity[:, j] for j in range(rows)], tol=gs_tol)
    fresh = [v for v in outputs[len(basis):] if np.any(v)]
    if len(fresh) < flagged.size:
        return None
    entries = np.array(current.entries)
    entries[:, flagged] = np.column_stack(fresh[: flagged.size])
    matrices[a0] = replace(current, entries=entries)
    labels = [current.col_support[c] for c in flagged]
    return RepairAction(
        "ii",
        current.label,
        f"replaced columns {labels} of {current.label}, which only meet zero rows of the prefix product",
    )


def repair(
    matrices: Sequence[EraMatrix],
    a0: int,
    tol: float = 1e-9,
    gs_tol: float = 1e-10,
    logger: logging.Logger | None = None,
) -> RepairOutcome:
    """Make matrices[a0] (0-based) isometric without changing the chain product.

    Tries, in order: (i) pruning zero rows of the previous matrix, (ii) replacing
    columns that only multiply zero rows of the prefix product, (iii) merging
    with the next matrix (the previous one when a0 is last).
    """

    working = list(matrices)
    if check_isometry(working[a0], tol).passed:
        return RepairOutcome(tuple(working))

    actions: List[RepairAction] = []
    if a0 > 0:
        for attempt in (
            lambda: _prune_zero_rows(working, a0, tol),
            lambda: _replace_flagged_columns(working, a0, tol, gs_tol),
        ):
            action = attempt()
            if action is None:
                continue
            actions.append(action)
            if logger:
                logger.info("[repair] strategy=%s segment=%s %s", action.strategy, action.segment, action.detail)
            if check_isometry(working[a0], tol).passed:
                return RepairOutcome(tuple(working), tuple(actions))

    failing = working[a0]
    if len(working) == 1:
        report = check_isometry(failing, tol)
        raise CompileError(
            f"{failing.label} is not isometric (residual {report.residual:.3e}, {report.rows}x{report.cols}) "
            "and no breakpoint is left to remove",
            stage="repair",
        )
    if a0 + 1 < len(working):
        earlier, later, at = working[a0], working[a0 + 1], a0
    else:
        earlier, later, at = working[a0 - 1], working[a0], a0 - 1
    removed = earlier.last_era
    working[at : at + 2] = [combine(later, earlier)]
    action = RepairAction("iii", failing.label, f"removed breakpoint {breakpoint_label(removed)}")
    actions.append(action)
    if logger:
        logger.warning("[repair] strategy=iii segment=%s %s", action.segment, action.detail)
    return RepairOutcome(tuple(working), tuple(actions), removed_breakpoint=removed)


def compute_dims(matrices: Sequence[EraMatrix], exact: bool = False) -> Dims:
    """d_0..d_L', D = max d_a and N_S (next power of two >= D, at least 2, unless exact)."""

    d = (matrices[0].shape[1],) + tuple(m.shape[0] for m in matrices)
    D = max(d)
    n_s = D if exact else max(2, 1 << (D - 1).bit_length())
    return Dims(d=d, D=D, n_s=n_s, dbar=tuple(n_s - x for x in d))


def pad_and_complete(matrix: EraMatrix | np.ndarray, n_s: int, tol: float = 1e-10) -> np.ndarray:
    """Zero-pad an isometry to N_S rows and fill the remaining columns by Gram-Schmidt on e_1..e_{N_S}."""

    entries = matrix.entries if isinstance(matrix, EraMatrix) else np.asarray(matrix, dtype=np.complex128)
    rows, cols = entries.shape
    if rows > n_s or cols > n_s:
        raise CompileError(f"{rows}x{cols} matrix does not fit in N_S={n_s}", stage="complete")

    padded = np.zeros((n_s, cols), dtype=np.complex128)
    padded[:rows] = entries
    identity = np.eye(n_s, dtype=np.complex128)
    outputs = gram_schmidt([padded[:, c] for c in range(cols)] + [identity[:, j] for j in range(n_s)], tol=tol)
    gray = [v for v in outputs[cols:] if np.any(v)][: n_s - cols]
    if len(gray) < n_s - cols:
        raise CompileError(
            f"Gram-Schmidt produced {len(gray)} of {n_s - cols} completion columns; check the tolerances",
            stage="complete",
        )

    unitary = np.zeros((n_s, n_s), dtype=np.complex128)
    unitary[:, :cols] = padded
    if gray:
        unitary[:, cols:] = np.column_stack(gray)
    return unitary


def assemble_program(
    segments: Sequence[EraMatrix],
    eras: EraDecomposition,
    options: CompileOptions,
    repairs: Sequence[RepairAction] = (),
    logger: logging.Logger | None = None,
) -> UnitaryProgram:
    """Pad and complete every segment; v1 mode keeps the first one as the initial vector."""

    dims = compute_dims(segments, exact=options.exact_dim)
    n_s = dims.n_s

    initial: Optional[np.ndarray] = None
    to_complete = list(segments)
    if options.mode == "v1":
        initial = np.zeros(n_s, dtype=np.complex128)
        initial[: segments[0].shape[0]] = segments[0].entries[:, 0]
        to_complete = to_complete[1:]
    unitaries = tuple(pad_and_complete(segment, n_s, tol=options.gs_tol) for segment in to_complete)

    infos = tuple(
        SegmentInfo(
            first_era=s.first_era,
            last_era=s.last_era,
            nodes=tuple(sorted(j for a in range(s.first_era, s.last_era + 1) for j in eras.era(a))),
            rows=s.rows,
            row_support=s.row_support,
            col_dim=s.shape[1],
        )
        for s in segments
    )
    is_power = n_s & (n_s - 1) == 0
    program = UnitaryProgram(
        n_s=n_s,
        qubit_count=n_s.bit_length() - 1 if is_power else None,
        mode=options.mode,
        era_kind=eras.kind,
        initial=initial,
        unitaries=unitaries,
        external_schema=segments[-1].rows,
        segments=infos,
        breakpoints=tuple(s.last_era for s in segments[:-1]),
        repairs=tuple(repairs),
        dims=dims,
    )
    if logger:
        logger.info(
            "[complete] mode=%s D=%s N_S=%s qubits=%s unitaries=%s breakpoints=%s",
            program.mode,
            dims.D,
            n_s,
            program.qubit_count,
            len(unitaries),
            [breakpoint_label(p) for p in program.breakpoints],
        )
    return program
