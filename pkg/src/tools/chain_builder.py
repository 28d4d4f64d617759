from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from core.errors import CompileError, SchemaMismatchError
from core.models import AppearanceBounds, EraDecomposition, EraMatrix, IndexSchema, QBNet

from .era_engine import era_of
from .index_codec import encode, iter_assignments, schema_for
from .net_model import classify_nodes, node_amplitude


@dataclass(frozen=True)
class ChainBuild:
    bounds: AppearanceBounds
    deltas: Tuple[Tuple[int, ...], ...]
    matrices: Tuple[EraMatrix, ...]


def appearance_bounds(net: QBNet, eras: EraDecomposition) -> AppearanceBounds:
    """First and last era in which each x_j appears in some B_a (L+1 as last for external nodes)."""

    _, z_ex = classify_nodes(net)
    external = set(z_ex)
    home = era_of(eras)
    L = eras.count

    a_min: Dict[int, int] = {}
    a_max: Dict[int, int] = {}
    for a in range(1, L + 1):
        for j in set(eras.era(a)) | set(eras.inputs(a)):
            a_min.setdefault(j, a)
            a_max[j] = a

    for j in net.ids:
        if a_min.get(j) != home[j]:
            raise CompileError(
                f"x_{j} first appears in era {a_min.get(j)} but node {j} lives in era {home[j]}; "
                "arrows must point to later eras",
                stage="matrices",
            )
        if j in external:
            a_max[j] = L + 1
    return AppearanceBounds(a_min=a_min, a_max=a_max)


def delta_sets(bounds: AppearanceBounds, L: int) -> Tuple[Tuple[int, ...], ...]:
    """Δ_a = { j | a_min(j) < a < a_max(j) } for a = 1..L."""

    return tuple(
        tuple(sorted(j for j in bounds.a_min if bounds.a_min[j] < a < bounds.a_max[j])) for a in range(1, L + 1)
    )


def row_schema(net: QBNet, eras: EraDecomposition, deltas: Sequence[Sequence[int]], a: int) -> IndexSchema:
    """Schema over V_a = T_a ∪ Δ_a; V_0 is empty."""

    if a == 0:
        return IndexSchema()
    return schema_for(net, set(eras.era(a)) | set(deltas[a - 1]))


def build_era_matrix(
    net: QBNet,
    eras: EraDecomposition,
    bounds: AppearanceBounds,
    a: int,
    deltas: Sequence[Sequence[int]] | None = None,
) -> EraMatrix:
    """M_a with entries B_a(x^a | x^{a-1}) times the carried-value delta functions."""

    if deltas is None:
        deltas = delta_sets(bounds, eras.count)
    rows = row_schema(net, eras, deltas, a)
    cols = row_schema(net, eras, deltas, a - 1)
    era, inputs, carried = eras.era(a), eras.inputs(a), tuple(deltas[a - 1])

    if set(inputs) | set(carried) != set(cols.node_ids):
        raise CompileError(
            f"Γ_{a} ∪ Δ_{a} = {sorted(set(inputs) | set(carried))} but V_{a - 1} = {list(cols.node_ids)}",
            stage="matrices",
        )

    entries = np.zeros((rows.dimension, cols.dimension), dtype=np.complex128)
    era_ranges = [range(net.cardinality(j)) for j in era]
    for col_index, col_assignment in enumerate(iter_assignments(cols)):
        # Only delta-consistent rows can be nonzero: carried values are copied from the column.
        for era_values in itertools.product(*era_ranges):
            assignment = {**col_assignment, **dict(zip(era, era_values))}
            amplitude = complex(1.0)
            for j in era:
                amplitude *= node_amplitude(net, j, assignment)
            row_assignment = {j: assignment[j] for j in rows.node_ids}
            entries[encode(rows, row_assignment), col_index] = amplitude

    return EraMatrix(first_era=a, last_era=a, rows=rows, cols=cols, entries=entries)


def build_all(net: QBNet, eras: EraDecomposition, logger: logging.Logger | None = None) -> ChainBuild:
    bounds = appearance_bounds(net, eras)
    deltas = delta_sets(bounds, eras.count)
    matrices = tuple(build_era_matrix(net, eras, bounds, a, deltas) for a in range(1, eras.count + 1))
    if logger:
        logger.info(
            "[matrices] deltas=%s shapes=%s",
            deltas,
            [m.shape for m in matrices],
        )
    return ChainBuild(bounds=bounds, deltas=deltas, matrices=matrices)


def combine(later: EraMatrix, earlier: EraMatrix) -> EraMatrix:
    """later · earlier as one matrix spanning both era ranges."""

    if not later.chains_after(earlier):
        raise SchemaMismatchError(
            f"{later.label} columns {later.cols.node_ids} do not chain onto {earlier.label} rows {earlier.rows.node_ids}"
        )
    return EraMatrix(
        first_era=earlier.first_era,
        last_era=later.last_era,
        rows=later.rows,
        cols=earlier.cols,
        entries=later.entries @ earlier.entries,
        row_support=later.row_support,
        col_support=earlier.col_support,
    )


def check_chain(matrices: Sequence[EraMatrix]) -> None:
    if not matrices:
        raise SchemaMismatchError("empty matrix chain")
    if matrices[0].shape[1] != 1:
        raise SchemaMismatchError(f"{matrices[0].label} must have a single column, has {matrices[0].shape[1]}")
    for earlier, later in zip(matrices, matrices[1:]):
        if not later.chains_after(earlier):
            raise SchemaMismatchError(
                f"{later.label} columns {later.cols.node_ids} do not chain onto {earlier.label} rows {earlier.rows.node_ids}"
            )


def prefix_products(matrices: Sequence[EraMatrix]) -> List[np.ndarray]:
    """[M_1, M_2 M_1, ..., M_L ... M_1] as 1-D vectors."""

    check_chain(matrices)
    vector = matrices[0].entries[:, 0]
    prefixes = [vector]
    for matrix in matrices[1:]:
        vector = matrix.entries @ vector
        prefixes.append(vector)
    return prefixes


def chain_product(matrices: Sequence[EraMatrix]) -> np.ndarray:
    """M = M_L ... M_2 M_1; rows follow the schema of the last matrix."""

    return prefix_products(matrices)[-1]
