from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Dict, Iterator, List, Literal, Optional, Tuple, TypedDict

import numpy as np

from .config import CompileOptions, EraKind, ProgramMode


def _frozen_array(values: Any, dtype=np.complex128) -> np.ndarray:
    array = np.array(values, dtype=dtype)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class StateSpace:
    """Ordered, distinct state labels of one random variable."""

    labels: Tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "labels", tuple(str(label) for label in self.labels))
        if not self.labels:
            raise ValueError("state space needs at least one label")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"duplicate state labels: {self.labels}")

    @property
    def cardinality(self) -> int:
        return len(self.labels)


@dataclass(frozen=True, eq=False)
class Node:
    """One QB-net node: its parents S_j and node matrix A_j[x_j | (x)_{S_j}]."""

    id: int
    name: str
    parents: Tuple[int, ...]
    states: StateSpace
    matrix: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "parents", tuple(sorted(int(p) for p in self.parents)))
        matrix = np.asarray(self.matrix, dtype=np.complex128)
        if matrix.ndim == 1:
            matrix = matrix.reshape(-1, 1)
        object.__setattr__(self, "matrix", _frozen_array(matrix))

    @property
    def cardinality(self) -> int:
        return self.states.cardinality


@dataclass(frozen=True, eq=False)
class QBNet:
    """A QB net; nodes are kept ordered by id."""

    nodes: Tuple[Node, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", tuple(sorted(self.nodes, key=lambda n: n.id)))

    def __len__(self) -> int:
        return len(self.nodes)

    def __iter__(self) -> Iterator[Node]:
        return iter(self.nodes)

    @property
    def ids(self) -> Tuple[int, ...]:
        return tuple(node.id for node in self.nodes)

    def node(self, node_id: int) -> Node:
        for candidate in self.nodes:
            if candidate.id == node_id:
                return candidate
        raise KeyError(f"no node with id {node_id}")

    def cardinality(self, node_id: int) -> int:
        return self.node(node_id).cardinality

    def name_of(self, node_id: int) -> str:
        return self.node(node_id).name

    @property
    def story_count(self) -> int:
        return math.prod(node.cardinality for node in self.nodes)


# A story holds one state index per node; position i belongs to node id i + 1.
Story = Tuple[int, ...]


@dataclass(frozen=True)
class Violation:
    kind: Literal["ids", "cycle", "dangling_parent", "self_parent", "shape", "non_finite", "duplicate_name"]
    message: str
    node_id: Optional[int] = None
    witness: Tuple[int, ...] = ()


@dataclass(frozen=True)
class ValidationReport:
    violations: Tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def of_kind(self, kind: str) -> List[Violation]:
        return [v for v in self.violations if v.kind == kind]


@dataclass(frozen=True)
class EraDecomposition:
    """Ordered partition T_1..T_L with the per-era input sets Γ_a."""

    eras: Tuple[Tuple[int, ...], ...]
    kind: EraKind
    gamma: Tuple[Tuple[int, ...], ...]

    @property
    def count(self) -> int:
        return len(self.eras)

    def era(self, a: int) -> Tuple[int, ...]:
        """Era T_a, 1-based like the rest of the pipeline."""
        return self.eras[a - 1]

    def inputs(self, a: int) -> Tuple[int, ...]:
        return self.gamma[a - 1]


@dataclass(frozen=True)
class AppearanceBounds:
    a_min: Dict[int, int]
    a_max: Dict[int, int]


@dataclass(frozen=True)
class IndexSchema:
    """Composite index over ascending node ids; the smallest id is most significant."""

    node_ids: Tuple[int, ...] = ()
    radices: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if len(self.node_ids) != len(self.radices):
            raise ValueError("node_ids and radices differ in length")
        if list(self.node_ids) != sorted(set(self.node_ids)):
            raise ValueError(f"schema ids must be strictly ascending: {self.node_ids}")
        if any(r < 1 for r in self.radices):
            raise ValueError(f"radices must be >= 1: {self.radices}")

    @property
    def dimension(self) -> int:
        return math.prod(self.radices)


@dataclass(frozen=True, eq=False)
class EraMatrix:
    """Dense B̄ matrix of eras first_era..last_era.

    Row/column supports list the flat schema indices still present; they only
    shrink when a repair prunes zero rows.
    """

    first_era: int
    last_era: int
    rows: IndexSchema
    cols: IndexSchema
    entries: np.ndarray
    row_support: Tuple[int, ...] = ()
    col_support: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", _frozen_array(self.entries))
        if not self.row_support:
            object.__setattr__(self, "row_support", tuple(range(self.rows.dimension)))
        if not self.col_support:
            object.__setattr__(self, "col_support", tuple(range(self.cols.dimension)))
        expected = (len(self.row_support), len(self.col_support))
        if self.entries.shape != expected:
            raise ValueError(f"entries shape {self.entries.shape} does not match schemas {expected}")

    @property
    def a(self) -> int:
        return self.last_era

    @property
    def shape(self) -> Tuple[int, int]:
        return self.entries.shape  # type: ignore[return-value]

    @property
    def label(self) -> str:
        if self.first_era == self.last_era:
            return f"M_{self.last_era}"
        return "".join(f"M_{a}" for a in range(self.last_era, self.first_era - 1, -1))

    def chains_after(self, earlier: "EraMatrix") -> bool:
        return self.cols == earlier.rows and self.col_support == earlier.row_support


@dataclass(frozen=True)
class BreakpointSpec:
    measured_nodes: Tuple[int, ...] = ()


@dataclass(frozen=True)
class IsometryReport:
    residual: float
    rows: int
    cols: int
    passed: bool


@dataclass(frozen=True)
class RepairAction:
    strategy: Literal["i", "ii", "iii"]
    segment: str
    detail: str


@dataclass(frozen=True)
class Dims:
    d: Tuple[int, ...]
    D: int
    n_s: int
    dbar: Tuple[int, ...]


@dataclass(frozen=True)
class SegmentInfo:
    """Provenance of one compiled segment (one unitary or the initial vector)."""

    first_era: int
    last_era: int
    nodes: Tuple[int, ...]
    rows: IndexSchema
    row_support: Tuple[int, ...]
    col_dim: int


@dataclass(frozen=True, eq=False)
class UnitaryProgram:
    n_s: int
    qubit_count: Optional[int]
    mode: ProgramMode
    era_kind: EraKind
    initial: Optional[np.ndarray]
    unitaries: Tuple[np.ndarray, ...]
    external_schema: IndexSchema
    segments: Tuple[SegmentInfo, ...]
    breakpoints: Tuple[int, ...] = ()
    repairs: Tuple[RepairAction, ...] = ()
    dims: Optional[Dims] = None

    def __post_init__(self) -> None:
        if self.initial is not None:
            object.__setattr__(self, "initial", _frozen_array(self.initial))
        object.__setattr__(self, "unitaries", tuple(_frozen_array(u) for u in self.unitaries))

    def start_vector(self) -> np.ndarray:
        """v_1 in v1 mode, e_1 in e1 mode."""
        if self.mode == "v1":
            assert self.initial is not None
            return np.array(self.initial)
        e1 = np.zeros(self.n_s, dtype=np.complex128)
        e1[0] = 1.0
        return e1

    def final_vector(self) -> np.ndarray:
        v = self.start_vector()
        for unitary in self.unitaries:
            v = unitary @ v
        return v


@dataclass(frozen=True)
class VerificationReport:
    tol: float
    unitarity: Tuple[float, ...] = ()
    prefix_top: Tuple[float, ...] = ()
    prefix_bottom: Tuple[float, ...] = ()
    final_residual: float = float("inf")
    notes: Tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        values = list(self.unitarity) + list(self.prefix_top) + list(self.prefix_bottom) + [self.final_residual]
        return all(np.isfinite(v) and v <= self.tol for v in values)

    def worst_unitary(self) -> Optional[int]:
        """Index (1-based, in program order) of the least unitary matrix."""
        if not self.unitarity:
            return None
        return int(np.argmax(self.unitarity)) + 1


class StageError(TypedDict):
    stage: str
    message: str


class CompileState(TypedDict, total=False):
    """Shared LangGraph state of one compilation."""

    net: QBNet
    options: CompileOptions
    eras: EraDecomposition
    z_in: Tuple[int, ...]
    z_ex: Tuple[int, ...]
    bounds: AppearanceBounds
    deltas: Tuple[Tuple[int, ...], ...]
    era_matrices: List[EraMatrix]
    breakpoints: Tuple[int, ...]
    segments: List[EraMatrix]
    repairs: List[RepairAction]
    repair_pending: bool
    repair_rounds: int
    dims: Dims
    program: Optional[UnitaryProgram]
    error: Optional[StageError]
    stage_log: List[str]
