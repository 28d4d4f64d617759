from __future__ import annotations

import itertools
import json
import math
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Type

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from tools.net_model import labels_of

from .errors import NetParseError
from .models import Dims, IndexSchema, Node, QBNet, RepairAction, SegmentInfo, StateSpace, UnitaryProgram

Pair = Tuple[float, float]
FORMAT_VERSION = 1


class _Document(BaseModel):
    model_config = ConfigDict(extra="forbid")


class NodeDocument(_Document):
    id: int
    name: str
    states: List[str] = Field(min_length=1)
    parents: List[int] = Field(default_factory=list)
    matrix: List[List[Pair]] = Field(min_length=1)

    @field_validator("matrix")
    @classmethod
    def rows_have_equal_length(cls, matrix: List[List[Pair]]) -> List[List[Pair]]:
        widths = {len(row) for row in matrix}
        if len(widths) != 1 or 0 in widths:
            raise ValueError(f"matrix rows must be non-empty and of equal length, got widths {sorted(widths)}")
        return matrix


class NetDocument(_Document):
    version: Literal[1] = FORMAT_VERSION
    description: Optional[str] = None
    nodes: List[NodeDocument] = Field(min_length=1)


class SegmentDocument(_Document):
    first_era: int
    last_era: int
    nodes: List[int]
    row_ids: List[int]
    row_radices: List[int]
    row_support: List[int]
    col_dim: int

    @model_validator(mode="after")
    def support_fits_row_schema(self) -> "SegmentDocument":
        if len(self.row_ids) != len(self.row_radices):
            raise ValueError(f"row_ids and row_radices differ in length: {self.row_ids} vs {self.row_radices}")
        dimension = math.prod(self.row_radices)
        if any(b <= a for a, b in zip(self.row_support, self.row_support[1:])):
            raise ValueError(f"row_support must be strictly ascending: {self.row_support}")
        if any(not 0 <= i < dimension for i in self.row_support):
            raise ValueError(f"row_support {self.row_support} leaves 0..{dimension - 1}")
        return self


class RepairDocument(_Document):
    strategy: Literal["i", "ii", "iii"]
    segment: str
    detail: str


class ProgramDocument(_Document):
    version: Literal[1] = FORMAT_VERSION
    n_s: int
    qubit_count: Optional[int]
    mode: Literal["v1", "e1"]
    era_kind: Literal["root", "external"]
    dims: List[int]
    breakpoints: List[int]
    segments: List[SegmentDocument]
    repairs: List[RepairDocument] = Field(default_factory=list)
    initial: Optional[List[Pair]] = None
    unitaries: List[List[List[Pair]]]
    external_ids: List[int]
    external_radices: List[int]
    external_labels: List[List[str]] = Field(default_factory=list)

    @model_validator(mode="after")
    def segments_fit_state_space(self) -> "ProgramDocument":
        for k, segment in enumerate(self.segments, start=1):
            if len(segment.row_support) > self.n_s:
                raise ValueError(f"segment {k} keeps {len(segment.row_support)} rows, more than n_s={self.n_s}")
        return self


def _pair(z: complex) -> List[float]:
    # repr of a double round-trips exactly (17 significant digits at most).
    return [float(np.real(z)), float(np.imag(z))]


def _complex_array(pairs: Any) -> np.ndarray:
    array = np.asarray(pairs, dtype=np.float64)
    return array[..., 0] + 1j * array[..., 1]


def _drop_unknown(data: Any, model: Type[BaseModel]) -> Any:
    """Non-strict mode: discard keys the schema does not know, recursively for nested lists."""

    if not isinstance(data, dict):
        return data
    nested = {"nodes": NodeDocument, "segments": SegmentDocument, "repairs": RepairDocument}
    cleaned: Dict[str, Any] = {}
    for key, value in data.items():
        if key not in model.model_fields:
            continue
        if key in nested and isinstance(value, list) and model in (NetDocument, ProgramDocument):
            value = [_drop_unknown(item, nested[key]) for item in value]
        cleaned[key] = value
    return cleaned


def _read_document(path: Path, model: Type[BaseModel], strict: bool) -> Any:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise NetParseError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise NetParseError(f"{path} is not valid JSON: {exc}") from exc
    if not strict:
        raw = _drop_unknown(raw, model)
    try:
        return model.model_validate(raw)
    except ValidationError as exc:
        raise NetParseError(f"{path} does not match the {model.__name__} schema:\n{exc}") from exc


def net_from_document(document: NetDocument) -> QBNet:
    nodes = []
    for item in document.nodes:
        try:
            states = StateSpace(tuple(item.states))
        except ValueError as exc:
            raise NetParseError(f"node {item.id}: {exc}") from exc
        nodes.append(
            Node(
                id=item.id,
                name=item.name,
                parents=tuple(item.parents),
                states=states,
                matrix=_complex_array(item.matrix),
            )
        )
    return QBNet(tuple(nodes))


def load_net(path: Path, strict: bool = True) -> QBNet:
    return net_from_document(_read_document(path, NetDocument, strict))


def net_to_document(net: QBNet, description: Optional[str] = None) -> Dict[str, Any]:
    document: Dict[str, Any] = {"version": FORMAT_VERSION}
    if description:
        document["description"] = description
    document["nodes"] = [
        {
            "id": node.id,
            "name": node.name,
            "states": list(node.states.labels),
            "parents": list(node.parents),
            "matrix": [[_pair(z) for z in row] for row in node.matrix],
        }
        for node in net
    ]
    return document


def save_net(net: QBNet, path: Path, description: Optional[str] = None) -> None:
    Path(path).write_text(json.dumps(net_to_document(net, description), indent=2) + "\n", encoding="utf-8")


def program_to_document(program: UnitaryProgram, net: Optional[QBNet] = None) -> Dict[str, Any]:
    schema = program.external_schema
    labels: List[List[str]] = []
    if net is not None:
        for coords in itertools.product(*(range(r) for r in schema.radices)):
            labels.append(list(labels_of(net, schema.node_ids, coords)))
    return {
        "version": FORMAT_VERSION,
        "n_s": program.n_s,
        "qubit_count": program.qubit_count,
        "mode": program.mode,
        "era_kind": program.era_kind,
        "dims": list(program.dims.d) if program.dims else [],
        "breakpoints": list(program.breakpoints),
        "segments": [
            {
                "first_era": s.first_era,
                "last_era": s.last_era,
                "nodes": list(s.nodes),
                "row_ids": list(s.rows.node_ids),
                "row_radices": list(s.rows.radices),
                "row_support": list(s.row_support),
                "col_dim": s.col_dim,
            }
            for s in program.segments
        ],
        "repairs": [{"strategy": r.strategy, "segment": r.segment, "detail": r.detail} for r in program.repairs],
        "initial": None if program.initial is None else [_pair(z) for z in program.initial],
        "unitaries": [[[_pair(z) for z in row] for row in u] for u in program.unitaries],
        "external_ids": list(schema.node_ids),
        "external_radices": list(schema.radices),
        "external_labels": labels,
    }


def program_from_document(document: ProgramDocument) -> UnitaryProgram:
    try:
        segments = tuple(
            SegmentInfo(
                first_era=s.first_era,
                last_era=s.last_era,
                nodes=tuple(s.nodes),
                rows=IndexSchema(tuple(s.row_ids), tuple(s.row_radices)),
                row_support=tuple(s.row_support),
                col_dim=s.col_dim,
            )
            for s in document.segments
        )
        external = IndexSchema(tuple(document.external_ids), tuple(document.external_radices))
        initial = None if document.initial is None else _complex_array(document.initial)
        unitaries = tuple(_complex_array(u) for u in document.unitaries)
    except ValueError as exc:
        raise NetParseError(f"program schema is inconsistent: {exc}") from exc

    d = tuple(document.dims)
    dims = Dims(d=d, D=max(d), n_s=document.n_s, dbar=tuple(document.n_s - x for x in d)) if d else None
    return UnitaryProgram(
        n_s=document.n_s,
        qubit_count=document.qubit_count,
        mode=document.mode,
        era_kind=document.era_kind,
        initial=initial,
        unitaries=unitaries,
        external_schema=external,
        segments=segments,
        breakpoints=tuple(document.breakpoints),
        repairs=tuple(RepairAction(r.strategy, r.segment, r.detail) for r in document.repairs),
        dims=dims,
    )


def load_program(path: Path, strict: bool = True) -> UnitaryProgram:
    document = _read_document(path, ProgramDocument, strict)
    if document.mode == "v1" and document.initial is None:
        raise NetParseError(f"{path}: v1-mode program has no initial vector")
    return program_from_document(document)


def save_program(program: UnitaryProgram, path: Path, net: Optional[QBNet] = None) -> None:
    Path(path).write_text(json.dumps(program_to_document(program, net), indent=1) + "\n", encoding="utf-8")
