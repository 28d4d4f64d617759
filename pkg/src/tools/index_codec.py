from __future__ import annotations

import itertools
from typing import Dict, Iterable, Iterator, Mapping

import numpy as np

from core.models import IndexSchema, QBNet


def schema_for(net: QBNet, node_ids: Iterable[int]) -> IndexSchema:
    """Schema over the given ids, radices read from the net."""

    ids = tuple(sorted(set(node_ids)))
    return IndexSchema(node_ids=ids, radices=tuple(net.cardinality(j) for j in ids))


def encode(schema: IndexSchema, assignment: Mapping[int, int]) -> int:
    """Flat mixed-radix index of an assignment; extra keys are ignored."""

    if not schema.node_ids:
        return 0
    try:
        coords = tuple(int(assignment[j]) for j in schema.node_ids)
    except KeyError as exc:
        raise ValueError(f"assignment is missing node {exc.args[0]} of schema {schema.node_ids}") from None
    for j, value, radix in zip(schema.node_ids, coords, schema.radices):
        if not 0 <= value < radix:
            raise ValueError(f"state {value} of node {j} is outside 0..{radix - 1}")
    return int(np.ravel_multi_index(coords, schema.radices))


def decode(schema: IndexSchema, index: int) -> Dict[int, int]:
    if not 0 <= index < schema.dimension:
        raise ValueError(f"index {index} is outside 0..{schema.dimension - 1}")
    if not schema.node_ids:
        return {}
    coords = np.unravel_index(index, schema.radices)
    return {j: int(c) for j, c in zip(schema.node_ids, coords)}


def iter_assignments(schema: IndexSchema) -> Iterator[Dict[int, int]]:
    """All assignments of the schema in flat-index order."""

    for coords in itertools.product(*(range(r) for r in schema.radices)):
        yield dict(zip(schema.node_ids, coords))
