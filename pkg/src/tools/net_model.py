from __future__ import annotations

import itertools
import math
from collections import Counter
from typing import Iterable, Iterator, List, Sequence, Tuple

import networkx as nx
import numpy as np

from core.errors import NetValidationError
from core.models import QBNet, Story, ValidationReport, Violation

from .index_codec import encode, schema_for


def net_digraph(net: QBNet) -> nx.DiGraph:
    """Arrow relation as a DiGraph (parent -> child); unknown parent ids are skipped."""

    graph = nx.DiGraph()
    graph.add_nodes_from(net.ids)
    known = set(net.ids)
    for node in net:
        graph.add_edges_from((p, node.id) for p in node.parents if p in known)
    return graph


def validate_net(net: QBNet) -> ValidationReport:
    """Collect every structural problem of the net; an empty report means valid."""

    violations: List[Violation] = []
    ids = [node.id for node in net]
    expected = list(range(1, len(ids) + 1))
    if sorted(ids) != expected:
        duplicates = sorted(j for j, count in Counter(ids).items() if count > 1)
        violations.append(
            Violation("ids", f"node ids must be exactly 1..{len(ids)}; got {sorted(ids)} (duplicates: {duplicates})")
        )

    names = Counter(node.name for node in net)
    for name, count in sorted(names.items()):
        if count > 1:
            violations.append(Violation("duplicate_name", f"node name {name!r} is used {count} times"))

    known = set(ids)
    for node in net:
        if node.id in node.parents:
            violations.append(Violation("self_parent", f"node {node.id} lists itself as a parent", node.id))
        dangling = [p for p in node.parents if p not in known]
        if dangling:
            violations.append(
                Violation("dangling_parent", f"node {node.id} has unknown parents {dangling}", node.id, tuple(dangling))
            )

        rows, cols = node.matrix.shape
        want_cols = math.prod(net.cardinality(p) for p in node.parents if p in known)
        if rows != node.cardinality or cols != want_cols:
            violations.append(
                Violation(
                    "shape",
                    f"node {node.id} matrix is {rows}x{cols}, expected {node.cardinality}x{want_cols}",
                    node.id,
                )
            )
        if not np.all(np.isfinite(node.matrix)):
            violations.append(Violation("non_finite", f"node {node.id} matrix has NaN or Inf entries", node.id))

    graph = net_digraph(net)
    graph.add_edges_from((node.id, node.id) for node in net if node.id in node.parents)
    try:
        cycle = nx.find_cycle(graph)
    except nx.NetworkXNoCycle:
        cycle = None
    if cycle:
        witness = tuple(edge[0] for edge in cycle) + (cycle[-1][1],)
        violations.append(Violation("cycle", f"arrows form a cycle {witness}", witness=witness))

    return ValidationReport(tuple(violations))


def require_valid(net: QBNet) -> QBNet:
    report = validate_net(net)
    if not report.ok:
        raise NetValidationError(report)
    return net


def classify_nodes(net: QBNet) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """(Z_in, Z_ex): a node is external iff no arrow leaves it."""

    graph = net_digraph(net)
    z_in = tuple(j for j in net.ids if graph.out_degree(j) > 0)
    z_ex = tuple(j for j in net.ids if graph.out_degree(j) == 0)
    return z_in, z_ex


def node_amplitude(net: QBNet, node_id: int, assignment) -> complex:
    """A_j[x_j | (x)_{S_j}] with states read from `assignment` (mapping id -> state)."""

    node = net.node(node_id)
    col = encode(schema_for(net, node.parents), assignment)
    return complex(node.matrix[int(assignment[node_id]), col])


def story_amplitude(net: QBNet, story: Story) -> complex:
    if len(story) != len(net):
        raise ValueError(f"story has {len(story)} components, net has {len(net)} nodes")
    assignment = {j: int(x) for j, x in zip(net.ids, story)}
    amplitude = complex(1.0)
    for node in net:
        amplitude *= node_amplitude(net, node.id, assignment)
    return amplitude


def enumerate_stories(net: QBNet) -> Iterator[Story]:
    """All stories, smallest node id most significant."""

    return itertools.product(*(range(node.cardinality) for node in net))


def node_by_name(net: QBNet, name: str) -> int:
    matches = [node.id for node in net if node.name == name]
    if not matches:
        raise KeyError(f"unknown node name {name!r}")
    if len(matches) > 1:
        raise KeyError(f"node name {name!r} is ambiguous (ids {matches})")
    return matches[0]


def resolve_names(net: QBNet, names: Iterable[str]) -> Tuple[int, ...]:
    return tuple(sorted({node_by_name(net, name.strip()) for name in names if name.strip()}))


def labels_of(net: QBNet, node_ids: Sequence[int], states: Sequence[int]) -> Tuple[str, ...]:
    return tuple(net.node(j).states.labels[x] for j, x in zip(node_ids, states))
