from __future__ import annotations

import logging
from typing import Dict, List, Mapping, Sequence

import networkx as nx

from core.config import EraKind
from core.errors import CompileError
from core.models import EraDecomposition, QBNet

from .net_model import net_digraph, node_amplitude


def _acyclic_graph(net: QBNet) -> nx.DiGraph:
    graph = net_digraph(net)
    if not nx.is_directed_acyclic_graph(graph):
        cycle = nx.find_cycle(graph)
        witness = tuple(edge[0] for edge in cycle) + (cycle[-1][1],)
        raise CompileError(f"arrows form a cycle {witness}; eras are undefined", stage="eras")
    return graph


def _with_gamma(net: QBNet, layers: Sequence[Sequence[int]], kind: EraKind) -> EraDecomposition:
    eras = tuple(tuple(sorted(layer)) for layer in layers)
    gamma = tuple(tuple(sorted({p for j in era for p in net.node(j).parents})) for era in eras)
    return EraDecomposition(eras=eras, kind=kind, gamma=gamma)


def root_node_eras(net: QBNet, logger: logging.Logger | None = None) -> EraDecomposition:
    """Peel successive layers of root nodes: T_1 = roots, T_2 = roots once T_1 is erased, ..."""

    graph = _acyclic_graph(net)
    eras = _with_gamma(net, list(nx.topological_generations(graph)), "root")
    if logger:
        logger.info("[eras] kind=root L=%s eras=%s", eras.count, eras.eras)
    return eras


def external_node_eras(net: QBNet, logger: logging.Logger | None = None) -> EraDecomposition:
    """Peel successive layers of external nodes, then number them against the peel order.

    The first peeled layer becomes T_L, so arrows still point from lower to
    higher era indices and the later steps need no special case.
    """

    graph = _acyclic_graph(net)
    peeled = list(nx.topological_generations(graph.reverse(copy=False)))
    eras = _with_gamma(net, peeled[::-1], "external")
    if logger:
        logger.info("[eras] kind=external L=%s peeled=%s eras=%s", eras.count, peeled, eras.eras)
    return eras


def find_eras(net: QBNet, kind: EraKind = "root", logger: logging.Logger | None = None) -> EraDecomposition:
    if kind == "root":
        return root_node_eras(net, logger=logger)
    if kind == "external":
        return external_node_eras(net, logger=logger)
    raise ValueError(f"unknown era kind {kind!r}")


def era_of(eras: EraDecomposition) -> Dict[int, int]:
    """Node id -> 1-based era index."""

    return {j: a for a, era in enumerate(eras.eras, start=1) for j in era}


def check_partition(net: QBNet, eras: EraDecomposition) -> List[str]:
    """Problems with the decomposition as a partition of the node ids (empty if fine)."""

    problems: List[str] = []
    seen: List[int] = [j for era in eras.eras for j in era]
    if sorted(seen) != sorted(net.ids):
        problems.append(f"eras cover {sorted(seen)}, net has {sorted(net.ids)}")
    if any(not era for era in eras.eras):
        problems.append("empty era")
    index = era_of(eras)
    for a, inputs in enumerate(eras.gamma, start=1):
        late = [k for k in inputs if index.get(k, a) >= a]
        if late:
            problems.append(f"Γ_{a} contains nodes {late} that are not in earlier eras")
    return problems


def era_amplitude(
    net: QBNet,
    eras: EraDecomposition,
    a: int,
    row_assignment: Mapping[int, int],
    col_assignment: Mapping[int, int],
) -> complex:
    """B_a[(x)_{T_a} | (x)_{Γ_a}]: product of the node amplitudes of era a."""

    era, inputs = eras.era(a), eras.inputs(a)
    if set(row_assignment) != set(era):
        raise ValueError(f"row assignment covers {sorted(row_assignment)}, era {a} is {era}")
    if set(col_assignment) != set(inputs):
        raise ValueError(f"column assignment covers {sorted(col_assignment)}, Γ_{a} is {inputs}")

    combined: Dict[int, int] = {**col_assignment, **row_assignment}
    amplitude = complex(1.0)
    for j in era:
        amplitude *= node_amplitude(net, j, combined)
    return amplitude

