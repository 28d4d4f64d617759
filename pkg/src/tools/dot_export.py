from __future__ import annotations

import math
from typing import List

from core.models import EraDecomposition, QBNet

from .net_model import classify_nodes


def arrow_label(cardinality: int) -> str:
    """Bits carried by an arrow when the source has 2^k states, else its state count."""

    bits = math.log2(cardinality)
    if cardinality > 1 and bits.is_integer():
        n = int(bits)
        return f"{n} bit" if n == 1 else f"{n} bits"
    return f"{cardinality} states"


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def era_dot(net: QBNet, eras: EraDecomposition) -> str:
    """DOT digraph with one cluster per era; external nodes get a double border."""

    _, z_ex = classify_nodes(net)
    external = set(z_ex)
    lines: List[str] = ["digraph qbnet {", "  rankdir=LR;", "  node [shape=ellipse];"]
    for a, era in enumerate(eras.eras, start=1):
        lines.append(f"  subgraph cluster_T{a} {{")
        lines.append(f"    label={_quote(f'T_{a}')};")
        for j in era:
            attrs = [f"label={_quote(net.name_of(j))}"]
            if j in external:
                attrs.append("peripheries=2")
            lines.append(f"    n{j} [{', '.join(attrs)}];")
        lines.append("  }")
    for node in net:
        for parent in node.parents:
            lines.append(f"  n{parent} -> n{node.id} [label={_quote(arrow_label(net.cardinality(parent)))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
