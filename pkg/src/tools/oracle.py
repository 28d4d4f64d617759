from __future__ import annotations

import itertools
import math
from typing import Dict, List, Mapping, Union

import numpy as np

from core.errors import OracleCapError
from core.models import IndexSchema, Node, QBNet, StateSpace

Seed = Union[int, np.random.SeedSequence]

DEFAULT_STORY_CAP = 2**20


def _amplitude(net: QBNet, states: Mapping[int, int]) -> complex:
    # Story amplitude written out directly: column = mixed-radix parent index, smallest id first.
    amplitude = complex(1.0)
    for node in net:
        col = 0
        for parent in node.parents:
            col = col * net.cardinality(parent) + states[parent]
        amplitude *= complex(node.matrix[states[node.id], col])
    return amplitude


def feynman_integral(
    net: QBNet,
    external_state: Mapping[int, int],
    story_cap: int = DEFAULT_STORY_CAP,
) -> complex:
    """Sum of story amplitudes over all internal states, for one external state."""

    if net.story_count > story_cap:
        raise OracleCapError(f"net has {net.story_count} stories, cap is {story_cap}")
    internal = [node.id for node in net if node.id not in external_state]
    total = complex(0.0)
    for values in itertools.product(*(range(net.cardinality(j)) for j in internal)):
        states: Dict[int, int] = dict(external_state)
        states.update(zip(internal, values))
        total += _amplitude(net, states)
    return total


def external_ids(net: QBNet) -> List[int]:
    has_child = {p for node in net for p in node.parents}
    return [node.id for node in net if node.id not in has_child]


def feynman_vector(net: QBNet, schema: IndexSchema, story_cap: int = DEFAULT_STORY_CAP) -> np.ndarray:
    """FI for every external state, in the schema's index order."""

    if net.story_count > story_cap:
        raise OracleCapError(f"net has {net.story_count} stories, cap is {story_cap}")
    values = [
        feynman_integral(net, dict(zip(schema.node_ids, coords)), story_cap)
        for coords in itertools.product(*(range(r) for r in schema.radices))
    ]
    return np.array(values, dtype=np.complex128)


def crandn(shape, rng: np.random.Generator) -> np.ndarray:
    """Standard complex normal samples."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_isometry(rows: int, cols: int, seed: Seed, attempts: int = 8) -> np.ndarray:
    """Seeded rows x cols matrix with orthonormal columns.

    Orthonormalizes complex Gaussian columns (QR, with the phases of R moved
    into Q so the draw does not depend on LAPACK sign conventions).
    """

    if cols > rows:
        raise ValueError(f"an isometry needs cols <= rows, got {rows}x{cols}")
    root = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    for stream in root.spawn(attempts):
        rng = np.random.default_rng(stream)
        q, r = np.linalg.qr(crandn((rows, cols), rng))
        diagonal = np.diag(r)
        if np.min(np.abs(diagonal)) < 1e-8:
            continue
        return q * (diagonal / np.abs(diagonal))
    raise ValueError(f"no well-conditioned {rows}x{cols} draw in {attempts} attempts")


def random_net(node_count: int, max_states: int, max_parents: int, seed: Seed) -> QBNet:
    """Random QB net with isometric node matrices.

    Parents are drawn from lower ids. Each node gets at least as many states as
    its parents have joint states, so its node matrix can be an isometry; parents
    whose joint state count would exceed max_states are skipped.
    """

    if node_count < 1:
        raise ValueError("node_count must be >= 1")
    root = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    structure_seed, *matrix_seeds = root.spawn(node_count + 1)
    rng = np.random.default_rng(structure_seed)

    cards: Dict[int, int] = {}
    nodes: List[Node] = []
    for j in range(1, node_count + 1):
        wanted = int(rng.integers(0, min(max_parents, j - 1) + 1)) if j > 1 else 0
        parents: List[int] = []
        joint = 1
        for candidate in rng.permutation(np.arange(1, j)):
            if len(parents) == wanted:
                break
            if joint * cards[int(candidate)] <= max_states:
                parents.append(int(candidate))
                joint *= cards[int(candidate)]
        cards[j] = int(rng.integers(joint, max_states + 1))
        matrix = random_isometry(cards[j], math.prod(cards[p] for p in parents), matrix_seeds[j - 1])
        nodes.append(
            Node(
                id=j,
                name=f"x{j}",
                parents=tuple(sorted(parents)),
                states=StateSpace(tuple(str(s) for s in range(cards[j]))),
                matrix=matrix,
            )
        )
    return QBNet(tuple(nodes))
