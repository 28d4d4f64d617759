from __future__ import annotations

from pathlib import Path
from typing import Callable, Sequence, Tuple

import numpy as np
import pytest

from core.config import load_config
from core.models import Node, QBNet, StateSpace
from core.net_io import load_net

NETS = Path(__file__).resolve().parents[1] / "nets"
R2 = 1 / np.sqrt(2)
HADAMARD = np.array([[R2, R2], [R2, -R2]])

NodeSpec = Tuple[Sequence[int], Sequence]


def build_net(*specs: NodeSpec) -> QBNet:
    """Net with ids 1..n and names x1..xn from (parents, matrix) pairs."""

    nodes = []
    for j, (parents, matrix) in enumerate(specs, start=1):
        matrix = np.asarray(matrix, dtype=np.complex128)
        if matrix.ndim == 1:
            matrix = matrix.reshape(-1, 1)
        states = StateSpace(tuple(str(s) for s in range(matrix.shape[0])))
        nodes.append(Node(id=j, name=f"x{j}", parents=tuple(parents), states=states, matrix=matrix))
    return QBNet(tuple(nodes))


@pytest.fixture(autouse=True)
def isolated_runtime_cache(tmp_path_factory, monkeypatch):
    monkeypatch.setenv("QBC_RUNTIME_CACHE", str(tmp_path_factory.getbasetemp() / "runtime_cache"))


@pytest.fixture
def make_net() -> Callable[..., QBNet]:
    return build_net


@pytest.fixture
def seed() -> int:
    return load_config().seed


@pytest.fixture
def nets_dir() -> Path:
    return NETS


@pytest.fixture
def teleportation() -> QBNet:
    return load_net(NETS / "teleportation.json")


@pytest.fixture
def late_external() -> QBNet:
    return load_net(NETS / "late_external.json")


@pytest.fixture
def prune_net() -> QBNet:
    """Needs zero-row pruning once x1 is measured."""
    return build_net(((), [1.0, 0.0]), ((1,), [[1.0, 1.0], [0.0, 0.0]]))


@pytest.fixture
def flagged_column_net() -> QBNet:
    """Needs a column of M_3 replaced once x1 and x2 are measured."""
    return build_net(
        ((), [R2, R2]),
        ((1,), HADAMARD),
        ((2,), [[1.0, 1.0], [0.0, 0.0]]),
    )


@pytest.fixture
def merge_net() -> QBNet:
    """Only fixable by dropping the breakpoint after M_1."""
    return build_net(((), [R2, R2]), ((1,), np.array([[1.0, 1.0], [0.0, 0.0]]) * R2))


@pytest.fixture
def unrepairable_net() -> QBNet:
    return build_net(((), [1.0, 1.0]))


@pytest.fixture
def cyclic_net() -> QBNet:
    return build_net(((2,), np.eye(2)), ((1,), np.eye(2)))
