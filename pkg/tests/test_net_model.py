import itertools

import numpy as np
import pytest

from core.errors import NetValidationError
from core.models import Node, QBNet
from tools.net_model import (
    classify_nodes,
    enumerate_stories,
    labels_of,
    node_amplitude,
    require_valid,
    resolve_names,
    story_amplitude,
    validate_net,
)
from tools.oracle import _amplitude


def test_teleportation_is_valid(teleportation):
    assert validate_net(teleportation).ok
    assert classify_nodes(teleportation) == ((1, 2, 3, 4, 5), (6,))


def test_late_external_has_two_external_nodes(late_external):
    assert classify_nodes(late_external) == ((1, 3, 4), (2, 5))


def test_cycle_reported_with_witness(cyclic_net):
    report = validate_net(cyclic_net)
    assert not report.ok
    (violation,) = report.of_kind("cycle")
    assert violation.witness[0] == violation.witness[-1]
    assert set(violation.witness) == {1, 2}
    with pytest.raises(NetValidationError) as info:
        require_valid(cyclic_net)
    assert info.value.exit_code == 3
    assert "cycle" in str(info.value)


def test_self_parent_is_a_cycle(make_net):
    net = make_net(((1,), np.eye(2)))
    report = validate_net(net)
    assert report.of_kind("self_parent")
    assert report.of_kind("cycle")


def test_shape_and_dangling_parent(make_net):
    net = make_net(((), [1.0, 0.0]), ((1, 7), np.eye(2)))
    kinds = {v.kind for v in validate_net(net).violations}
    assert "dangling_parent" in kinds

    wrong = make_net(((), [1.0, 0.0]), ((1,), np.eye(3)))
    (violation,) = validate_net(wrong).of_kind("shape")
    assert violation.node_id == 2


def test_non_finite_entries(make_net):
    net = make_net(((), [np.nan, 1.0]))
    assert validate_net(net).of_kind("non_finite")


def test_duplicate_names_rejected(teleportation):
    renamed = [
        Node(n.id, "x1" if n.id == 2 else n.name, n.parents, n.states, n.matrix) for n in teleportation
    ]
    net = QBNet(tuple(renamed))
    assert validate_net(net).of_kind("duplicate_name")
    with pytest.raises(KeyError):
        resolve_names(net, ["x1"])


def test_resolve_names(teleportation):
    assert resolve_names(teleportation, ["x3", " x1", ""]) == (1, 3)
    with pytest.raises(KeyError):
        resolve_names(teleportation, ["nope"])


def test_story_amplitude_matches_direct_product_for_every_story(teleportation):
    stories = list(enumerate_stories(teleportation))
    assert len(stories) == teleportation.story_count == 512
    for story in stories:
        direct = _amplitude(teleportation, dict(zip(teleportation.ids, story)))
        assert abs(story_amplitude(teleportation, story) - direct) <= 1e-15


def test_single_node_stories_read_its_column(make_net):
    column = [0.6, 0.0, 0.8j]
    net = make_net(((), column))
    assert [story_amplitude(net, story) for story in enumerate_stories(net)] == pytest.approx(column)


def test_disjoint_union_multiplies_amplitudes(make_net):
    left = make_net(((), [0.6, 0.8]), ((1,), [[0.0, 1.0], [1.0, 0.0]]))
    right = make_net(((), [0.5, 0.5j, 0.5, -0.5]), ((1,), np.eye(4)[:, ::-1] * 1j))
    union = make_net(
        ((), [0.6, 0.8]),
        ((1,), [[0.0, 1.0], [1.0, 0.0]]),
        ((), [0.5, 0.5j, 0.5, -0.5]),
        ((3,), np.eye(4)[:, ::-1] * 1j),
    )
    for story in enumerate_stories(union):
        expected = story_amplitude(left, story[:2]) * story_amplitude(right, story[2:])
        assert story_amplitude(union, story) == pytest.approx(expected)


def test_node_amplitude_uses_parent_codec(teleportation):
    # x5 columns run over (x2, x4) with x2 most significant; CNOT maps (1, 0) to row 3.
    assert node_amplitude(teleportation, 5, {2: 1, 4: 0, 5: 3}) == 1
    assert node_amplitude(teleportation, 5, {2: 1, 4: 0, 5: 2}) == 0


def test_story_norm_is_one_for_isometric_nodes(teleportation):
    # Summing |FI|^2 over external states of a net of isometries gives 1.
    internal = [1, 2, 3, 4, 5]
    total = 0.0
    for x6 in range(8):
        amp = 0j
        for values in itertools.product(*(range(teleportation.cardinality(j)) for j in internal)):
            amp += story_amplitude(teleportation, tuple(values) + (x6,))
        total += abs(amp) ** 2
    assert total == pytest.approx(1.0)


def test_labels_of(teleportation):
    assert labels_of(teleportation, (5, 6), (3, 7)) == ("11", "7")
