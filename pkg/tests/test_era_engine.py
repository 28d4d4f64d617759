import numpy as np
import pytest

from core.errors import CompileError
from tools.era_engine import check_partition, era_amplitude, era_of, find_eras


def test_root_node_eras_of_teleportation(teleportation):
    eras = find_eras(teleportation, "root")
    assert eras.eras == ((1, 4), (2, 3), (5,), (6,))
    assert eras.gamma == ((), (1,), (2, 4), (3, 5))
    assert check_partition(teleportation, eras) == []


def test_external_node_eras_peel_from_the_end(teleportation):
    eras = find_eras(teleportation, "external")
    assert eras.eras == ((1,), (2, 4), (3, 5), (6,))
    assert eras.kind == "external"
    assert check_partition(teleportation, eras) == []


def test_late_external_eras(late_external):
    assert find_eras(late_external, "root").eras == ((1,), (2, 3), (4,), (5,))
    assert find_eras(late_external, "external").eras == ((1,), (3,), (4,), (2, 5))


def test_edgeless_net_is_one_era(make_net):
    net = make_net(((), [1.0, 0.0]), ((), [0.0, 1.0]), ((), [1.0]))
    eras = find_eras(net)
    assert eras.eras == ((1, 2, 3),)
    assert eras.gamma == ((),)


def test_era_of(teleportation):
    assert era_of(find_eras(teleportation)) == {1: 1, 4: 1, 2: 2, 3: 2, 5: 3, 6: 4}


def test_cycle_has_no_eras(cyclic_net):
    with pytest.raises(CompileError) as info:
        find_eras(cyclic_net)
    assert info.value.stage == "eras"


def test_unknown_kind(teleportation):
    with pytest.raises(ValueError):
        find_eras(teleportation, "sideways")


def test_era_amplitude_multiplies_nodes_of_the_era(teleportation):
    eras = find_eras(teleportation)
    value = era_amplitude(teleportation, eras, 1, {1: 1, 4: 1}, {})
    assert value == pytest.approx(np.sqrt(0.5) * 0.8j)
    # x2 copies x1, x3 is a Hadamard of x1
    assert era_amplitude(teleportation, eras, 2, {2: 1, 3: 1}, {1: 1}) == pytest.approx(-np.sqrt(0.5))
    with pytest.raises(ValueError):
        era_amplitude(teleportation, eras, 2, {2: 0}, {1: 0})
