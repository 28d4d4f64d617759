from tools.dot_export import arrow_label, era_dot
from tools.era_engine import find_eras


def test_arrow_labels():
    assert arrow_label(2) == "1 bit"
    assert arrow_label(8) == "3 bits"
    assert arrow_label(3) == "3 states"
    assert arrow_label(1) == "1 states"


def test_era_clusters(teleportation):
    dot = era_dot(teleportation, find_eras(teleportation))
    assert dot.startswith("digraph qbnet {")
    assert dot.count("subgraph cluster_T") == 4
    assert 'n6 [label="x6", peripheries=2];' in dot
    assert 'n5 -> n6 [label="2 bits"];' in dot
    assert "n1 -> n2" in dot
