import json
from pathlib import Path

import numpy as np
import pytest

from core.config import CompileOptions
from core.errors import NetParseError
from core.net_io import load_net, load_program, net_to_document, save_net, save_program
from graph.pipeline_builder import run_compile


def test_net_round_trip(teleportation, tmp_path: Path):
    path = tmp_path / "net.json"
    save_net(teleportation, path, description="copy")
    again = load_net(path)
    assert net_to_document(again) == net_to_document(teleportation)
    for a, b in zip(teleportation, again):
        assert np.array_equal(a.matrix, b.matrix)
        assert a.states == b.states


def test_unknown_fields_strict_and_lenient(nets_dir: Path, tmp_path: Path):
    document = json.loads((nets_dir / "late_external.json").read_text())
    document["author"] = "someone"
    document["nodes"][0]["colour"] = "red"
    path = tmp_path / "extra.json"
    path.write_text(json.dumps(document))
    with pytest.raises(NetParseError):
        load_net(path)
    assert len(load_net(path, strict=False)) == 5


@pytest.mark.parametrize(
    "text",
    [
        "{not json",
        '{"version": 1, "nodes": []}',
        '{"version": 2, "nodes": [{"id": 1, "name": "a", "states": ["0"], "matrix": [[[1, 0]]]}]}',
        '{"version": 1, "nodes": [{"id": 1, "name": "a", "states": ["0", "1"], "matrix": [[[1, 0]], [[0, 0], [1, 0]]]}]}',
        '{"version": 1, "nodes": [{"id": 1, "name": "a", "states": ["0", "0"], "matrix": [[[1, 0]], [[0, 0]]]}]}',
    ],
)
def test_malformed_nets_are_parse_errors(tmp_path: Path, text):
    path = tmp_path / "bad.json"
    path.write_text(text)
    with pytest.raises(NetParseError) as info:
        load_net(path)
    assert info.value.exit_code == 2


def test_missing_file(tmp_path: Path):
    with pytest.raises(NetParseError):
        load_net(tmp_path / "absent.json")


def test_program_round_trip_is_bit_exact(teleportation, tmp_path: Path):
    program = run_compile(teleportation, CompileOptions(measured_nodes=(3,)))
    path = tmp_path / "program.json"
    save_program(program, path, net=teleportation)
    again = load_program(path)
    assert np.array_equal(again.initial, program.initial)
    for a, b in zip(again.unitaries, program.unitaries):
        assert np.array_equal(a, b)
    assert again.segments == program.segments
    assert again.breakpoints == program.breakpoints

    document = json.loads(path.read_text())
    assert document["external_labels"][:2] == [["0"], ["1"]]
    assert document["qubit_count"] == 3


def test_v1_program_without_initial_is_rejected(teleportation, tmp_path: Path):
    program = run_compile(teleportation, CompileOptions())
    path = tmp_path / "program.json"
    save_program(program, path)
    document = json.loads(path.read_text())
    document["initial"] = None
    path.write_text(json.dumps(document))
    with pytest.raises(NetParseError):
        load_program(path)


@pytest.mark.parametrize(
    "support",
    [
        lambda s: s[:-1] + [s[-1] + 90],
        lambda s: list(reversed(s)),
        lambda s: [-1] + s[1:],
    ],
)
def test_inconsistent_row_support_is_a_parse_error(teleportation, tmp_path: Path, support):
    program = run_compile(teleportation, CompileOptions(measured_nodes=(3,)))
    path = tmp_path / "program.json"
    save_program(program, path)
    document = json.loads(path.read_text())
    document["segments"][-1]["row_support"] = support(document["segments"][-1]["row_support"])
    path.write_text(json.dumps(document))
    with pytest.raises(NetParseError):
        load_program(path)


def test_row_support_longer_than_state_space(teleportation, tmp_path: Path):
    program = run_compile(teleportation, CompileOptions(measured_nodes=(3,)))
    path = tmp_path / "program.json"
    save_program(program, path)
    document = json.loads(path.read_text())
    document["n_s"] = 4
    path.write_text(json.dumps(document))
    with pytest.raises(NetParseError, match="more than n_s=4"):
        load_program(path)
