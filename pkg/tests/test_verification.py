from dataclasses import replace

import numpy as np

from core.config import CompileOptions
from core.models import UnitaryProgram
from graph.pipeline_builder import run_compile
from tools.verification import unitarity_residual, verify_program


def test_compiled_teleportation_verifies(teleportation):
    program = run_compile(teleportation, CompileOptions(measured_nodes=(3,)))
    report = verify_program(program, teleportation, tol=1e-10)
    assert report.ok, report
    assert len(report.prefix_top) == 2


def test_tampered_unitary_is_localized(teleportation):
    program = run_compile(teleportation, CompileOptions(measured_nodes=(3,), mode="e1"))
    broken = [np.array(u) for u in program.unitaries]
    broken[1][0, 0] += 0.25
    tampered = UnitaryProgram(
        n_s=program.n_s,
        qubit_count=program.qubit_count,
        mode=program.mode,
        era_kind=program.era_kind,
        initial=program.initial,
        unitaries=tuple(broken),
        external_schema=program.external_schema,
        segments=program.segments,
        breakpoints=program.breakpoints,
    )
    report = verify_program(tampered, teleportation, tol=1e-10)
    assert not report.ok
    assert report.worst_unitary() == 2
    assert report.unitarity[0] < 1e-10


def test_mismatched_net(teleportation, late_external):
    program = run_compile(teleportation, CompileOptions())
    report = verify_program(program, late_external, tol=1e-10)
    assert not report.ok
    assert report.final_residual == float("inf")
    assert report.notes


def test_unitarity_residual_shape_check():
    assert unitarity_residual(np.eye(2), 4) == float("inf")
    assert unitarity_residual(np.eye(4), 4) == 0.0


def test_out_of_range_row_support_is_reported(teleportation):
    program = run_compile(teleportation, CompileOptions(measured_nodes=(3,)))
    last = program.segments[-1]
    corrupted = replace(last, row_support=last.row_support[:-1] + (last.row_support[-1] + 90,))
    broken = replace(program, segments=program.segments[:-1] + (corrupted,))
    report = verify_program(broken, teleportation, tol=1e-10)
    assert not report.ok
    assert report.prefix_top[-1] == float("inf")
    assert report.final_residual == float("inf")
    assert any("row support" in note for note in report.notes)
