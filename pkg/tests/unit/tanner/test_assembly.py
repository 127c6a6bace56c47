# tests/unit/tanner/test_assembly.py
import math

import numpy as np
import pytest

from l1sections.constants import AssemblyMode
from l1sections.exceptions import DomainError, ParameterInfeasibleError
from l1sections.tanner import assembly as assembly_module
from l1sections.tanner.assembly import (
    VACUOUS,
    LevelSettings,
    _build_level,
    assemble_theorem1,
    assemble_theorem2,
    star_graph,
    trivial_level_certificate,
)
from l1sections.tanner.schedule import build_schedule
from l1sections.utils.bitstream import SignBitStream


def _built(assembly):
    return [lv for lv in assembly.schedule.levels if lv.status == "built"]


def test_explicit_assembly_below_minimum():
    with pytest.raises(ParameterInfeasibleError, match="below the configured minimum"):
        assemble_theorem1(128, 0.5)


def test_seeded_assembly_needs_a_seed():
    with pytest.raises(DomainError):
        assemble_theorem2(1024, 0.5, seed=-1)


def test_trivial_level_certificate():
    cert = trivial_level_certificate(1.2, 1.9)
    assert (cert.t, cert.T, cert.eps) == (1.2, 1.9, 1.0)
    with pytest.raises(DomainError):
        trivial_level_certificate(1.9, 2.1)


def test_star_graph_is_a_single_right_vertex():
    G = star_graph(6)
    assert G.header == (6, 1, 1, 6)
    assert G.adjacency.tolist() == [[0, 1, 2, 3, 4, 5]]


def test_strict_assembly_names_the_first_level_it_cannot_build():
    # 256 edges cannot carry a spectral graph of useful degree
    with pytest.raises(ParameterInfeasibleError, match=r"^level \d+ .*reach right degree 2") as excinfo:
        assemble_theorem1(256, 0.5)
    assert excinfo.value.level is not None
    assert excinfo.value.level > 0


def test_explicit_assembly_at_256_builds_the_first_schedule_level():
    assembly = assemble_theorem1(256, 0.5, strict=False)
    assert assembly.mode is AssemblyMode.EXPLICIT
    assert assembly.rows <= 128
    assert assembly.random_bit_count == 0

    built = _built(assembly)
    assert len(built) == 1
    level = built[0]
    assert level.index >= 0 and level.kept
    assert level.t <= 1 < assembly.schedule.points[level.index + 1]
    assert level.graph == {"N": 256, "n": 1, "D": 1, "d": 256}
    assert level.inner["inner"] == "kerdock" and level.inner["k"] == 64
    assert all(lv.status == "trivial" for lv in assembly.schedule.levels[:level.index])

    assert assembly.check.blocks[0].label.startswith(f"level {level.index}: ")
    assert (assembly.certificate.T, assembly.certificate.eps) == (4.0, 0.125)
    assert assembly.details["levels_built"] == 1
    assert assembly.details["levels_skipped"] >= 1
    assert any(g.name.endswith("realized") and not g.held for g in assembly.guards)


def test_every_level_tries_sum_product_boosting_first(mocker):
    spy = mocker.spy(assembly_module, "boost_sum_product")
    assembly = assemble_theorem1(256, 0.5, strict=False)
    assert spy.call_count >= 1
    first = spy.call_args_list[0]
    assert first.args[0] == 256
    assert first.args[1] == assembly.schedule.eta_tilde


def test_level_without_room_for_an_inner_space_raises_naming_it():
    settings = LevelSettings(N=3276, schedule=build_schedule(3276, 0.5))
    with pytest.raises(ParameterInfeasibleError, match=r"^level 5 \(t_i=546, target d=6\): no inner space") as excinfo:
        _build_level(5, 546.0, remaining=1000, current_T=0.5, settings=settings)
    assert excinfo.value.level == 5


def test_spectral_level_on_lps_5_13():
    settings = LevelSettings(N=3276, schedule=build_schedule(3276, 0.5))
    record, check, step = _build_level(5, 546.0, remaining=5000, current_T=0.5, settings=settings)
    assert record.status == "built"
    assert (record.graph["N"], record.graph["n"], record.graph["d"]) == (3276, 1092, 6)
    assert record.inner["k"] == 4
    assert check.rows == record.rows == 4 * 1092
    assert step is not None and step.t == 0.5


@pytest.mark.slow
def test_explicit_assembly_at_1024_is_deterministic():
    first = assemble_theorem1(1024, 0.5, strict=False)
    second = assemble_theorem1(1024, 0.5, strict=False)
    assert first.rows <= 512
    assert first.schedule.r == 37
    for name in ("row_index", "col_index", "signs"):
        assert np.array_equal(getattr(first.check, name), getattr(second.check, name))
    assert first.certificate == second.certificate
    assert first.certificate.T == 8.0
    assert [lv.graph["n"] for lv in _built(first)] == [1]
    assert any(g.name == "r <= 4 log2 log2 N + 8" for g in first.guards)


@pytest.mark.slow
def test_explicit_assembly_builds_a_spectral_level_once_lps_fits():
    # 20748 = edges of LPS(37, 13); LPS(41, 13) gives right degree 38 here
    assembly = assemble_theorem1(20748, 1.0, strict=False, max_inner_k=16)
    spectral = [lv for lv in _built(assembly) if lv.graph["n"] > 1]
    assert spectral
    level = spectral[0]
    assert (level.graph["n"], level.graph["d"]) == (1092, 38)
    assert 2 <= level.graph["D"] <= 4
    assert level.inner["k"] == 16
    assert 38 >= math.ceil(level.inner["target_d"] / 4)
    assert assembly.rows <= 20748


def test_seeded_assembly_is_infeasible_below_the_smallest_lps_graph():
    with pytest.raises(ParameterInfeasibleError, match="no spectral degree in the window"):
        assemble_theorem2(1024, 0.5, seed=1)


def test_seeded_assembly_at_4096():
    assembly = assemble_theorem2(4096, 0.5, seed=1)
    assert (assembly.details["p"], assembly.details["q"]) == (17, 13)
    assert (assembly.details["d"], assembly.details["k"]) == (8, 1)
    assert assembly.random_bit_count == 8 <= 64
    assert assembly.rows == 1092 <= 2048


@pytest.mark.slow
def test_seeded_assembly_invariants_at_8568():
    assembly = assemble_theorem2(8568, 1.0, seed=7)
    k, d = assembly.details["k"], assembly.details["d"]
    assert assembly.mode is AssemblyMode.SEEDED
    assert (assembly.details["p"], assembly.details["q"]) == (13, 17)
    assert d == 7 and k == math.floor(d / 4)
    assert assembly.random_bit_count == k * d <= d * d
    assert assembly.rows <= 8568
    assert assembly.certificate == VACUOUS or assembly.certificate.useful

    again = assemble_theorem2(8568, 1.0, seed=7)
    assert np.array_equal(again.check.signs, assembly.check.signs)
    assert np.array_equal(assembly.check.signs[:k * d], SignBitStream(7).signs(k, d).ravel())
