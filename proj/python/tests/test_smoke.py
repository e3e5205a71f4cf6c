import json
import pathlib

import pytest

import dbesim

ROOT = pathlib.Path(__file__).resolve().parents[2]
SMALL = {"image": {"width": 640, "height": 128}, "slices": {"columns": 2}}


def with_arch(arch, **extra):
    return {**SMALL, "arch": arch, **extra}


def test_ycocg_round_trip_sample():
    for rgb in [(0, 0, 0), (255, 0, 255), (17, 200, 3), (1023, 1023, 1023)]:
        ycc = dbesim.ycocg_from_rgb(*rgb)
        assert dbesim.rgb_from_ycocg(*ycc, bit_depth=10) == rgb


def test_ycocg_out_of_range_raises():
    with pytest.raises(dbesim.RangeError):
        dbesim.rgb_from_ycocg(255, 255, 0, bit_depth=8)


def test_geometry_partitions():
    g = dbesim.geometry(3840, 2160, columns=4)
    assert g["partition_bases"] == [0, 120, 240, 360]
    assert g["blocks_per_blockline"] == 480
    order = dbesim.decode_order(64, 2, columns=2)
    assert order[:5] == [(0, 0, 0), (0, 1, 0), (0, 2, 0), (0, 3, 0), (1, 0, 0)]


@pytest.mark.parametrize("arch,occupancy", [("Baseline", 106), ("Type1", 90), ("Type2", 25)])
def test_presets_pass(arch, occupancy):
    r = dbesim.simulate(with_arch(arch))
    assert r["pass"] is True
    assert r["violations"]["total"] == 0
    assert r["max_recon_occupancy"] == occupancy
    assert r["pixels_emitted"] == 640 * 128


def test_fault_is_detected():
    r = dbesim.simulate(with_arch("Type2", faults={"banks_per_buffer": 1}))
    assert r["pass"] is False
    assert r["violations"]["conflicts"] > 0


def test_trace_is_deterministic():
    a = dbesim.simulate(with_arch("Type1"), trace=True)
    b = dbesim.simulate(with_arch("Type1"), trace=True)
    assert a["trace_csv"].splitlines()[0] == "cycle,slice,buffer,bank,op,word,purpose,block"
    assert a == b


def test_config_file_and_strictness():
    cfg = dbesim.load_config(ROOT / "configs" / "small_type2.json")
    assert cfg["arch"] == "Type2"
    with pytest.raises(dbesim.ConfigError):
        dbesim.simulate({**SMALL, "bogus": 1})
    with pytest.raises(dbesim.IoError):
        dbesim.simulate("/nonexistent/config.json")


def test_accounting_and_fps():
    a = dbesim.accounting({"image": {"width": 3840, "height": 2160}, "slices": {"columns": 4}})
    assert a["line_buffer_bits_total"] == 245760
    assert a["recon_bytes_total"] == 375
    assert a["recon_bytes_per_slice"] == 94
    mpix, fps = dbesim.fps(3840, 2160, 200.0, 4)
    assert round(mpix, 2) == 800.0
    assert round(fps, 2) == 96.45


def test_explore_presets():
    got = {arch: dbesim.explore(arch)["resident_pixels"] for arch in ("Baseline", "Type1", "Type2")}
    assert got == {"Baseline": 106, "Type1": 90, "Type2": 25}


def test_report_is_json_serializable():
    json.dumps(dbesim.simulate(with_arch("Baseline")))


def test_explore_custom_window():
    r = dbesim.explore("Baseline", {"prev_line": [-4, 7], "cur_row0": [-8, -1], "cur_row1": [-8, -1]})
    assert r["resident_pixels"] == 12 + 8 + 8
