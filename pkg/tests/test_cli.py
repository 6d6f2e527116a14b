import json
import subprocess
import sys

import numpy as np
import pytest

from pathmodel import store
from pathmodel.cli import run
from pathmodel.gmodel import ModelLibrary, build_model
from pathmodel.synth import BASIC_SHAPES, ShapeSpec, gen_shape, teaching_sets

from helpers import random_similarity


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    teach = []
    for i, shape in enumerate(BASIC_SHAPES):
        out = d / f"{shape}.json"
        assert run(["gen", "--shape", shape, "--sets", "8", "--points", "200",
                    "--noise-rel", "0.02", "--seed", str(100 * i), "--out", str(out)]) == 0
        teach.append(str(out))
    lib = d / "lib.json"
    assert run(["build", "--in", *teach, "--epsilon", "0.05", "--out", str(lib)]) == 0
    rng = np.random.default_rng(8)
    demo = d / "demo.json"
    shape = random_similarity(gen_shape(ShapeSpec("half_circle")), rng)
    store.save_path_set(demo, store.PathSet("half_circle", [shape]))
    return d


def test_gen_contract(workspace):
    data = store.load_path_set(workspace / "half_circle.json")
    assert len(data.sets) == 8 and all(s.shape == (200, 3) for s in data.sets)


def test_gen_matches_library_call(workspace):
    data = store.load_path_set(workspace / "half_circle.json")
    expected = teaching_sets(ShapeSpec("half_circle", n_points=200), count=8, noise_fraction=0.02, seed=400)
    for a, b in zip(data.sets, expected):
        np.testing.assert_array_equal(a, b)


def test_build_matches_library_call(workspace, tmp_path):
    models = []
    for shape in BASIC_SHAPES:
        data = store.load_path_set(workspace / f"{shape}.json")
        models.append(build_model(data.sets, 0.05, 2.0, name=data.label))
    path = tmp_path / "lib.json"
    store.save_library(path, ModelLibrary(tuple(models)))
    assert path.read_bytes() == (workspace / "lib.json").read_bytes()


def test_build_rejects_three_sets(workspace, tmp_path, capsys):
    few = tmp_path / "few.json"
    assert run(["gen", "--shape", "spiral", "--sets", "3", "--out", str(few)]) == 0
    assert run(["build", "--in", str(few), "--epsilon", "0.05", "--out", str(tmp_path / "x.json")]) == 2
    assert "need >= 4" in capsys.readouterr().err


def test_build_append(workspace, tmp_path):
    lib = tmp_path / "lib.json"
    assert run(["build", "--in", str(workspace / "spiral.json"), "--epsilon", "0.05", "--out", str(lib)]) == 0
    assert run(["build", "--in", str(workspace / "parabola.json"), "--epsilon", "0.05",
                "--name", "para", "--append", "--out", str(lib)]) == 0
    assert store.load_library(lib).names == ["spiral", "para"]


def test_recognize(workspace, tmp_path, capsys):
    report = tmp_path / "report.json"
    code = run(["recognize", "--lib", str(workspace / "lib.json"), "--demo", str(workspace / "demo.json"),
                "--report", str(report)])
    out = capsys.readouterr().out
    assert code == 0
    assert "best = half_circle" in out
    # every candidate is listed
    assert out.count("\n") == 1 + 8 * len(BASIC_SHAPES)
    rep = json.loads(report.read_text())
    assert rep[0]["best"] == "half_circle" and len(rep[0]["ranked"]) == 40


def test_decanon(workspace, tmp_path):
    out = tmp_path / "kps.json"
    assert run(["decanon", "--lib", str(workspace / "lib.json"), "--demo", str(workspace / "demo.json"),
                "--model", "half_circle", "--out", str(out)]) == 0
    kps = store.load_path_set(out).sets[0]
    demo = store.load_path_set(workspace / "demo.json").sets[0]
    assert len(kps) == store.load_library(workspace / "lib.json")["half_circle"].keypoint_count
    # localized keypoints lie close to the demonstrated path
    scale = np.linalg.norm(np.ptp(demo, axis=0))
    nearest = np.min(np.linalg.norm(kps[:, None, :] - demo[None, :, :], axis=2), axis=1)
    assert nearest.max() < 0.05 * scale


def test_decanon_unknown_model(workspace, tmp_path):
    assert run(["decanon", "--lib", str(workspace / "lib.json"), "--demo", str(workspace / "demo.json"),
                "--model", "nope", "--out", str(tmp_path / "k.json")]) == 2


def test_correct(workspace, tmp_path):
    kps_path = tmp_path / "kps.json"
    run(["decanon", "--lib", str(workspace / "lib.json"), "--demo", str(workspace / "demo.json"),
         "--model", "half_circle", "--out", str(kps_path)])
    kps = store.load_path_set(kps_path).sets[0]
    # a detour between keypoints 1 and 3, in demonstration coordinates
    bump = np.linalg.norm(kps[2] - kps[1])
    corr = np.array([kps[1] * 0.6 + kps[2] * 0.4, kps[2] + bump, kps[2] * 0.6 + kps[3] * 0.4])
    corr_path = tmp_path / "corr.json"
    store.save_path_set(corr_path, store.PathSet("corr", [corr]))
    out = tmp_path / "corrected.json"
    assert run(["correct", "--lib", str(workspace / "lib.json"), "--demo", str(workspace / "demo.json"),
                "--correction", str(corr_path), "--epsilon", "1e-9", "--out", str(out)]) == 0
    corrected = store.load_path_set(out).sets[0]
    assert len(corrected) == len(kps) - 1 + 3
    np.testing.assert_allclose(corrected[2:5], corr, atol=1e-12)


def test_tune(workspace, tmp_path):
    others = tmp_path / "others.json"
    ins = [str(workspace / f"{s}.json") for s in BASIC_SHAPES if s != "half_circle"]
    assert run(["build", "--in", *ins, "--epsilon", "0.05", "--out", str(others)]) == 0
    out = tmp_path / "curve.csv"
    assert run(["tune", "--teach", str(workspace / "half_circle.json"), "--demo", str(workspace / "demo.json"),
                "--lib", str(others), "--grid", "0.02:0.2:0.06", "--out", str(out)]) == 0
    lines = out.read_text().strip().split("\n")
    assert len(lines) == 1 + 4


def test_matrix(workspace, tmp_path):
    rng = np.random.default_rng(3)
    demos = []
    for s in BASIC_SHAPES:
        p = tmp_path / f"demo_{s}.json"
        store.save_path_set(p, store.PathSet(s, [random_similarity(gen_shape(ShapeSpec(s)), rng)]))
        demos.append(str(p))
    out = tmp_path / "m.csv"
    assert run(["matrix", "--lib", str(workspace / "lib.json"), "--demos", *demos, "--out", str(out)]) == 0
    last = out.read_text().strip().split("\n")[-1]
    assert last == "argmax," + ",".join(BASIC_SHAPES)


def test_usage_errors(tmp_path, capsys):
    assert run([]) == 1
    assert run(["gen", "--shape", "half_circle"]) == 1
    assert run(["gen", "--shape", "hexagon", "--out", str(tmp_path / "x.json")]) == 1
    assert run(["frobnicate"]) == 1


def test_data_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run(["recognize", "--lib", str(bad), "--demo", str(bad)]) == 2
    assert run(["recognize", "--lib", str(tmp_path / "missing.json"), "--demo", str(bad)]) == 2


def test_module_entry_point(tmp_path):
    out = tmp_path / "hc.json"
    proc = subprocess.run([sys.executable, "-m", "pathmodel", "gen", "--shape", "half_circle", "--sets", "8",
                           "--points", "200", "--noise-rel", "0.02", "--seed", "7", "--out", str(out)],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    data = store.load_path_set(out)
    assert len(data.sets) == 8 and data.sets[0].shape == (200, 3)
