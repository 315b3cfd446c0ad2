import json

import pytest

from numrange import ComplexMatrix, Workbench
from numrange.cli import build_parser, main, make_config
from numrange.serialization import write_matrix

from .conftest import JORDAN

FAST = ["--samples", "2000", "--directions", "32", "--restarts", "2"]


@pytest.fixture
def matrix_file(tmp_path):
    def make(T, name="t.json"):
        path = tmp_path / name
        write_matrix(path, ComplexMatrix.coerce(T))
        return str(path)

    return make


def run(*argv):
    return main([str(a) for a in argv], environ={})


def read(out, name):
    with open(out / name, encoding="utf-8") as fin:
        return json.load(fin)


def test_corners_of_a_segment(tmp_path, matrix_file):
    path = matrix_file(ComplexMatrix.diagonal([0, 1]))
    out = tmp_path / "out"
    code = run("corners", "--matrix", path, "--samples", 10_000, "--seed", 1, "--delta-min", 0.5, "--out", out)
    assert code == 0
    data = read(out, "corners.json")
    assert data["command"] == "corners"
    assert data["config"]["seed"] == 1
    assert len(data["certificates"]) == 2
    ends = sorted(c["point"]["value"][0][0] for c in data["certificates"])
    assert ends == pytest.approx([0, 1], abs=1e-9)
    bench = Workbench(storage={"root_dir": str(out)})
    assert bench.revalidate(ComplexMatrix.diagonal([0, 1])) == []


def test_jordan_block_passes_theorem_1_1(tmp_path, matrix_file):
    out = tmp_path / "out"
    path = matrix_file(JORDAN)
    assert run("verify", "--theorem", "1.1", "--matrix", path, *FAST, "--delta-min", 0.5, "--out", out) == 0
    report = read(out, "theorem_1.1.json")
    assert report["status"] == "pass"
    assert report["instances"] == 0


def test_sparse_sampling_exits_inconclusive(tmp_path, matrix_file):
    path = matrix_file(ComplexMatrix.diagonal([0, 1, 3]))
    out = tmp_path / "out"
    assert run("verify", "--theorem", "1.1", "--matrix", path, *FAST, "--epsilon", 1e-12, "--out", out) == 3
    assert read(out, "theorem_1.1.json")["status"] == "inconclusive"


def test_theorem_1_2_on_leading_compressions(tmp_path, matrix_file):
    path = matrix_file(ComplexMatrix.diagonal([1 / k for k in range(1, 31)]))
    out = tmp_path / "out"
    argv = ["verify", "--theorem", "1.2", "--matrix", path, "--family-sizes", "10,20,30", *FAST, "--out", out]
    assert run(*argv, "--target", "1,0") == 0
    assert [e["d"] for e in read(out, "theorem_1.2.json")["entries"]] == [10, 20, 30]
    # 1/30 stays above the sigma_min target
    assert run(*argv, "--target", "0,0") == 1


def test_sample_of_the_identity(tmp_path, matrix_file):
    out = tmp_path / "out"
    path = matrix_file(ComplexMatrix.identity(3))
    assert run("sample", "--matrix", path, "--n", 2, "--samples", 10, "--format", "csv", "--out", out) == 0
    cloud = read(out, "cloud.json")["cloud"]
    assert len(cloud["points"]) == 10
    for point in cloud["points"]:
        assert [x for pair in point["value"] for x in pair] == pytest.approx([1, 0, 1, 0], abs=1e-12)
    assert (out / "cloud.csv").read_text().splitlines()[0] == "re_1,im_1,re_2,im_2"


def test_repeated_runs_are_byte_identical(tmp_path, matrix_file):
    path = matrix_file([[1, 2j], [0.5, -1]])
    for name in ("a", "b"):
        assert run("sample", "--matrix", path, "--n", 1, "--samples", 500, "--seed", 3, "--out", tmp_path / name) == 0
    assert (tmp_path / "a" / "cloud.json").read_bytes() == (tmp_path / "b" / "cloud.json").read_bytes()


def test_seed_comes_from_the_environment(tmp_path, matrix_file):
    out = tmp_path / "out"
    argv = ["sample", "--matrix", matrix_file(JORDAN), "--samples", "5", "--seed", "1", "--out", str(out)]
    assert main(argv, environ={"NUMRANGE_SEED": "5"}) == 0
    assert read(out, "cloud.json")["config"]["seed"] == 5


def test_support_command(tmp_path, matrix_file):
    out = tmp_path / "out"
    path = matrix_file(ComplexMatrix.diagonal([0, 1]))
    assert run("support", "--matrix", path, "--direction", "2,0", "--direction", "-1,0", "--out", out) == 0
    results = read(out, "support.json")["results"]
    assert [r["value"] for r in results] == pytest.approx([1.0, 0.0], abs=1e-12)
    assert [r["exact"] for r in results] == pytest.approx([1.0, 0.0], abs=1e-12)


def test_suite_command(tmp_path, matrix_file):
    out = tmp_path / "out"
    path = matrix_file(ComplexMatrix.diagonal([0, 1]))
    assert run("suite", "--matrix", path, "--n", 3, "--out", out) == 0
    assert read(out, "suite.json")["passed"]


def test_plot_after_corners(tmp_path, matrix_file):
    out = tmp_path / "out"
    path = matrix_file(ComplexMatrix.diagonal([0, 1j, 1]))
    assert run("corners", "--matrix", path, *FAST, "--format", "svg", "--out", out) == 0
    svg = (out / "cloud.svg").read_text()
    assert svg.lstrip().startswith("<?xml") and "</svg>" in svg
    assert run("plot", "--axes", "im1,re1", "--out", out) == 0
    assert run("plot", "--axes", "re2,re1", "--out", out) == 2


@pytest.mark.parametrize(
    "text, code",
    [
        ("{not json", 4),
        ('{"d": 2, "entries": [[0, 0], [0, 0], [0, 0]]}', 5),
        ('{"d": 1, "entries": [[NaN, 0]]}', 6),
    ],
)
def test_matrix_file_errors(tmp_path, text, code):
    path = tmp_path / "bad.json"
    path.write_text(text)
    assert run("sample", "--matrix", path, "--out", tmp_path / "out") == code
    assert not (tmp_path / "out" / "cloud.json").exists()


def test_usage_errors(tmp_path, matrix_file):
    out = tmp_path / "out"
    path = matrix_file(ComplexMatrix.diagonal([0, 1]))
    assert run() == 2
    assert run("sample", "--bogus") == 2
    assert run("sample", "--out", out) == 2
    assert run("sample", "--matrix", tmp_path / "absent.json", "--out", out) == 2
    assert run("sample", "--matrix", path, "--n", 3, "--out", out) == 2
    assert run("sample", "--matrix", path, "--delta-min", 2, "--out", out) == 2
    assert run("support", "--matrix", path, "--direction", "0,0", "--out", out) == 2
    assert run("verify", "--theorem", "1.2", "--matrix", path, "--out", out) == 2
    assert run("--help") == 0


def test_make_config_merges_file_flags_and_environment(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"n": 2, "samples": 100, "seed": 4}))
    args = build_parser().parse_args(["sample", "--config", str(path), "--samples", "50", "--no-refine"])
    config = make_config(args, environ={})
    assert (config.n, config.samples, config.seed, config.refine) == (2, 50, 4, False)
    assert make_config(args, environ={"NUMRANGE_SEED": "8"}).seed == 8
