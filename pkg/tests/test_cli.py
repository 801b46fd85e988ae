import hashlib
import json

import pytest

from superprop.cli import CSV_HEADER, main, parse_grid, read_config


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture(scope="module")
def frame_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("frames") / "f4.json"
    assert main(["curve", "0", "1", "2", "--out", str(path)]) == 0
    return path


def test_curve_even_count_is_usage_error(capsys):
    code, _, err = run(["curve", "0", "1"], capsys)
    assert code == 64 and "odd number" in err


def test_parser_errors_exit_64(capsys):
    for argv in (["verify", "nope"], ["kernel", "--n", "x"], []):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 64
    capsys.readouterr()


def test_curve_bad_points_exit_2(capsys):
    code, _, err = run(["curve", "0", "2", "1"], capsys)
    assert code == 2 and "increasing" in err


def test_curve_json_to_stdout(capsys):
    code, out, err = run(["curve", "0", "1", "2"], capsys)
    assert code == 0 and json.loads(out)["g"] == 1 and "invariant" in err


def test_kernel_default_grid(capsys):
    code, out, err = run(["kernel"], capsys)
    lines = out.splitlines()
    assert code == 0 and lines[0] == CSV_HEADER and len(lines) == 4097
    assert "0 diagonal pairs skipped" in err


def test_kernel_skips_diagonal(capsys):
    code, out, err = run(["kernel", "--grid", "3"], capsys)
    assert code == 0 and len(out.splitlines()) == 1 + 80 and "1 diagonal" in err


def test_kernel_theta_needs_frame(capsys, frame_file):
    assert run(["kernel", "--n", "4"], capsys)[0] == 2
    assert run(["kernel", "--n", "6", "--frame", str(frame_file)], capsys)[0] == 2
    code, out, _ = run(["kernel", "--n", "4", "--frame", str(frame_file), "--grid", "4"], capsys)
    assert code == 0 and len(out.splitlines()) == 257


def test_bad_grid_and_which(capsys):
    assert run(["kernel", "--grid", "4:0:1"], capsys)[0] == 64
    assert run(["kernel", "--which", "s9"], capsys)[0] == 64


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# demo\nn = 3\nwhich = s2\ngrid = 4\n")
    assert read_config(cfg) == {"n": 3, "which": "s2", "grid": "4"}
    code, out, _ = run(["kernel", "--config", str(cfg)], capsys)
    assert code == 0 and len(out.splitlines()) == 257
    code, out, _ = run(["kernel", "--config", str(cfg), "--grid", "2"], capsys)
    assert len(out.splitlines()) == 17
    cfg.write_text("colour = red\n")
    assert run(["kernel", "--config", str(cfg)], capsys)[0] == 64


def test_grid_layout():
    zQ, zP = parse_grid("2:0:1:1:2", 2, None, 0)
    assert zQ.tolist()[:2] == [1j, 1j] and zP[0] == 0.25 + 1.25j
    a, b = parse_grid("random:5", 2, None, 7)
    c, d = parse_grid("random:5", 2, None, 7)
    assert (a == c).all() and (b == d).all()


def test_verify_exit_codes(tmp_path, capsys):
    out = tmp_path / "v.json"
    code, stdout, _ = run(["verify", "kontsevich", "--out", str(out)], capsys)
    assert code == 0 and stdout.startswith("pass")
    assert json.loads(out.read_text())["passed"] is True
    code, _, _ = run(["verify", "bilinear"], capsys)
    assert code == 1
    assert run(["verify", "zero-set", "--n", "2"], capsys)[0] == 2


@pytest.mark.parametrize("argv", [["kernel", "--grid", "random:50", "--seed", "3"],
                                  ["verify", "theta-translations", "--seed", "5"],
                                  ["verify", "zero-set", "--seed", "2"]])
def test_deterministic_output(argv, tmp_path, capsys):
    digests = []
    for k in range(2):
        path = tmp_path / f"out{k}"
        assert main(argv + ["--out", str(path)]) == 0
        digests.append(hashlib.sha256(path.read_bytes()).hexdigest())
    capsys.readouterr()
    assert digests[0] == digests[1]


def test_verify_cohomology_seven(capsys):
    code, out, _ = run(["verify", "cohomology", "--n", "7"], capsys)
    assert code == 0 and json.loads(out)["info"]["dims"] == [0, 2, 0]


def test_verify_reflections_both_index_sets(capsys):
    code, out, _ = run(["verify", "reflections", "--n", "4"], capsys)
    names = [c["name"] for c in json.loads(out)["checks"]]
    assert code == 0 and any("tau1" in n for n in names)
    assert {n.split(":")[0] for n in names if ":" in n} == {"s1", "s2"}


def test_curve_examples(capsys, tmp_path):
    code, out, _ = run(["curve", "0", "1", "2"], capsys)
    assert abs(json.loads(out)["Omega_im"][0][0] - 1.0) < 1e-12
    path = tmp_path / "g2.json"
    code, out, _ = run(["curve", "0", "1", "2", "3", "4", "--out", str(path)], capsys)
    assert code == 0 and json.loads(path.read_text())["g"] == 2 and "invariant" in out
