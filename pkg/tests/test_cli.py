import json
import math
import subprocess
import sys

import pytest

from qwentangle import cli
from qwentangle.config import PACKAGED_CONFIGS
from qwentangle.errors import BoundaryOverrun

PI = math.pi

# small but representative invocations of every subcommand
SMALL = {
    "bands": ["--theta1", "1.0", "--n-k", "16"],
    "phase-diagram": ["--grid", "4", "--n-k", "32"],
    "walk-single": ["--theta1", "0.7", "--initial", "up", "--steps", "5", "--half-width", "7", "--stride", "1"],
    "walk-two": ["--theta1", "0.7", "--theta2", "0.2", "--steps", "4", "--half-width", "6"],
    "conversion": ["--steps", "6", "--half-width", "8"],
    "protection": ["--theta1", str(3 * PI / 4), "--theta2-minus", str(-7 * PI / 8), "--theta2-plus", str(7 * PI / 8), "--width", "1", "--steps", "6", "--half-width", "20"],
    "bound-states": ["--theta1", str(PI / 2), "--theta2-minus", str(-PI / 4), "--theta2-plus", str(-3 * PI / 4), "--half-width", "60"],
}


def run_cli(args, capsys):
    code = cli.main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("kind", sorted(SMALL))
@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_byte_identical_runs(kind, fmt, tmp_path, capsys):
    outputs = []
    for i in range(2):
        out = tmp_path / f"r{i}.{fmt}"
        code, _, err = run_cli([kind, *SMALL[kind], "--format", fmt, "--out", str(out)], capsys)
        assert code == 0, err
        files = sorted(tmp_path.glob(f"r{i}*"))
        outputs.append([f.read_bytes() for f in files])
    assert outputs[0] == outputs[1]


def test_config_file_overrides_flags(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"kind": "bands", "theta1": 2.0, "n_k": 4}))
    code, out, _ = run_cli(["bands", "--theta1", "0.5", "--n-k", "8", "--config", str(cfg), "--format", "json"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["metadata"]["config"]["theta1"] == 2.0
    assert len(doc["columns"]["k"]) == 4


def test_run_uses_kind_from_file(capsys):
    code, out, _ = run_cli(["run", "--config", str(PACKAGED_CONFIGS / "bands.json"), "--n-k", "8"], capsys)
    assert code == 0
    assert out.startswith("theta,k,E_plus,E_minus\n")


def test_short_lattice_exits_2(capsys):
    code, _, err = run_cli(["walk-two", "--steps", "10", "--half-width", "5"], capsys)
    assert code == 2
    assert "half_width" in err


def test_gapless_protection_exits_2(capsys):
    code, _, err = run_cli(
        ["protection", "--theta1", str(PI / 2), "--theta2-minus", str(PI / 2), "--theta2-plus", "2.5", "--steps", "4", "--half-width", "60"],
        capsys,
    )
    assert code == 2
    assert "gapless" in err


def test_mismatched_config_kind_exits_2(capsys):
    code, _, _ = run_cli(["bands", "--config", str(PACKAGED_CONFIGS / "conversion.json")], capsys)
    assert code == 2


def test_bad_json_exits_2(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert run_cli(["bands", "--config", str(p)], capsys)[0] == 2


def test_numerical_guard_exits_3(monkeypatch, capsys):
    def boom(cfg):
        raise BoundaryOverrun("edge")

    monkeypatch.setattr(cli, "run", boom)
    code, _, err = run_cli(["bands"], capsys)
    assert code == 3
    assert "BoundaryOverrun" in err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["conversion", "--format", "xml"])
    assert exc.value.code == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qwentangle", "bands", "--theta1", "1.0", "--n-k", "4"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert proc.stdout.count("\n") == 5


def test_multi_table_stdout_has_sections(capsys):
    code, out, _ = run_cli(["conversion", "--steps", "2", "--half-width", "4"], capsys)
    assert code == 0
    assert out.startswith("# series\n")
    assert "# joint_A\n" in out and "# joint_B\n" in out
