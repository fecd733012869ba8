import json
import subprocess
import sys

import pytest

from fixtures import ELASTIC_1234, SPRING5_CLAMPED_S
from rod_hearing.cli import main


def _write(path, payload):
    path.write_text(json.dumps(payload))
    return str(path)


@pytest.fixture
def cfg_file(tmp_path):
    return _write(tmp_path / "cfg.json", {"a": list(ELASTIC_1234.coefficients)})


def test_forward_then_identify(tmp_path, cfg_file):
    sp = tmp_path / "s.json"
    assert main(["forward", "--config", cfg_file, "--out", str(sp)]) == 0
    data = json.loads(sp.read_text())
    assert len(data["s"]) == 9 and data["manifest"]["command"] == "forward"
    out = tmp_path / "r.json"
    assert main(["identify", "--spectrum", str(sp), "--out", str(out)]) == 0
    res = json.loads(out.read_text())
    assert res["rank"] == 9
    labels = res["primary"]["labels"] + res["dual"]["labels"]
    assert "elastic fixing (k_t=1, k_r=2)" in labels and "elastic fixing (k_t=3, k_r=4)" in labels


def test_outputs_are_byte_stable(tmp_path, cfg_file):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert main(["roundtrip", "--config", cfg_file, "--noise", "1e-10", "--seed", "7",
                     "--trials", "2", "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_plain_text_spectrum_and_extra_values(tmp_path):
    p = tmp_path / "s.txt"
    p.write_text("# values\n" + "\n".join(repr(v) for v in SPRING5_CLAMPED_S) + "\n9999.0\n")
    with pytest.warns(UserWarning, match="first 9"):
        assert main(["identify", "--spectrum", str(p), "--out", str(tmp_path / "r.json")]) == 0


def test_classify_prints_labels(capsys, tmp_path):
    f = _write(tmp_path / "c.json", {"a": [1, 1, 0, 0, 1, 0, 1, 0]})
    assert main(["classify", "--config", f]) == 0
    assert capsys.readouterr().out.strip() == "left: rigid clamping, right: free support"


def test_xvector_from_config(capsys, cfg_file):
    assert main(["xvector", "--config", cfg_file]) == 0
    assert json.loads(capsys.readouterr().out)["x"] == [24, -10, 1, 24, 6, -16, -32, 6, -18, 4]


@pytest.mark.parametrize(
    "argv_payload, code",
    [
        ((["identify"], {"s": [5.0] * 9}), 2),
        ((["identify"], {"s": [1.0, 2.0]}), 2),
        ((["forward"], {"a": [0, 1, 1, 0, 1, 1, 1, 1]}), 3),
        ((["forward"], {"a": [1, 2]}), 2),
        ((["identify"], {"s": [15.4182057169801, 49.9648620318002, 104.247696458861,
                               178.269729494609, 272.030971305025, 385.531421917553,
                               518.771081332259, 671.749949549144, 844.468026568208]}), 4),
    ],
)
def test_exit_codes(tmp_path, argv_payload, code):
    argv, payload = argv_payload
    f = _write(tmp_path / "in.json", payload)
    flag = "--spectrum" if "s" in payload else "--config"
    assert main(argv + [flag, f]) == code


def test_negative_noise_exit_2(cfg_file):
    assert main(["roundtrip", "--config", cfg_file, "--noise", "-1"]) == 2


def test_missing_file_exit_2(tmp_path):
    assert main(["forward", "--config", str(tmp_path / "nope.json")]) == 2


def test_console_entry_point(cfg_file):
    r = subprocess.run([sys.executable, "-m", "rod_hearing.cli", "classify", "--config", cfg_file],
                       capture_output=True, text=True)
    assert r.returncode == 0
    assert "elastic fixing (k_t=3, k_r=4)" in r.stdout
