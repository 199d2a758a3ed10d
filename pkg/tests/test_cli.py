import csv
import io
import json
import subprocess
import sys

import pytest

from urnlab.cli import run
from urnlab.urns import UrnModel

UNIFORM = json.dumps({"gamma": [[1, 1], [1, 1]]})
TRIANGLE = json.dumps({"vertices": 3, "edges": [[0, 1], [1, 2], [0, 2]]})


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out=out)
    return code, out.getvalue()


def call_json(*argv):
    code, text = call(*argv)
    return code, json.loads(text)


def error_of(capsys, *argv):
    code, text = call(*argv)
    assert text == ""
    err = json.loads(capsys.readouterr().err)
    assert err["exit_code"] == code
    return code, err


def test_measure_example():
    code, data = call_json("measure", "--model", UNIFORM, "--thresholds", "1,1")
    assert code == 0
    assert data["measure"]["mass"] == {"0,1": "1/4", "1,0": "1/4", "1,1": "1/2"}


def test_measure_csv():
    code, text = call("measure", "--model", UNIFORM, "--thresholds", "1,1", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["key", "value", "approx_decimal"]
    assert ["measure.mass.1,1", "1/2", "0.5"] in rows


def test_window_law_and_zero_window(capsys):
    code, data = call_json("law", "--model", UNIFORM, "--window", "0:1")
    assert code == 0
    assert data["law"] == ["0", "2/3", "1/3"]
    code, err = error_of(capsys, "law", "--model", json.dumps({"gamma": [[1, 0], [1, 0]]}),
                         "--window", "0:0")
    assert code == 3 and err["error"] == "zero_probability"


def test_law_oracle_flag():
    code, data = call_json("law", "--model", json.dumps({"gamma": [[1, 2], [3, 4]]}), "--oracle")
    assert code == 0


def test_usage_errors(capsys):
    assert error_of(capsys, "bogus")[0] == 2
    assert error_of(capsys, "measure", "--thresholds", "1,1")[0] == 2
    assert error_of(capsys, "law", "--model", UNIFORM, "--window", "0:1,0:1")[0] == 2
    # an all-zero row leaves no mass at all
    assert error_of(capsys, "law", "--model", json.dumps({"gamma": [[0, 0]]}))[0] == 3
    assert error_of(capsys, "law", "--model", json.dumps({"gamma": [[1, -1]]}))[0] == 2
    assert error_of(capsys, "search", "farr")[0] == 2


def test_check_exit_codes():
    code, data = call_json("check", "--property", "nc", "--model", UNIFORM, "--thresholds", "1,1")
    assert code == 0 and data["verdict"]["status"] == "holds"
    code, data = call_json("check", "--property", "slc", "--sequence", "1,0,1")
    assert code == 1 and data["verdict"]["status"] == "violated"
    code, data = call_json("check", "--property", "ulc", "--sequence", "1,2,1", "--n", "2")
    assert code == 0


def test_check_measure_input():
    diag = json.dumps({"space": [2, 2], "mass": {"0,0": "1/2", "1,1": "1/2"}})
    code, data = call_json("check", "--property", "nc", "--measure", diag)
    assert code == 1
    assert data["verdict"]["witness"]["joint"] == "1/2"


def test_verify_embeds_model_roundtrip():
    model = {"gamma": [[1, 2], [3, 4]]}
    code, data = call_json("verify", "--theorem", "mainthm-a", "--model", json.dumps(model))
    assert code == 0 and data["status"] == "holds"
    embedded = data["instances"][0]["model"]
    assert UrnModel.from_dict(embedded) == UrnModel(model["gamma"])


def test_verify_window_and_oracle():
    code, data = call_json("verify", "--theorem", "mainthm-b", "--model", UNIFORM,
                           "--window", "0:1")
    assert code == 0
    code, _ = call("verify", "--theorem", "mainthm-a", "--model", UNIFORM, "--oracle")
    assert code == 0


def test_orient_commands():
    code, data = call_json("orient", "count", "--graph", TRIANGLE, "--a", "1,1,1", "--b", "0,0,0")
    assert code == 0
    assert 2 in _values(data)
    assert call("orient", "glemma", "--graph", TRIANGLE)[0] == 0
    assert call("orient", "gphcor", "--graph", TRIANGLE)[0] == 0
    code, data = call_json("orient", "matchings", "--graph",
                           json.dumps({"vertices": 4, "edges": [[0, 1], [1, 2], [2, 3], [3, 0]]}))
    assert code == 0 and [1, 4, 2] in _values(data)


def _values(obj):
    if isinstance(obj, dict):
        for v in obj.values():
            yield from _values(v)
    else:
        yield obj


def test_welsh_commands():
    code, data = call_json("conjecture", "welsh", "--s", "120")
    assert code == 1
    code, data = call_json("conjecture", "welsh", "--s", "5")
    assert code == 0
    code, data = call_json("conjecture", "welsh", "--scan-s", "1:20")
    assert code == 0
    assert data["first_s"] is None
    assert [row["s"] for row in data["scan"]] == list(range(1, 21))
    assert not any(row["satisfied"] for row in data["scan"])


def test_output_is_byte_stable():
    argv = ["search", "nmp", "--seed", "4", "--budget", "5", "--verbose"]
    assert call(*argv) == call(*argv)
    argv = ["measure", "--model", json.dumps({"gamma": [[1, 2, 3], [3, 1, 1]]}),
            "--thresholds", "1,1,2", "--format", "csv"]
    assert call(*argv) == call(*argv)


def test_search_commands():
    for what in ("farr", "qcna", "nmp"):
        code, data = call_json("search", what, "--seed", "1", "--budget", "5")
        assert code in (0, 4)
        assert data["params"]["seed"] == 1


def test_console_script_entry():
    proc = subprocess.run([sys.executable, "-m", "urnlab.cli", "measure", "--model", UNIFORM,
                           "--thresholds", "1,1"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["measure"]["mass"]["1,1"] == "1/2"


@pytest.mark.parametrize("prop", ["na", "cna", "nmp", "app"])
def test_check_properties_on_uniform(prop):
    code, _ = call("check", "--property", prop, "--model", UNIFORM, "--thresholds", "1,1")
    assert code == 0


def test_cap_overrides(capsys):
    big = json.dumps({"gamma": [[1, 1, 1]] * 4})
    code, err = error_of(capsys, "law", "--model", big, "--oracle", "--cap", "10")
    assert code == 4 and err["error"] == "cap_exceeded"
    assert call("law", "--model", big, "--oracle", "--cap", "100")[0] == 0
    code, data = call_json("check", "--property", "cna", "--measure",
                           json.dumps({"space": [2, 2, 2, 2, 2],
                                       "mass": {"0,0,0,0,0": "1/2", "1,1,1,1,1": "1/2"}}),
                           "--max-upsets", "5")
    assert code == 4 and data["verdict"]["status"] == "inconclusive"
