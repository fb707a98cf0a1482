import json
import subprocess
import sys

import jsonschema
import pytest

from dimerpoly import fixtures
from dimerpoly.cli import main
from dimerpoly.errors import InputError, MalformedPD, NotReducedAsserted


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, schema, *argv):
    code, out, err = run(capsys, *argv)
    obj = json.loads(out)
    jsonschema.validate(obj, fixtures.schema(schema))
    return code, obj, err


def test_dimer_poly(capsys):
    code, obj, err = run_json(capsys, "dimer-poly", "dimer-poly", "big_ex")
    assert code == 0
    assert obj["matchings"] == 12 and obj["g"] == [0, 0, -1, 0, 0]
    assert "12 matchings" in err
    code, out, _ = run(capsys, "dimer-poly", "bigon", "--format", "text")
    assert out == "1 + y1\n"
    code, out, _ = run(capsys, "dimer-poly", "cycle4", "--format", "dot")
    assert out.startswith("digraph")


def test_dimer_poly_from_file(capsys, tmp_path):
    path = tmp_path / "g.json"
    path.write_text(fixtures.load_fixture_graph("cycle4").dumps())
    code, out, _ = run(capsys, "dimer-poly", str(path), "--format", "text")
    assert (code, out) == (0, "1 + y1\n")


def test_mutate_matches_dimer_poly(capsys):
    _, obj, _ = run_json(capsys, "mutate", "mutate", "big_ex", "3,2,4,5,1")
    _, dp, _ = run_json(capsys, "dimer-poly", "dimer-poly", "big_ex")
    assert obj["last"]["F"] == next(e for e in obj["seed"] if e["vertex"] == 1)["F"] == dp["D"]
    _, obj, _ = run_json(capsys, "mutate", "mutate", "rank1", "1")
    assert obj["seed"] == [{"vertex": 1, "F": "1 + y1", "g": [-1]}]
    _, obj, _ = run_json(capsys, "mutate", "mutate", "rank1")
    assert obj["seed"] == [{"vertex": 1, "F": "1", "g": [1]}]


def test_mutate_rejects_unknown_vertex(capsys):
    code, out, _ = run(capsys, "mutate", "rank1", "2")
    assert code == InputError.exit_code
    jsonschema.validate(json.loads(out), fixtures.schema("error"))


def test_alexander(capsys):
    code, obj, err = run_json(capsys, "alexander", "alexander", "trefoil", "--method", "both")
    assert code == 0 and obj["equalUpToUnit"]
    assert obj["unit"] == {"sign": -1, "power": 0}
    gold = fixtures.golden("whitehead_i7")
    _, obj, _ = run_json(capsys, "alexander", "alexander", "whitehead", "--segment", "7")
    assert obj["stateSum"] == gold["stateSum"]
    assert obj["specialized"] == gold["specialized"]
    assert obj["states"] == gold["states"]
    _, obj, _ = run_json(capsys, "alexander", "alexander", fixtures.link_pd("hopf"), "--method", "dimer")
    assert obj["link"] == "inline" and "stateSum" not in obj


def test_malformed_pd(capsys):
    code, out, err = run(capsys, "alexander", "X[1,2,3")
    assert code == MalformedPD.exit_code == 50
    assert "MalformedPD" in err
    assert json.loads(out)["exitCode"] == 50


def test_plabic_twist(capsys):
    code, obj, err = run_json(capsys, "plabic-twist", "plabic-twist", "gr24", "1,3")
    assert obj["twist"] == "x1^-1*x2*x3^-1*x4*x5^-1 + x1^-1"
    assert "x3^-1*x5^-1" in err
    code, obj, err = run_json(capsys, "plabic-twist", "plabic-twist", "gr24_loop", "1,4")
    assert obj["twist"] == "0" and "vanishes" in err


def test_plabic_needs_reduced_assertion(capsys, tmp_path):
    G = fixtures.load_fixture_plabic("gr24")
    obj = G.to_json()
    obj["reducedAsserted"] = False
    path = tmp_path / "p.json"
    path.write_text(json.dumps(obj))
    code, _, _ = run(capsys, "plabic-twist", str(path), "1,3")
    assert code == NotReducedAsserted.exit_code
    code, _, _ = run(capsys, "plabic-twist", str(path), "1,3", "--assert-reduced")
    assert code == 0


def test_two_bridge(capsys):
    code, obj, _ = run_json(capsys, "two-bridge", "two-bridge", "2,1,3")
    assert code == 0 and obj["report"]["ok"]
    assert obj["report"]["details"]["type_A"]
    code, _, _ = run(capsys, "two-bridge", "0")
    assert code == 54


def test_verify_is_deterministic(capsys):
    args = ("verify", "--suite", "main-theorem", "--graphs", "8", "--max-faces", "6")
    _, first, _ = run_json(capsys, "verify", *args)
    _, second, _ = run_json(capsys, "verify", *args)
    assert first["ok"] and first["hash"] == second["hash"]
    _, other, _ = run_json(capsys, "verify", *args, "--seed", "3")
    assert other["hash"] != first["hash"]


def test_verify_polytope_six_faces(capsys):
    code, obj, _ = run_json(capsys, "verify", "verify", "--suite", "polytope", "--max-faces", "6",
                            "--graphs", "10")
    assert code == 0 and obj["ok"]


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "dimerpoly.cli", "dimer-poly", "bigon", "--format",
                           "text"], capture_output=True, text=True, check=True)
    assert proc.stdout == "1 + y1\n"


def test_unknown_suite_is_an_argument_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--suite", "nonsense"])
    assert exc.value.code == 2
