import json

from aupoly import cli


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write_instance(tmp_path, gram6, nums, den, label=None, name="inst.json"):
    doc = {"gram": list(gram6),
           "shift": {"numerators": list(nums), "denominator": den}}
    if label:
        doc["label"] = label
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_analyze_2a(tmp_path, capsys):
    path = write_instance(tmp_path, (49, 0, 0, 7, 0, 14), (1, 0, 0), 7)
    code, out, _ = run_cli(capsys, "analyze", path, "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["decision"] == "AlmostUniversal"
    assert doc["branch"] == "2a"
    assert doc["p"] == 7 and doc["alpha"] == 1 and doc["epsilon"] == 1


def test_analyze_negative_with_exceptions(tmp_path, capsys):
    path = write_instance(tmp_path, (2450, 0, 0, 791, 0, 49), (1, 0, 0), 7)
    code, out, _ = run_cli(capsys, "analyze", path, "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["branch"] == "2d-fails"
    assert doc["exceptions"]["t"] == 226
    assert doc["exceptions"]["rho"] == 2
    assert doc["exceptions"]["primes"][0] == 23
    assert doc["exceptions"]["values"][0] == 119554


def test_analyze_rejected_service_mode(tmp_path, capsys):
    path = write_instance(tmp_path, (25, 0, 0, 1, 0, 1), (1, 0, 0), 5)
    code, out, _ = run_cli(capsys, "analyze", path, "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["decision"] == "HypothesisRejected"
    assert doc["service"]["almost_universal"] is False
    assert any(entry["q"] == 2 and not entry["universal"]
               for entry in doc["locals"])


def test_json_round_trip(tmp_path, capsys):
    path = write_instance(tmp_path, (2450, 0, 0, 791, 0, 49), (1, 0, 0), 7,
                          label="rt")
    code, out, _ = run_cli(capsys, "analyze", path, "--json")
    doc = json.loads(out)
    embedded = tmp_path / "embedded.json"
    embedded.write_text(json.dumps(doc["instance"]))
    code, out2, _ = run_cli(capsys, "analyze", str(embedded), "--json")
    assert code == 0
    assert json.loads(out2) == doc


def test_malformed_input_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"gram": [1, 2, 3], "shift": {}}')
    code, _, err = run_cli(capsys, "analyze", str(bad))
    assert code == 2
    assert "gram" in err

    bad.write_text("not json")
    code, _, err = run_cli(capsys, "analyze", str(bad))
    assert code == 2


def test_big_integers_as_strings(tmp_path, capsys):
    big = 10**17  # beyond 2^53
    doc = {"gram": [str(25 * big), "0", "0", str(big), "0", str(big)],
           "shift": {"numerators": ["1", "0", "0"], "denominator": "5"}}
    path = tmp_path / "big.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run_cli(capsys, "analyze", str(path), "--json")
    assert code == 0
    parsed = json.loads(out)
    assert parsed["dN"] == str(25 * big * big * big)


def test_enumerate_witness_and_gaps(tmp_path, capsys):
    path = write_instance(tmp_path, (98, 0, 0, 77, 0, 539), (1, 0, 0), 7)
    code, out, _ = run_cli(capsys, "enumerate", path, "--bound", "100",
                           "--witness", "2", "--json")
    assert code == 0
    assert json.loads(out)["witness"] == [0, 0, 0]

    code, out, _ = run_cli(capsys, "enumerate", path, "--bound", "10000",
                           "--gaps", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["epsilon"] == 2 and doc["step"] == 7
    assert isinstance(doc["gaps"], list)


def test_enumerate_bound_below_epsilon_warns(tmp_path, capsys):
    path = write_instance(tmp_path, (2450, 0, 0, 791, 0, 49), (1, 0, 0), 7)
    code, out, _ = run_cli(capsys, "enumerate", path, "--bound", "10",
                           "--gaps", "--json")
    assert code == 0
    doc = json.loads(out)
    assert "warning" in doc and doc["gaps"] == []


def test_exceptions_not_applicable(tmp_path, capsys):
    path = write_instance(tmp_path, (49, 0, 0, 7, 0, 14), (1, 0, 0), 7)
    code, out, _ = run_cli(capsys, "exceptions", path, "--json")
    assert code == 0
    assert json.loads(out)["applicable"] is False


def batch_file(tmp_path, rows, name="batch.csv"):
    path = tmp_path / name
    lines = ["g11,g12,g13,g22,g23,g33,n1,n2,n3,den,label"]
    lines += [",".join(map(str, row)) for row in rows]
    path.write_text("\n".join(lines) + "\n")
    return str(path)


def test_batch_consistent(tmp_path, capsys):
    path = batch_file(tmp_path, [
        (9, 0, 0, 3, 0, 3, 1, 0, 0, 3, "branch1"),
        (49, 0, 0, 7, 0, 14, 1, 0, 0, 7, "branch2a"),
        (98, 0, 0, 7, 0, 49, 1, 0, 0, 7, "branch2dh"),
        (2450, 0, 0, 791, 0, 49, 1, 0, 0, 7, "branch2df"),
        (25, 0, 0, 1, 0, 1, 1, 0, 0, 5, "intro"),
    ])
    code, out, _ = run_cli(capsys, "batch", path, "--bound", "100000")
    lines = [l for l in out.strip().splitlines() if l]
    assert code == 0, out
    rows = {l.split(",")[0]: l.split(",") for l in lines[1:]}
    assert rows["branch1"][8] == "consistent"
    assert rows["branch2a"][8] == "consistent"
    assert rows["branch2dh"][8] == "consistent"
    assert rows["branch2df"][8] == "consistent"
    assert rows["intro"][8] in ("consistent", "skipped")


def test_batch_row_errors_continue(tmp_path, capsys):
    path = batch_file(tmp_path, [
        (1, 2, 0, 1, 0, 1, 0, 0, 0, 1, "notposdef"),
        (49, 0, 0, 7, 0, 14, 1, 0, 0, 7, "good"),
    ])
    code, out, _ = run_cli(capsys, "batch", path, "--bound", "20000")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 3
    assert "error" in lines[1]
    assert lines[2].startswith("good,AlmostUniversal")


def test_batch_empty(tmp_path, capsys):
    path = tmp_path / "empty.csv"
    path.write_text("")
    code, out, _ = run_cli(capsys, "batch", str(path))
    assert code == 0
    assert len(out.strip().splitlines()) == 1  # header only


def test_batch_jobs_order(tmp_path, capsys):
    rows = [(49, 0, 0, 7, 0, 14, 1, 0, 0, 7, f"r{i}") for i in range(4)]
    path = batch_file(tmp_path, rows)
    code, out, _ = run_cli(capsys, "batch", path, "--bound", "5000", "--jobs", "2")
    assert code == 0
    labels = [l.split(",")[0] for l in out.strip().splitlines()[1:]]
    assert labels == [f"r{i}" for i in range(4)]
