import json
import subprocess
import sys

import pytest

from mdcs import cli
from mdcs.model import from_text

TWO_SOURCE = "2 3 | 1 ; 3 5 6"


def run(args, capsys):
    code = cli.main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_enumerate(capsys):
    code, out, _ = run(["enumerate", "2", "3"], capsys)
    assert code == 0
    assert out.strip().endswith("# non-isomorphic 23, isomorphic 81")
    code, out, _ = run(["enumerate", "1", "3", "--json"], capsys)
    assert json.loads(out)["nonisomorphic"] == 3


def test_region(capsys):
    code, out, _ = run(["region", TWO_SOURCE], capsys)
    assert code == 0
    assert out.splitlines()[-1] == "R_2+R_3 ≥ H(X)+H(Y)"
    assert len(out.splitlines()) == 4
    code, out, _ = run(["region", TWO_SOURCE, "--kind", "scalar:2", "--cone"], capsys)
    assert out.startswith("dim 5 |")


def test_suffice(capsys):
    code, out, _ = run(["suffice", TWO_SOURCE, "--kinds", "scalar:2,superposition"], capsys)
    assert out.splitlines() == ["scalar:2: insufficient  witness [0 2 1 1 1]",
                                "superposition: insufficient  witness [1 1 1 1 1]"]


def test_codes_and_verify(capsys, tmp_path):
    path = tmp_path / "code.txt"
    code, out, _ = run(["codes", TWO_SOURCE, "--target", "1,2,3/2,3/2,3/2",
                        "--kind", "vector:2:6", "-o", str(path)], capsys)
    assert code == 0 and "L=2" in out
    code, out, _ = run(["verify", TWO_SOURCE, str(path), "--brute-force"], capsys)
    assert code == 0
    assert "rates 3/2 3/2 3/2" in out and "agrees" in out
    # a code that drops U_3 fails
    lines = path.read_text().splitlines()
    lines[5] = "encoder 3:"
    path.write_text("\n".join(lines) + "\n")
    code, out, _ = run(["verify", TWO_SOURCE, str(path)], capsys)
    assert code == cli.EXIT_INVARIANT and "FAIL" in out


def test_codes_outside_region(capsys):
    code, _, err = run(["codes", TWO_SOURCE, "--target", "0,2,1,1,1"], capsys)
    assert code == cli.EXIT_USAGE


def test_minors(capsys):
    code, out, _ = run(["minors", TWO_SOURCE, "--mode", "scalar"], capsys)
    assert "1 3 | 3 5 6" in out.splitlines()
    code, out, _ = run(["minors", "--forbidden", "2", "3", "--mode", "scalar"], capsys)
    assert out.strip() == "1 3 | 3 5 6"


def test_prove(capsys):
    code, out, _ = run(["prove", "3 2 | 1 ; 2 ; 3", "--inequality",
                        "R_1+R_2 >= 2H(X)+H(Y)+H(Z)"], capsys)
    assert code == 0 and out.startswith("Target:")
    code, out, _ = run(["prove", TWO_SOURCE, "--all-facets", "--json"], capsys)
    recs = json.loads(out)
    assert len(recs) == 4 and all("steps" in r for r in recs)


def test_usage_errors(capsys):
    assert run(["region", "nonsense"], capsys)[0] == cli.EXIT_USAGE
    assert run(["region", "2 3 | 1 ; 1"], capsys)[0] == cli.EXIT_USAGE
    assert run(["frobnicate"], capsys)[0] == cli.EXIT_USAGE
    assert run(["prove", TWO_SOURCE], capsys)[0] == cli.EXIT_USAGE


def test_resource_limit(capsys):
    assert run(["enumerate", "2", "4"], capsys)[0] == cli.EXIT_RESOURCE
    assert run(["region", "2 4 | 1 2 ; 12 5", "--kind", "scalar:2"], capsys)[0] \
        == cli.EXIT_RESOURCE


def test_global_flags_anywhere(capsys, tmp_path):
    a = run(["--workers", "1", "enumerate", "1", "2"], capsys)
    b = run(["enumerate", "1", "2", "--workers", "1"], capsys)
    assert a == b and a[0] == 0
    run(["--cache-dir", str(tmp_path), "enumerate", "1", "2"], capsys)


def test_pipeline_store_and_report(capsys, tmp_path):
    store = str(tmp_path / "store")
    args = ["pipeline", "2", "2", "--store", store]
    code, first, _ = run(args, capsys)
    assert code == 0
    assert first.splitlines()[0] == \
        "(2,2) total=3 scalar:2=3 scalar:3=3 vector:2:N+1=3 superposition=3"
    code, again, _ = run(args, capsys)
    assert again == first
    code, rep, _ = run(["report", "--store", store], capsys)
    code, rep2, _ = run(["report", "--store", store], capsys)
    assert rep == rep2 and rep.count("outer:") == 3
    code, js, _ = run(["report", "--store", store, "--json"], capsys)
    assert len(json.loads(js)) == 3


def test_empty_report(capsys, tmp_path):
    code, out, _ = run(["report", "--store", str(tmp_path / "none")], capsys)
    assert code == 0 and out == ""


def test_store_round_trip(tmp_path):
    store = cli.ResultStore(str(tmp_path))
    inst = from_text(TWO_SOURCE)
    rec = {"cone": "dim 1 | ineq 0 | eq 0 | rays 0\n", "display": ["x"], "n": [1, 2]}
    store.put(inst, "outer", rec)
    assert store.get(inst, "outer") == rec
    assert store.get(inst, "scalar:2") is None
    assert store.instances() == [inst]
    # records written under another cache version are ignored
    old = cli.GENERATOR_CACHE_VERSION
    try:
        cli.GENERATOR_CACHE_VERSION = old + 1
        assert store.get(inst, "outer") is None
    finally:
        cli.GENERATOR_CACHE_VERSION = old


def test_inner_only_flag(tmp_path):
    store = cli.ResultStore(str(tmp_path))
    cli.run_pipeline(2, 3, ("scalar:2",), store)
    text = cli.report(store)
    block = text.split("k2e3_1-3.5.6")[1].split("\n\n")[0]
    assert "R_1+R_2+R_3 ≥ H(X)+2H(Y)   (inner-only)" in block


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "mdcs", "enumerate", "1", "2"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "isomorphic 1" in out.stdout
