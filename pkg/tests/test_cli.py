import json
import os
import subprocess
import sys

import pytest

from gqg.cli import Cache, JobSpec, ValidationError, load_job_text, main, parse_job, run
from gqg.scalars import ParseError


def run_cli(tmp_path, job, *args, name="job.json"):
    path = tmp_path / name
    path.write_text(job if isinstance(job, str) else json.dumps(job))
    out = tmp_path / "report.json"
    code = main(["--job", str(path), "--out", str(out), *args])
    return code, (json.loads(out.read_text()) if out.exists() else None), out


def run_proc(tmp_path, job, *args):
    """A fresh interpreter, so only the on-disk cache carries state between runs."""
    path = tmp_path / "job.json"
    path.write_text(json.dumps(job))
    out = tmp_path / "report.json"
    proc = subprocess.run([sys.executable, "-m", "gqg.cli", "--job", str(path), "--out", str(out), *args],
                          capture_output=True, text=True, env={k: v for k, v in os.environ.items() if k != "GQG_CACHE"})
    return proc.returncode, json.loads(out.read_text()), out


def test_minimal_job_defaults():
    job = parse_job({"command": "roots", "field": {"cyclotomic": 3}, "q": [["z"]]})
    assert isinstance(job, JobSpec)
    assert job.caps == {"roots": 1024, "height": 12}
    assert job.window["box"] == 4
    assert job.field.n == 3


def test_field_is_detected_from_literals():
    job = parse_job({"command": "roots", "q": [["t^2", "t^-1"], ["t^-1", "t^2"]]})
    assert not job.field.is_cyclotomic


@pytest.mark.parametrize("raw,fieldname", [
    ({"command": "roots", "q": [["z", "t"], ["t", "z"]]}, "q"),
    ({"command": "roots", "field": {"cyclotomic": 3}}, "q"),
    ({"command": "nope", "q": [["t"]]}, "command"),
    ({"command": "roots", "q": [["t"]], "cap_roots": 0}, "cap_roots"),
    ({"command": "roots", "q": [["t"]], "eta": ["1", "2"]}, "eta"),
    ({"command": "roots", "field": {"cyclotomic": 3}, "q": [["t"]]}, "q"),
])
def test_validation_errors(raw, fieldname):
    with pytest.raises(ValidationError) as exc:
        parse_job(raw)
    assert exc.value.fieldname == fieldname


def test_parse_error_has_location():
    with pytest.raises(ParseError) as exc:
        load_job_text('{"command": "roots",\n "q": [[}', "bad.json")
    assert "bad.json:2" in str(exc.value)


def test_toml_job(tmp_path):
    code, rep, _ = run_cli(tmp_path, 'command = "roots"\npreset = "B2-preset"\n', name="job.toml")
    assert code == 0
    assert rep["results"]["theta"] == 4


def test_roots_a2_generic(tmp_path):
    code, rep, _ = run_cli(tmp_path, {"command": "roots", "preset": "A2-generic"})
    assert code == 0
    assert sorted(rep["results"]["positive_roots"]) == [[0, 1], [1, 0], [1, 1]]
    assert rep["results"]["longest_word"] == [1, 2, 1]
    assert rep["schema"] == "gqg-report/1"


def test_infinite_root_system_exit_1(tmp_path):
    code, rep, _ = run_cli(tmp_path, {"command": "roots", "q": [["t^2", "t^-2"], ["t^-2", "t^2"]]},
                           "--cap-roots", "30")
    assert code == 1
    assert rep["failure"].startswith("CapExceeded")
    assert "diagnosis" in rep


def test_usage_errors_exit_2(tmp_path, capsys):
    assert main(["--job", str(tmp_path / "missing.json")]) == 2
    assert main(["bogus-command"]) == 2
    code, rep, _ = run_cli(tmp_path, {"command": "roots"})
    assert code == 2 and rep is None


def test_verify_all_a1_generic(tmp_path):
    code, rep, _ = run_cli(tmp_path, {"command": "verify-all", "preset": "A1-generic"})
    assert code == 0
    assert rep["results"]["all_pass"]
    assert all(c["pass"] for c in rep["results"]["checks"])


def test_reports_are_byte_identical(tmp_path):
    job = {"command": "pbw-dims", "preset": "A2-zeta3", "max_height": 3}
    _, _, out = run_proc(tmp_path, job, "--cache", str(tmp_path / "c"))
    first = out.read_bytes()
    _, _, out = run_proc(tmp_path, job, "--cache", str(tmp_path / "c"))
    assert out.read_bytes() == first


def test_cache_hits_on_second_run(tmp_path):
    job = {"command": "pbw-dims", "preset": "A2-generic", "max_height": 3}
    _, rep1, _ = run_proc(tmp_path, job, "--cache", str(tmp_path / "c"), "--stats")
    _, rep2, _ = run_proc(tmp_path, job, "--cache", str(tmp_path / "c"), "--stats")
    assert rep1["stats"]["cache_hits"] == 0
    assert rep2["stats"]["cache_hits"] > 0
    assert rep1["results"] == rep2["results"]


def test_env_overrides_cache_flag(tmp_path, monkeypatch):
    monkeypatch.setenv("GQG_CACHE", str(tmp_path / "env"))
    run_cli(tmp_path, {"command": "pbw-dims", "preset": "A1-zeta3", "max_height": 2}, "--cache", str(tmp_path / "flag"))
    assert (tmp_path / "env").exists()
    assert not (tmp_path / "flag").exists()


def test_corrupt_entry_is_recomputed(tmp_path):
    cdir = tmp_path / "c"
    job = {"command": "pbw-dims", "preset": "A1-zeta3", "max_height": 2}
    _, good, _ = run_proc(tmp_path, job, "--cache", str(cdir))
    files = [os.path.join(d, f) for d, _, fs in os.walk(cdir) for f in fs]
    assert files
    for f in files:
        with open(f, "w") as fh:
            fh.write('{"key": "garbage"')
    _, rep, _ = run_proc(tmp_path, job, "--cache", str(cdir), "--stats")
    assert rep["stats"]["cache_hits"] == 0
    assert rep["results"] == good["results"]
    # overwritten with valid entries
    for f in files:
        json.loads(open(f).read())


def test_read_only_cache_warns(tmp_path, monkeypatch, capsys):
    import gqg.cli as cli

    def deny(*a, **k):
        raise PermissionError("read-only file system")

    monkeypatch.setattr(cli.os, "replace", deny)
    cache = Cache(str(tmp_path / "ro"))
    # a bicharacter no other test touches, so the basis is not yet in memory
    job = {"command": "pbw-dims", "field": {"cyclotomic": 5}, "q": [["z^2"]], "max_height": 2}
    code, rep = run(parse_job(job), cache)
    assert code == 0
    assert rep["cache_warnings"] and not cache.enabled
    assert "continuing without cache" in capsys.readouterr().err


def test_unwritable_cache_degrades(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    cache = Cache(str(blocker / "sub"))
    assert not cache.enabled
    assert "warning" in capsys.readouterr().err
    code, rep = run(parse_job({"command": "pbw-dims", "preset": "A1-zeta3", "max_height": 2}), cache)
    assert code == 0 and rep["cache_warnings"]


def test_other_commands(tmp_path):
    jobs = [
        {"command": "groupoid", "preset": "B2-preset"},
        {"command": "shapovalov", "preset": "A1-zeta3", "max_height": 2},
        {"command": "singular", "preset": "A2-zeta3", "m": 2, "t": 1},
        {"command": "radical", "preset": "A1-zeta3", "degree": [2], "lambda": {"K": ["z"], "L": ["1"]}},
        {"command": "center-rank1", "preset": "A1-zeta3", "pair": [0, 1], "k": 1, "box": 2},
        {"command": "hc-solve", "preset": "A2-zeta3", "box": 1},
        {"command": "center-lift", "preset": "A1-generic", "P": [[[1], [0], "t"], [[0], [1], "1"]]},
    ]
    for job in jobs:
        code, rep, _ = run_cli(tmp_path, job)
        assert code == 0, (job, rep.get("failure"))
        assert rep["results"]
    _, rep, _ = run_cli(tmp_path, jobs[-1])
    v = rep["results"]["lifts"][0]["V"]
    assert {"F": [1], "K": [0], "L": [0], "E": [1], "c": "-t+1"} in v


def test_singular_hypothesis_failure_exit_1(tmp_path):
    job = {"command": "singular", "preset": "A2-zeta3", "m": 2, "t": 2, "lambda": {"K": ["1", "1"], "L": ["1", "1"]}}
    code, rep, _ = run_cli(tmp_path, job)
    assert code == 1
    assert rep["failure"].startswith("HypothesisViolated")


def test_center_lift_rejects_non_solution(tmp_path):
    code, rep, _ = run_cli(tmp_path, {"command": "center-lift", "preset": "A1-generic", "P": [[[1], [0], "1"]]})
    assert code == 1 and rep["failure"].startswith("NotInB")
