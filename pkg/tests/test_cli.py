import io
import json

import pytest
from pydantic import ValidationError
from rich.console import Console

from src.cli import list_scenarios, main
from src.config import DEFAULT_CONFIG, RunConfig, load_config
from src.model.aut import aut_read
from src.protocol.catalog import load_catalog

SMALL = ["--scenario", "scen1_ok_2_1", "--no-faults"]


@pytest.fixture(autouse=True)
def clean_env(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    for key in ("FIREWIRE_CONFIG", "FIREWIRE_MAX_STATES", "FIREWIRE_MAX_TRANSITIONS", "FIREWIRE_WORKERS",
                "FIREWIRE_LOG_LEVEL"):
        monkeypatch.delenv(key, raising=False)


def run(*args):
    out = io.StringIO()
    code = main(list(map(str, args)), console=Console(file=out, width=200))
    return code, out.getvalue()


def test_list():
    table = list_scenarios()
    assert table.row_count == 22
    code, out = run("--list")
    assert code == 0 and "scen3_ko_2_2" in out


def test_every_catalog_row_is_a_valid_run_config():
    for row in load_catalog():
        assert RunConfig(scenario=row.name).scenario_config() == row


def test_usage_errors():
    assert run("--scenario", "nope")[0] == 2
    assert run()[0] == 2
    assert run(*SMALL, "--check", "missing.txt")[0] == 2
    assert run(*SMALL, "--max-states", 0)[0] == 2


def test_deadlock_free_run_writes_outputs(tmp_path):
    code, out = run(*SMALL, "--report", tmp_path / "r.txt", "--aut", tmp_path / "a.aut")
    assert code == 0
    assert "deadlock_free: holds" in out
    report = (tmp_path / "r.txt").read_text().splitlines()
    assert report[:2] == ["scenario: scen1_ok_2_1", "variant: ok"]
    assert "deadlocks: 0" in report and "truncated: no" in report
    with open(tmp_path / "a.aut", "rb") as f:
        lts = aut_read(f)
    assert f"states: {lts.num_states}" in report


def test_outputs_are_deterministic(tmp_path):
    run(*SMALL, "--aut", tmp_path / "one.aut", "--workers", 1)
    run(*SMALL, "--aut", tmp_path / "two.aut", "--workers", 3)
    assert (tmp_path / "one.aut").read_bytes() == (tmp_path / "two.aut").read_bytes()


def test_cap_exceeded():
    code, out = run(*SMALL, "--max-states", 10)
    assert code == 3 and "cap" in out


def test_formula_files(tmp_path):
    good = tmp_path / "good.txt"
    good.write_text('P1: deadlock_free\nreach: (EF (dia "TERMINATED" true))\n')
    assert run(*SMALL, "--formulas", good)[0] == 0
    bad = tmp_path / "bad.txt"
    bad.write_text('never: (AG (not (dia "TDREQ *" true)))\n')
    trace = tmp_path / "t.txt"
    assert run(*SMALL, "--check", bad, "--trace", trace)[0] == 1
    assert trace.exists()
    broken = tmp_path / "broken.txt"
    broken.write_text("(EF\n")
    assert run(*SMALL, "--check", broken)[0] == 2


def test_minimize_and_compare(tmp_path):
    reference = tmp_path / "min.aut"
    assert run(*SMALL, "--minimize", "--aut", reference)[0] == 0
    assert run(*SMALL, "--compare", reference)[0] == 0
    other = tmp_path / "other.aut"
    other.write_text('des (0, 1, 1)\n(0, "TERMINATED", 0)\n')
    assert run(*SMALL, "--compare", other)[0] == 1


def test_configuration_precedence(tmp_path, monkeypatch):
    assert load_config() == DEFAULT_CONFIG
    (tmp_path / "firewire_config.json").write_text(json.dumps({"max_states": 10}))
    assert load_config()["max_states"] == 10
    assert run(*SMALL)[0] == 3
    assert run(*SMALL, "--max-states", 1_000_000)[0] == 0
    monkeypatch.setenv("FIREWIRE_MAX_STATES", "2000000")
    assert run(*SMALL)[0] == 0
    monkeypatch.setenv("FIREWIRE_MAX_STATES", "lots")
    assert run(*SMALL)[0] == 2


def test_run_config_validation():
    with pytest.raises(ValidationError):
        RunConfig(scenario="scen4_ok_2_1")
    config = RunConfig(scenario="scen3_ko_2_2", variant="ok", no_faults=True)
    scenario = config.scenario_config()
    assert str(scenario.variant) == "ok" and scenario.faults == ()
