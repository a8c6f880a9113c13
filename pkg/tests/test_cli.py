"""
The drinfeld-lab command line, end to end.
"""

import json

import pytest

from drinfeld_lab.core.cache import get_cache
from drinfeld_lab.main import build_parser, main

pytestmark = pytest.mark.integration

RESTRICT_TOML = """
kind = "restrict-check"
q = 2
seed = 1

[module]
base = "finite"
phi_t = [1, 1]

[parameters]
b = [0, 0, 1]
w = [0, 1]
"""

NON_ETALE_TOML = """
kind = "image"
q = 2
seed = 1

[module]
phi_t = [1, 1]

[parameters]
level = [1, 1]
place_bound = 4
"""


@pytest.fixture
def write_config(tmp_path):
    def write(text, name="config.toml"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write


def test_parser_lists_every_subcommand():
    parser = build_parser()
    help_text = parser.format_help()
    for command in ("torsion", "frobenius", "image", "kummer-density", "division-hull", "endring",
                    "index-bound", "isogeny-check", "restrict-check", "cache"):
        assert command in help_text


def test_config_is_required():
    with pytest.raises(SystemExit):
        main(["torsion"])


def test_restrict_check_writes_report(write_config, tmp_path, capsys):
    out = tmp_path / "out" / "report.json"
    status = main(["restrict-check", "--config", write_config(RESTRICT_TOML), "--out", str(out)])
    assert status == 0
    assert "verdicts=holds" in capsys.readouterr().out
    report = json.loads(out.read_text())
    assert report["exit_status"] == 0
    assert report["payload"]["expected"] == 4


def test_seed_override_changes_config_hash(write_config, tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    path = write_config(RESTRICT_TOML)
    assert main(["restrict-check", "--config", path, "--out", str(first)]) == 0
    assert main(["restrict-check", "--config", path, "--out", str(second), "--seed", "9"]) == 0
    a, b = json.loads(first.read_text()), json.loads(second.read_text())
    assert a["config_hash"] != b["config_hash"]
    assert a["payload"] == b["payload"]


def test_non_etale_level_exits_3(write_config):
    assert main(["image", "--config", write_config(NON_ETALE_TOML)]) == 3


def test_kind_mismatch_exits_3(write_config, capsys):
    assert main(["torsion", "--config", write_config(RESTRICT_TOML)]) == 3
    assert "restrict-check" in capsys.readouterr().err


def test_invalid_config_lists_errors(write_config, capsys):
    assert main(["restrict-check", "--config", write_config("colour = 1\n" + RESTRICT_TOML)]) == 3
    err = capsys.readouterr().err
    assert "colour" in err


def test_missing_config_exits_3(tmp_path):
    assert main(["restrict-check", "--config", str(tmp_path / "missing.toml")]) == 3


def test_cache_inspect_and_clear(capsys):
    cache = get_cache()
    cache.put("moduli", {"q": 2, "degree": 3}, [1, 1, 0, 1])

    assert main(["cache", "inspect"]) == 0
    listing = json.loads(capsys.readouterr().out)
    assert listing["moduli"] == [{"degree": 3, "q": 2}]
    assert listing["subgroups"] == []

    assert main(["cache", "clear"]) == 0
    assert "removed 1 cache entries" in capsys.readouterr().out
    assert get_cache().inspect()["moduli"] == []


def test_internal_error_exits_4(write_config, mocker, capsys):
    mocker.patch(
        "drinfeld_lab.experiments.base.execution_engine.ExperimentEngine._execute",
        side_effect=RuntimeError("boom"),
    )
    assert main(["restrict-check", "--config", write_config(RESTRICT_TOML)]) == 4
    assert "RuntimeError: boom" in capsys.readouterr().out
