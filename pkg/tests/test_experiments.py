"""
Config loading, the experiment registry, the execution engine and error
classification.
"""

import json
import logging
import time

import pytest

from drinfeld_lab.core.config import reload_settings
from drinfeld_lab.core.exceptions import (
    AmbientCapError,
    BadReductionError,
    ConfigurationError,
    DomainError,
    EnumerationCapError,
    NonEtaleError,
    UnderSampleError,
)
from drinfeld_lab.experiments.base import (
    BaseKind,
    ExperimentEngine,
    ExperimentKind,
    ExperimentStatus,
    Verdict,
    get_registry,
    load_config,
    parse_config,
)
from drinfeld_lab.experiments.base.experiment import ExperimentTimeoutError
from drinfeld_lab.experiments.base.experiment_registry import ExperimentRegistry
from drinfeld_lab.experiments.utils import handle_experiment_error
from drinfeld_lab.experiments.utils.error_handler import ErrorCategory

RESTRICT = {
    "kind": "restrict-check",
    "q": 2,
    "seed": 1,
    "module": {"base": "finite", "phi_t": [1, 1]},
    "parameters": {"b": [0, 0, 1], "w": [0, 1]},
}

TORSION_F4 = {
    "kind": "torsion",
    "q": 4,
    "seed": 1,
    "module": {"base": "finite", "phi_t": [1, 1]},
    "parameters": {"levels": [[0, 1], [0, 0, 1], [1, 1]]},
}

TORSION_BAD_REDUCTION = {
    "kind": "torsion",
    "q": 2,
    "seed": 1,
    "module": {"phi_t": [[0, 1], 1, [0, 1]]},
    "parameters": {"levels": [[0, 1], [1, 1]], "place_bound": 3},
}


def config(raw, **overrides):
    return parse_config(raw, overrides)


def with_parameters(raw, **parameters):
    return {**raw, "parameters": {**raw["parameters"], **parameters}}


@pytest.fixture
def engine():
    return ExperimentEngine()


class TestConfigLoading:
    def test_parse(self):
        cfg = config(RESTRICT)
        assert cfg.kind == ExperimentKind.RESTRICT_CHECK
        assert cfg.module.base == BaseKind.FINITE
        assert cfg.workers == 1

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigurationError) as excinfo:
            config({**RESTRICT, "colour": "blue"})
        assert any("colour" in e for e in excinfo.value.details["errors"])

    def test_seed_required(self):
        raw = {k: v for k, v in RESTRICT.items() if k != "seed"}
        with pytest.raises(ConfigurationError) as excinfo:
            config(raw)
        assert any(e.startswith("seed") for e in excinfo.value.details["errors"])

    def test_q_must_be_a_prime_power(self):
        with pytest.raises(ConfigurationError):
            config({**RESTRICT, "q": 6})

    def test_modulus_needs_a_finite_base(self):
        with pytest.raises(ConfigurationError):
            config({**RESTRICT, "module": {"base": "rational", "base_modulus": [1, 1, 1], "phi_t": [1, 1]}})

    def test_kind_mismatch(self):
        with pytest.raises(ConfigurationError):
            config(RESTRICT, kind="torsion")

    def test_overrides(self):
        cfg = config(RESTRICT, kind="restrict-check", seed=5, workers=3, output=None)
        assert cfg.seed == 5
        assert cfg.workers == 3
        assert cfg.output is None

    def test_default_workers_from_settings(self, monkeypatch):
        monkeypatch.setenv("DRINFELD_LAB_DEFAULT_WORKERS", "3")
        reload_settings()
        assert config(RESTRICT).workers == 3
        assert config({**RESTRICT, "workers": 2}).workers == 2

    def test_hash_ignores_workers_and_output(self):
        base = config(RESTRICT)
        assert config(RESTRICT, workers=4, output="elsewhere.json").config_hash == base.config_hash
        assert config(RESTRICT, seed=2).config_hash != base.config_hash

    def test_load_from_file(self, tmp_path):
        path = tmp_path / "restrict.toml"
        path.write_text(
            'kind = "restrict-check"\nq = 2\nseed = 1\n\n'
            '[module]\nbase = "finite"\nphi_t = [1, 1]\n\n'
            "[parameters]\nb = [0, 0, 1]\nw = [0, 1]\n"
        )
        assert load_config(path) == config(RESTRICT)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError):
            load_config(tmp_path / "missing.toml")

    def test_invalid_toml(self, tmp_path):
        path = tmp_path / "broken.toml"
        path.write_text("kind = \n")
        with pytest.raises(ConfigurationError):
            load_config(path)


class TestRegistry:
    def test_all_kinds_registered(self):
        registry = get_registry()
        registry.discover_experiments()
        assert registry.list_experiments() == list(ExperimentKind)
        for kind in ExperimentKind:
            assert registry.validate_experiment(kind).is_valid

    def test_finite_only_experiments(self):
        registry = get_registry()
        registry.discover_experiments()
        for kind in (ExperimentKind.INDEX_BOUND, ExperimentKind.ISOGENY_CHECK, ExperimentKind.RESTRICT_CHECK):
            assert registry.get_experiment_info(kind).bases == [BaseKind.FINITE]

    def test_parameters_schema(self):
        registry = get_registry()
        registry.discover_experiments()
        schema = registry.get_experiment_info(ExperimentKind.TORSION).parameters_schema
        assert "levels" in schema["properties"]

    def test_unregister_and_reregister(self):
        registry = ExperimentRegistry()
        registry.discover_experiments()
        experiment_class = registry.get_experiment_class(ExperimentKind.TORSION)
        assert registry.unregister_experiment(ExperimentKind.TORSION)
        assert ExperimentKind.TORSION not in registry.list_experiments()
        assert not registry.unregister_experiment(ExperimentKind.TORSION)
        assert registry.register_experiment(experiment_class, ExperimentKind.TORSION)
        assert registry.get_registry_stats()["total_experiments"] == len(ExperimentKind)


class TestParameterValidation:
    def test_wrong_base(self, engine):
        raw = {**RESTRICT, "module": {"phi_t": [[0, 1], 1]}}
        with pytest.raises(ConfigurationError):
            engine.prepare(config(raw))

    def test_unknown_parameter(self, engine):
        with pytest.raises(ConfigurationError):
            engine.prepare(config(with_parameters(RESTRICT, extra=[1])))

    def test_place_bound_required_over_rational_base(self, engine):
        raw = {**TORSION_BAD_REDUCTION, "parameters": {"levels": [[0, 1]]}}
        with pytest.raises(ConfigurationError):
            engine.prepare(config(raw))

    def test_place_bound_rejected_over_finite_base(self, engine):
        with pytest.raises(ConfigurationError):
            engine.prepare(config(with_parameters(TORSION_F4, place_bound=2)))

    def test_constant_level_rejected(self, engine):
        experiment, context = engine.prepare(config(with_parameters(RESTRICT, w=[1])))
        with pytest.raises(DomainError):
            experiment.execute(context)


class TestExecutionEngine:
    @pytest.mark.asyncio
    async def test_restrict_check_holds(self, engine, tmp_path):
        out = tmp_path / "reports" / "restrict.json"
        report = await engine.run(config(RESTRICT, output=str(out)))
        assert report.status == ExperimentStatus.COMPLETED
        assert report.verdicts == [Verdict.HOLDS]
        assert report.exit_status == 0
        assert report.payload["expected"] == 4
        assert report.payload["unique_prime"]

        written = json.loads(out.read_text())
        assert written["payload"] == report.payload
        assert written["config_hash"] == report.config_hash
        assert written["verdicts"] == ["holds"]

    @pytest.mark.asyncio
    async def test_finite_torsion(self, engine):
        report = await engine.run(config(TORSION_F4))
        assert report.verdicts == [Verdict.HOLDS]
        etale = [entry["etale"] for entry in report.payload["counts"]]
        assert etale == [True, True, False]

    @pytest.mark.asyncio
    async def test_bad_reduction_is_skipped(self, engine):
        report = await engine.run(config(TORSION_BAD_REDUCTION))
        assert report.verdicts == [Verdict.HOLDS]
        assert [skip.place for skip in report.skips] == [[0, 1]]
        assert report.skips[0].reason.startswith("bad reduction")

    @pytest.mark.asyncio
    async def test_non_etale_level_exits_3(self, engine):
        raw = {
            "kind": "image",
            "q": 2,
            "seed": 1,
            "module": {"phi_t": [1, 1]},
            "parameters": {"level": [1, 1], "place_bound": 4},
        }
        report = await engine.run(config(raw))
        assert report.status == ExperimentStatus.FAILED
        assert report.exit_status == 3
        assert report.error_category == "configuration"
        assert "NonEtaleError" in report.error_message

    @pytest.mark.asyncio
    async def test_under_sample_exits_2(self, engine):
        raw = {
            "kind": "kummer-density",
            "q": 2,
            "seed": 1,
            "module": {"phi_t": [[0, 1], 1]},
            "parameters": {"m": [0, 1], "level": [0, 1], "place_bound": 3, "image_bound": 3},
        }
        report = await engine.run(config(raw))
        assert report.exit_status == 2
        assert report.verdicts == [Verdict.UNDER_SAMPLE]

    @pytest.mark.asyncio
    async def test_endring(self, engine):
        raw = {
            "kind": "endring",
            "q": 2,
            "seed": 1,
            "module": {"phi_t": [[0, 1], 1]},
            "parameters": {"max_tau_degree": 1, "max_theta_degree": 1},
        }
        report = await engine.run(config(raw))
        assert report.exit_status == 0
        assert report.verdicts == []
        assert report.payload["dimension"] == 2
        assert report.payload["scalar_dimension"] == 2
        assert report.payload["isotrivial"] == "no"

    @pytest.mark.asyncio
    async def test_isogeny_check(self, engine):
        raw = {
            "kind": "isogeny-check",
            "q": 2,
            "seed": 1,
            "module": {"base": "finite", "base_modulus": [1, 1, 1], "phi_t": [1, [0, 1]]},
            "parameters": {"target": [1, [1, 1]], "f": [0, 1], "levels": [[0, 1], [1, 1, 1]]},
        }
        report = await engine.run(config(raw))
        assert report.verdicts == [Verdict.HOLDS]

    @pytest.mark.asyncio
    async def test_index_bound(self, engine):
        raw = {
            "kind": "index-bound",
            "q": 2,
            "seed": 1,
            "module": {"base": "finite", "base_modulus": [1, 1, 1], "phi_t": [1, 0, 1]},
            "parameters": {"generators": [1], "level": [0, 1]},
        }
        report = await engine.run(config(raw))
        assert report.verdicts == [Verdict.HOLDS]
        assert report.payload["certificate"]["hom_size"] == 2

    @pytest.mark.asyncio
    async def test_payload_is_deterministic(self, engine):
        first = await engine.run(config(TORSION_F4))
        second = await engine.run(config(TORSION_F4))
        assert first.payload_json() == second.payload_json()

    @pytest.mark.asyncio
    async def test_payload_does_not_depend_on_seed(self, engine):
        first = await engine.run(config({**TORSION_BAD_REDUCTION, "seed": 1}))
        second = await engine.run(config({**TORSION_BAD_REDUCTION, "seed": 2}))
        assert first.config_hash != second.config_hash
        assert first.payload_json() == second.payload_json()
        assert [s.place for s in first.skips] == [s.place for s in second.skips]

    @pytest.mark.asyncio
    async def test_timeout_leaves_worker_detached(self, engine, monkeypatch, mocker, caplog):
        monkeypatch.setenv("DRINFELD_LAB_EXPERIMENT_TIMEOUT_SECONDS", "1")
        reload_settings()
        mocker.patch.object(ExperimentEngine, "_execute", side_effect=lambda *args: time.sleep(1.5))
        with caplog.at_level(logging.WARNING, logger="drinfeld_lab.experiments.base.execution_engine"):
            report = await engine.run(config(RESTRICT))
        assert report.status == ExperimentStatus.FAILED
        assert report.error_category == "timeout"
        assert report.exit_status == 2
        assert report.verdicts == [Verdict.INCONCLUSIVE]
        assert any("keeps running detached" in r.getMessage() for r in caplog.records)

    @pytest.mark.slow
    @pytest.mark.asyncio
    async def test_payload_independent_of_workers(self, engine):
        raw = {
            "kind": "torsion",
            "q": 2,
            "seed": 1,
            "module": {"phi_t": [[0, 1], 1, 1]},
            "parameters": {"levels": [[0, 1], [1, 1]], "place_bound": 4},
        }
        serial = await engine.run(config(raw, workers=1))
        parallel = await engine.run(config(raw, workers=2))
        assert serial.payload_json() == parallel.payload_json()
        assert serial.config_hash == parallel.config_hash

    def test_engine_stats(self, engine):
        stats = engine.get_engine_stats()
        assert stats["runs"] == 0
        assert stats["failures"] == 0
        assert stats["registry"]["total_experiments"] == len(ExperimentKind)
        assert "errors_by_category" in stats["errors"]


class TestErrorClassification:
    @pytest.mark.parametrize(
        "error,category,exit_status,verdict",
        [
            (ConfigurationError("bad"), ErrorCategory.CONFIGURATION, 3, None),
            (NonEtaleError("meets"), ErrorCategory.CONFIGURATION, 3, None),
            (DomainError("outside"), ErrorCategory.DOMAIN, 3, None),
            (BadReductionError("pole", place=[0, 1]), ErrorCategory.DOMAIN, 3, None),
            (UnderSampleError("few", usable=3, required=30), ErrorCategory.SAMPLING, 2, Verdict.UNDER_SAMPLE),
            (EnumerationCapError("big", cap=10), ErrorCategory.ENUMERATION, 2, Verdict.INCONCLUSIVE),
            (AmbientCapError("big", cap=10), ErrorCategory.ENUMERATION, 2, Verdict.INCONCLUSIVE),
            (ExperimentTimeoutError("slow", "image"), ErrorCategory.TIMEOUT, 2, Verdict.INCONCLUSIVE),
            (RuntimeError("boom"), ErrorCategory.INTERNAL, 4, None),
        ],
    )
    def test_mapping(self, error, category, exit_status, verdict):
        info = handle_experiment_error(error, "test")
        assert info.category == category
        assert info.exit_status == exit_status
        assert info.verdict == verdict
        assert info.suggested_actions

    def test_details_are_kept(self):
        info = handle_experiment_error(UnderSampleError("few", usable=3, required=30), "kummer-density")
        assert info.details["usable"] == 3
        assert "UnderSampleError" in info.technical_message
