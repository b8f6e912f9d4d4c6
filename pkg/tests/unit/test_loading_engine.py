from pathlib import Path

import pytest

from noisebench.utils.errors import ParameterError
from noisebench.utils.loading_engine import (
    THREADS_ENV_VAR,
    ConfigLoader,
    load_config,
    merge_overrides,
    resolve_thread_count,
    parse_param_overrides,
)


def test_load_config_expands_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("NB_OUT", str(tmp_path / "out"))
    path = tmp_path / "bench.yaml"
    path.write_text(
        "seed: 7\n"
        "clip: false\n"
        "noise:\n"
        "  gaussian: {sigma: 12}\n"
        "outputs:\n"
        "  csv: $NB_OUT/report.csv\n",
        encoding="utf-8",
    )
    config = load_config(path)
    assert config["seed"] == 7
    assert config["clip"] is False
    assert config["noise"] == {"gaussian": {"sigma": 12}}
    assert config["outputs"]["csv"] == f"{tmp_path}/out/report.csv"


def test_missing_config_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        ConfigLoader(tmp_path / "absent.yaml").load()


def test_empty_config_is_empty_mapping(tmp_path):
    path = tmp_path / "empty.yaml"
    path.write_text("", encoding="utf-8")
    assert load_config(path) == {}


@pytest.mark.parametrize(
    "text",
    [
        "seed: [1, 2\n",
        "- just\n- a list\n",
        "colour: red\n",
        "noise:\n  gaussian: 3\n",
        "outputs:\n  pdf: x.pdf\n",
    ],
)
def test_invalid_configs(tmp_path, text):
    path = tmp_path / "bad.yaml"
    path.write_text(text, encoding="utf-8")
    with pytest.raises(ParameterError):
        load_config(path)


def test_parse_param_overrides():
    overrides = parse_param_overrides(["gaussian.sigma=12", "erlang.b=3", "gaussian.mu=-1.5", "laplacian.mode=abs"])
    assert overrides == {"gaussian": {"sigma": 12, "mu": -1.5}, "erlang": {"b": 3}, "laplacian": {"mode": "abs"}}
    assert parse_param_overrides(None) == {}


@pytest.mark.parametrize("item", ["gaussian", "gaussian.sigma", "sigma=3", ".sigma=3", "gaussian.=3", "gaussian.sigma="])
def test_malformed_overrides(item):
    with pytest.raises(ParameterError):
        parse_param_overrides([item])


def test_merge_overrides_later_wins():
    merged = merge_overrides({"gaussian": {"sigma": 1, "mu": 2}}, None, {"gaussian": {"sigma": 5}, "erlang": {"b": 3}})
    assert merged == {"gaussian": {"sigma": 5, "mu": 2}, "erlang": {"b": 3}}


def test_thread_count_resolution(monkeypatch):
    monkeypatch.delenv(THREADS_ENV_VAR, raising=False)
    assert 1 <= resolve_thread_count() <= 8
    assert resolve_thread_count(3) == 3
    monkeypatch.setenv(THREADS_ENV_VAR, "2")
    assert resolve_thread_count() == 2
    assert resolve_thread_count(5) == 5


@pytest.mark.parametrize("raw", ["0", "-2", "many"])
def test_bad_thread_env(monkeypatch, raw):
    monkeypatch.setenv(THREADS_ENV_VAR, raw)
    with pytest.raises(ParameterError):
        resolve_thread_count()


def test_bad_explicit_threads():
    with pytest.raises(ParameterError):
        resolve_thread_count(0)


def test_shipped_example_configs_load():
    configs = Path(__file__).resolve().parents[2] / "example" / "configs"
    for path in sorted(configs.glob("*.yaml")):
        assert isinstance(load_config(path), dict)
