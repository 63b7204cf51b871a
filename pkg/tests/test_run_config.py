import math
from pathlib import Path

import pytest

from resonance.errors import ConfigError
from resonance.run_config import (
    RunConfig,
    build_run_config,
    load_config_file,
    parse_angle,
    parse_config_text,
    read_setting,
    with_overrides,
)


def test_defaults():
    config = RunConfig()
    assert config.sigma_list == (0.75,)
    assert config.A == "auto"
    assert config.epsilon_for(0.75) == 0.01
    assert config.summary_path == Path("scan.summary.csv")
    assert config.eval_params().em_cutoff == 32


@pytest.mark.parametrize(
    "text, expected",
    [("0", 0.0), ("pi", math.pi), ("pi/4", math.pi / 4), ("7pi/4", 7 * math.pi / 4), ("7*pi/4", 7 * math.pi / 4), ("0.5", 0.5)],
)
def test_parse_angle(text, expected):
    assert parse_angle(text) == pytest.approx(expected)


def test_parse_angle_rejects_garbage():
    with pytest.raises(ConfigError):
        parse_angle("quarter")


def test_parse_config_text():
    text = """
    # 扫描配置
    q_min = 1e3
    q_max = 2000   # 行尾注释
    sigma = 0.6, 0.75
    theta = 0, pi/4
    A = auto
    grh = yes
    X_override = none
    """
    values = parse_config_text(text, source="scan.conf")
    assert values["q_min"] == 1000
    assert values["q_max"] == 2000
    assert values["sigma_list"] == (0.6, 0.75)
    assert values["theta_list"] == pytest.approx((0.0, math.pi / 4))
    assert values["A"] == "auto"
    assert values["grh"] is True
    assert values["X_override"] is None


@pytest.mark.parametrize("text, fragment", [("bogus = 1", ":1:"), ("q_min = 1\nq_max", ":2:"), ("workers = 1.5", ":1:"), ("grh = maybe", ":1:")])
def test_parse_config_text_errors_carry_line_number(text, fragment):
    with pytest.raises(ConfigError, match=fragment):
        parse_config_text(text, source="scan.conf")


def test_read_setting_aliases():
    assert read_setting("sigma", "0.7") == ("sigma_list", (0.7,))
    assert read_setting("A", "0.3") == ("A", 0.3)
    with pytest.raises(ConfigError):
        read_setting("nope", "1")


def test_precedence_defaults_file_flags(tmp_path):
    path = tmp_path / "scan.conf"
    path.write_text("q_min = 500\nq_max = 900\nworkers = 2\n", encoding="utf-8")
    file_values = load_config_file(path, required=True)
    config = build_run_config(file_values, {"workers": 4, "q_max": None})
    assert config.q_min == 500
    assert config.q_max == 900
    assert config.workers == 4
    assert config.seed == RunConfig().seed


def test_load_config_file_missing(tmp_path):
    assert load_config_file(tmp_path / "absent.conf") == {}
    with pytest.raises(ConfigError):
        load_config_file(tmp_path / "absent.conf", required=True)


@pytest.mark.parametrize(
    "changes",
    [
        dict(q_min=10, q_max=5),
        dict(sigma_list=(0.5,)),
        dict(sigma_list=()),
        dict(theta_list=(7.0,)),
        dict(A="big"),
        dict(A=-1.0),
        dict(epsilon=0.3),
        dict(Y_cap=1),
        dict(workers=0),
        dict(targets=-1),
        dict(em_cutoff=4),
        dict(X_override=0.0),
    ],
)
def test_run_config_rejects(changes):
    with pytest.raises(ConfigError):
        RunConfig(**changes)


def test_with_overrides_revalidates():
    config = RunConfig()
    assert with_overrides(config, workers=3, seed=None).workers == 3
    with pytest.raises(ConfigError):
        with_overrides(config, sigma_list=(1.2,))


def test_build_run_config_rejects_unknown_key():
    with pytest.raises(ConfigError):
        build_run_config({}, {"colour": "red"})


def test_default_config_path_sits_next_to_main():
    from resonance import config

    assert config.ROOT_DIR == Path(config.__file__).resolve().parent.parent
    assert (config.ROOT_DIR / "main.py").is_file()
    assert config.DEFAULT_CONFIG_PATH == config.ROOT_DIR / "scan.conf"
