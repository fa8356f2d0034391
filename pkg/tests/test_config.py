import pytest

from flocksim import ConfigError, Variant, parse_config

BASE = """\
# fifty-agent planar scenario
model = p-thr
n = 50
radius = 7.5
k = 0.1
vmax = 2.5
umax = 5
t_end = 100
delta = 0.25
seed = 1
out = run1/
"""


def test_parse_full_document():
    config = parse_config(BASE)
    assert config.model is Variant.POSITION_THRESHOLD
    assert config.n == 50
    assert config.radius == 7.5
    assert config.seed == 1
    assert config.out == "run1/"
    # defaults fill the rest
    assert config.dim == 2
    assert config.dt == 0.05
    assert config.decimation == 1
    assert config.box == 25.0
    assert config.v_init_max == 1.0


def test_empty_document_reports_missing_model():
    with pytest.raises(ConfigError, match="required key `model` missing"):
        parse_config("")


def test_negative_k_rejected_with_line():
    text = BASE.replace("k = 0.1", "k = -1")
    with pytest.raises(ConfigError) as err:
        parse_config(text)
    assert "k must be > 0" in str(err.value)
    assert "line 5" in str(err.value)


def test_unknown_key_rejected_with_line():
    with pytest.raises(ConfigError) as err:
        parse_config(BASE + "wibble = 3\n")
    assert "unknown key 'wibble'" in str(err.value)
    assert "line 12" in str(err.value)


def test_unparsable_value_names_key_and_line():
    text = BASE.replace("n = 50", "n = fifty")
    with pytest.raises(ConfigError) as err:
        parse_config(text)
    assert "n" in str(err.value) and "line 3" in str(err.value)


def test_bad_model_name_rejected():
    text = BASE.replace("model = p-thr", "model = q-based")
    with pytest.raises(ConfigError, match="unknown model"):
        parse_config(text)


def test_inline_comments_and_blank_lines():
    text = BASE.replace("n = 50", "n = 50   # agents\n\n")
    assert parse_config(text).n == 50


def test_later_assignment_wins():
    assert parse_config(BASE + "seed = 7\n").seed == 7


def test_overrides_beat_file():
    config = parse_config(BASE, overrides={"seed": "99", "delta": "0.4"})
    assert config.seed == 99
    assert config.delta == 0.4


def test_override_validation_errors_name_command_line():
    with pytest.raises(ConfigError, match="command line"):
        parse_config(BASE, overrides={"k": "-2"})
    with pytest.raises(ConfigError, match="command line"):
        parse_config(BASE, overrides={"bogus": "1"})


def test_cross_field_invariants():
    with pytest.raises(ConfigError, match="t_end must be >= dt"):
        parse_config(BASE, overrides={"dt": "200"})
    with pytest.raises(ConfigError, match="n must be >= 2"):
        parse_config(BASE, overrides={"n": "1"})
    with pytest.raises(ConfigError, match="dim must be 2 or 3"):
        parse_config(BASE, overrides={"dim": "4"})
    with pytest.raises(ConfigError, match="non-finite"):
        parse_config(BASE, overrides={"delta": "inf"})


def test_model_params_bridge():
    config = parse_config(BASE)
    params = config.model_params()
    assert params.variant is Variant.POSITION_THRESHOLD
    assert params.v_max == config.vmax
    assert params.u_max == config.umax
    other = config.model_params(Variant.VELOCITY_BASED)
    assert other.variant is Variant.VELOCITY_BASED
