"""Tests for the flat key = value configuration format."""

import pytest

from swirlaudit.config import RunConfig, load_config
from swirlaudit.errors import ConfigError


def write(tmp_path, text):
    path = tmp_path / "run.cfg"
    path.write_text(text, encoding="utf-8")
    return path


def test_empty_file_gives_defaults(tmp_path):
    cfg = load_config(write(tmp_path, ""))
    assert cfg == RunConfig()
    assert (cfg.n, cfg.seed, cfg.a, cfg.c) == (100_000, 42, 3.6, 0.9)
    assert cfg.mixing == (1.0, 0.5, 0.0, 1.0)


def test_comments_and_blank_lines_ignored(tmp_path):
    cfg = load_config(write(tmp_path, "# comment\n\nn = 5000\nseed = 9\n"))
    assert cfg.n == 5000 and cfg.seed == 9


def test_matrix_key_row_major(tmp_path):
    cfg = load_config(write(tmp_path, "A = 2, 0, 0, 0.5\n"))
    assert cfg.mixing == (2.0, 0.0, 0.0, 0.5)
    assert cfg.mixing2().det == pytest.approx(1.0)


def test_cutoff_out_of_range_names_key(tmp_path):
    with pytest.raises(ConfigError, match=r"c: .*\(0, 1\)"):
        load_config(write(tmp_path, "c = 1.5\n"))


def test_zero_rotation_rate_names_key(tmp_path):
    with pytest.raises(ConfigError, match="a: must be nonzero"):
        load_config(write(tmp_path, "a = 0\n"))


def test_unknown_key_fails_closed(tmp_path):
    with pytest.raises(ConfigError, match="unknown key 'bins'"):
        load_config(write(tmp_path, "bins = 10\n"))


def test_duplicate_key_rejected(tmp_path):
    with pytest.raises(ConfigError, match="duplicate key"):
        load_config(write(tmp_path, "n = 10\nn = 20\n"))


def test_unparseable_value_reports_line(tmp_path):
    with pytest.raises(ConfigError, match="line 1: n"):
        load_config(write(tmp_path, "n = ten\n"))


def test_singular_matrix_rejected(tmp_path):
    with pytest.raises(ConfigError, match="A: "):
        load_config(write(tmp_path, "A = 1, 1, 1, 1\n"))


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "nope.cfg")


def test_all_violations_reported_together(tmp_path):
    with pytest.raises(ConfigError) as exc:
        load_config(write(tmp_path, "c = 2\nalpha = 3\nn = 0\n"))
    message = str(exc.value)
    assert "c:" in message and "alpha:" in message and "n:" in message


def test_degenerate_flag_not_a_config_key(tmp_path):
    with pytest.raises(ConfigError, match="unknown key"):
        load_config(write(tmp_path, "degenerate_a = true\n"))
