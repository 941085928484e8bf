"""Tests for runtime configuration."""

import pytest

from nap.config import OracleCaps, load_settings, parse_caps


def test_parse_caps_subset():
    caps = parse_caps('m=6, N=10')
    assert caps.max_m == 6
    assert caps.max_N == 10
    assert caps.max_n == OracleCaps().max_n


def test_parse_caps_rejects_unknown_key():
    with pytest.raises(ValueError):
        parse_caps('q=5')


def test_parse_caps_rejects_zero():
    with pytest.raises(ValueError):
        parse_caps('n=0')


def test_override_ignores_none():
    caps = OracleCaps()
    assert caps.override(max_m=None) is caps
    assert caps.override(max_m=5).max_m == 5


def test_max_nat_n():
    assert OracleCaps(max_m=5).max_nat_n == 120


def test_settings_from_environment(monkeypatch):
    monkeypatch.setenv('NAP_ORACLE_CAPS', 'n=120')
    monkeypatch.setenv('NAP_ENCLOSURE_DIGITS', '9')
    monkeypatch.setenv('NAP_LOG_LEVEL', 'debug')
    settings = load_settings()
    assert settings.caps.max_n == 120
    assert settings.enclosure_digits == 9
    assert settings.log_level == 'DEBUG'


def test_settings_defaults(monkeypatch):
    for name in ('NAP_ORACLE_CAPS', 'NAP_ENCLOSURE_DIGITS', 'NAP_MAX_REFINE_DIGITS', 'NAP_LOG_LEVEL'):
        monkeypatch.delenv(name, raising=False)
    settings = load_settings()
    assert settings.caps == OracleCaps()
    assert settings.enclosure_digits == 6
