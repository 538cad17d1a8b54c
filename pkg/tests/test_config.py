import pytest

from anuca.config import DEFAULT_CAP, AnucaConfig, parse_cap
from anuca.exceptions import ConfigurationException


@pytest.mark.parametrize("value, expected", [("2**10", 1024), (" 3 ** 4 ", 81), ("4096", 4096), (17, 17)])
def test_parse_cap(value, expected):
    assert parse_cap(value) == expected


@pytest.mark.parametrize("value", ["lots", "2**", "0", "-5", 0])
def test_invalid_cap(value):
    with pytest.raises(ConfigurationException):
        parse_cap(value)


def test_defaults(monkeypatch):
    for name in ("ANUCA_CAP", "ANUCA_THREADS", "ANUCA_FIXTURES_DIRECTORY"):
        monkeypatch.delenv(name, raising=False)
    config = AnucaConfig()
    assert config.enumeration_cap == DEFAULT_CAP
    assert config.threads == 1
    assert config.seed == 0
    assert config.fixtures_directory.name == "fixtures"


def test_environment(monkeypatch, tmp_path):
    monkeypatch.setenv("ANUCA_CAP", "2**12")
    monkeypatch.setenv("ANUCA_THREADS", "4")
    monkeypatch.setenv("ANUCA_FIXTURES_DIRECTORY", str(tmp_path))
    config = AnucaConfig()
    assert config.enumeration_cap == 4096
    assert config.compose_cap == DEFAULT_CAP
    assert config.threads == 4
    assert config.fixtures_directory == tmp_path.resolve()


@pytest.mark.parametrize("value", ["many", 0, -2])
def test_invalid_threads(value):
    with pytest.raises(ConfigurationException):
        AnucaConfig().threads = value


def test_invalid_chunk_size():
    with pytest.raises(ConfigurationException):
        AnucaConfig().chunk_size = 0


def test_resolve_cap():
    config = AnucaConfig()
    config.compose_cap = "2**8"
    assert config.resolve_cap(None, "compose") == 256
    assert config.resolve_cap(None) == config.enumeration_cap
    assert config.resolve_cap("2**3", "materialization") == 8
