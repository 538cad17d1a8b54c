"""Process-wide configuration shared across anuca."""

import os
import re
from pathlib import Path
from typing import Optional, Union

from .exceptions import ConfigurationException

DEFAULT_CAP: int = 2 ** 24
DEFAULT_CHUNK_SIZE: int = 2 ** 14

# Repository fixtures directory (rule files for the builtin corpus).
DEFAULT_FIXTURES_DIRECTORY: Path = Path(__file__).resolve().parent.parent / "fixtures"

_CAP_ENV_VAR = "ANUCA_CAP"
_THREADS_ENV_VAR = "ANUCA_THREADS"
_FIXTURES_ENV_VAR = "ANUCA_FIXTURES_DIRECTORY"

_POWER_FORM = re.compile(r"^\s*(\d+)\s*\*\*\s*(\d+)\s*$")


def parse_cap(value: Union[str, int]) -> int:
    """Parse a cap given either as a decimal integer or in ``b**k`` form."""
    if isinstance(value, int):
        cap = value
    else:
        match = _POWER_FORM.match(value)
        try:
            cap = int(match.group(1)) ** int(match.group(2)) if match else int(value.strip())
        except ValueError:
            raise ConfigurationException(f"Invalid cap value {value!r}")
    if cap < 1:
        raise ConfigurationException(f"Cap must be positive, got {cap}")
    return cap


class AnucaConfig:
    """
    Library-wide settings.

    Use the shared instance from :func:`get_config` or ``config``. Read the
    fields at use time rather than caching copies in other modules: the CLI
    overrides them after import.

    On startup ``enumeration_cap`` is taken from ``ANUCA_CAP`` and ``threads``
    from ``ANUCA_THREADS`` when those are set and non-empty.
    """

    def __init__(self) -> None:
        self._enumeration_cap: int = DEFAULT_CAP
        env_cap = os.environ.get(_CAP_ENV_VAR)
        if env_cap is not None and env_cap.strip() != "":
            self._enumeration_cap = parse_cap(env_cap)

        self._threads: int = 1
        env_threads = os.environ.get(_THREADS_ENV_VAR)
        if env_threads is not None and env_threads.strip() != "":
            self.threads = env_threads

        env_fixtures = os.environ.get(_FIXTURES_ENV_VAR)
        if env_fixtures is not None and env_fixtures.strip() != "":
            self._fixtures_directory = Path(env_fixtures).expanduser().resolve(strict=False)
        else:
            self._fixtures_directory = DEFAULT_FIXTURES_DIRECTORY

        self._compose_cap: int = DEFAULT_CAP
        self._materialization_cap: int = DEFAULT_CAP
        self._chunk_size: int = DEFAULT_CHUNK_SIZE
        self._seed: int = 0

    @property
    def enumeration_cap(self) -> int:
        return self._enumeration_cap

    @enumeration_cap.setter
    def enumeration_cap(self, value: Union[str, int]) -> None:
        self._enumeration_cap = parse_cap(value)

    @property
    def compose_cap(self) -> int:
        return self._compose_cap

    @compose_cap.setter
    def compose_cap(self, value: Union[str, int]) -> None:
        self._compose_cap = parse_cap(value)

    @property
    def materialization_cap(self) -> int:
        return self._materialization_cap

    @materialization_cap.setter
    def materialization_cap(self, value: Union[str, int]) -> None:
        self._materialization_cap = parse_cap(value)

    @property
    def threads(self) -> int:
        return self._threads

    @threads.setter
    def threads(self, value: Union[str, int]) -> None:
        try:
            threads = int(value)
        except (TypeError, ValueError):
            raise ConfigurationException(f"Invalid thread count {value!r}")
        if threads < 1:
            raise ConfigurationException(f"Thread count must be positive, got {threads}")
        self._threads = threads

    @property
    def chunk_size(self) -> int:
        return self._chunk_size

    @chunk_size.setter
    def chunk_size(self, value: int) -> None:
        if value < 1:
            raise ConfigurationException(f"Chunk size must be positive, got {value}")
        self._chunk_size = int(value)

    @property
    def seed(self) -> int:
        return self._seed

    @seed.setter
    def seed(self, value: int) -> None:
        self._seed = int(value)

    @property
    def fixtures_directory(self) -> Path:
        return self._fixtures_directory

    @fixtures_directory.setter
    def fixtures_directory(self, value: Union[str, Path]) -> None:
        self._fixtures_directory = Path(value).expanduser().resolve(strict=False)

    def resolve_cap(self, override: Optional[int], kind: str = "enumeration") -> int:
        """Per-call override if given, otherwise the configured cap of ``kind``."""
        if override is not None:
            return parse_cap(override)
        return {
            "enumeration": self._enumeration_cap,
            "compose": self._compose_cap,
            "materialization": self._materialization_cap,
        }[kind]


config = AnucaConfig()


def get_config() -> AnucaConfig:
    return config


__all__ = [
    "AnucaConfig",
    "DEFAULT_CAP",
    "DEFAULT_CHUNK_SIZE",
    "DEFAULT_FIXTURES_DIRECTORY",
    "config",
    "get_config",
    "parse_cap",
]
