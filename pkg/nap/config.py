"""
Runtime configuration
Values come from command-line flags, then environment variables (a .env file
is loaded first), then the defaults below
"""

import logging
import os
from dataclasses import dataclass, replace
from math import factorial
from typing import Dict, Optional

from dotenv import load_dotenv

logger = logging.getLogger(__name__)

_dotenv_loaded = False


def _ensure_dotenv():
    global _dotenv_loaded
    if not _dotenv_loaded:
        load_dotenv()
        _dotenv_loaded = True


@dataclass(frozen=True)
class OracleCaps:
    """Desk-scale limits for exhaustive grid enumeration"""

    max_m: int = 8        # factorial index: n <= max_m!
    max_n: int = 720      # Q/R grid size
    max_N: int = 12       # coin prefix length
    max_sigma: int = 8    # coin tail set size

    @property
    def max_nat_n(self) -> int:
        return factorial(self.max_m)

    def override(self, **values: Optional[int]) -> "OracleCaps":
        """Return a copy with every non-None value replaced"""
        changes = {key: value for key, value in values.items() if value is not None}
        return replace(self, **changes) if changes else self


_CAP_KEYS = {'m': 'max_m', 'n': 'max_n', 'N': 'max_N', 'sigma': 'max_sigma'}


def parse_caps(text: str, base: OracleCaps = OracleCaps()) -> OracleCaps:
    """Parse `m=8,n=720,N=12,sigma=8` (any subset) on top of `base`"""
    values: Dict[str, int] = {}
    for item in filter(None, (part.strip() for part in text.split(','))):
        key, _, raw = item.partition('=')
        key = key.strip()
        if key not in _CAP_KEYS or not raw.strip():
            raise ValueError(f"bad oracle cap entry: {item!r}")
        number = int(raw)
        if number <= 0:
            raise ValueError(f"oracle cap must be positive: {item!r}")
        values[_CAP_KEYS[key]] = number
    return base.override(**values)


@dataclass(frozen=True)
class Settings:
    caps: OracleCaps = OracleCaps()
    enclosure_digits: int = 6
    max_refine_digits: int = 60
    log_level: str = 'WARNING'


def load_settings() -> Settings:
    """Read settings from the environment"""
    _ensure_dotenv()

    caps = OracleCaps()
    raw_caps = os.getenv('NAP_ORACLE_CAPS')
    if raw_caps:
        caps = parse_caps(raw_caps, caps)
        logger.debug("oracle caps from environment: %s", caps)

    return Settings(
        caps=caps,
        enclosure_digits=int(os.getenv('NAP_ENCLOSURE_DIGITS', '6')),
        max_refine_digits=int(os.getenv('NAP_MAX_REFINE_DIGITS', '60')),
        log_level=os.getenv('NAP_LOG_LEVEL', 'WARNING').upper(),
    )


_settings: Optional[Settings] = None


def get_settings() -> Settings:
    global _settings
    if _settings is None:
        _settings = load_settings()
    return _settings


def set_settings(settings: Settings) -> None:
    """Install process-wide settings (used by the CLI after reading flags)"""
    global _settings
    _settings = settings
