"""
Configuration for the recurrent-sums toolkit

Settings are read from built-in defaults, then the JSON settings file
(recsum_config.json at the repository root, or the file named by
RECSUM_CONFIG), then environment variables. A .env file in the working
directory is loaded first so it can supply those variables.
"""

import json
import logging
import os
from dataclasses import dataclass, asdict, fields
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import load_dotenv

from src.errors import InvalidInputError

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = Path(__file__).resolve().parent.parent / "recsum_config.json"

# env var -> config field
ENV_OVERRIDES = {
    "RECSUM_NAIVE_GUARD": "naive_guard",
    "RECSUM_SET_PARTITION_GUARD": "set_partition_guard",
    "RECSUM_NUMERIC_DIGITS": "numeric_digits",
    "RECSUM_VERIFY_SAMPLES": "verify_samples",
    "RECSUM_LOG_LEVEL": "log_level",
    "RECSUM_PROGRESS": "progress",
}


@dataclass
class RecsumConfig:
    """Runtime settings shared by the evaluators and the command-line tools."""
    naive_guard: int = 10_000_000
    set_partition_guard: int = 10
    numeric_digits: int = 10
    verify_samples: int = 20
    log_level: str = "INFO"
    progress: bool = True

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _coerce(name: str, raw: Any) -> Any:
    """Convert a raw JSON or environment value to the type of field `name`."""
    if name == "log_level":
        return str(raw).upper()
    if name == "progress":
        if isinstance(raw, bool):
            return raw
        return str(raw).strip().lower() in ("1", "true", "yes", "on")
    try:
        value = int(raw)
    except (TypeError, ValueError):
        raise InvalidInputError(f"Setting {name} must be an integer, got {raw!r}")
    if value < 1:
        raise InvalidInputError(f"Setting {name} must be positive, got {value}")
    return value


def load_config(path: Optional[str] = None) -> RecsumConfig:
    """
    Build a configuration from defaults, the JSON file and the environment.

    Args:
        path: Settings file to read (defaults to RECSUM_CONFIG or recsum_config.json)

    Returns:
        RecsumConfig instance
    """
    load_dotenv()

    config_path = Path(path or os.getenv("RECSUM_CONFIG") or DEFAULT_CONFIG_PATH)
    known = {f.name for f in fields(RecsumConfig)}
    values: Dict[str, Any] = {}

    if config_path.exists():
        try:
            with open(config_path, "r", encoding="utf-8") as f:
                raw = json.load(f)
        except json.JSONDecodeError as e:
            raise InvalidInputError(f"Settings file {config_path} is not valid JSON: {e}")
        for key, val in raw.items():
            if key not in known:
                logger.warning(f"Ignoring unknown setting '{key}' in {config_path}")
                continue
            values[key] = _coerce(key, val)
    elif path is not None:
        raise InvalidInputError(f"Settings file {config_path} does not exist")

    for env_name, key in ENV_OVERRIDES.items():
        env_val = os.getenv(env_name)
        if env_val is not None and env_val != "":
            values[key] = _coerce(key, env_val)

    return RecsumConfig(**values)


_config: Optional[RecsumConfig] = None


def get_config() -> RecsumConfig:
    """Return the process-wide configuration, loading it on first use."""
    global _config
    if _config is None:
        _config = load_config()
    return _config


def set_config(config: RecsumConfig) -> None:
    """Install `config` as the process-wide configuration."""
    global _config
    _config = config


def reset_config() -> None:
    """Forget the cached configuration so the next get_config() reloads it."""
    global _config
    _config = None
