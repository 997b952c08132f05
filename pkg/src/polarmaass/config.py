"""Central defaults for the command-line front end.

Values come from, in increasing priority: the built-in defaults below, an
optional flat ``key = value`` file, and command-line flags.
"""

from __future__ import annotations

from pathlib import Path
from typing import Dict, Optional

from .errors import DomainError

DEFAULTS: Dict[str, float] = {
    "bound": 500,
    "tail": 1e-9,
    "delta": 0.15,
    "y_cap": 12.0,
    "cell_tolerance": 1e-8,
    "seed": 0,
}

_TYPES = {"bound": int, "seed": int}


def _convert(key: str, raw) -> float:
    try:
        return _TYPES.get(key, float)(raw)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"bad value for {key!r}: {raw!r}") from exc


def read_config_file(path: str) -> Dict[str, float]:
    """Parse a flat ``key = value`` file; ``#`` starts a comment."""
    out: Dict[str, float] = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DomainError(f"cannot read config file {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"{path}:{lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in DEFAULTS:
            raise DomainError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = _convert(key, value)
    return out


def resolve(config_file: Optional[str] = None, **overrides) -> Dict[str, float]:
    """Merge defaults, the optional file and non-``None`` overrides."""
    cfg = dict(DEFAULTS)
    if config_file:
        cfg.update(read_config_file(config_file))
    for key, value in overrides.items():
        if value is not None:
            if key not in DEFAULTS:
                raise DomainError(f"unknown setting {key!r}")
            cfg[key] = _convert(key, value)
    return cfg
