"""Run configuration: timing knobs and file paths.

Config files are plain `key = value` lines; blank lines and lines starting
with '#' are ignored. scan_row_ms is the nominal per-row strobe rate of the
keypad; the simulator resolves the matrix every millisecond regardless, so
the value is informational.
"""

from __future__ import annotations

from dataclasses import dataclass

from oacs.controller import Policy
from oacs.errors import ConfigError

_INT_KEYS = ("attempt_limit", "unlock_ms", "deny_ms", "debounce_ms", "scan_row_ms")
_PATH_KEYS = ("users_path", "log_path")


@dataclass
class Config:
    attempt_limit: int = 3
    unlock_ms: int = 5000
    deny_ms: int = 2000
    debounce_ms: int = 20
    scan_row_ms: int = 5
    users_path: str | None = None
    log_path: str | None = None

    def validate(self) -> "Config":
        if self.attempt_limit < 1:
            raise ConfigError("attempt_limit must be >= 1")
        for name in ("unlock_ms", "deny_ms", "debounce_ms", "scan_row_ms"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1")
        return self

    def policy(self) -> Policy:
        return Policy(self.attempt_limit, self.unlock_ms, self.deny_ms)


def load_config(path: str) -> Config:
    cfg = Config()
    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            text = raw.strip()
            if not text or text.startswith("#"):
                continue
            if "=" not in text:
                raise ConfigError(f"{path}:{line_no}: expected 'key = value'")
            key, _, value = text.partition("=")
            key = key.strip()
            value = value.strip()
            if key in _INT_KEYS:
                try:
                    setattr(cfg, key, int(value))
                except ValueError:
                    raise ConfigError(
                        f"{path}:{line_no}: {key} must be an integer, got {value!r}"
                    ) from None
            elif key in _PATH_KEYS:
                setattr(cfg, key, value)
            else:
                raise ConfigError(f"{path}:{line_no}: unknown key {key!r}")
    try:
        return cfg.validate()
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from None
