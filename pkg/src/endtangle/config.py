"""
Configuration management for endtangle.
Handles loading/saving settings to ~/.endtangle/config.json and layering
ENDTANGLE_* environment overrides on top of the analysis budgets.
"""

import os
import json
from pathlib import Path
from typing import Optional, Dict, Any

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from endtangle.errors import ConfigError

# Constants
GLOBAL_CONFIG_DIR = Path.home() / ".endtangle"
GLOBAL_CONFIG_FILE = GLOBAL_CONFIG_DIR / "config.json"
ENV_PREFIX = "ENDTANGLE_"
DEFAULT_THEME = "default"

CONFIG_DIR = GLOBAL_CONFIG_DIR # For mocking in tests
CONFIG_FILE = GLOBAL_CONFIG_FILE # For mocking in tests


class Budgets(BaseModel):
    """All knobs bounding the desk-scale analyses."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    window: int = Field(20, ge=2, description="outer truncation level L_max")
    inner_level: int = Field(6, ge=0, description="separator level bound for enumeration")
    patience: int = Field(3, ge=1, description="equal values needed to call a scan stable")
    budget: int = Field(100_000, ge=1, description="max expanded vertices per truncation")
    margin: int = Field(2, ge=1, description="levels kept between separators and the window edge")
    threshold: int = Field(8, ge=1, description="domination flow threshold and witness count")
    search_level: int = Field(6, ge=0, description="level bound of the domination search")
    d_max: int = Field(8, ge=0, description="degree scan uses balls of level 0..d_max")
    divergence_bound: int = Field(6, ge=1, description="degree value flagged infinite when still rising")
    z_samples: int = Field(4, ge=1, description="limit-point samples")
    enumeration_cap: int = Field(200_000, ge=1, description="max separations enumerated per call")
    seed: int = Field(0, ge=0, description="random seed for the oracle self-test")


KNOBS = tuple(Budgets.model_fields)


def _load_config() -> Dict[str, Any]:
    """Load global configuration from disk."""
    config_file = globals().get('CONFIG_FILE', GLOBAL_CONFIG_FILE)
    if not config_file.exists():
        return {}
    try:
        return json.loads(config_file.read_text(encoding="utf-8"))
    except json.JSONDecodeError:
        return {}


def _save_config(config: Dict[str, Any]):
    """Save global configuration to disk."""
    config_dir = globals().get('CONFIG_DIR', GLOBAL_CONFIG_DIR)
    config_file = globals().get('CONFIG_FILE', GLOBAL_CONFIG_FILE)
    config_dir.mkdir(parents=True, exist_ok=True)
    config_file.write_text(json.dumps(config, indent=2), encoding="utf-8")


def _env_overrides() -> Dict[str, Any]:
    """Collect ENDTANGLE_<KNOB> variables."""
    found = {}
    for knob in KNOBS:
        raw = os.getenv(ENV_PREFIX + knob.upper())
        if raw is None or raw == "":
            continue
        try:
            found[knob] = int(raw)
        except ValueError:
            raise ConfigError(f"{ENV_PREFIX}{knob.upper()} must be an integer, got {raw!r}")
    return found


def load_budgets(overrides: Optional[Dict[str, Any]] = None) -> Budgets:
    """
    Build the effective budgets.
    Priority (highest first):
    1. explicit overrides (CLI flags)
    2. ENDTANGLE_<KNOB> (env)
    3. "budgets" in config.json
    4. model defaults
    """
    merged: Dict[str, Any] = {}
    stored = _load_config().get("budgets", {})
    if not isinstance(stored, dict):
        raise ConfigError("'budgets' in config.json must be an object")
    merged.update(stored)
    merged.update(_env_overrides())
    merged.update({k: v for k, v in (overrides or {}).items() if v is not None})
    try:
        return Budgets(**merged)
    except ValidationError as e:
        raise ConfigError(f"Invalid budgets: {e}") from e


def save_budgets(budgets: Budgets):
    """Persist budgets that differ from the defaults."""
    config = _load_config()
    defaults = Budgets()
    config["budgets"] = {
        knob: getattr(budgets, knob)
        for knob in KNOBS
        if getattr(budgets, knob) != getattr(defaults, knob)
    }
    _save_config(config)


def get_theme() -> str:
    """Get the configured theme name."""
    return _load_config().get("theme", DEFAULT_THEME)
