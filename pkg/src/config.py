"""Run configuration: defaults, optional JSON file, environment and CLI overrides."""

import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, field_validator
from rich.logging import RichHandler

from src.engine.explorer import ExplorationLimits
from src.protocol.catalog import get_scenario, load_catalog
from src.protocol.trans import Variant

logger = logging.getLogger(__name__)

CONFIG_FILE = Path("firewire_config.json")

DEFAULT_CONFIG: Dict[str, Any] = {
    "max_states": 2_000_000,
    "max_transitions": 20_000_000,
    "workers": 1,
    "hide_upper": False,
    "log_level": "WARNING",
    "output_dir": ".",
}

ENV_KEYS = {
    "FIREWIRE_MAX_STATES": "max_states",
    "FIREWIRE_MAX_TRANSITIONS": "max_transitions",
    "FIREWIRE_WORKERS": "workers",
    "FIREWIRE_LOG_LEVEL": "log_level",
}


def load_config(path: Optional[Path] = None) -> Dict[str, Any]:
    """Defaults, then the JSON file, then ``FIREWIRE_*`` variables (``.env`` included)."""
    load_dotenv()
    config = DEFAULT_CONFIG.copy()
    path = Path(path or os.getenv("FIREWIRE_CONFIG") or CONFIG_FILE)
    if path.exists():
        with open(path, encoding="utf-8") as f:
            config = {**config, **json.load(f)}
        logger.debug("loaded configuration from %s", path)
    for env, key in ENV_KEYS.items():
        value = os.getenv(env)
        if value is not None:
            config[key] = value
    return config


def setup_logging(level: str = "WARNING"):
    logging.basicConfig(
        level=level.upper(),
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(rich_tracebacks=True, show_path=False)],
        force=True,
    )


class RunConfig(BaseModel):
    """Everything one invocation needs; outputs are written only when a path is set."""

    model_config = ConfigDict(frozen=True)

    scenario: str
    variant: Optional[Variant] = None
    no_faults: bool = False
    hide_upper: bool = False
    aut: Optional[Path] = None
    trace: Optional[Path] = None
    report: Optional[Path] = None
    check: Optional[str] = "deadlock"
    minimize: bool = False
    compare: Optional[Path] = None
    limits: ExplorationLimits = ExplorationLimits()
    output_dir: Path = Path(".")

    @field_validator("scenario")
    @classmethod
    def known_scenario(cls, value: str) -> str:
        if value not in {row.name for row in load_catalog()}:
            raise ValueError(f"unknown scenario {value!r}")
        return value

    @field_validator("check")
    @classmethod
    def check_target(cls, value: Optional[str]) -> Optional[str]:
        if value is not None and value != "deadlock" and not Path(value).is_file():
            raise ValueError(f"--check expects 'deadlock' or a formula file, got {value!r}")
        return value

    def output(self, path: Optional[Path]) -> Optional[Path]:
        if path is None:
            return None
        return path if path.is_absolute() else self.output_dir / path

    def scenario_config(self):
        """The catalog row with the variant and fault overrides applied."""
        row = get_scenario(self.scenario)
        update: Dict[str, Any] = {}
        if self.variant is not None:
            update["variant"] = self.variant
        if self.no_faults:
            update["faults"] = ()
        return row.model_copy(update=update) if update else row
