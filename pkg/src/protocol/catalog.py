"""Scenario catalog: the named system configurations that can be explored."""

import logging
from functools import lru_cache
from pathlib import Path
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from src.errors import ScenarioError
from src.protocol.appli import Scenario
from src.protocol.bus import FaultFlags
from src.protocol.trans import Variant

logger = logging.getLogger(__name__)

CATALOG_FILE = Path(__file__).with_name("scenarios.txt")

FAULT_NAMES = ("dest", "corrupt", "drop", "dummy")


class ScenarioConfig(BaseModel):
    """One composed system: traffic pattern, size, request budget, variant and faults."""

    model_config = ConfigDict(frozen=True)

    name: str
    scenario: Scenario
    n: int = Field(ge=2)
    budget: int = Field(ge=0)
    variant: Variant = Variant.OK
    faults: Tuple[str, ...] = FAULT_NAMES

    @field_validator("faults", mode="before")
    @classmethod
    def parse_faults(cls, value):
        if isinstance(value, str):
            if value == "all":
                return FAULT_NAMES
            if value == "none":
                return ()
            value = tuple(v for v in value.split(",") if v)
        unknown = set(value) - set(FAULT_NAMES)
        if unknown:
            raise ValueError(f"unknown fault kinds {sorted(unknown)}")
        return tuple(f for f in FAULT_NAMES if f in value)

    def fault_flags(self) -> FaultFlags:
        return FaultFlags(
            invalidate_dest="dest" in self.faults,
            corrupt="corrupt" in self.faults,
            drop="drop" in self.faults,
            dummy="dummy" in self.faults,
        )

    @property
    def faults_text(self) -> str:
        if self.faults == FAULT_NAMES:
            return "all"
        return ",".join(self.faults) or "none"

    def to_line(self) -> str:
        fields = (self.name, self.scenario, self.n, self.budget, self.variant)
        return " ".join([*map(str, fields), self.faults_text])


def parse_catalog(text: str) -> List[ScenarioConfig]:
    rows: List[ScenarioConfig] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 6:
            raise ScenarioError(f"catalog line {lineno}: expected 6 fields, got {len(fields)}")
        name, scenario, n, budget, variant, faults = fields
        try:
            rows.append(
                ScenarioConfig(
                    name=name, scenario=scenario, n=n, budget=budget, variant=variant, faults=faults
                )
            )
        except ValidationError as e:
            raise ScenarioError(f"catalog line {lineno}: {e}") from e
    names = [row.name for row in rows]
    if len(set(names)) != len(names):
        raise ScenarioError("catalog names must be unique")
    return rows


@lru_cache(maxsize=None)
def _load(path: Path) -> Tuple[ScenarioConfig, ...]:
    rows = tuple(parse_catalog(path.read_text(encoding="utf-8")))
    logger.debug("loaded %d scenarios from %s", len(rows), path)
    return rows


def load_catalog(path: Optional[Path] = None) -> List[ScenarioConfig]:
    return list(_load(Path(path or CATALOG_FILE)))


def get_scenario(name: str, path: Optional[Path] = None) -> ScenarioConfig:
    for row in load_catalog(path):
        if row.name == name:
            return row
    raise ScenarioError(f"unknown scenario {name!r}")
