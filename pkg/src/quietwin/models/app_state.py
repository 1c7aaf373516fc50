from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

from quietwin.models.scenario_file import ScenarioFile


@dataclass
class AppState:
    config_path: Path | None
    config_overrides: list[str]
    workers: int = 1

    @cached_property
    def scenario_file(self) -> ScenarioFile:
        return ScenarioFile.load(self.config_path, self.config_overrides)
