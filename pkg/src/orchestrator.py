"""Run driver

Builds the selected system, explores it, and delegates the requested checks
(deadlock freeness, formula files, minimization, bisimilarity comparison) to
the engines. Results are printed on a rich console and written to the
requested output files.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

from rich.console import Console
from rich.progress import Progress, SpinnerColumn, TextColumn

from src.config import RunConfig
from src.engine.actl import check, load_properties
from src.engine.bisim import bisimilar, minimize
from src.engine.explorer import (
    ExplorationResult,
    explore,
    format_report,
    shortest_trace,
    write_trace,
)
from src.model.aut import aut_read, aut_write
from src.model.lts import Lts
from src.protocol.node import make_main

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_PROPERTY_FAILED = 1
EXIT_USAGE = 2
EXIT_TRUNCATED = 3


@dataclass
class RunOutcome:
    exit_code: int
    result: Optional[ExplorationResult] = None
    lts: Optional[Lts] = None
    failures: List[str] = field(default_factory=list)
    trace: Optional[List[str]] = None


class Orchestrator:
    """Executes one RunConfig."""

    def __init__(self, config: RunConfig, console: Optional[Console] = None):
        self.config = config
        self.console = console or Console()
        self.scenario = config.scenario_config()

    def explore(self) -> ExplorationResult:
        net = make_main(self.scenario, hide_upper=self.config.hide_upper)
        with Progress(
            SpinnerColumn(),
            TextColumn("[progress.description]{task.description}"),
            console=self.console,
            transient=True,
        ) as progress:
            progress.add_task(f"Exploring {self.scenario.name}...", total=None)
            return explore(net, self.config.limits)

    def run(self) -> RunOutcome:
        cfg = self.config
        if any(p is not None for p in (cfg.aut, cfg.trace, cfg.report)):
            cfg.output_dir.mkdir(parents=True, exist_ok=True)
        self.console.print(f"🔎 Scenario: [bold]{self.scenario.to_line()}[/bold]")
        result = self.explore()
        self._write_report(result)
        self.console.print(
            f"📊 {result.stats.states} states, {result.stats.transitions} transitions, "
            f"{len(result.deadlock_states)} deadlocks, {len(result.terminated_states)} terminated"
        )
        if result.truncated:
            self.console.print("⚠️  Exploration hit the state/transition cap; no verdict.")
            return RunOutcome(EXIT_TRUNCATED, result)

        lts = result.lts
        if cfg.minimize:
            lts = minimize(lts)
            self.console.print(f"🗜️  Minimized: {lts.num_states} states, {lts.num_transitions} edges")
        if cfg.aut is not None:
            with open(cfg.output(cfg.aut), "wb") as f:
                aut_write(lts, f)
            self.console.print(f"💾 LTS written to {cfg.output(cfg.aut)}")

        outcome = RunOutcome(EXIT_OK, result, lts)
        if cfg.check == "deadlock":
            self._check_deadlock(outcome)
        elif cfg.check is not None:
            self._check_formulas(outcome, Path(cfg.check))
        if cfg.compare is not None:
            self._compare(outcome, cfg.compare)

        if outcome.trace is not None and cfg.trace is not None:
            cfg.output(cfg.trace).write_text(write_trace(outcome.trace), encoding="utf-8")
            self.console.print(
                f"💾 Counterexample ({len(outcome.trace)} steps) written to {cfg.output(cfg.trace)}"
            )
        if outcome.failures:
            outcome.exit_code = EXIT_PROPERTY_FAILED
            self.console.print(f"❌ Failed: {', '.join(outcome.failures)}")
        else:
            self.console.print("✅ All requested checks passed")
        return outcome

    def _write_report(self, result: ExplorationResult):
        cfg = self.config
        if cfg.report is None:
            return
        text = format_report(result, self.scenario.name, str(self.scenario.variant))
        cfg.output(cfg.report).write_text(text, encoding="utf-8")
        logger.info("report written to %s", cfg.output(cfg.report))

    def _check_deadlock(self, outcome: RunOutcome):
        result = outcome.result
        if result.deadlock_free:
            self.console.print("✅ deadlock_free: holds")
            return
        # BFS numbering: the lowest-indexed deadlock is a nearest one.
        trace = shortest_trace(result, result.deadlock_states[0])
        self.console.print(
            f"❌ deadlock_free: violated, {len(result.deadlock_states)} deadlock states, "
            f"shortest trace {len(trace)} steps"
        )
        outcome.failures.append("deadlock_free")
        outcome.trace = trace

    def _check_formulas(self, outcome: RunOutcome, path: Path):
        for name, formula in load_properties(path):
            verdict = check(outcome.lts, formula)
            mark = "✅" if verdict.holds else "❌"
            status = "holds" if verdict.holds else "violated"
            self.console.print(f"{mark} {name}: {status}  [dim]{formula}[/dim]")
            if not verdict.holds:
                outcome.failures.append(name)
                if outcome.trace is None and verdict.trace is not None:
                    outcome.trace = verdict.trace

    def _compare(self, outcome: RunOutcome, path: Path):
        with open(path, "rb") as f:
            other = aut_read(f)
        if bisimilar(outcome.lts, other):
            self.console.print(f"✅ strongly bisimilar to {path}")
        else:
            self.console.print(f"❌ not strongly bisimilar to {path}")
            outcome.failures.append("bisimilar")
