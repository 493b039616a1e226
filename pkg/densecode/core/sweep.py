import asyncio
import csv
import io
import logging
from concurrent.futures import ThreadPoolExecutor
from functools import partial
from pathlib import Path
from typing import Dict, List, Optional

from dependency_injector.wiring import inject, Provide

from densecode.core.di_container import Container
from densecode.core.schemas import SweepConfig, SweepReport, SweepSummary, TheoremSummary, VerdictRecord
from densecode.core.states import MultipartiteState, derive_seed, sample
from densecode.core.theorems import run_check
from densecode.utils.dataclasses import DimensionProfile, RandomSpec, SampleKind
from densecode.utils.errors import ConfigError


SAMPLE_KINDS = {"pure": SampleKind.HAAR_PURE, "mixed": SampleKind.INDUCED_MIXED}
CSV_COLUMNS = ("theorem", "sample", "lhs", "rhs", "slack", "holds", "applicable")


def sample_state(config: SweepConfig, index: int) -> MultipartiteState:
    """Sample ``index`` of the sweep; depends only on the master seed and the index."""
    spec = RandomSpec(
        profile=DimensionProfile(tuple(config.dims)),
        kind=SAMPLE_KINDS[config.kind],
        seed=derive_seed(config.seed, index),
        ancilla_dim=config.ancilla_dim,
    )
    return sample(spec)


def build_report(config: SweepConfig, records_by_sample: Dict[int, List[VerdictRecord]]) -> SweepReport:
    verdicts = [record for index in sorted(records_by_sample) for record in records_by_sample[index]]
    per_theorem = {}
    for theorem in config.theorems:
        mine = [v for v in verdicts if v.theorem == theorem]
        applicable = [v for v in mine if v.applicable]
        per_theorem[theorem.value] = TheoremSummary(
            checked=len(mine),
            held=sum(v.holds for v in mine),
            applicable=len(applicable),
            min_slack=min((v.slack for v in applicable), default=None),
        )
    return SweepReport(
        config=config.report_config(),
        verdicts=verdicts,
        summary=SweepSummary(per_theorem=per_theorem),
    )


def render_report(report: SweepReport, fmt: str = "json") -> str:
    if fmt == "json":
        return report.model_dump_json(indent=2) + "\n"
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for v in report.verdicts:
            writer.writerow([v.theorem.value, v.sample, repr(v.lhs), repr(v.rhs), repr(v.slack),
                             str(v.holds).lower(), str(v.applicable).lower()])
        return buffer.getvalue()
    raise ConfigError(f"unknown report format {fmt!r}, expected json or csv")


def write_report(report: SweepReport, path: str, fmt: str = "json"):
    Path(path).write_text(render_report(report, fmt))


class SweepRunner:

    @inject
    def __init__(
            self,
            max_workers: int = Provide[Container.config.threads],
            discord_starts: int = Provide[Container.config.discord_starts],
            store=None,
            start_fresh: bool = False
    ):
        """
        Runs theorem checks over a seeded stream of random states.

        Args:
            max_workers: Worker threads for sample evaluation (injected from config)
            discord_starts: Optimizer starts for discord-based checks (injected from config)
            store: Optional SweepDBConnector used to checkpoint and resume runs
            start_fresh: Drop any checkpointed verdicts of the same run before starting
        """
        if int(max_workers) < 1:
            raise ConfigError(f"thread count must be >= 1, got {max_workers}")
        if int(discord_starts) < 1:
            raise ConfigError(f"discord starts must be >= 1, got {discord_starts}")
        self.max_workers = int(max_workers)
        self.discord_starts = int(discord_starts)
        self.store = store
        self.start_fresh = start_fresh
        self.logger = logging.getLogger(__name__)

    def run(self, config: SweepConfig) -> SweepReport:
        """
        Evaluate every sample on a thread pool. Results are collected in sample
        order, so the report does not depend on the thread count.
        """
        done = self._recover_previous_state(config)
        pending = [index for index in range(config.samples) if index not in done]
        self.logger.info(f"Sweep {config.run_key[:12]}: {len(pending)} of {config.samples} samples "
                         f"to evaluate with {self.max_workers} threads")

        with ThreadPoolExecutor(max_workers=self.max_workers) as pool:
            for index, records in zip(pending, pool.map(partial(self.evaluate_sample, config), pending)):
                self._checkpoint(config, index, records)
                done[index] = records

        return self._finish(config, done)

    async def arun(self, config: SweepConfig, max_concurrency: Optional[int] = None) -> SweepReport:
        """
        Async variant of ``run``: samples run in the loop's executor, bounded by a
        semaphore, and each one is checkpointed as soon as it completes. A failing
        sample does not stop the others; the first error is raised once all have
        finished.
        """
        done = self._recover_previous_state(config)
        pending = [index for index in range(config.samples) if index not in done]
        semaphore = asyncio.Semaphore(max_concurrency or self.max_workers)
        loop = asyncio.get_running_loop()

        async def _evaluate(index: int):
            async with semaphore:
                records = await loop.run_in_executor(None, self.evaluate_sample, config, index)
                return index, records

        errors = []
        for next_result in asyncio.as_completed([_evaluate(index) for index in pending]):
            try:
                index, records = await next_result
            except Exception as e:
                errors.append(e)
                continue
            self._checkpoint(config, index, records)
            done[index] = records

        if errors:
            self.logger.error(f"Sweep {config.run_key[:12]}: {len(errors)} samples failed, "
                              f"{len(done)} checkpointed")
            raise errors[0]
        return self._finish(config, done)

    def evaluate_sample(self, config: SweepConfig, index: int) -> List[VerdictRecord]:
        s = sample_state(config, index)
        self.logger.debug(f"Sample {index}: state {s.fingerprint[:12]}")
        return [
            VerdictRecord.from_verdict(
                run_check(theorem, s, discord_starts=self.discord_starts, noise_grid=config.noise_grid), index
            )
            for theorem in config.theorems
        ]

    def _recover_previous_state(self, config: SweepConfig) -> Dict[int, List[VerdictRecord]]:
        if self.store is None:
            return {}
        if self.start_fresh:
            self.store.clear_run(config.run_key)
            return {}
        completed = self.store.get_completed_samples(config.run_key, config.theorems)
        recovered = {index: records for index, records in completed.items() if index < config.samples}
        if recovered:
            self.logger.info(f"Resuming sweep {config.run_key[:12]} with {len(recovered)} checkpointed samples")
        return recovered

    def _checkpoint(self, config: SweepConfig, index: int, records: List[VerdictRecord]):
        failed = [r.theorem.value for r in records if not r.holds]
        if failed:
            self.logger.warning(f"Sample {index} failed {failed}")
        if self.store is not None:
            self.store.upsert_verdicts(config.run_key, records)

    def _finish(self, config: SweepConfig, done: Dict[int, List[VerdictRecord]]) -> SweepReport:
        report = build_report(config, done)
        self.logger.info(f"Sweep {config.run_key[:12]} finished, all verdicts hold: {report.all_hold}")
        if config.output_path:
            write_report(report, config.output_path, config.format)
            self.logger.info(f"Report written to {config.output_path}")
        return report
