"""End-to-end pipeline: translate a STRIPS domain into the hidden STRIPS+
model, sample a training trace, learn a domain, and verify it on a fresh
instance, reporting the Table-style metrics row.

All stage seeds derive deterministically from the single pipeline seed; the
data artifacts (domains, traces, reports without timings) are byte-stable
across reruns.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .model import Domain, Problem, Trace
from .pddl_io import write_flattened_domain, write_stripsplus_domain, write_trace
from .synth import LearnReport, learn_domain
from .tracegen import generate_trace
from .translate import TranslateReport, translate_domain
from .verify import CaptureMetrics, VerifyReport, capture_metrics, verify_equivalence


class PipelineError(Exception):
    """A stage failed; the message names the stage."""

    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage {stage}: {cause}")


def stage_seed(seed: int, stage: int) -> int:
    return seed * 1000003 + stage


SUMMARY_COLUMNS = ["domain", "o", "l", "xp", "x", "xz", "z", "xp_minus_z",
                   "z_minus_xp", "t", "ov", "sv", "tv", "pv"]


@dataclass
class PipelineResult:
    domain_name: str
    hidden: Domain
    learned: Domain
    train_trace: Trace
    translate_report: TranslateReport
    learn_report: LearnReport
    verify_report: VerifyReport
    metrics: CaptureMetrics
    n_objects: int
    n_objects_verify: int
    length: int
    x_prime: int
    x: int
    learn_seconds: float
    verify_seconds: float

    @property
    def z(self) -> int:
        return self.metrics.learned_z

    @property
    def score(self) -> float:
        return self.verify_report.score

    def summary_pairs(self) -> List[Tuple[str, str]]:
        return [
            ("domain", self.domain_name),
            ("o", str(self.n_objects)),
            ("l", str(self.length)),
            ("xp", str(self.x_prime)),
            ("x", str(self.x)),
            ("xz", str(self.x + self.z)),
            ("z", str(self.z)),
            ("xp_minus_z", str(self.metrics.uncaptured_hidden)),
            ("z_minus_xp", str(self.metrics.unused_learned)),
            ("t", f"{self.learn_seconds:.2f}"),
            ("ov", str(self.n_objects_verify)),
            ("sv", str(self.verify_report.pairs_tested)),
            ("tv", f"{self.verify_seconds:.2f}"),
            ("pv", f"{self.score:.2f}"),
        ]

    def summary_text(self) -> str:
        pairs = self.summary_pairs()
        lines = [f"{k}={v}" for k, v in pairs]
        lines.append("\t".join(v for _, v in pairs))
        return "\n".join(lines) + "\n"


def run_pipeline(
    strips: Domain,
    train_problem: Problem,
    verify_problem: Problem,
    length: int,
    seed: int,
    pairs: int,
    drops: Sequence[str] = (),
    max_atoms: int = 3,
    jobs: int = 1,
    walk_length: int = 100,
    translate_length: Optional[int] = None,
    outdir: Optional[Path] = None,
) -> PipelineResult:
    drops = tuple(sorted(drops))

    def run_stage(stage, fn):
        try:
            return fn()
        except Exception as exc:  # noqa: BLE001 - stage context on any failure
            raise PipelineError(stage, exc) from exc

    strips_trace = run_stage("strips-trace", lambda: generate_trace(
        train_problem, strips, translate_length or length,
        stage_seed(seed, 1)))
    hidden, translate_report = run_stage("translate", lambda: translate_domain(
        strips, [strips_trace], max_atoms=max_atoms))
    train_trace = run_stage("trace", lambda: generate_trace(
        train_problem, hidden, length, stage_seed(seed, 2), set(drops)))

    learn_started = time.perf_counter()
    learned, learn_report = run_stage("learn", lambda: learn_domain(
        [train_trace], max_atoms=max_atoms, jobs=jobs))
    learn_seconds = time.perf_counter() - learn_started

    metrics = run_stage("metrics", lambda: capture_metrics(
        hidden, learned, train_problem, train_trace))

    verify_started = time.perf_counter()
    verify_report = run_stage("verify", lambda: verify_equivalence(
        verify_problem, hidden, learned, pairs, stage_seed(seed, 3),
        walk_length=walk_length))
    verify_seconds = time.perf_counter() - verify_started

    result = PipelineResult(
        domain_name=strips.name,
        hidden=hidden,
        learned=learned,
        train_trace=train_trace,
        translate_report=translate_report,
        learn_report=learn_report,
        verify_report=verify_report,
        metrics=metrics,
        n_objects=len(train_problem.objects),
        n_objects_verify=len(verify_problem.objects),
        length=len(train_trace.steps),
        x_prime=strips.total_explicit_args,
        x=hidden.total_explicit_args,
        learn_seconds=learn_seconds,
        verify_seconds=verify_seconds,
    )
    if outdir is not None:
        write_artifacts(result, strips_trace, outdir)
    return result


def write_artifacts(result: PipelineResult, strips_trace: Trace,
                    outdir: Path) -> None:
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "hidden.sp").write_text(write_stripsplus_domain(result.hidden))
    write_trace(strips_trace, outdir / "train-strips.trace")
    write_trace(result.train_trace, outdir / "train.trace")
    (outdir / "learned.sp").write_text(write_stripsplus_domain(result.learned))
    (outdir / "learned-flat.pddl").write_text(
        write_flattened_domain(result.learned))
    (outdir / "translate-report.txt").write_text(
        result.translate_report.render())
    (outdir / "translate-report.json").write_text(
        result.translate_report.to_json())
    (outdir / "learn-report.txt").write_text(result.learn_report.render())
    (outdir / "verify-report.txt").write_text(result.verify_report.render())
    (outdir / "summary.txt").write_text(result.summary_text())
