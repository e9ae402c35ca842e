"""End-to-end orchestration: ingest -> train -> classify -> report.

Each stage persists its artifact into the run's output directory and the
manifest records the resolved config, its hash, artifact checksums and
stage timings. A finished (or partially finished) run can be resumed
from any stage; upstream artifacts are checksum-verified first so a
stale or corrupted file refuses to resume. Artifact bytes are a pure
function of (config, input files), so re-running an identical config
reproduces identical checksums.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

from . import classifier, metrics, topic_model
from .corpus import (
    Corpus,
    DEFAULT_TIMESTAMP_PATTERNS,
    build_corpus,
    iter_records,
    sample_distinct,
    write_json,
)
from .errors import DataError
from .synthgen import load_truth

STAGES = ("ingest", "train", "classify", "report")

# Stage that owns each tunable; resume() refuses overrides that would
# invalidate an earlier, reused stage.
STAGE_OF_PARAM = {
    "input": "ingest",
    "min_tokens": "ingest",
    "min_token_freq": "ingest",
    "sample_size": "ingest",
    "timestamp_patterns": "ingest",
    "topics": "train",
    "alpha": "train",
    "beta": "train",
    "sweeps": "train",
    "representation": "classify",
    "threshold": "classify",
    "gold": "report",
    "validation_fraction": "report",
}


@dataclass
class PipelineConfig:
    """Resolved run configuration. Defaults follow the method's stated
    constants: 5-token minimum, 100 topics, 0.275 acceptance threshold,
    25% validation fraction."""

    input: str
    out_dir: str
    gold: Optional[str] = None
    min_tokens: int = 5
    min_token_freq: int = 1
    sample_size: Optional[int] = None
    seed: int = 0
    topics: int = 100
    alpha: Optional[float] = None  # 50/topics when unset
    beta: float = 0.01
    sweeps: int = 1000
    representation: str = "topic"
    threshold: float = 0.275
    validation_fraction: float = 0.25
    timestamp_patterns: Optional[list[str]] = None

    def __post_init__(self) -> None:
        if self.min_tokens < 0:
            raise DataError("min_tokens must be >= 0")
        if self.min_token_freq < 1:
            raise DataError("min_token_freq must be >= 1")
        if self.topics < 1:
            raise DataError("topics must be >= 1")
        if self.sweeps < 1:
            raise DataError("sweeps must be >= 1")
        if self.alpha is not None and self.alpha <= 0:
            raise DataError("alpha must be > 0")
        if self.beta <= 0:
            raise DataError("beta must be > 0")
        if self.representation not in ("topic", "word"):
            raise DataError("representation must be 'topic' or 'word'")
        if self.threshold < 0:
            raise DataError("threshold must be >= 0")
        if not 0 < self.validation_fraction <= 1:
            raise DataError("validation_fraction must be in (0, 1]")
        if self.sample_size is not None and self.sample_size < 0:
            raise DataError("sample_size must be >= 0")

    @classmethod
    def from_dict(cls, data: dict) -> "PipelineConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise DataError(f"unknown config keys: {', '.join(sorted(unknown))}")
        missing = {"input", "out_dir"} - set(data)
        if missing:
            raise DataError(f"config missing required keys: {', '.join(sorted(missing))}")
        try:
            return cls(**data)
        except TypeError as exc:
            raise DataError(f"invalid config: {exc}") from exc

    @classmethod
    def load(cls, path: str | Path) -> "PipelineConfig":
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DataError(f"{path}: invalid JSON config ({exc})") from exc
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        return asdict(self)

    def sha256(self) -> str:
        payload = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()


class StageError(DataError):
    """A pipeline stage failed; carries the stage name. Artifacts of
    completed stages remain on disk for resumption."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause


def file_sha256(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


@dataclass
class Manifest:
    config: PipelineConfig
    stages: dict[str, dict] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "format": "typiclass-manifest",
            "version": 1,
            "config": self.config.to_dict(),
            "config_sha256": self.config.sha256(),
            "seed": self.config.seed,
            "stages": self.stages,
        }

    def save(self, path: str | Path) -> None:
        write_json(path, self.to_dict())

    @classmethod
    def load(cls, path: str | Path) -> "Manifest":
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        if data.get("format") != "typiclass-manifest":
            raise DataError(f"{path}: not a run manifest")
        if data.get("version") != 1:
            raise DataError(f"unsupported manifest version {data.get('version')!r}")
        return cls(config=PipelineConfig.from_dict(data["config"]), stages=data["stages"])

    def artifact_path(self, stage: str, name: str) -> Path:
        try:
            rel = self.stages[stage]["artifacts"][name]["path"]
        except KeyError as exc:
            raise DataError(f"manifest has no {name!r} artifact for stage {stage!r}") from exc
        return Path(self.config.out_dir) / rel


def _record_stage(manifest: Manifest, out_dir: Path, stage: str,
                  artifacts: dict[str, Path], started: float) -> None:
    manifest.stages[stage] = {
        "status": "ok",
        "artifacts": {
            name: {"path": str(p.relative_to(out_dir)), "sha256": file_sha256(p)}
            for name, p in artifacts.items()
        },
        "duration_s": round(time.monotonic() - started, 6),
    }
    manifest.save(out_dir / "manifest.json")


def _stage_ingest(config: PipelineConfig, out_dir: Path) -> dict[str, Path]:
    patterns = (
        tuple(config.timestamp_patterns)
        if config.timestamp_patterns is not None
        else DEFAULT_TIMESTAMP_PATTERNS
    )
    corpus = build_corpus(
        iter_records(config.input),
        min_tokens=config.min_tokens,
        min_token_freq=config.min_token_freq,
        timestamp_patterns=patterns,
    )
    if config.sample_size is not None:
        corpus = sample_distinct(corpus, config.sample_size, config.seed)
    path = out_dir / "corpus.json"
    corpus.save(path)
    return {"corpus": path}


def _stage_train(config: PipelineConfig, out_dir: Path) -> dict[str, Path]:
    corpus = Corpus.load(out_dir / "corpus.json")
    model = topic_model.train(
        corpus,
        k=config.topics,
        alpha=config.alpha,
        beta=config.beta,
        sweeps=config.sweeps,
        seed=config.seed,
    )
    path = out_dir / "model.json"
    model.save(path)
    return {"model": path}


def _stage_classify(config: PipelineConfig, out_dir: Path) -> dict[str, Path]:
    corpus = Corpus.load(out_dir / "corpus.json")
    model = None
    if config.representation == "topic":
        model = topic_model.TopicModel.load(out_dir / "model.json")
    results = classifier.classify_corpus(
        corpus, model, threshold=config.threshold, mode=config.representation
    )
    path = out_dir / "results.tsv"
    classifier.save_results(results, path)
    return {"results": path}


def _stage_report(config: PipelineConfig, out_dir: Path) -> dict[str, Path]:
    results = classifier.load_results(out_dir / "results.tsv")
    artifacts: dict[str, Path] = {}
    report_path = out_dir / "report.txt"
    accepted = [r for r in results if r.accepted]
    sections: list[str] = []
    if not accepted:
        sections.append(
            f"No documents were accepted at threshold {config.threshold!r} "
            f"({len(results)} classified). Frequencies and accuracy are undefined.\n"
        )
    else:
        freq = metrics.frequency_report(results)
        sections.append(metrics.render_report(freq, title="Category frequencies (accepted documents)"))
        freq_csv = out_dir / "frequency.csv"
        freq_csv.write_text(metrics.report_csv(freq), encoding="utf-8")
        artifacts["frequency_csv"] = freq_csv
        if config.gold:
            gold = load_truth(config.gold)
            sample = metrics.validation_sample(
                results, fraction=config.validation_fraction, seed=config.seed
            )
            acc = metrics.accuracy_report(sample, gold)
            sections.append(
                metrics.render_report(
                    acc,
                    title=(
                        f"Accuracy on validation sample "
                        f"({len(sample)} of {len(accepted)} accepted)"
                    ),
                )
            )
            acc_csv = out_dir / "accuracy.csv"
            acc_csv.write_text(metrics.report_csv(acc), encoding="utf-8")
            artifacts["accuracy_csv"] = acc_csv
    report_path.write_text("\n".join(sections), encoding="utf-8")
    artifacts["report"] = report_path
    return artifacts


_STAGE_FUNCS = {
    "ingest": _stage_ingest,
    "train": _stage_train,
    "classify": _stage_classify,
    "report": _stage_report,
}


def run_pipeline(config: PipelineConfig, from_stage: str = "ingest") -> Manifest:
    """Execute stages in order starting at from_stage, persisting each
    artifact and the manifest as it goes. Raises StageError naming the
    failing stage; artifacts of completed stages stay on disk."""
    if from_stage not in STAGES:
        raise DataError(f"unknown stage {from_stage!r}; expected one of {', '.join(STAGES)}")
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    manifest_path = out_dir / "manifest.json"
    if from_stage != STAGES[0] and manifest_path.exists():
        manifest = Manifest.load(manifest_path)
        manifest.config = config
    else:
        manifest = Manifest(config=config)

    start_index = STAGES.index(from_stage)
    for stage in STAGES[start_index:]:
        started = time.monotonic()
        try:
            artifacts = _STAGE_FUNCS[stage](config, out_dir)
        except StageError:
            raise
        except Exception as exc:
            raise StageError(stage, exc) from exc
        _record_stage(manifest, out_dir, stage, artifacts, started)
    return manifest


def resume(
    manifest_path: str | Path,
    from_stage: str,
    overrides: Optional[dict] = None,
) -> Manifest:
    """Re-execute the pipeline from from_stage using a saved manifest.

    Artifacts of every stage before from_stage must exist with checksums
    matching the manifest, otherwise the resume is refused as stale.
    Config overrides are only accepted for parameters owned by the
    resumed stages."""
    if from_stage not in STAGES:
        raise DataError(f"unknown stage {from_stage!r}; expected one of {', '.join(STAGES)}")
    manifest = Manifest.load(manifest_path)
    config_data = manifest.config.to_dict()

    start_index = STAGES.index(from_stage)
    for key, value in (overrides or {}).items():
        owner = STAGE_OF_PARAM.get(key)
        if owner is None:
            raise DataError(f"cannot override unknown or fixed parameter {key!r}")
        if STAGES.index(owner) < start_index:
            raise DataError(
                f"cannot override {key!r} when resuming from {from_stage!r}: it "
                f"belongs to the earlier stage {owner!r}"
            )
        config_data[key] = value
    config = PipelineConfig.from_dict(config_data)

    out_dir = Path(config.out_dir)
    for stage in STAGES[:start_index]:
        entry = manifest.stages.get(stage)
        if entry is None or entry.get("status") != "ok":
            raise DataError(f"cannot resume from {from_stage!r}: stage {stage!r} never completed")
        for name, info in entry["artifacts"].items():
            path = out_dir / info["path"]
            if not path.exists():
                raise DataError(f"cannot resume: artifact {name!r} missing at {path}")
            if file_sha256(path) != info["sha256"]:
                raise DataError(
                    f"cannot resume: artifact {name!r} at {path} has a checksum "
                    f"mismatch (stale or corrupted)"
                )
    return run_pipeline(config, from_stage=from_stage)
