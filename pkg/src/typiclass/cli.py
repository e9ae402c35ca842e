"""Command-line interface.

Subcommands mirror the pipeline stages (ingest, train, topics, classify,
calibrate, report, synthgen) plus whole-run orchestration (run, resume).
Exit codes: 0 success, 1 usage error, 2 data error, 3 internal invariant
violation.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import classifier, metrics, pipeline, synthgen, topic_model
from .corpus import Corpus, build_corpus, iter_records, sample_distinct
from .errors import DataError, InvariantError


@click.group()
def cli() -> None:
    """Semi-supervised document classification with typicality gating."""


@cli.command()
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--min-tokens", default=5, show_default=True)
@click.option("--min-token-freq", default=1, show_default=True)
@click.option("--sample", "sample_size", default=None, type=int,
              help="Keep a random sample of this many distinct documents.")
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path())
def ingest(input_path, min_tokens, min_token_freq, sample_size, seed, out_path):
    """Build a corpus file from raw records (.jsonl or .tsv)."""
    corpus = build_corpus(
        iter_records(input_path), min_tokens=min_tokens, min_token_freq=min_token_freq
    )
    if sample_size is not None:
        corpus = sample_distinct(corpus, sample_size, seed)
    corpus.save(out_path)
    labeled = len(corpus.labeled_ids)
    click.echo(
        f"wrote {out_path}: {len(corpus)} documents ({labeled} labeled), "
        f"vocabulary {len(corpus.vocabulary)}"
    )


@cli.command()
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--topics", "k", default=100, show_default=True)
@click.option("--alpha", default=None, type=float, help="Defaults to 50/topics.")
@click.option("--beta", default=0.01, show_default=True)
@click.option("--sweeps", default=1000, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path())
def train(corpus_path, k, alpha, beta, sweeps, seed, out_path):
    """Train the topic model by collapsed Gibbs sampling."""
    corpus = Corpus.load(corpus_path)
    model = topic_model.train(corpus, k=k, alpha=alpha, beta=beta, sweeps=sweeps, seed=seed)
    model.save(out_path)
    click.echo(
        f"wrote {out_path}: {model.k} topics over {model.v} words, "
        f"{model.sweeps} sweeps, seed {model.seed}"
    )


@cli.command()
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--threshold", default=0.01, show_default=True,
              help="Minimum word probability to list.")
@click.option("--topic", "only_topic", default=None, type=int,
              help="Print a single topic.")
def topics(model_path, threshold, only_topic):
    """List each topic's words above the probability threshold."""
    model = topic_model.TopicModel.load(model_path)
    indices = [only_topic] if only_topic is not None else range(model.k)
    for k in indices:
        words = topic_model.top_word_probs(model, k, threshold)
        rendered = ", ".join(f"{w} ({p:.3f})" for w, p in words) or "(none above threshold)"
        click.echo(f"topic {k}: {rendered}")


@cli.command()
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--model", "model_path", default=None, type=click.Path(exists=True),
              help="Required in topic mode.")
@click.option("--threshold", default=classifier.DEFAULT_THRESHOLD, show_default=True)
@click.option("--mode", default="topic", show_default=True,
              type=click.Choice(["topic", "word"]))
@click.option("--out", "out_path", required=True, type=click.Path())
def classify(corpus_path, model_path, threshold, mode, out_path):
    """Label unlabeled documents by nearest seed and typicality gate."""
    corpus = Corpus.load(corpus_path)
    model = topic_model.TopicModel.load(model_path) if model_path else None
    results = classifier.classify_corpus(corpus, model, threshold=threshold, mode=mode)
    classifier.save_results(results, out_path)
    accepted = sum(r.accepted for r in results)
    click.echo(f"wrote {out_path}: {len(results)} classified, {accepted} accepted")


def _parse_edges(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise click.UsageError(f"invalid --edges value: {exc}") from exc


@cli.command()
@click.option("--results", "results_path", required=True, type=click.Path(exists=True))
@click.option("--edges", required=True, help="Comma-separated band edges, e.g. 0.1,0.2,0.275")
@click.option("--examples", "max_examples", default=5, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--corpus", "corpus_path", default=None, type=click.Path(exists=True),
              help="Show document text next to sampled ids.")
@click.option("--judgments", "judgments_path", default=None, type=click.Path(exists=True),
              help="JSON doc_id->judgment map; skips interactive prompts.")
def calibrate(results_path, edges, max_examples, seed, corpus_path, judgments_path):
    """Review typicality bands and recommend an acceptance threshold.

    Each sampled exemplar is judged match / partial_match / mismatch,
    interactively or from a judgments file. The recommendation is the
    largest band edge whose bands so far were all judged at least
    partial_match."""
    results = classifier.load_results(results_path)
    table = classifier.band_table(
        results, _parse_edges(edges), max_examples=max_examples, seed=seed
    )
    texts = {}
    if corpus_path:
        corpus = Corpus.load(corpus_path)
        texts = {d.id: d.normalized_text for d in corpus.documents}
    judgments = {}
    if judgments_path:
        judgments = json.loads(Path(judgments_path).read_text(encoding="utf-8"))
        bad = {v for v in judgments.values()} - set(classifier.JUDGMENTS)
        if bad:
            raise DataError(f"invalid judgments: {', '.join(sorted(bad))}")

    for row in table.rows:
        click.echo(f"band {row.interval_label()}: {row.count} documents")
        for doc_id in row.example_ids:
            shown = f"  {doc_id}"
            if doc_id in texts:
                shown += f"  {texts[doc_id]}"
            if judgments:
                judgment = judgments.get(doc_id)
                if judgment is None:
                    raise DataError(f"judgments file missing entry for {doc_id!r}")
                click.echo(f"{shown}  -> {judgment}")
            else:
                click.echo(shown)
                judgment = click.prompt(
                    "    judgment",
                    type=click.Choice(list(classifier.JUDGMENTS)),
                    show_choices=True,
                )
            row.judgments[doc_id] = judgment

    recommended = table.recommended_threshold()
    if recommended is None:
        click.echo("recommended threshold: none (first band already failed review)")
    else:
        click.echo(f"recommended threshold: {recommended:g}")


@cli.command()
@click.option("--results", "results_path", required=True, type=click.Path(exists=True))
@click.option("--gold", "gold_path", default=None, type=click.Path(exists=True),
              help="JSON truth map for accuracy reporting.")
@click.option("--validation-fraction", default=1.0, show_default=True,
              help="Fraction of accepted documents to evaluate against gold.")
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_dir", required=True, type=click.Path())
def report(results_path, gold_path, validation_fraction, seed, out_dir):
    """Write frequency (and optional accuracy) reports as text and CSV."""
    results = classifier.load_results(results_path)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    freq = metrics.frequency_report(results)
    sections = [metrics.render_report(freq, title="Category frequencies (accepted documents)")]
    (out / "frequency.csv").write_text(metrics.report_csv(freq), encoding="utf-8")
    if gold_path:
        gold = synthgen.load_truth(gold_path)
        sample = metrics.validation_sample(results, fraction=validation_fraction, seed=seed)
        acc = metrics.accuracy_report(sample, gold)
        sections.append(
            metrics.render_report(
                acc, title=f"Accuracy on validation sample ({len(sample)} documents)"
            )
        )
        (out / "accuracy.csv").write_text(metrics.report_csv(acc), encoding="utf-8")
    (out / "report.txt").write_text("\n".join(sections), encoding="utf-8")
    click.echo(f"wrote reports to {out}")


@cli.command(name="synthgen")
@click.option("--spec", "spec_path", required=True, type=click.Path(exists=True))
@click.option("--docs", "n_docs", required=True, type=int)
@click.option("--labeled", "labeled_fraction", required=True, type=float)
@click.option("--balanced", is_flag=True, help="Equal class counts instead of random draws.")
@click.option("--out", "out_dir", required=True, type=click.Path())
def synthgen_cmd(spec_path, n_docs, labeled_fraction, balanced, out_dir):
    """Generate a synthetic corpus with a known truth map."""
    plant = synthgen.PlantedModel.load(spec_path)
    generated = synthgen.generate(plant, n_docs, labeled_fraction, balanced=balanced)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    generated.save_records(out / "records.jsonl")
    generated.save_truth(out / "truth.json")
    generated.to_corpus().save(out / "corpus.json")
    labeled = sum(1 for _, _, lab in generated.records if lab is not None)
    click.echo(
        f"wrote {out}: {n_docs} documents ({labeled} labeled), "
        f"{plant.k_true} planted topics, {len(plant.classes)} classes"
    )


@cli.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
def run(config_path):
    """Run the full pipeline from a JSON config file."""
    config = pipeline.PipelineConfig.load(config_path)
    manifest = pipeline.run_pipeline(config)
    click.echo(f"run complete; manifest at {Path(config.out_dir) / 'manifest.json'}")
    for stage, entry in manifest.stages.items():
        click.echo(f"  {stage}: {entry['duration_s']}s")


@cli.command(name="resume")
@click.option("--manifest", "manifest_path", required=True, type=click.Path(exists=True))
@click.option("--from", "from_stage", required=True,
              type=click.Choice(list(pipeline.STAGES)))
@click.option("--set", "overrides", multiple=True, metavar="KEY=VALUE",
              help="Override a config parameter owned by a resumed stage.")
def resume_cmd(manifest_path, from_stage, overrides):
    """Re-run the pipeline from a stage, reusing verified artifacts."""
    parsed: dict = {}
    for item in overrides:
        if "=" not in item:
            raise click.UsageError(f"--set expects KEY=VALUE, got {item!r}")
        key, value = item.split("=", 1)
        try:
            parsed[key] = json.loads(value)
        except json.JSONDecodeError:
            parsed[key] = value
    manifest = pipeline.resume(manifest_path, from_stage, parsed or None)
    click.echo(f"resume complete from {from_stage!r}")
    for stage, entry in manifest.stages.items():
        click.echo(f"  {stage}: {entry['duration_s']}s")


def main(argv=None) -> int:
    """Entry point with the documented exit-code mapping."""
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.UsageError as exc:
        exc.show()
        return 1
    except click.Abort:
        click.echo("aborted", err=True)
        return 1
    except InvariantError as exc:
        click.echo(f"internal error: {exc}", err=True)
        return 3
    except (DataError, ValueError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
