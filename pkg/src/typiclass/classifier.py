"""Nearest-neighbor labeling with typicality-gated acceptance.

Every unlabeled document takes the category of its closest labeled seed
in proportion space (Euclidean distance). Its typicality is the mean
distance to all seeds of that category; documents whose typicality
exceeds the acceptance threshold are kept in the output but marked
rejected. Low typicality means representative of the category: 0 is a
perfect match with the seed set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .corpus import Corpus
from .errors import DataError
from .labels import CategoryLabel
from .topic_model import TopicModel, all_doc_proportions

DEFAULT_THRESHOLD = 0.275

Seed = tuple[str, CategoryLabel, np.ndarray]


@dataclass
class ClassificationResult:
    doc_id: str
    neighbor_id: str
    category: CategoryLabel
    nn_distance: float
    typicality: float
    accepted: bool


def distance(x: np.ndarray, y: np.ndarray) -> float:
    """Euclidean distance between two proportion vectors."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    return float(np.sqrt(np.sum((y - x) ** 2)))


def nearest_neighbor(u: np.ndarray, seeds: Sequence[Seed]) -> tuple[str, CategoryLabel, float]:
    """Closest seed to u; ties break toward the ascending seed id."""
    if not seeds:
        raise DataError("seed set is empty")
    best = None
    for seed_id, label, vec in sorted(seeds, key=lambda s: s[0]):
        d = distance(u, vec)
        if best is None or d < best[2]:
            best = (seed_id, label, d)
    return best


def typicality(u: np.ndarray, category_seeds: Sequence[np.ndarray]) -> float:
    """Mean distance from u to every seed of one category."""
    if len(category_seeds) == 0:
        raise DataError("category has no seed documents; typicality is undefined")
    return sum(distance(u, s) for s in category_seeds) / len(category_seeds)


def classify(
    u: tuple[str, np.ndarray],
    seeds: Sequence[Seed],
    threshold: float = DEFAULT_THRESHOLD,
) -> ClassificationResult:
    """Label one document by nearest neighbor and gate it by typicality
    against the winning category's seeds (accept iff typicality <=
    threshold)."""
    if threshold < 0:
        raise ValueError("threshold must be >= 0")
    doc_id, vec = u
    neighbor_id, label, nn_dist = nearest_neighbor(vec, seeds)
    cat_seeds = [s[2] for s in seeds if s[1] == label]
    typ = typicality(vec, cat_seeds)
    return ClassificationResult(
        doc_id=doc_id,
        neighbor_id=neighbor_id,
        category=label,
        nn_distance=nn_dist,
        typicality=typ,
        accepted=typ <= threshold,
    )


def document_vectors(
    corpus: Corpus, model: Optional[TopicModel], mode: str = "topic"
) -> np.ndarray:
    """Embedding of every corpus document, row-aligned with
    corpus.documents.

    "topic" uses the trained model's smoothed topic proportions (the
    corpus must be the model's training corpus); "word" uses the
    normalized bag of words over the vocabulary and needs no model.
    """
    if mode == "topic":
        if model is None:
            raise DataError("topic mode requires a trained model")
        if model.vocab_sha256() != corpus.vocabulary.sha256():
            raise DataError("model/corpus mismatch: vocabulary hashes differ")
        if model.doc_ids != [d.id for d in corpus.documents]:
            raise DataError("model/corpus mismatch: document ids differ")
        return all_doc_proportions(model)
    if mode == "word":
        v = len(corpus.vocabulary)
        out = np.zeros((len(corpus.documents), v), dtype=np.float64)
        for i, doc in enumerate(corpus.documents):
            counts = np.bincount(np.asarray(doc.tokens, dtype=np.int64), minlength=v)
            total = counts.sum()
            if total == 0:
                raise DataError(f"document {doc.id!r} has no tokens; cannot embed")
            out[i] = counts / total
        return out
    raise ValueError(f"unknown representation mode {mode!r}")


def _pairwise_distances(targets: np.ndarray, seeds: np.ndarray) -> np.ndarray:
    """Euclidean distances, rows = targets, columns = seeds. Chunked to
    bound memory on large target sets."""
    out = np.empty((targets.shape[0], seeds.shape[0]), dtype=np.float64)
    chunk = max(1, 2**22 // max(1, seeds.shape[0] * seeds.shape[1]))
    for start in range(0, targets.shape[0], chunk):
        block = targets[start:start + chunk]
        diff = block[:, None, :] - seeds[None, :, :]
        out[start:start + chunk] = np.sqrt(np.sum(diff * diff, axis=2))
    return out


def classify_corpus(
    corpus: Corpus,
    model: Optional[TopicModel],
    threshold: float = DEFAULT_THRESHOLD,
    mode: str = "topic",
) -> list[ClassificationResult]:
    """Classify every unlabeled document against the labeled seeds.

    Rejected documents are retained with accepted=False so the kept/
    dropped accounting stays auditable. Output order follows corpus
    document order; the whole computation is deterministic.
    """
    if threshold < 0:
        raise ValueError("threshold must be >= 0")
    labeled = corpus.labeled_ids
    unlabeled = corpus.unlabeled_ids
    if not labeled:
        raise DataError("corpus has no labeled documents to act as seeds")
    if not unlabeled:
        return []

    vectors = document_vectors(corpus, model, mode)
    # Seeds sorted by id so argmin tie-breaks toward the ascending id.
    seed_order = sorted(labeled, key=lambda i: corpus.documents[i].id)
    seed_matrix = vectors[seed_order]
    seed_ids = [corpus.documents[i].id for i in seed_order]
    seed_labels = [corpus.documents[i].gold_label for i in seed_order]

    categories = sorted({lab.category for lab in seed_labels})
    cat_columns = {
        c: np.array([j for j, lab in enumerate(seed_labels) if lab.category == c])
        for c in categories
    }

    target_matrix = vectors[unlabeled]
    dists = _pairwise_distances(target_matrix, seed_matrix)
    nn_index = np.argmin(dists, axis=1)

    results = []
    for row, doc_index in enumerate(unlabeled):
        j = int(nn_index[row])
        label = seed_labels[j]
        typ = float(dists[row, cat_columns[label.category]].mean())
        results.append(
            ClassificationResult(
                doc_id=corpus.documents[doc_index].id,
                neighbor_id=seed_ids[j],
                category=label,
                nn_distance=float(dists[row, j]),
                typicality=typ,
                accepted=typ <= threshold,
            )
        )
    return results


@dataclass
class BandRow:
    """One typicality interval: [lo, hi] for the first band, (lo, hi]
    after, with hi = inf on the open-ended last band."""

    lo: float
    hi: float
    count: int = 0
    example_ids: list[str] = field(default_factory=list)
    judgments: dict[str, str] = field(default_factory=dict)

    def interval_label(self) -> str:
        hi = "inf" if math.isinf(self.hi) else f"{self.hi:g}"
        left = "[" if self.lo == 0.0 else "("
        return f"{left}{self.lo:g}, {hi}]"


JUDGMENTS = ("match", "partial_match", "mismatch")


@dataclass
class ThresholdBandTable:
    edges: list[float]
    rows: list[BandRow]

    def recommended_threshold(self) -> Optional[float]:
        """Largest finite band edge whose band, and every band below it,
        had all sampled exemplars judged at least partial_match. Bands
        with no exemplars pass vacuously; an unjudged exemplar fails."""
        best = None
        for row in self.rows:
            if math.isinf(row.hi):
                break
            ok = all(
                row.judgments.get(doc_id) in ("match", "partial_match")
                for doc_id in row.example_ids
            )
            if not ok:
                break
            best = row.hi
        return best


def band_table(
    results: Sequence[ClassificationResult],
    band_edges: Sequence[float],
    max_examples: int = 5,
    seed: int = 0,
) -> ThresholdBandTable:
    """Partition results by typicality into bands and sample up to
    max_examples exemplar doc ids per band for human review. Sampling is
    deterministic given seed and invariant to result-list order."""
    edges = [float(e) for e in band_edges]
    if any(b <= a for a, b in zip(edges, edges[1:])) or not edges:
        raise ValueError("band edges must be a non-empty strictly increasing list")

    bounds = [0.0] + edges
    rows = [BandRow(lo=bounds[i], hi=bounds[i + 1]) for i in range(len(edges))]
    rows.append(BandRow(lo=edges[-1], hi=math.inf))

    members: list[list[str]] = [[] for _ in rows]
    for r in results:
        idx = int(np.searchsorted(edges, r.typicality, side="left"))
        members[idx].append(r.doc_id)

    rng = np.random.default_rng(seed)
    for row, ids in zip(rows, members):
        ids = sorted(ids)
        row.count = len(ids)
        if ids:
            take = min(max_examples, len(ids))
            picked = rng.choice(len(ids), size=take, replace=False)
            row.example_ids = sorted(ids[int(i)] for i in picked)
    return ThresholdBandTable(edges=edges, rows=rows)


RESULT_COLUMNS = ("doc_id", "neighbor_id", "category", "nn_distance", "typicality", "accepted")


def save_results(results: Sequence[ClassificationResult], path: str | Path) -> None:
    """Write results as a TSV with a header row. Floats use shortest
    round-trip repr so files are byte-stable and lossless."""
    lines = ["\t".join(RESULT_COLUMNS)]
    for r in results:
        lines.append(
            "\t".join(
                (
                    r.doc_id,
                    r.neighbor_id,
                    r.category.category,
                    repr(r.nn_distance),
                    repr(r.typicality),
                    "true" if r.accepted else "false",
                )
            )
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_results(path: str | Path) -> list[ClassificationResult]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0].split("\t") != list(RESULT_COLUMNS):
        raise DataError(f"{path}: not a classification results file")
    out = []
    for lineno, line in enumerate(lines[1:], 2):
        parts = line.split("\t")
        if len(parts) != len(RESULT_COLUMNS):
            raise DataError(f"{path}:{lineno}: expected {len(RESULT_COLUMNS)} fields")
        out.append(
            ClassificationResult(
                doc_id=parts[0],
                neighbor_id=parts[1],
                category=CategoryLabel.parse(parts[2]),
                nn_distance=float(parts[3]),
                typicality=float(parts[4]),
                accepted=parts[5] == "true",
            )
        )
    return out
