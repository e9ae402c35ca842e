"""Synthetic corpus generation with known ground truth.

Documents are drawn from the topic-model generative process: a class is
chosen per document, topic proportions come from the class's Dirichlet
mixture prior, and each token is drawn topic-first, word-second from
planted topic-word rows. Because the planted distributions and true
class of every document are recorded, generated corpora serve as the
oracle for end-to-end verification: recovered topics can be matched
against planted ones and classifications scored against the truth map.

Class names must come from the 13-category label scheme so generated
records flow through normal ingestion unchanged.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .corpus import Corpus, Record, build_corpus, write_json
from .errors import DataError
from .labels import CategoryLabel


def word_token(word_index: int, vocab_size: int) -> str:
    """Synthetic word string for a planted vocabulary index ("w007")."""
    width = len(str(vocab_size - 1))
    return "w" + str(word_index).zfill(width)


def block_topics(k: int, vocab_size: int, within_mass: float = 0.95) -> np.ndarray:
    """Near-orthogonal planted rows: topic i puts within_mass uniformly
    on its own contiguous block of the vocabulary and spreads the rest
    uniformly everywhere else."""
    if not 0 < within_mass <= 1:
        raise ValueError("within_mass must be in (0, 1]")
    if vocab_size < k:
        raise ValueError("vocab_size must be >= k")
    rows = np.full((k, vocab_size), (1.0 - within_mass) / vocab_size)
    bounds = np.linspace(0, vocab_size, k + 1).astype(int)
    for i in range(k):
        lo, hi = bounds[i], bounds[i + 1]
        rows[i, lo:hi] += within_mass / (hi - lo)
    return rows / rows.sum(axis=1, keepdims=True)


@dataclass
class ClassSpec:
    """One generating class: a valid category name plus the Dirichlet
    concentration over planted topics its documents mix from."""

    name: str
    mixture: np.ndarray

    def __post_init__(self) -> None:
        CategoryLabel.parse(self.name)  # reject unknown names early
        self.mixture = np.asarray(self.mixture, dtype=np.float64)
        if self.mixture.ndim != 1 or np.any(self.mixture <= 0):
            raise DataError(f"class {self.name!r}: mixture must be positive reals")

    def expected_proportions(self) -> np.ndarray:
        return self.mixture / self.mixture.sum()


@dataclass
class PlantedModel:
    topics: np.ndarray  # (k_true, vocab_size), rows sum to 1
    classes: list[ClassSpec]
    doc_length_range: tuple[int, int]
    seed: int

    def __post_init__(self) -> None:
        self.topics = np.asarray(self.topics, dtype=np.float64)
        if self.topics.ndim != 2:
            raise DataError("topics must be a 2-d array")
        sums = self.topics.sum(axis=1)
        if np.any(np.abs(sums - 1.0) > 1e-9) or np.any(self.topics < 0):
            raise DataError("every planted topic row must be a probability vector")
        if len(self.classes) < 2:
            raise DataError("need at least two classes")
        lo, hi = self.doc_length_range
        if lo < 5 or hi < lo:
            raise DataError("doc_length_range must satisfy 5 <= min <= max")
        for spec in self.classes:
            if spec.mixture.shape[0] != self.k_true:
                raise DataError(
                    f"class {spec.name!r}: mixture length {spec.mixture.shape[0]} "
                    f"!= {self.k_true} topics"
                )
        names = [c.name for c in self.classes]
        if len(set(names)) != len(names):
            raise DataError("class names must be distinct")

    @property
    def k_true(self) -> int:
        return self.topics.shape[0]

    @property
    def vocab_size(self) -> int:
        return self.topics.shape[1]

    @classmethod
    def from_dict(cls, data: dict) -> "PlantedModel":
        if data.get("format") != "typiclass-plant":
            raise DataError("not a plant specification file")
        if data.get("version") != 1:
            raise DataError(f"unsupported plant version {data.get('version')!r}")
        topics_spec = data["topics"]
        if isinstance(topics_spec, dict):
            if topics_spec.get("kind") != "block":
                raise DataError(f"unknown topics kind {topics_spec.get('kind')!r}")
            topics = block_topics(
                k=data["k_true"],
                vocab_size=data["vocab_size"],
                within_mass=topics_spec.get("within_mass", 0.95),
            )
        else:
            topics = np.asarray(topics_spec, dtype=np.float64)
        classes = [ClassSpec(c["name"], np.asarray(c["mixture"])) for c in data["classes"]]
        return cls(
            topics=topics,
            classes=classes,
            doc_length_range=tuple(data["doc_length_range"]),
            seed=data["seed"],
        )

    @classmethod
    def load(cls, path: str | Path) -> "PlantedModel":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


@dataclass
class SyntheticCorpus:
    """Generated records plus the full truth map. Labeled records carry
    their class in the record itself (the seed set); unlabeled documents
    are still covered by the truth map and dominant-topic map."""

    records: list[Record]
    truth: dict[str, CategoryLabel]
    dominant_topic: dict[str, int]
    plant: PlantedModel

    def to_corpus(self, min_tokens: int = 5, min_token_freq: int = 1) -> Corpus:
        return build_corpus(self.records, min_tokens=min_tokens, min_token_freq=min_token_freq)

    def save_records(self, path: str | Path) -> None:
        lines = []
        for doc_id, text, label in self.records:
            obj = {"id": doc_id, "text": text}
            if label is not None:
                obj["label"] = label
            lines.append(json.dumps(obj, sort_keys=True, ensure_ascii=False))
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")

    def save_truth(self, path: str | Path) -> None:
        write_json(
            path,
            {
                "format": "typiclass-truth",
                "version": 1,
                "labels": {i: lab.category for i, lab in self.truth.items()},
                "dominant_topic": self.dominant_topic,
            },
        )


def load_truth(path: str | Path) -> dict[str, CategoryLabel]:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if data.get("format") == "typiclass-truth":
        labels = data["labels"]
    else:  # plain {id: category} map is accepted too
        labels = data
    return {i: CategoryLabel.parse(name) for i, name in labels.items()}


def _allocate_labeled(class_of: list[int], n_labeled: int, n_classes: int) -> list[int]:
    """Largest-remainder allocation of the labeled budget across classes,
    proportional to class sizes."""
    counts = np.bincount(class_of, minlength=n_classes)
    exact = counts / counts.sum() * n_labeled
    base = np.floor(exact).astype(int)
    remainder = n_labeled - base.sum()
    order = np.argsort(-(exact - base), kind="stable")
    for c in order[:remainder]:
        base[c] += 1
    return base.tolist()


def generate(
    plant: PlantedModel,
    n_docs: int,
    labeled_fraction: float,
    balanced: bool = False,
) -> SyntheticCorpus:
    """Draw a corpus from the planted model.

    Exactly round(labeled_fraction * n_docs) documents carry a gold
    label, allocated across classes proportionally to class size
    (largest remainder). balanced=True assigns classes in equal counts
    instead of drawing them, which makes per-class seed counts exact.
    Fully deterministic given plant.seed.
    """
    if n_docs < 1:
        raise DataError("n_docs must be >= 1")
    if not 0 < labeled_fraction < 1:
        raise DataError("labeled_fraction must be strictly between 0 and 1")

    rng = np.random.default_rng(plant.seed)
    n_classes = len(plant.classes)
    if balanced:
        class_of = np.tile(np.arange(n_classes), n_docs // n_classes + 1)[:n_docs]
        rng.shuffle(class_of)
        class_of = class_of.tolist()
    else:
        class_of = rng.integers(0, n_classes, size=n_docs).tolist()

    lo, hi = plant.doc_length_range
    lengths = rng.integers(lo, hi + 1, size=n_docs)

    records: list[Record] = []
    truth: dict[str, CategoryLabel] = {}
    dominant: dict[str, int] = {}
    id_width = len(str(n_docs - 1))
    vocab_size = plant.vocab_size
    for i in range(n_docs):
        spec = plant.classes[class_of[i]]
        theta = rng.dirichlet(spec.mixture)
        topics = rng.choice(plant.k_true, size=int(lengths[i]), p=theta)
        words = [int(rng.choice(vocab_size, p=plant.topics[t])) for t in topics]
        doc_id = "d" + str(i).zfill(id_width)
        text = " ".join(word_token(w, vocab_size) for w in words)
        records.append((doc_id, text, None))
        truth[doc_id] = CategoryLabel.parse(spec.name)
        dominant[doc_id] = int(np.bincount(topics, minlength=plant.k_true).argmax())

    n_labeled = int(np.floor(labeled_fraction * n_docs + 0.5))
    per_class = _allocate_labeled(class_of, n_labeled, n_classes)
    labeled_ids: set[int] = set()
    for c in range(n_classes):
        members = [i for i in range(n_docs) if class_of[i] == c]
        picked = rng.choice(len(members), size=per_class[c], replace=False)
        labeled_ids.update(members[int(j)] for j in picked)
    records = [
        (doc_id, text, plant.classes[class_of[i]].name if i in labeled_ids else None)
        for i, (doc_id, text, _) in enumerate(records)
    ]
    return SyntheticCorpus(records=records, truth=truth, dominant_topic=dominant, plant=plant)


@dataclass
class TopicMatching:
    pairs: list[tuple[int, int, float]]  # (planted index, recovered index, cosine)
    mean_cosine: float

    def cosine_of(self, planted_index: int) -> float:
        for p, _, c in self.pairs:
            if p == planted_index:
                return c
        raise KeyError(planted_index)


def _cosine(a: np.ndarray, b: np.ndarray) -> float:
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(a, b) / (na * nb))


def match_topics(recovered: np.ndarray, planted: np.ndarray) -> TopicMatching:
    """Greedy maximum-cosine assignment of each planted row to a distinct
    recovered row. Invariant under permutation of the recovered rows."""
    recovered = np.asarray(recovered, dtype=np.float64)
    planted = np.asarray(planted, dtype=np.float64)
    if recovered.ndim != 2 or planted.ndim != 2 or recovered.shape[1] != planted.shape[1]:
        raise ValueError(
            f"dimension mismatch: recovered {recovered.shape} vs planted {planted.shape}"
        )
    if recovered.shape[0] < planted.shape[0]:
        raise DataError("fewer recovered topics than planted topics; cannot match")

    sims = np.array(
        [[_cosine(p, r) for r in recovered] for p in planted], dtype=np.float64
    )
    pairs: list[tuple[int, int, float]] = []
    free_planted = set(range(planted.shape[0]))
    free_recovered = set(range(recovered.shape[0]))
    while free_planted:
        best = max(
            ((i, j) for i in free_planted for j in free_recovered),
            key=lambda ij: (sims[ij[0], ij[1]], -ij[0], -ij[1]),
        )
        i, j = best
        pairs.append((i, j, float(sims[i, j])))
        free_planted.remove(i)
        free_recovered.remove(j)
    pairs.sort()
    mean = float(np.mean([c for _, _, c in pairs]))
    return TopicMatching(pairs=pairs, mean_cosine=mean)


def align_recovered_topics(
    topic_word_counts: np.ndarray,
    beta: float,
    vocab_tokens: list[str],
    vocab_size: int,
) -> np.ndarray:
    """Reorder a trained model's smoothed topic rows onto the planted
    vocabulary indexing (synthetic word names map back to their planted
    index). Planted words absent from the training vocabulary get zero
    columns."""
    k = topic_word_counts.shape[0]
    totals = topic_word_counts.sum(axis=1, keepdims=True).astype(np.float64)
    phi = (topic_word_counts + beta) / (totals + topic_word_counts.shape[1] * beta)
    out = np.zeros((k, vocab_size), dtype=np.float64)
    token_to_id = {t: i for i, t in enumerate(vocab_tokens)}
    for j in range(vocab_size):
        idx = token_to_id.get(word_token(j, vocab_size))
        if idx is not None:
            out[:, j] = phi[:, idx]
    return out
