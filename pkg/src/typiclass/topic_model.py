"""Topic model trained by collapsed Gibbs sampling.

Labeled and unlabeled documents are trained jointly so both live in one
shared embedding space. The sampler keeps the usual count tables
(topic x word, topic totals, document x topic) and resamples each token's
topic from the collapsed conditional

    p(k) ~ (doc_topic[d,k] + alpha) * (topic_word[k,w] + beta)
           / (topic_totals[k] + V*beta)

with the current token excluded from all counts. All randomness flows
from one seeded numpy PCG64 stream, so training is reproducible
bit-for-bit. The per-sweep inner loop is JIT-compiled with numba when
available; the interpreted fallback runs the same statements in the same
order and produces identical results.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Optional

import numpy as np

from .corpus import Corpus
from .errors import DataError, InvariantError


def _sweep_impl(tokens, docs, z, topic_word, topic_totals, doc_topic,
                alpha, beta, v_beta, uniforms):
    n = tokens.shape[0]
    k_topics = topic_totals.shape[0]
    p = np.empty(k_topics, np.float64)
    for i in range(n):
        w = tokens[i]
        d = docs[i]
        old = z[i]
        topic_word[old, w] -= 1
        topic_totals[old] -= 1
        doc_topic[d, old] -= 1
        total = 0.0
        for k in range(k_topics):
            p[k] = (doc_topic[d, k] + alpha) * (topic_word[k, w] + beta) \
                / (topic_totals[k] + v_beta)
            total += p[k]
        u = uniforms[i] * total
        new = k_topics - 1
        acc = 0.0
        for k in range(k_topics):
            acc += p[k]
            if u < acc:
                new = k
                break
        z[i] = new
        topic_word[new, w] += 1
        topic_totals[new] += 1
        doc_topic[d, new] += 1


try:
    from numba import njit

    _sweep = njit(cache=True)(_sweep_impl)
    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _sweep = _sweep_impl
    HAS_NUMBA = False


@dataclass
class TopicModel:
    """Trained sampler state: hyperparameters, count tables, and the
    per-token topic assignments they were accumulated from."""

    k: int
    v: int
    alpha: float
    beta: float
    seed: int
    sweeps: int
    topic_word_counts: np.ndarray  # (k, v) int64
    topic_totals: np.ndarray  # (k,) int64
    doc_topic_counts: np.ndarray  # (n_docs, k) int64
    assignments: list[np.ndarray]  # per document, int64
    doc_ids: list[str]
    vocab_tokens: list[str]

    @property
    def n_docs(self) -> int:
        return len(self.doc_ids)

    def vocab_sha256(self) -> str:
        import hashlib

        payload = json.dumps(self.vocab_tokens, ensure_ascii=False)
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def check_invariants(self) -> None:
        """Count conservation; raises InvariantError on any violation."""
        if self.k < 1 or self.alpha <= 0 or self.beta <= 0:
            raise InvariantError("hyperparameters out of range")
        if not np.array_equal(self.topic_word_counts.sum(axis=1), self.topic_totals):
            raise InvariantError("topic_word_counts rows do not sum to topic_totals")
        doc_lengths = np.array([len(a) for a in self.assignments], dtype=np.int64)
        if not np.array_equal(self.doc_topic_counts.sum(axis=1), doc_lengths):
            raise InvariantError("doc_topic_counts rows do not sum to document lengths")
        if int(self.topic_totals.sum()) != int(doc_lengths.sum()):
            raise InvariantError("topic_totals do not sum to the corpus token count")

    def to_dict(self) -> dict:
        return {
            "format": "typiclass-model",
            "version": 1,
            "k": self.k,
            "v": self.v,
            "alpha": self.alpha,
            "beta": self.beta,
            "seed": self.seed,
            "sweeps": self.sweeps,
            "vocabulary_sha256": self.vocab_sha256(),
            "vocabulary": self.vocab_tokens,
            "topic_word_counts": self.topic_word_counts.tolist(),
            "topic_totals": self.topic_totals.tolist(),
            "doc_topic_counts": self.doc_topic_counts.tolist(),
            "doc_ids": self.doc_ids,
            "assignments": [a.tolist() for a in self.assignments],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TopicModel":
        if data.get("format") != "typiclass-model":
            raise DataError("not a model file")
        if data.get("version") != 1:
            raise DataError(f"unsupported model version {data.get('version')!r}")
        model = cls(
            k=data["k"],
            v=data["v"],
            alpha=data["alpha"],
            beta=data["beta"],
            seed=data["seed"],
            sweeps=data["sweeps"],
            topic_word_counts=np.array(data["topic_word_counts"], dtype=np.int64),
            topic_totals=np.array(data["topic_totals"], dtype=np.int64),
            doc_topic_counts=np.array(data["doc_topic_counts"], dtype=np.int64),
            assignments=[np.array(a, dtype=np.int64) for a in data["assignments"]],
            doc_ids=list(data["doc_ids"]),
            vocab_tokens=list(data["vocabulary"]),
        )
        if data["vocabulary_sha256"] != model.vocab_sha256():
            raise DataError("model file corrupt: vocabulary hash mismatch")
        return model

    def save(self, path: str | Path) -> None:
        from .corpus import write_json

        write_json(path, self.to_dict())

    @classmethod
    def load(cls, path: str | Path) -> "TopicModel":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def train(
    corpus: Corpus,
    k: int,
    alpha: Optional[float] = None,
    beta: float = 0.01,
    sweeps: int = 1000,
    seed: int = 0,
    on_sweep: Optional[Callable[[int, TopicModel], None]] = None,
) -> TopicModel:
    """Train by collapsed Gibbs sampling.

    alpha defaults to 50/k. on_sweep, when given, is called after every
    full pass with (sweep_index, live model view); it exists as a debug
    hook for invariant checks and progress reporting.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if sweeps < 1:
        raise ValueError("sweeps must be >= 1")
    if alpha is None:
        alpha = 50.0 / k
    if alpha <= 0 or beta <= 0:
        raise ValueError("alpha and beta must be > 0")
    if not corpus.documents:
        raise DataError("cannot train on an empty corpus")

    doc_lengths = [len(d.tokens) for d in corpus.documents]
    n_tokens = sum(doc_lengths)
    if n_tokens == 0:
        raise DataError("cannot train on a corpus with no tokens")
    v = len(corpus.vocabulary)

    tokens = np.fromiter(
        (t for d in corpus.documents for t in d.tokens), dtype=np.int64, count=n_tokens
    )
    docs = np.repeat(np.arange(len(corpus.documents), dtype=np.int64), doc_lengths)

    rng = np.random.default_rng(seed)
    z = rng.integers(0, k, size=n_tokens, dtype=np.int64)

    topic_word = np.zeros((k, v), dtype=np.int64)
    topic_totals = np.zeros(k, dtype=np.int64)
    doc_topic = np.zeros((len(corpus.documents), k), dtype=np.int64)
    np.add.at(topic_word, (z, tokens), 1)
    np.add.at(topic_totals, z, 1)
    np.add.at(doc_topic, (docs, z), 1)

    offsets = np.concatenate(([0], np.cumsum(doc_lengths)))

    def snapshot() -> TopicModel:
        return TopicModel(
            k=k,
            v=v,
            alpha=alpha,
            beta=beta,
            seed=seed,
            sweeps=sweeps,
            topic_word_counts=topic_word,
            topic_totals=topic_totals,
            doc_topic_counts=doc_topic,
            assignments=[z[offsets[i]:offsets[i + 1]] for i in range(len(doc_lengths))],
            doc_ids=[d.id for d in corpus.documents],
            vocab_tokens=list(corpus.vocabulary.id_to_token),
        )

    for sweep_index in range(sweeps):
        uniforms = rng.random(n_tokens)
        _sweep(tokens, docs, z, topic_word, topic_totals, doc_topic,
               alpha, beta, v * beta, uniforms)
        if on_sweep is not None:
            on_sweep(sweep_index, snapshot())

    model = snapshot()
    model.assignments = [a.copy() for a in model.assignments]
    model.check_invariants()
    return model


def topic_word_distribution(model: TopicModel, k: int) -> np.ndarray:
    """Smoothed word distribution of one topic; sums to 1."""
    if not 0 <= k < model.k:
        raise ValueError(f"topic {k} out of range [0, {model.k})")
    counts = model.topic_word_counts[k].astype(np.float64)
    return (counts + model.beta) / (model.topic_totals[k] + model.v * model.beta)


def top_words(model: TopicModel, k: int, threshold: float = 0.01) -> list[str]:
    """Words with probability strictly above threshold, most probable
    first; ties break toward the lower word id."""
    if not 0 <= threshold <= 1:
        raise ValueError("threshold must be in [0, 1]")
    probs = topic_word_distribution(model, k)
    picked = np.flatnonzero(probs > threshold)
    order = sorted(picked, key=lambda w: (-probs[w], w))
    return [model.vocab_tokens[w] for w in order]


def top_word_probs(model: TopicModel, k: int, threshold: float = 0.01) -> list[tuple[str, float]]:
    probs = topic_word_distribution(model, k)
    picked = np.flatnonzero(probs > threshold)
    order = sorted(picked, key=lambda w: (-probs[w], w))
    return [(model.vocab_tokens[w], float(probs[w])) for w in order]


def doc_proportions(model: TopicModel, doc_index: int) -> np.ndarray:
    """Exact smoothed topic proportions of a training document, straight
    from the stored counts."""
    if not 0 <= doc_index < model.n_docs:
        raise ValueError(f"document index {doc_index} out of range")
    counts = model.doc_topic_counts[doc_index].astype(np.float64)
    return (counts + model.alpha) / (counts.sum() + model.k * model.alpha)


def all_doc_proportions(model: TopicModel) -> np.ndarray:
    """Exact smoothed topic proportions for every training document,
    row-aligned with model.doc_ids."""
    counts = model.doc_topic_counts.astype(np.float64)
    lengths = counts.sum(axis=1, keepdims=True)
    return (counts + model.alpha) / (lengths + model.k * model.alpha)


def infer_proportions(
    model: TopicModel,
    token_ids: Iterable[int],
    sweeps: int = 100,
    seed: int = 0,
) -> np.ndarray:
    """Fold-in inference for a document outside the training corpus.

    Topic-word counts stay frozen; only the document's own topic counts
    are resampled. Out-of-vocabulary ids are skipped; a document with no
    in-vocabulary tokens cannot be embedded and raises DataError.
    """
    if sweeps < 1:
        raise ValueError("sweeps must be >= 1")
    ids = np.array([t for t in token_ids if 0 <= t < model.v], dtype=np.int64)
    if ids.size == 0:
        raise DataError("document has no in-vocabulary tokens; cannot embed")

    denom = model.topic_totals.astype(np.float64) + model.v * model.beta
    word_weight = (model.topic_word_counts[:, ids].astype(np.float64) + model.beta) / denom[:, None]

    rng = np.random.default_rng(seed)
    z = rng.integers(0, model.k, size=ids.size, dtype=np.int64)
    local = np.bincount(z, minlength=model.k).astype(np.float64)
    for _ in range(sweeps):
        uniforms = rng.random(ids.size)
        for i in range(ids.size):
            local[z[i]] -= 1.0
            p = (local + model.alpha) * word_weight[:, i]
            u = uniforms[i] * p.sum()
            new = int(np.searchsorted(np.cumsum(p), u, side="right"))
            new = min(new, model.k - 1)
            z[i] = new
            local[new] += 1.0
    return (local + model.alpha) / (ids.size + model.k * model.alpha)
