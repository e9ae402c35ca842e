"""Corpus ingestion: normalization, tokenization, filtering, vocabulary.

Raw records (id, text, optional category label) are normalized with
social-media cleanup rules, tokenized, filtered by a minimum token count,
and encoded against a dense vocabulary. The resulting Corpus is immutable
in practice and serializes to a versioned JSON container whose bytes are a
pure function of (records, config).
"""

from __future__ import annotations

import hashlib
import json
import re
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .errors import DataError
from .labels import CategoryLabel

# Sentinel tokens produced by normalization.
URL_TOKEN = "URL"
MENTION_TOKEN = "MENTION"
NUMBER_TOKEN = "NUMBER"
SENTINELS = (URL_TOKEN, MENTION_TOKEN, NUMBER_TOKEN)

_RT_RE = re.compile(r"^(?:RT\b:?\s*)+")
_URL_RE = re.compile(r"(?:https?://|www\.)\S+")
_MENTION_RE = re.compile(r"@\w+")
# Phone shapes like 010-1234-5678, +82-10-1234-5678, (02) 123-4567.
_PHONE_RE = re.compile(
    r"(?<!\d)(?:\+\d{1,3}[- ]?)?\(?\d{2,4}\)?[- ]\d{3,4}[- ]\d{4}(?!\d)"
)

# Timestamp shapes removed from text. Editable: pass a custom list to
# normalize_text (or set timestamp_patterns in the pipeline config).
DEFAULT_TIMESTAMP_PATTERNS = (
    # ISO-like date with optional time: 2016-08-19, 2016-08-19 12:34:56
    r"(?<!\d)\d{4}-\d{2}-\d{2}(?:[T ]\d{2}:\d{2}(?::\d{2})?)?(?!\d)",
    # Clock time with optional am/pm: 12:30, 23:59:59, 9:05 AM
    r"(?<!\d)\d{1,2}:\d{2}(?::\d{2})?(?:\s*[AaPp][Mm]\b)?(?!\d)",
)

_WS_RE = re.compile(r"\s+")


def normalize_text(
    raw: str, timestamp_patterns: Sequence[str] = DEFAULT_TIMESTAMP_PATTERNS
) -> str:
    """Clean one raw record into normalized text.

    Leading RT markers and timestamp substrings are removed; hyperlinks
    become URL, @-mentions become MENTION, phone numbers become NUMBER;
    whitespace is collapsed. Total and idempotent; may return "".
    """
    text = _RT_RE.sub("", raw.strip())
    text = _URL_RE.sub(URL_TOKEN, text)
    text = _MENTION_RE.sub(MENTION_TOKEN, text)
    text = _PHONE_RE.sub(NUMBER_TOKEN, text)
    for pattern in timestamp_patterns:
        text = re.sub(pattern, " ", text)
    return _WS_RE.sub(" ", text).strip()


def _strip_edge_punctuation(token: str) -> str:
    start, end = 0, len(token)
    while start < end and unicodedata.category(token[start]).startswith("P"):
        start += 1
    while end > start and unicodedata.category(token[end - 1]).startswith("P"):
        end -= 1
    return token[start:end]


def tokenize(normalized: str) -> list[str]:
    """Split normalized text on unicode whitespace, stripping punctuation
    from token edges. Case is preserved; sentinel tokens carry no edge
    punctuation of their own and pass through unchanged."""
    out = []
    for raw_token in normalized.split():
        token = _strip_edge_punctuation(raw_token)
        if token:
            out.append(token)
    return out


def filter_short(tokens: Sequence[str] | Sequence[int], min_tokens: int = 5) -> bool:
    """Keep decision for one tokenized document: True iff it has at least
    min_tokens tokens."""
    return len(tokens) >= min_tokens


@dataclass
class Vocabulary:
    """Dense bidirectional token<->id map with per-token document counts."""

    id_to_token: list[str] = field(default_factory=list)
    token_to_id: dict[str, int] = field(default_factory=dict)
    document_frequency: list[int] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.id_to_token)

    def __contains__(self, token: str) -> bool:
        return token in self.token_to_id

    def add(self, token: str) -> int:
        idx = self.token_to_id.get(token)
        if idx is None:
            idx = len(self.id_to_token)
            self.token_to_id[token] = idx
            self.id_to_token.append(token)
            self.document_frequency.append(0)
        return idx

    def id(self, token: str) -> int:
        return self.token_to_id[token]

    def token(self, idx: int) -> str:
        return self.id_to_token[idx]

    def sha256(self) -> str:
        payload = json.dumps(self.id_to_token, ensure_ascii=False)
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()


@dataclass
class Document:
    """One text record: identity, raw and normalized text, encoded tokens,
    and an optional human-assigned label."""

    id: str
    raw_text: str
    normalized_text: str
    tokens: list[int]
    gold_label: Optional[CategoryLabel] = None


@dataclass
class Corpus:
    documents: list[Document]
    vocabulary: Vocabulary
    min_tokens: int = 5

    def __len__(self) -> int:
        return len(self.documents)

    @property
    def labeled_ids(self) -> list[int]:
        return [i for i, d in enumerate(self.documents) if d.gold_label is not None]

    @property
    def unlabeled_ids(self) -> list[int]:
        return [i for i, d in enumerate(self.documents) if d.gold_label is None]

    def document_by_id(self, doc_id: str) -> Document:
        for d in self.documents:
            if d.id == doc_id:
                return d
        raise KeyError(doc_id)

    def to_dict(self) -> dict:
        return {
            "format": "typiclass-corpus",
            "version": 1,
            "min_tokens": self.min_tokens,
            "vocabulary": {
                "tokens": self.vocabulary.id_to_token,
                "document_frequency": self.vocabulary.document_frequency,
            },
            "documents": [
                {
                    "id": d.id,
                    "raw": d.raw_text,
                    "text": d.normalized_text,
                    "tokens": d.tokens,
                    "label": d.gold_label.category if d.gold_label else None,
                }
                for d in self.documents
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Corpus":
        if data.get("format") != "typiclass-corpus":
            raise DataError("not a corpus file")
        if data.get("version") != 1:
            raise DataError(f"unsupported corpus version {data.get('version')!r}")
        vocab = Vocabulary(
            id_to_token=list(data["vocabulary"]["tokens"]),
            document_frequency=list(data["vocabulary"]["document_frequency"]),
        )
        vocab.token_to_id = {t: i for i, t in enumerate(vocab.id_to_token)}
        docs = [
            Document(
                id=d["id"],
                raw_text=d["raw"],
                normalized_text=d["text"],
                tokens=list(d["tokens"]),
                gold_label=CategoryLabel.parse(d["label"]) if d["label"] else None,
            )
            for d in data["documents"]
        ]
        return cls(documents=docs, vocabulary=vocab, min_tokens=data["min_tokens"])

    def save(self, path: str | Path) -> None:
        write_json(path, self.to_dict())

    @classmethod
    def load(cls, path: str | Path) -> "Corpus":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def write_json(path: str | Path, payload: dict) -> None:
    """Serialize deterministically: sorted keys, fixed separators, one
    trailing newline, UTF-8."""
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    Path(path).write_text(text + "\n", encoding="utf-8")


Record = tuple[str, str, Optional[str]]


def iter_records(path: str | Path) -> Iterator[Record]:
    """Read (id, text, label) records from a JSON-lines or tab-separated
    UTF-8 file. Format is chosen by extension (.jsonl/.ndjson vs anything
    else); an empty or missing label means unlabeled."""
    path = Path(path)
    is_jsonl = path.suffix in (".jsonl", ".ndjson")
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            if is_jsonl:
                try:
                    obj = json.loads(line)
                    doc_id, text = obj["id"], obj["text"]
                    label = obj.get("label") or None
                except (json.JSONDecodeError, KeyError, TypeError) as exc:
                    raise DataError(f"{path}:{lineno}: malformed record ({exc})") from exc
            else:
                parts = line.split("\t")
                if len(parts) not in (2, 3):
                    raise DataError(
                        f"{path}:{lineno}: expected 2 or 3 tab-separated fields, "
                        f"got {len(parts)}"
                    )
                doc_id, text = parts[0], parts[1]
                label = parts[2] if len(parts) == 3 and parts[2] else None
            yield str(doc_id), str(text), label


def build_corpus(
    records: Iterable[Record],
    min_tokens: int = 5,
    min_token_freq: int = 1,
    timestamp_patterns: Sequence[str] = DEFAULT_TIMESTAMP_PATTERNS,
) -> Corpus:
    """Run the full ingestion pipeline over a record stream.

    Each record is normalized and tokenized; documents shorter than
    min_tokens are dropped. Tokens whose document frequency falls below
    min_token_freq are pruned from the vocabulary and from documents, and
    the length filter is re-applied so the min_tokens invariant holds on
    the result. Raises DataError on duplicate ids or malformed records.
    """
    if min_tokens < 0:
        raise ValueError("min_tokens must be >= 0")
    if min_token_freq < 1:
        raise ValueError("min_token_freq must be >= 1")

    seen_ids: set[str] = set()
    staged: list[tuple[str, str, str, list[str], Optional[CategoryLabel]]] = []
    for index, record in enumerate(records):
        try:
            doc_id, raw_text, label_name = record
        except (TypeError, ValueError) as exc:
            raise DataError(f"record {index}: malformed record ({exc})") from exc
        if not isinstance(doc_id, str) or not doc_id:
            raise DataError(f"record {index}: id must be a non-empty string")
        if not isinstance(raw_text, str):
            raise DataError(f"record {index}: text must be a string")
        if doc_id in seen_ids:
            raise DataError(f"record {index}: duplicate id {doc_id!r}")
        seen_ids.add(doc_id)
        label = CategoryLabel.parse(label_name) if label_name else None
        normalized = normalize_text(raw_text, timestamp_patterns)
        tokens = tokenize(normalized)
        if filter_short(tokens, min_tokens):
            staged.append((doc_id, raw_text, normalized, tokens, label))

    if min_token_freq > 1:
        df: dict[str, int] = {}
        for _, _, _, tokens, _ in staged:
            for token in set(tokens):
                df[token] = df.get(token, 0) + 1
        pruned = []
        for doc_id, raw, norm, tokens, label in staged:
            kept = [t for t in tokens if df[t] >= min_token_freq]
            if filter_short(kept, min_tokens):
                pruned.append((doc_id, raw, norm, kept, label))
        staged = pruned

    vocab = Vocabulary()
    documents = []
    for doc_id, raw, norm, tokens, label in staged:
        ids = [vocab.add(t) for t in tokens]
        for idx in set(ids):
            vocab.document_frequency[idx] += 1
        documents.append(Document(doc_id, raw, norm, ids, label))
    return Corpus(documents=documents, vocabulary=vocab, min_tokens=min_tokens)


def sample_distinct(corpus: Corpus, n: int, seed: int) -> Corpus:
    """Uniform sample without replacement over documents deduplicated by
    normalized text (first occurrence represents each duplicate group).
    Deterministic given seed; document order follows the source corpus."""
    if n < 0:
        raise ValueError("n must be >= 0")
    seen: set[str] = set()
    distinct_indices = []
    for i, doc in enumerate(corpus.documents):
        if doc.normalized_text not in seen:
            seen.add(doc.normalized_text)
            distinct_indices.append(i)
    if n > len(distinct_indices):
        raise DataError(
            f"cannot sample {n} documents: only {len(distinct_indices)} distinct "
            f"normalized texts available"
        )
    rng = np.random.default_rng(seed)
    chosen = rng.choice(len(distinct_indices), size=n, replace=False)
    picked = sorted(distinct_indices[int(j)] for j in chosen)
    return Corpus(
        documents=[corpus.documents[i] for i in picked],
        vocabulary=corpus.vocabulary,
        min_tokens=corpus.min_tokens,
    )
