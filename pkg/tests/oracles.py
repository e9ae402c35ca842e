# -*- coding: utf-8 -*-
"""Independent oracles the tests check the implementation against.

Everything here is deliberately written the slow, obvious way (scalar
loops, character scanning, stdlib only where possible) and shares no
code with the package, so an implementation bug cannot hide in its own
oracle.
"""

import math
import re
import unicodedata


def euclidean(x, y):
    """Elementwise loop distance."""
    assert len(x) == len(y)
    total = 0.0
    for a, b in zip(x, y):
        total += (b - a) * (b - a)
    return math.sqrt(total)


def exhaustive_nearest(u, seeds):
    """Scan every seed; ties break toward the lexicographically smaller
    seed id. seeds: iterable of (id, label, vector)."""
    best_id, best_label, best_dist = None, None, None
    for seed_id, label, vec in seeds:
        d = euclidean(u, vec)
        if best_dist is None or d < best_dist or (d == best_dist and seed_id < best_id):
            best_id, best_label, best_dist = seed_id, label, d
    return best_id, best_label, best_dist


def mean_distance(u, vectors):
    total = 0.0
    for v in vectors:
        total += euclidean(u, v)
    return total / len(vectors)


def histogram(values, edges):
    """Band counts for intervals [0, e0], (e0, e1], ..., (e_last, inf)."""
    counts = [0] * (len(edges) + 1)
    for value in values:
        placed = False
        for i, edge in enumerate(edges):
            if value <= edge:
                counts[i] += 1
                placed = True
                break
        if not placed:
            counts[-1] += 1
    return counts


def likelihood_classify(token_word_indices, class_names, class_word_probs):
    """Brute-force generative oracle: pick the class maximizing
    sum(log P(word | class)) over the document's planted word indices."""
    best_name, best_score = None, None
    for name, probs in zip(class_names, class_word_probs):
        score = 0.0
        for w in token_word_indices:
            score += math.log(probs[w])
        if best_score is None or score > best_score:
            best_name, best_score = name, score
    return best_name


def oracle_normalize(s):
    """Fresh implementation of the documented normalization rules."""
    s = s.strip()
    while True:
        m = re.match(r"RT\b:?\s*", s)
        if not m:
            break
        s = s[m.end():]
    s = re.sub(r"https?://[^\s]+", "URL", s)
    s = re.sub(r"www\.[^\s]+", "URL", s)
    s = re.sub(r"@\w+", "MENTION", s)
    s = re.sub(
        r"(?<![0-9])(?:\+[0-9]{1,3}[- ]?)?\(?[0-9]{2,4}\)?[- ][0-9]{3,4}[- ][0-9]{4}(?![0-9])",
        "NUMBER",
        s,
    )
    s = re.sub(
        r"(?<![0-9])[0-9]{4}-[0-9]{2}-[0-9]{2}(?:[T ][0-9]{2}:[0-9]{2}(?::[0-9]{2})?)?(?![0-9])",
        " ",
        s,
    )
    s = re.sub(
        r"(?<![0-9])[0-9]{1,2}:[0-9]{2}(?::[0-9]{2})?(?:\s*[AaPp][Mm]\b)?(?![0-9])",
        " ",
        s,
    )
    return " ".join(s.split())


def oracle_tokens(s):
    """Character-scanning tokenizer: whitespace split, edge punctuation
    peeled off one character at a time."""
    tokens = []
    for chunk in s.split():
        chars = list(chunk)
        while chars and unicodedata.category(chars[0])[0] == "P":
            chars.pop(0)
        while chars and unicodedata.category(chars[-1])[0] == "P":
            chars.pop()
        if chars:
            tokens.append("".join(chars))
    return tokens


def recount_fixture(path):
    """Recount surviving documents and distinct tokens of a TSV record
    file under the 5-token rule."""
    survivors, vocab = [], set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            parts = line.rstrip("\n").split("\t")
            toks = oracle_tokens(oracle_normalize(parts[1]))
            if len(toks) >= 5:
                survivors.append(parts[0])
                vocab.update(toks)
    return survivors, vocab
