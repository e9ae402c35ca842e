"""typiclass: semi-supervised document classification.

Documents are embedded with a Gibbs-sampled topic model, labeled by the
nearest human-annotated seed, and accepted or rejected by a typicality
(mean distance to the category's seeds) threshold. Includes a synthetic
corpus generator so every stage is verifiable against planted ground
truth, plus agreement/accuracy reporting.
"""

from .classifier import (
    ClassificationResult,
    ThresholdBandTable,
    band_table,
    classify,
    classify_corpus,
    distance,
    nearest_neighbor,
    typicality,
)
from .corpus import (
    Corpus,
    Document,
    Vocabulary,
    build_corpus,
    filter_short,
    iter_records,
    normalize_text,
    sample_distinct,
    tokenize,
)
from .errors import DataError, InvariantError
from .labels import CATEGORIES, GROUPS, CategoryLabel
from .metrics import (
    AgreementReport,
    ReliabilityData,
    accuracy_report,
    frequency_report,
    krippendorff_alpha,
    percent_agreement,
    validation_sample,
)
from .pipeline import Manifest, PipelineConfig, resume, run_pipeline
from .synthgen import PlantedModel, SyntheticCorpus, generate, match_topics
from .topic_model import (
    TopicModel,
    infer_proportions,
    top_words,
    topic_word_distribution,
    train,
)

__version__ = "0.1.0"

__all__ = [
    "AgreementReport",
    "CATEGORIES",
    "CategoryLabel",
    "ClassificationResult",
    "Corpus",
    "DataError",
    "Document",
    "GROUPS",
    "InvariantError",
    "Manifest",
    "PipelineConfig",
    "PlantedModel",
    "ReliabilityData",
    "SyntheticCorpus",
    "ThresholdBandTable",
    "TopicModel",
    "Vocabulary",
    "accuracy_report",
    "band_table",
    "build_corpus",
    "classify",
    "classify_corpus",
    "distance",
    "filter_short",
    "frequency_report",
    "generate",
    "infer_proportions",
    "iter_records",
    "krippendorff_alpha",
    "match_topics",
    "nearest_neighbor",
    "normalize_text",
    "percent_agreement",
    "resume",
    "run_pipeline",
    "sample_distinct",
    "tokenize",
    "top_words",
    "topic_word_distribution",
    "train",
    "typicality",
    "validation_sample",
]
