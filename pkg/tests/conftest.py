import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # fixtures.py / oracles.py

from typiclass import synthgen

DATA_DIR = Path(__file__).parent / "data"

FIVE_CLASSES = [
    ("positive_outcomes", [8, 0.2, 0.2, 0.2, 0.2]),
    ("descriptive_norms", [0.2, 8, 0.2, 0.2, 0.2]),
    ("ease", [0.2, 0.2, 8, 0.2, 0.2]),
    ("methods", [0.2, 0.2, 0.2, 8, 0.2]),
    ("sources_help", [0.2, 0.2, 0.2, 0.2, 8]),
]


def make_plant(k=5, vocab_size=200, within_mass=0.95, seed=11,
               doc_length_range=(20, 50), classes=None):
    specs = [
        synthgen.ClassSpec(name, mix)
        for name, mix in (classes or FIVE_CLASSES)[: max(2, k)]
    ]
    return synthgen.PlantedModel(
        topics=synthgen.block_topics(k, vocab_size, within_mass),
        classes=specs,
        doc_length_range=doc_length_range,
        seed=seed,
    )


@pytest.fixture(scope="session")
def small_plant():
    return make_plant()


@pytest.fixture(scope="session")
def small_generated(small_plant):
    return synthgen.generate(small_plant, 300, 0.1, balanced=True)


@pytest.fixture(scope="session")
def small_corpus(small_generated):
    return small_generated.to_corpus()
