"""The fixed 13-category label scheme.

Categories describe what a message conveys about a behavior and fall into
three groups: attitude (outcome beliefs), subjective_norm (social
approval and prevalence), and pbc (perceived behavioral control:
feasibility, methods, places, sources). The set is closed: unknown
category names are rejected at parse time.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DataError

GROUPS = ("attitude", "subjective_norm", "pbc")

# Canonical category order; doubles as the report row order.
CATEGORY_GROUP: dict[str, str] = {
    "positive_outcomes": "attitude",
    "negative_outcomes": "attitude",
    "approval_significant_others": "subjective_norm",
    "disapproval_significant_others": "subjective_norm",
    "approval_others": "subjective_norm",
    "disapproval_others": "subjective_norm",
    "descriptive_norms": "subjective_norm",
    "ease": "pbc",
    "difficulty": "pbc",
    "methods": "pbc",
    "place": "pbc",
    "sources_help": "pbc",
    "sources_promote": "pbc",
}

CATEGORIES = tuple(CATEGORY_GROUP)

GROUP_CATEGORIES: dict[str, tuple[str, ...]] = {
    g: tuple(c for c, gg in CATEGORY_GROUP.items() if gg == g) for g in GROUPS
}


@dataclass(frozen=True, order=True)
class CategoryLabel:
    """One of the 13 valid categories; the group is implied by the name."""

    category: str

    def __post_init__(self) -> None:
        if self.category not in CATEGORY_GROUP:
            raise DataError(
                f"unknown category {self.category!r}; expected one of "
                f"{', '.join(CATEGORIES)}"
            )

    @property
    def group(self) -> str:
        return CATEGORY_GROUP[self.category]

    @classmethod
    def parse(cls, name: str) -> "CategoryLabel":
        return cls(name.strip())

    def __str__(self) -> str:
        return self.category
