"""Agreement statistics and frequency/accuracy reporting.

percent_agreement and Krippendorff's alpha (nominal difference function,
coincidence-matrix formulation) quantify coder and machine-vs-human
agreement; the report builders tally accepted classifications per
category with group-level rollups and optional gold-label accuracy.
All functions are pure.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from .classifier import ClassificationResult
from .errors import DataError
from .labels import CATEGORIES, CATEGORY_GROUP, GROUPS, GROUP_CATEGORIES, CategoryLabel


def percent_agreement(a: Sequence[str], b: Sequence[str]) -> float:
    """Fraction of positions where two equal-length label lists agree."""
    if len(a) != len(b):
        raise DataError(f"label lists differ in length: {len(a)} vs {len(b)}")
    if len(a) == 0:
        raise DataError("cannot compute agreement on empty label lists")
    return sum(x == y for x, y in zip(a, b)) / len(a)


@dataclass
class ReliabilityData:
    """Ratings of units by two or more coders; missing ratings allowed
    (a coder's map simply omits the unit)."""

    units: list[str]
    ratings: list[dict[str, str]]  # one map unit->label per coder
    label_domain: set[str]

    def __post_init__(self) -> None:
        if len(self.ratings) < 2:
            raise DataError("reliability data needs at least two coders")
        unit_set = set(self.units)
        for coder_index, coder in enumerate(self.ratings):
            for unit, label in coder.items():
                if unit not in unit_set:
                    raise DataError(f"coder {coder_index} rated unknown unit {unit!r}")
                if label not in self.label_domain:
                    raise DataError(
                        f"coder {coder_index} used label {label!r} outside the domain"
                    )

    def values_by_unit(self) -> list[list[str]]:
        """Pairable value lists: one list per unit rated by >= 2 coders."""
        out = []
        for unit in self.units:
            vals = [coder[unit] for coder in self.ratings if unit in coder]
            if len(vals) >= 2:
                out.append(vals)
        return out


def krippendorff_alpha(data: ReliabilityData) -> float:
    """Nominal-metric alpha = 1 - D_observed / D_expected.

    Built from the coincidence matrix over pairable values: each unit
    with m >= 2 ratings contributes 1/(m-1) per ordered value pair.
    Observed disagreement is the off-diagonal mass; expected comes from
    the label marginals. Perfect agreement returns 1.0 even when the
    expected disagreement is zero (single-label degenerate case).
    """
    units_values = data.values_by_unit()
    if not units_values:
        raise DataError("no units with two or more ratings; nothing is pairable")

    labels = sorted({v for vals in units_values for v in vals})
    index = {lab: i for i, lab in enumerate(labels)}
    o = np.zeros((len(labels), len(labels)), dtype=np.float64)
    for vals in units_values:
        m = len(vals)
        for i, a in enumerate(vals):
            for j, b in enumerate(vals):
                if i != j:
                    o[index[a], index[b]] += 1.0 / (m - 1)

    n_c = o.sum(axis=1)
    n = n_c.sum()
    if n <= 1:
        raise DataError("fewer than two pairable values")
    observed = (o.sum() - np.trace(o)) / n
    expected = (n_c.sum() ** 2 - np.sum(n_c**2)) / (n * (n - 1))
    if expected == 0.0:
        if observed == 0.0:
            return 1.0
        raise DataError("zero expected disagreement with observed disagreement present")
    return float(1.0 - observed / expected)


@dataclass
class CategoryRow:
    category: str
    group: str
    accepted: int = 0
    frequency: float = 0.0
    evaluated: int = 0
    correct: int = 0
    accuracy: Optional[float] = None  # None marks undefined (no accepted docs)


@dataclass
class AgreementReport:
    per_category: list[CategoryRow] = field(default_factory=list)
    group_frequencies: dict[str, float] = field(default_factory=dict)
    total_accepted: int = 0
    total_evaluated: int = 0
    percent_agreement: Optional[float] = None
    krippendorff_alpha: Optional[float] = None
    overall_accuracy: Optional[float] = None

    def row(self, category: str) -> CategoryRow:
        for r in self.per_category:
            if r.category == category:
                return r
        raise KeyError(category)


def frequency_report(results: Sequence[ClassificationResult]) -> AgreementReport:
    """Per-category share of accepted documents, with group rollups.
    Every category appears, including those with zero accepted."""
    accepted = [r for r in results if r.accepted]
    if not accepted:
        raise DataError("no accepted documents; frequencies are undefined")
    counts = {c: 0 for c in CATEGORIES}
    for r in accepted:
        counts[r.category.category] += 1
    total = len(accepted)
    rows = [
        CategoryRow(
            category=c,
            group=CATEGORY_GROUP[c],
            accepted=counts[c],
            frequency=counts[c] / total,
        )
        for c in CATEGORIES
    ]
    group_freq = {
        g: sum(counts[c] for c in GROUP_CATEGORIES[g]) / total for g in GROUPS
    }
    return AgreementReport(
        per_category=rows, group_frequencies=group_freq, total_accepted=total
    )


def accuracy_report(
    results: Sequence[ClassificationResult],
    gold: Mapping[str, CategoryLabel],
) -> AgreementReport:
    """Per-category and overall accuracy of accepted documents against
    gold labels. A category with zero accepted documents gets accuracy
    None (undefined) rather than a silent zero."""
    accepted = [r for r in results if r.accepted]
    if not accepted:
        raise DataError("no accepted documents; accuracy is undefined")
    missing = [r.doc_id for r in accepted if r.doc_id not in gold]
    if missing:
        shown = ", ".join(missing[:10])
        extra = "" if len(missing) <= 10 else f" (+{len(missing) - 10} more)"
        raise DataError(f"gold labels missing for accepted documents: {shown}{extra}")

    report = frequency_report(results)
    correct_total = 0
    for r in accepted:
        row = report.row(r.category.category)
        row.evaluated += 1
        if gold[r.doc_id] == r.category:
            row.correct += 1
            correct_total += 1
    for row in report.per_category:
        if row.evaluated > 0:
            row.accuracy = row.correct / row.evaluated
    report.total_evaluated = len(accepted)
    report.overall_accuracy = correct_total / len(accepted)

    machine = [r.category.category for r in accepted]
    human = [gold[r.doc_id].category for r in accepted]
    report.percent_agreement = percent_agreement(machine, human)
    if len(accepted) >= 2:
        units = [r.doc_id for r in accepted]
        data = ReliabilityData(
            units=units,
            ratings=[
                dict(zip(units, machine)),
                dict(zip(units, human)),
            ],
            label_domain=set(CATEGORIES),
        )
        try:
            report.krippendorff_alpha = krippendorff_alpha(data)
        except DataError:
            report.krippendorff_alpha = None
    return report


def validation_sample(
    results: Sequence[ClassificationResult],
    fraction: float = 0.25,
    seed: int = 0,
) -> list[ClassificationResult]:
    """Uniform sample without replacement of accepted results, size
    round(fraction * accepted count) with half rounding up. Deterministic
    given seed; output preserves input order."""
    if not 0 < fraction <= 1:
        raise ValueError("fraction must be in (0, 1]")
    accepted = [r for r in results if r.accepted]
    size = int(np.floor(fraction * len(accepted) + 0.5))
    rng = np.random.default_rng(seed)
    picked = sorted(int(i) for i in rng.choice(len(accepted), size=size, replace=False))
    return [accepted[i] for i in picked]


GROUP_TITLES = {
    "attitude": "Attitude",
    "subjective_norm": "Subjective norm",
    "pbc": "Perceived behavioral control",
}


def _fmt_pct(x: Optional[float]) -> str:
    return "" if x is None else f"{100 * x:.2f}%"


def render_report(report: AgreementReport, title: str = "Category frequencies") -> str:
    """Aligned-column text: three group blocks with subtotal lines, then
    totals and agreement statistics when present."""
    name_width = max(len(c) for c in CATEGORIES) + 2
    lines = [title, "=" * len(title), ""]
    header = f"{'label':<{name_width}}{'accepted':>10}{'frequency':>12}{'accuracy':>12}"
    lines.append(header)
    lines.append("-" * len(header))
    for g in GROUPS:
        lines.append(
            f"{GROUP_TITLES[g]:<{name_width}}{'':>10}"
            f"{_fmt_pct(report.group_frequencies.get(g)):>12}{'':>12}"
        )
        for row in report.per_category:
            if row.group != g:
                continue
            acc = "undefined" if row.accuracy is None and row.evaluated == 0 else _fmt_pct(row.accuracy)
            if report.overall_accuracy is None:
                acc = ""
            lines.append(
                f"  {row.category:<{name_width - 2}}{row.accepted:>10}"
                f"{_fmt_pct(row.frequency):>12}{acc:>12}"
            )
    lines.append("-" * len(header))
    lines.append(
        f"{'Total':<{name_width}}{report.total_accepted:>10}{_fmt_pct(1.0):>12}"
        f"{_fmt_pct(report.overall_accuracy):>12}"
    )
    stats = []
    if report.percent_agreement is not None:
        stats.append(f"percent agreement: {_fmt_pct(report.percent_agreement)}")
    if report.krippendorff_alpha is not None:
        stats.append(f"krippendorff alpha: {report.krippendorff_alpha:.4f}")
    if stats:
        lines.append("")
        lines.extend(stats)
    return "\n".join(lines) + "\n"


def report_csv(report: AgreementReport) -> str:
    """Machine-readable companion to render_report."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["scope", "name", "group", "accepted", "frequency", "evaluated", "correct",
         "accuracy", "accuracy_defined"]
    )
    for g in GROUPS:
        writer.writerow(
            ["group", g, g, "", f"{report.group_frequencies.get(g, 0.0):.10f}",
             "", "", "", ""]
        )
        for row in report.per_category:
            if row.group != g:
                continue
            defined = row.accuracy is not None
            writer.writerow(
                [
                    "category",
                    row.category,
                    row.group,
                    row.accepted,
                    f"{row.frequency:.10f}",
                    row.evaluated,
                    row.correct,
                    f"{row.accuracy:.10f}" if defined else "",
                    str(defined).lower(),
                ]
            )
    writer.writerow(
        ["total", "total", "", report.total_accepted, f"{1.0:.10f}",
         report.total_evaluated, "",
         f"{report.overall_accuracy:.10f}" if report.overall_accuracy is not None else "",
         ""]
    )
    return buf.getvalue()
