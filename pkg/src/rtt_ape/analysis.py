"""Black-box analyses and reporting: vocabulary sizes, round-trip quality,
origin-split score tables, and human-evaluation task files.

Human-evaluation tasks are plain TSV with a fixed, versioned column order
so any crowd platform or spreadsheet can consume them; the rater-facing
columns are source, output, and the two question/rating pairs, while
``system_label`` is bookkeeping that platforms should not display.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import DataError
from .scoring import BleuConfig, BleuScore, corpus_bleu, tokenize_intl
from .testset import TestSet, split_by_origin

HUMANEVAL_SCHEMA = "rtt-ape-humaneval-v1"

FLUENCY_QUESTION = (
    "How do you judge the overall naturalness of the utterance in terms of "
    "its grammatical correctness and fluency?"
)
ACCURACY_QUESTION = "Does the statement factually contradict anything in the reference information?"

_HUMANEVAL_COLUMNS = (
    "item_id",
    "rater_slot",
    "source",
    "output",
    "fluency_question",
    "fluency_rating",
    "accuracy_question",
    "accuracy_rating",
    "system_label",
)


@dataclass
class AnalysisReport:
    vocab_sizes: dict[str, int] = field(default_factory=dict)
    rtt_bleu: BleuScore | None = None
    precision_breakdown: tuple[float, ...] | None = None
    split_scores: dict[str, BleuScore] = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "vocab_sizes": dict(self.vocab_sizes),
            "rtt_bleu": self.rtt_bleu.as_dict() if self.rtt_bleu else None,
            "precision_breakdown": list(self.precision_breakdown)
            if self.precision_breakdown
            else None,
            "split_scores": {k: v.as_dict() for k, v in self.split_scores.items()},
            "metadata": dict(self.metadata),
        }


def vocab_size(lines: Iterable[str], tokenizer: str = "whitespace") -> int:
    """Number of distinct tokens, case-sensitive.

    Whitespace tokenization by default; "intl" switches to the scorer's
    international tokenizer.
    """
    if tokenizer not in ("whitespace", "intl"):
        raise ValueError(f"tokenizer must be 'whitespace' or 'intl', got {tokenizer!r}")
    vocab: set[str] = set()
    for line in lines:
        vocab.update(tokenize_intl(line) if tokenizer == "intl" else line.split())
    return len(vocab)


def rtt_quality_report(
    originals: Sequence[str],
    round_trips: Sequence[str],
    config: BleuConfig = BleuConfig(),
) -> AnalysisReport:
    """How much the round trip changed the text: BLEU of the round trips
    against the originals as references, per-order precision breakdown, and
    both vocabulary sizes."""
    if len(originals) != len(round_trips):
        raise ValueError(
            f"length mismatch: {len(originals)} originals vs {len(round_trips)} round trips"
        )
    bleu = corpus_bleu(zip(round_trips, originals), config)
    return AnalysisReport(
        vocab_sizes={
            "original": vocab_size(originals),
            "round_trip": vocab_size(round_trips),
        },
        rtt_bleu=bleu,
        precision_breakdown=bleu.precisions,
        metadata={"sentences": len(originals), "tokenizer": "whitespace"},
    )


def split_score_table(
    ts: TestSet,
    hyps: Mapping[str, Sequence[str]],
    config: BleuConfig | None = None,
) -> dict[str, AnalysisReport]:
    """Score each labeled system on the full set and on both origin halves.

    Unknown-origin lines are excluded from the halves but included in the
    full-set score.  Empty halves are skipped and noted in the metadata.
    """
    if config is None:
        config = BleuConfig(lang_pair=f"{ts.src_lang}-{ts.tgt_lang}", test_set=ts.name)
    halves = split_by_origin(ts)
    refs = [seg.text for seg in ts.reference]
    groups = {
        "full": list(range(len(ts))),
        "source_original": list(halves.source_original),
        "target_original": list(halves.target_original),
    }
    table = {}
    for label, hyp in hyps.items():
        if len(hyp) != len(ts):
            raise ValueError(f"system {label!r} has {len(hyp)} lines, test set has {len(ts)}")
        report = AnalysisReport(
            metadata={
                "system": label,
                "counts": {name: len(indices) for name, indices in groups.items()},
                "unknown_origin": len(halves.unknown),
            }
        )
        for name, indices in groups.items():
            if not indices:
                continue
            report.split_scores[name] = corpus_bleu(
                ((hyp[i], refs[i]) for i in indices), config
            )
        table[label] = report
    return table


def render_split_table(table: Mapping[str, AnalysisReport], ts: TestSet) -> str:
    """Aligned text rendering with one row per system and orig-<lang> columns."""
    headers = ["system", "full", f"orig-{ts.tgt_lang}", f"orig-{ts.src_lang}"]
    keys = ["full", "target_original", "source_original"]
    rows = [headers]
    for label, report in table.items():
        row = [label]
        for key in keys:
            score = report.split_scores.get(key)
            row.append(f"{score.score:.1f}" if score else "-")
        rows.append(row)
    widths = [max(len(r[i]) for r in rows) for i in range(len(headers))]
    return "\n".join("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows)


def _sanitize(text: str) -> str:
    return text.replace("\t", " ").replace("\n", " ").replace("\r", " ")


def humaneval_make_tasks(
    items: Sequence[tuple[str, str, str]],
    raters_per_item: int = 3,
    seed: int = 0,
) -> str:
    """Build the rating task file: one row per (item, rater slot), shuffled
    deterministically, with the fluency and accuracy prompts embedded and
    the rating cells left empty.

    Items are (source, output, system_label) triples.
    """
    rows = []
    for item_index, (source, output, system_label) in enumerate(items):
        for rater_slot in range(1, raters_per_item + 1):
            rows.append(
                (
                    f"item-{item_index + 1:05d}",
                    str(rater_slot),
                    _sanitize(source),
                    _sanitize(output),
                    FLUENCY_QUESTION,
                    "",
                    ACCURACY_QUESTION,
                    "",
                    _sanitize(system_label),
                )
            )
    random.Random(seed).shuffle(rows)
    lines = [f"# {HUMANEVAL_SCHEMA}", "\t".join(_HUMANEVAL_COLUMNS)]
    lines.extend("\t".join(row) for row in rows)
    return "\n".join(lines) + "\n"


def humaneval_aggregate(task_text: str, *, allow_partial: bool = False) -> dict[str, dict[str, float]]:
    """Aggregate a completed task file per system.

    Fluency is the mean over items of the per-item mean rating (1..5);
    accuracy is the percentage of ratings answering that the output does
    NOT contradict the reference information (rating 0; 1 means it does).
    Items with any empty rating cell are an error unless ``allow_partial``,
    which skips them.
    """
    lines = [line for line in task_text.splitlines() if line and not line.startswith("#")]
    if not lines:
        raise DataError("empty task file")
    header = lines[0].split("\t")
    if tuple(header) != _HUMANEVAL_COLUMNS:
        raise DataError(f"unexpected task file columns: {header}")
    col = {name: i for i, name in enumerate(header)}

    by_item: dict[str, dict] = {}
    for line in lines[1:]:
        cells = line.split("\t")
        if len(cells) != len(header):
            raise DataError(f"row has {len(cells)} cells, expected {len(header)}: {line[:80]!r}")
        item = by_item.setdefault(
            cells[col["item_id"]],
            {"system": cells[col["system_label"]], "fluency": [], "accuracy": []},
        )
        item["fluency"].append(cells[col["fluency_rating"]].strip())
        item["accuracy"].append(cells[col["accuracy_rating"]].strip())

    incomplete = sorted(
        item_id
        for item_id, item in by_item.items()
        if "" in item["fluency"] or "" in item["accuracy"]
    )
    if incomplete and not allow_partial:
        raise DataError(f"items with missing ratings: {', '.join(incomplete)}")

    per_system: dict[str, dict[str, list]] = {}
    for item_id, item in by_item.items():
        if item_id in incomplete:
            continue
        fluency = [int(x) for x in item["fluency"]]
        accuracy = [int(x) for x in item["accuracy"]]
        if any(not 1 <= x <= 5 for x in fluency):
            raise DataError(f"fluency ratings out of range 1..5 for {item_id}")
        if any(x not in (0, 1) for x in accuracy):
            raise DataError(f"accuracy ratings must be 0 or 1 for {item_id}")
        bucket = per_system.setdefault(item["system"], {"item_means": [], "accuracy": []})
        bucket["item_means"].append(sum(fluency) / len(fluency))
        bucket["accuracy"].extend(accuracy)

    return {
        system: {
            "fluency": sum(b["item_means"]) / len(b["item_means"]),
            "accuracy": 100.0 * b["accuracy"].count(0) / len(b["accuracy"]),
        }
        for system, b in per_system.items()
    }


def format_ratings(results: Mapping[str, Mapping[str, float]]) -> str:
    """Render aggregated ratings as "<fluency> / <accuracy>%" cells."""
    return "\n".join(
        f"{system}: {r['fluency']:.2f} / {r['accuracy']:.1f}%" for system, r in results.items()
    )
