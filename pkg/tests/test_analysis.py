"""Vocabulary counting, round-trip quality reports, split score tables, and
human-evaluation task files."""

import random

import pytest

from rtt_ape.analysis import (
    ACCURACY_QUESTION,
    FLUENCY_QUESTION,
    AnalysisReport,
    format_ratings,
    humaneval_aggregate,
    humaneval_make_tasks,
    render_split_table,
    rtt_quality_report,
    split_score_table,
    vocab_size,
)
from rtt_ape.errors import DataError
from rtt_ape.scoring import NgramStats, corpus_stats
from rtt_ape.testset import Segment, TestSet


class TestVocabSize:
    def test_basic(self):
        assert vocab_size(["a b", "b c"]) == 3

    def test_empty(self):
        assert vocab_size([]) == 0

    def test_case_sensitive(self):
        assert vocab_size(["Haus haus"]) == 2

    def test_order_and_dedup_invariant(self):
        lines = ["a b c", "c b a", "a b c"]
        assert vocab_size(lines) == vocab_size(sorted(set(lines))) == 3

    def test_intl_tokenizer_option(self):
        assert vocab_size(["end."], tokenizer="whitespace") == 1
        assert vocab_size(["end."], tokenizer="intl") == 2


class TestRttQualityReport:
    def test_identity(self):
        lines = ["eins zwei drei vier fünf", "sechs sieben acht neun"]
        report = rtt_quality_report(lines, list(lines))
        assert report.rtt_bleu.score == 100.0
        assert report.precision_breakdown == (100.0, 100.0, 100.0, 100.0)
        assert report.vocab_sizes["original"] == report.vocab_sizes["round_trip"] == 9

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            rtt_quality_report(["a"], ["a", "b"])

    def test_precisions_within_range(self):
        rng = random.Random(8)
        originals = [" ".join(rng.choices("a b c d e f g".split(), k=10)) for _ in range(50)]
        round_trips = [" ".join(rng.choices("a b c d e f g".split(), k=9)) for _ in range(50)]
        report = rtt_quality_report(originals, round_trips)
        assert all(0.0 <= p <= 100.0 for p in report.precision_breakdown)


def _bias_testset():
    origins = ["de", "en", "de", "en", "cs"]
    refs = [
        "der hund läuft schnell nach hause",
        "die katze schläft auf dem sofa",
        "das kind spielt im garten heute",
        "der mann liest eine lange zeitung",
        "die frau trinkt einen heißen kaffee",
    ]
    source = [
        Segment(str(i + 1), "d", origins[i], f"source {i}") for i in range(5)
    ]
    reference = [
        Segment(str(i + 1), "d", origins[i], refs[i]) for i in range(5)
    ]
    return TestSet("mini", "en", "de", source, reference), refs


class TestSplitScoreTable:
    def test_perfect_hypothesis_scores_100_everywhere(self):
        ts, refs = _bias_testset()
        table = split_score_table(ts, {"perfect": refs})
        scores = table["perfect"].split_scores
        assert scores["full"].score == 100.0
        assert scores["source_original"].score == 100.0
        assert scores["target_original"].score == 100.0

    def test_unknown_origin_counted_and_excluded_from_halves(self):
        ts, refs = _bias_testset()
        table = split_score_table(ts, {"sys": refs})
        meta = table["sys"].metadata
        assert meta["unknown_origin"] == 1
        assert meta["counts"] == {"full": 5, "source_original": 2, "target_original": 2}

    def test_full_stats_are_sum_of_halves_plus_unknown(self):
        ts, refs = _bias_testset()
        hyp = [r.replace("der", "die") for r in refs]
        groups = {
            "full": range(5),
            "halves+unknown": [0, 2, 1, 3, 4],
        }
        stats = {}
        for name, indices in groups.items():
            stats[name] = corpus_stats((hyp[i], refs[i]) for i in indices)
        assert stats["full"].match == stats["halves+unknown"].match
        assert stats["full"].total == stats["halves+unknown"].total

    def test_two_labels(self):
        ts, refs = _bias_testset()
        worse = ["x y z"] * 5
        table = split_score_table(ts, {"good": refs, "bad": worse})
        assert table["good"].split_scores["full"].score > table["bad"].split_scores["full"].score

    def test_length_mismatch_is_error(self):
        ts, refs = _bias_testset()
        with pytest.raises(ValueError):
            split_score_table(ts, {"sys": refs[:-1]})

    def test_render(self):
        ts, refs = _bias_testset()
        table = split_score_table(ts, {"perfect": refs})
        rendered = render_split_table(table, ts)
        assert "orig-de" in rendered and "orig-en" in rendered
        assert "100.0" in rendered


class TestHumanevalMakeTasks:
    ITEMS = [
        ("src one", "out one", "base"),
        ("src two", "out two", "ape"),
    ]

    def test_row_count(self):
        text = humaneval_make_tasks(self.ITEMS, raters_per_item=3, seed=1)
        rows = [line for line in text.splitlines() if line and not line.startswith("#")]
        assert len(rows) == 1 + 6  # header + 2 items x 3 raters

    def test_deterministic(self):
        a = humaneval_make_tasks(self.ITEMS, seed=42)
        b = humaneval_make_tasks(self.ITEMS, seed=42)
        assert a == b
        assert humaneval_make_tasks(self.ITEMS, seed=43) != a

    def test_empty_items_gives_header_only(self):
        text = humaneval_make_tasks([], seed=0)
        rows = [line for line in text.splitlines() if line and not line.startswith("#")]
        assert len(rows) == 1

    def test_questions_embedded_verbatim(self):
        text = humaneval_make_tasks(self.ITEMS, seed=0)
        assert FLUENCY_QUESTION in text
        assert ACCURACY_QUESTION in text

    def test_rating_cells_left_empty(self):
        text = humaneval_make_tasks(self.ITEMS, seed=0)
        row = [line for line in text.splitlines() if line.startswith("item-")][0]
        cells = row.split("\t")
        assert cells[5] == "" and cells[7] == ""


def _completed_tasks(fluency_by_item, accuracy_by_item, labels):
    items = [(f"src {i}", f"out {i}", labels[i]) for i in range(len(fluency_by_item))]
    text = humaneval_make_tasks(items, raters_per_item=3, seed=0)
    lines = text.splitlines()
    header = lines[1].split("\t")
    col = {name: i for i, name in enumerate(header)}
    slot_counter: dict[str, int] = {}
    out = lines[:2]
    for line in lines[2:]:
        cells = line.split("\t")
        item_index = int(cells[col["item_id"]].split("-")[1]) - 1
        slot = slot_counter.get(cells[col["item_id"]], 0)
        slot_counter[cells[col["item_id"]]] = slot + 1
        cells[col["fluency_rating"]] = str(fluency_by_item[item_index][slot])
        cells[col["accuracy_rating"]] = str(accuracy_by_item[item_index][slot])
        out.append("\t".join(cells))
    return "\n".join(out) + "\n"


class TestHumanevalAggregate:
    def test_fluency_mean_of_item_means(self):
        text = _completed_tasks([[5, 4, 5]], [[0, 0, 0]], ["sys"])
        result = humaneval_aggregate(text)
        assert result["sys"]["fluency"] == pytest.approx(14 / 3)
        assert f"{result['sys']['fluency']:.2f}" == "4.67"

    def test_accuracy_percentage(self):
        text = _completed_tasks([[5, 5, 5]], [[0, 0, 1]], ["sys"])
        result = humaneval_aggregate(text)
        assert result["sys"]["accuracy"] == pytest.approx(100 * 2 / 3)
        assert f"{result['sys']['accuracy']:.1f}" == "66.7"

    def test_multiple_systems_separated(self):
        text = _completed_tasks([[5, 5, 5], [1, 1, 1]], [[0, 0, 0], [1, 1, 1]], ["a", "b"])
        result = humaneval_aggregate(text)
        assert result["a"] == {"fluency": 5.0, "accuracy": 100.0}
        assert result["b"] == {"fluency": 1.0, "accuracy": 0.0}

    def test_incomplete_items_error_and_allow_partial(self):
        text = _completed_tasks([[5, 5, 5], [4, 4, 4]], [[0, 0, 0], [0, 0, 0]], ["a", "a"])
        text = text.replace("\t4\t", "\t\t", 1)
        with pytest.raises(DataError, match="item-00002"):
            humaneval_aggregate(text)
        partial = humaneval_aggregate(text, allow_partial=True)
        assert partial["a"]["fluency"] == 5.0

    def test_row_permutation_invariant(self):
        text = _completed_tasks([[5, 4, 3], [2, 3, 4]], [[0, 1, 0], [0, 0, 0]], ["a", "b"])
        lines = text.splitlines()
        shuffled = lines[:2] + list(reversed(lines[2:]))
        assert humaneval_aggregate("\n".join(shuffled) + "\n") == humaneval_aggregate(text)

    def test_bad_rating_values(self):
        text = _completed_tasks([[9, 5, 5]], [[0, 0, 0]], ["a"])
        with pytest.raises(DataError, match="1..5"):
            humaneval_aggregate(text)

    def test_format_cells(self):
        out = format_ratings({"base": {"fluency": 4.654, "accuracy": 95.64}})
        assert out == "base: 4.65 / 95.6%"


def test_report_as_dict_is_json_shaped():
    report = AnalysisReport(vocab_sizes={"a": 1}, metadata={"n": 2})
    d = report.as_dict()
    assert d["vocab_sizes"] == {"a": 1}
    assert d["rtt_bleu"] is None
    assert NgramStats.zero().match == [0, 0, 0, 0]
