"""Round-trip generation, training-pair emission, and APE application."""

import pytest

from rtt_ape.backends import BackendSpec, ChannelConfig
from rtt_ape.corpus import SentencePair
from rtt_ape.pipeline import (
    ApeMode,
    RttPair,
    apply_ape,
    generate_rtt,
    make_training_pairs,
)
from rtt_ape.testset import SplitHalves

IDENT_DE_EN = BackendSpec.identity(from_lang="de", to_lang="en")
IDENT_EN_DE = BackendSpec.identity(from_lang="en", to_lang="de")


class TestGenerateRtt:
    def test_identity_backends(self):
        lines = ["eins zwei", "drei vier fünf"]
        pairs = generate_rtt(lines, IDENT_DE_EN, IDENT_EN_DE)
        assert pairs == [RttPair(line, line) for line in lines]

    def test_toy_channel_round_trip(self):
        to_en = BackendSpec.toy_channel(
            ChannelConfig(lexicon={"empfängt": "receives", "erhält": "receives"}),
            from_lang="de", to_lang="en",
        )
        to_de = BackendSpec.toy_channel(
            ChannelConfig(lexicon={"receives": "erhält"}), from_lang="en", to_lang="de"
        )
        pairs = generate_rtt(["Obama empfängt Netanjahu"], to_en, to_de)
        assert pairs == [
            RttPair(original="Obama empfängt Netanjahu", round_trip="Obama erhält Netanjahu")
        ]

    def test_overlong_line_filtered_before_translation(self):
        lines = [f"sentence number {i}" for i in range(9)] + ["x" * 600]
        pairs = generate_rtt(lines, IDENT_DE_EN, IDENT_EN_DE)
        assert len(pairs) == 9

    def test_round_trip_side_filtered_too(self):
        # A channel that deletes everything produces an empty round trip,
        # which fails the filter and drops the pair atomically.
        destroyer = BackendSpec.toy_channel(
            ChannelConfig(drop_prob=1.0), from_lang="en", to_lang="de"
        )
        pairs = generate_rtt(["guten tag"], IDENT_DE_EN, destroyer)
        assert pairs == []

    def test_directions_must_compose(self):
        with pytest.raises(ValueError, match="compose"):
            generate_rtt(["x"], IDENT_DE_EN, IDENT_DE_EN)

    def test_filter_sides_flag(self):
        destroyer = BackendSpec.toy_channel(
            ChannelConfig(drop_prob=1.0), from_lang="en", to_lang="de"
        )
        lines = ["guten tag"]
        assert generate_rtt(lines, IDENT_DE_EN, destroyer, filter_sides="both") == []
        kept = generate_rtt(lines, IDENT_DE_EN, destroyer, filter_sides="original")
        assert kept == [RttPair("guten tag", "")]
        long_line = "x" * 600
        kept = generate_rtt([long_line], IDENT_DE_EN, IDENT_EN_DE, filter_sides="round_trip")
        assert kept == []  # identity round trip is over-long too
        with pytest.raises(ValueError, match="filter_sides"):
            generate_rtt(lines, IDENT_DE_EN, IDENT_EN_DE, filter_sides="neither")

    def test_intermediates_captured(self):
        upper = BackendSpec(
            kind="command",
            from_lang="de",
            to_lang="en",
            command_template='python3 -c "import sys; sys.stdout.write(sys.stdin.read().upper())"',
        )
        intermediates: list[str] = []
        pairs = generate_rtt(["klein"], upper, IDENT_EN_DE, intermediates=intermediates)
        assert intermediates == ["KLEIN"]
        assert pairs[0].round_trip == "KLEIN"


class TestMakeTrainingPairs:
    PAIRS = [RttPair(original="y", round_trip="r"), RttPair(original="b c", round_trip="b d")]

    def test_normal_direction(self):
        out = make_training_pairs(self.PAIRS, "normal")
        assert out[0] == SentencePair(source="r", target="y")

    def test_reverse_direction(self):
        out = make_training_pairs(self.PAIRS, "reverse")
        assert out[0] == SentencePair(source="y", target="r")

    def test_reverse_equals_swapped_normal(self):
        normal = make_training_pairs(self.PAIRS, "normal")
        reverse = make_training_pairs(self.PAIRS, "reverse")
        assert reverse == [SentencePair(p.target, p.source) for p in normal]

    def test_ratio_filter_applies(self):
        pairs = [RttPair(original="a", round_trip="w x y z q")]
        assert make_training_pairs(pairs, "normal") == []

    def test_unknown_direction(self):
        with pytest.raises(ValueError):
            make_training_pairs(self.PAIRS, "sideways")


class TestApplyApe:
    HALVES = SplitHalves(source_original=(0, 2), target_original=(1, 3))
    DENOISER = BackendSpec.toy_denoiser(ChannelConfig(lexicon={"bad": "good"}))

    def test_identity_backend_changes_nothing(self):
        hyp = ["a", "b", "c"]
        out, report = apply_ape(hyp, BackendSpec.identity())
        assert out == hyp
        assert report.changed_per_iteration == [0]

    def test_idempotent_denoiser_fixed_point(self):
        hyp = ["bad day", "fine", "bad bad", "all good"]
        once, _ = apply_ape(hyp, self.DENOISER, mode=ApeMode(iterations=1))
        twice, report = apply_ape(hyp, self.DENOISER, mode=ApeMode(iterations=2))
        assert twice == once
        assert report.changed_per_iteration[1] == 0

    def test_selective_scope_leaves_rest_byte_identical(self):
        hyp = ["bad 0", "bad 1", "bad 2", "bad 3"]
        out, report = apply_ape(
            hyp, self.DENOISER, self.HALVES, ApeMode(scope="target_original_only")
        )
        assert out == ["bad 0", "good 1", "bad 2", "good 3"]
        assert report.scope_size == 2

    def test_line_count_and_order_preserved(self):
        hyp = [f"bad line {i}" for i in range(7)]
        out, _ = apply_ape(hyp, self.DENOISER)
        assert len(out) == len(hyp)
        assert [line.split()[-1] for line in out] == [str(i) for i in range(7)]

    def test_selective_requires_halves(self):
        with pytest.raises(ValueError, match="halves"):
            apply_ape(["x"], self.DENOISER, None, ApeMode(scope="target_original_only"))

    def test_halves_must_fit(self):
        with pytest.raises(ValueError, match="out of range"):
            apply_ape(["x"], self.DENOISER, self.HALVES, ApeMode(scope="target_original_only"))

    def test_change_report_counts_byte_changes(self):
        hyp = ["bad one", "clean", "bad two"]
        _, report = apply_ape(hyp, self.DENOISER)
        assert report.lines == 3
        assert report.changed_per_iteration == [2]

    def test_mode_validation(self):
        with pytest.raises(ValueError):
            ApeMode(scope="everything")
        with pytest.raises(ValueError):
            ApeMode(iterations=0)
