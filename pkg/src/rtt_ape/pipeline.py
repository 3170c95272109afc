"""Round-trip data generation and post-editing application.

``generate_rtt`` composes two backends (Y->X, then X->Y) over a
monolingual corpus and emits (original, round_trip) pairs; the length
filter applies to both sides of a pair, which is dropped atomically if
either side fails.  ``make_training_pairs`` turns those pairs into
filtered bitext in either direction, and ``apply_ape`` runs a post-editing
backend over translation output, optionally restricted to the
target-original half of a test set and optionally iterated.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .backends import BackendSpec, translate_batch
from .corpus import FilterConfig, SentencePair, bitext_filter, mono_filter
from .testset import SplitHalves

TRAINING_DIRECTIONS = ("normal", "reverse")
APE_SCOPES = ("all", "target_original_only")
FILTER_SIDES = ("both", "original", "round_trip")


@dataclass(frozen=True)
class RttPair:
    original: str
    round_trip: str


@dataclass(frozen=True)
class ApeMode:
    scope: str = "all"
    iterations: int = 1

    def __post_init__(self) -> None:
        if self.scope not in APE_SCOPES:
            raise ValueError(f"scope must be one of {APE_SCOPES}, got {self.scope!r}")
        if self.iterations < 1:
            raise ValueError(f"iterations must be >= 1, got {self.iterations}")


@dataclass
class ChangeReport:
    """Lines altered by post-editing, counted by byte-level inequality."""

    lines: int
    scope_size: int
    changed_per_iteration: list[int]

    def as_dict(self) -> dict:
        return {
            "lines": self.lines,
            "scope_size": self.scope_size,
            "changed_per_iteration": list(self.changed_per_iteration),
        }


def generate_rtt(
    lines: Iterable[str],
    y_to_x: BackendSpec,
    x_to_y: BackendSpec,
    cfg: FilterConfig = FilterConfig(),
    *,
    filter_sides: str = "both",
    jobs: int = 1,
    cache_dir: str | Path | None = None,
    intermediates: list[str] | None = None,
) -> list[RttPair]:
    """Round-trip every surviving line through the pivot language.

    The corpus is expected to be deduplicated already.  By default the
    length filter applies to the original line (before translation) and to
    the round trip (after), dropping the pair atomically; ``filter_sides``
    restricts it to one side.  Passing a list as ``intermediates`` captures
    the pivot-language text for auditing.
    """
    if filter_sides not in FILTER_SIDES:
        raise ValueError(f"filter_sides must be one of {FILTER_SIDES}, got {filter_sides!r}")
    if (y_to_x.to_lang, y_to_x.from_lang) != (x_to_y.from_lang, x_to_y.to_lang):
        raise ValueError(
            f"backend directions do not compose: "
            f"{y_to_x.from_lang}->{y_to_x.to_lang} then {x_to_y.from_lang}->{x_to_y.to_lang}"
        )
    if filter_sides in ("both", "original"):
        kept = [line for line in lines if mono_filter(line, cfg)]
    else:
        kept = list(lines)
    pivot = translate_batch(y_to_x, kept, jobs=jobs, cache_dir=cache_dir)
    if intermediates is not None:
        intermediates.extend(pivot)
    round_trips = translate_batch(x_to_y, pivot, jobs=jobs, cache_dir=cache_dir)
    pairs = zip(kept, round_trips)
    if filter_sides in ("both", "round_trip"):
        return [RttPair(y, r) for y, r in pairs if mono_filter(r, cfg)]
    return [RttPair(y, r) for y, r in pairs]


def make_training_pairs(
    pairs: Iterable[RttPair],
    direction: str = "normal",
    cfg: FilterConfig = FilterConfig(),
) -> list[SentencePair]:
    """Emit bitext from round-trip pairs.

    "normal" trains a denoiser (source = round trip, target = original);
    "reverse" flips source and target.  The bitext filter applies either way.
    """
    if direction not in TRAINING_DIRECTIONS:
        raise ValueError(f"direction must be one of {TRAINING_DIRECTIONS}, got {direction!r}")
    out = []
    for pair in pairs:
        if direction == "normal":
            sp = SentencePair(source=pair.round_trip, target=pair.original)
        else:
            sp = SentencePair(source=pair.original, target=pair.round_trip)
        if bitext_filter(sp, cfg):
            out.append(sp)
    return out


def apply_ape(
    hyp: Sequence[str],
    ape: BackendSpec,
    halves: SplitHalves | None = None,
    mode: ApeMode = ApeMode(),
    *,
    jobs: int = 1,
    cache_dir: str | Path | None = None,
) -> tuple[list[str], ChangeReport]:
    """Post-edit translation output.

    Scope "all" edits every line; "target_original_only" edits only the
    target-original indices of ``halves`` and leaves the rest byte-identical.
    The backend is iterated ``mode.iterations`` times over the in-scope
    lines.  Line count and order never change.
    """
    if mode.scope == "target_original_only":
        if halves is None:
            raise ValueError("target_original_only scope needs split halves")
        scope = list(halves.target_original)
        if scope and max(scope) >= len(hyp):
            raise ValueError(f"split index {max(scope)} out of range for {len(hyp)} lines")
    else:
        scope = list(range(len(hyp)))

    current = list(hyp)
    changed_per_iteration = []
    for _ in range(mode.iterations):
        in_scope = [current[i] for i in scope]
        edited = translate_batch(ape, in_scope, jobs=jobs, cache_dir=cache_dir)
        changed = 0
        for i, line in zip(scope, edited):
            if current[i] != line:
                changed += 1
            current[i] = line
        changed_per_iteration.append(changed)
    return current, ChangeReport(
        lines=len(current), scope_size=len(scope), changed_per_iteration=changed_per_iteration
    )
