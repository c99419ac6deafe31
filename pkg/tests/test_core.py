from __future__ import annotations

import dataclasses

import pytest
from hypothesis import given, strategies as st

from moodgame.core import (
    EngineConfig,
    Modality,
    Snippet,
    normalize_label,
    validate_config,
)
from moodgame.errors import (
    ConfigOutOfRangeError,
    EmptyLabelError,
    LabelTooLongError,
    WrongModalityPayloadError,
)


class TestNormalizeLabel:
    def test_strips_and_casefolds(self):
        assert normalize_label("  Happy ") == "happy"

    def test_collapses_internal_whitespace(self):
        assert normalize_label("VERY   Sad") == "very sad"

    def test_all_whitespace_is_empty(self):
        with pytest.raises(EmptyLabelError):
            normalize_label("   ")

    def test_empty_string(self):
        with pytest.raises(EmptyLabelError):
            normalize_label("")

    def test_too_long(self):
        with pytest.raises(LabelTooLongError):
            normalize_label("x" * 65, max_length=64)

    def test_exactly_max_length_ok(self):
        assert normalize_label("x" * 64, max_length=64) == "x" * 64

    def test_tabs_and_newlines_collapse(self):
        assert normalize_label("a\t\nb") == "a b"

    @given(st.text(min_size=0, max_size=200))
    def test_idempotent(self, raw):
        try:
            once = normalize_label(raw, max_length=512)
        except (EmptyLabelError, LabelTooLongError):
            return
        assert normalize_label(once, max_length=512) == once

    @given(st.text(alphabet="abcdefghijklmnopqrstuvwxyz ", min_size=1, max_size=30))
    def test_case_and_padding_insensitive(self, word):
        try:
            b = normalize_label(word, max_length=512)
        except EmptyLabelError:
            return
        assert normalize_label(f"  {word.upper()}  ", max_length=512) == b
        assert normalize_label(word.title(), max_length=512) == b


class TestEngineConfig:
    def test_defaults_valid(self):
        cfg = EngineConfig()
        assert validate_config(cfg) is cfg
        assert cfg.consensus_threshold == 0.25
        assert cfg.high_quality_share == 0.90

    def test_threshold_above_one(self):
        with pytest.raises(ConfigOutOfRangeError) as err:
            validate_config(EngineConfig(consensus_threshold=1.5))
        assert err.value.field == "consensus_threshold"

    def test_hq_factor_below_one(self):
        with pytest.raises(ConfigOutOfRangeError) as err:
            validate_config(EngineConfig(high_quality_factor=0.5))
        assert err.value.field == "high_quality_factor"

    def test_threshold_must_not_exceed_hq_share(self):
        with pytest.raises(ConfigOutOfRangeError):
            validate_config(EngineConfig(consensus_threshold=0.95,
                                         high_quality_share=0.9))

    @pytest.mark.parametrize("field,value", [
        ("base_points", 0),
        ("per_match_bonus", -1),
        ("multiplier_activation_count", 0),
        ("multiplier_scale", 0),
        ("high_quality_share", 0.0),
        ("min_responders_for_promotion", 0),
        ("leaderboard_size", 0),
        ("max_label_length", 0),
    ])
    def test_bounds(self, field, value):
        with pytest.raises(ConfigOutOfRangeError):
            validate_config(dataclasses.replace(EngineConfig(), **{field: value}))

    def test_from_dict_rejects_unknown_field(self):
        with pytest.raises(ConfigOutOfRangeError):
            EngineConfig.from_dict({"bonus_points": 5})

    def test_from_dict_applies_overrides(self):
        cfg = EngineConfig.from_dict({"consensus_threshold": 0.30})
        assert cfg.consensus_threshold == 0.30


class TestModalityAndSnippet:
    def test_parse(self):
        assert Modality.parse("TEXT") is Modality.TEXT
        assert Modality.parse(Modality.AUDIO) is Modality.AUDIO
        with pytest.raises(WrongModalityPayloadError):
            Modality.parse("smell")

    def test_text_snippet_needs_body(self):
        with pytest.raises(WrongModalityPayloadError):
            Snippet(id="t1", modality=Modality.TEXT, payload="   ").validate()

    def test_media_snippet_needs_reference(self):
        with pytest.raises(WrongModalityPayloadError):
            Snippet(id="a1", modality=Modality.AUDIO, payload="").validate()
        ok = Snippet(id="a2", modality=Modality.AUDIO, payload="media/a2.ogg")
        assert ok.validate() is ok
