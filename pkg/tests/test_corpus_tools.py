from __future__ import annotations

import io
import json

import pytest
from click.testing import CliRunner

from moodgame.cli import main as cli_main
from moodgame.core import Modality
from moodgame.corpus import ingest, write_export
from moodgame.errors import (
    DuplicateIdError,
    EmptyCorpusError,
    InvalidProfileError,
    NegativeInputError,
    ParseError,
    WrongModalityPayloadError,
)
from moodgame.simulate import SimProfile, run_simulation, synthetic_corpus
from moodgame.stats import expected_contribution

from conftest import activated_player, make_engine


def write_corpus(tmp_path, records, name="corpus.jsonl"):
    path = tmp_path / name
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record) + "\n")
    return str(path)


class TestIngest:
    def test_loads_all_records(self, tmp_path):
        path = write_corpus(tmp_path, [
            {"id": f"op-{i}", "text": f"aria line {i}", "title": f"Aria {i}"}
            for i in range(471)
        ])
        engine = make_engine()
        assert ingest(engine.store, path, Modality.TEXT) == 471

    def test_empty_file(self, tmp_path):
        path = write_corpus(tmp_path, [])
        engine = make_engine()
        assert ingest(engine.store, path, Modality.TEXT) == 0

    def test_reingest_identical_is_zero_new(self, tmp_path):
        path = write_corpus(tmp_path, [{"id": "a", "text": "hello world"}])
        engine = make_engine()
        assert ingest(engine.store, path, Modality.TEXT) == 1
        assert ingest(engine.store, path, Modality.TEXT) == 0

    def test_conflicting_id_rejected(self, tmp_path):
        engine = make_engine()
        ingest(engine.store, write_corpus(tmp_path, [{"id": "a", "text": "one"}]),
               Modality.TEXT)
        other = write_corpus(tmp_path, [{"id": "a", "text": "two"}], "other.jsonl")
        with pytest.raises(DuplicateIdError):
            ingest(engine.store, other, Modality.TEXT)

    def test_duplicate_id_within_file(self, tmp_path):
        path = write_corpus(tmp_path, [{"id": "a", "text": "one"},
                                       {"id": "a", "text": "two"}])
        with pytest.raises(DuplicateIdError):
            ingest(make_engine().store, path, Modality.TEXT)

    def test_empty_text_body_reports_line(self, tmp_path):
        path = write_corpus(tmp_path, [{"id": "a", "text": "fine"},
                                       {"id": "b", "text": "   "}])
        with pytest.raises(ParseError) as err:
            ingest(make_engine().store, path, Modality.TEXT)
        assert err.value.line == 2

    def test_invalid_json_reports_line(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"id": "a", "text": "ok"}\n{oops\n', encoding="utf-8")
        with pytest.raises(ParseError) as err:
            ingest(make_engine().store, str(path), Modality.TEXT)
        assert err.value.line == 2

    def test_modality_mismatch(self, tmp_path):
        path = write_corpus(tmp_path, [{"id": "a", "modality": "audio",
                                        "media_uri": "a.ogg"}])
        with pytest.raises(WrongModalityPayloadError):
            ingest(make_engine().store, path, Modality.TEXT)

    def test_media_payload_for_text_record(self, tmp_path):
        path = write_corpus(tmp_path, [{"id": "a", "media_uri": "a.ogg"}])
        with pytest.raises(WrongModalityPayloadError):
            ingest(make_engine().store, path, Modality.TEXT)

    def test_auto_ids_assigned(self, tmp_path):
        path = write_corpus(tmp_path, [{"text": "one"}, {"text": "two"}])
        engine = make_engine()
        assert ingest(engine.store, path, Modality.TEXT) == 2
        assert set(engine.store.active_snippet_ids(Modality.TEXT)) == \
            {"auto-000001", "auto-000002"}

    def test_audio_corpus(self, tmp_path):
        path = write_corpus(tmp_path, [{"id": "a1", "media_uri": "media/a1.ogg"}])
        engine = make_engine()
        assert ingest(engine.store, path, Modality.AUDIO) == 1


class TestExport:
    def test_record_shape_and_share_precision(self):
        engine = make_engine(seed=1, corpus_size=1)
        for n, label in enumerate(["Happy", "happy", "HAPPY", "happy",
                                   "happy", "gloomy"]):
            auth = activated_player(engine, n)
            session = engine.sessions.start_game(auth.player, "text", 3)
            snippet, _ = engine.sessions.next_snippet(session)
            engine.sessions.submit_response(session, snippet.id, label)
        out = io.StringIO()
        count = write_export(engine.store, out)
        assert count == 1
        record = json.loads(out.getvalue().strip())
        assert set(record) == {"snippet_id", "label", "raw_label_most_common",
                               "share", "responders", "promoted_at"}
        assert record["label"] == "happy"
        assert record["raw_label_most_common"] == "happy"
        assert len(record["share"].split(".")[1]) == 6
        assert record["promoted_at"].endswith("+00:00")

    def test_empty_store_exports_nothing(self):
        out = io.StringIO()
        assert write_export(make_engine().store, out) == 0
        assert out.getvalue() == ""


class TestExpectedContribution:
    def test_zero_throughput(self):
        assert expected_contribution(0, 5.0) == 0

    def test_direct_product(self):
        assert expected_contribution(120, 0.5) == 60

    def test_negative_rejected(self):
        with pytest.raises(NegativeInputError):
            expected_contribution(-1, 1)
        with pytest.raises(NegativeInputError):
            expected_contribution(1, -0.5)

    def test_bilinear(self):
        t, h = 13.5, 2.25
        assert expected_contribution(2 * t, h) == 2 * expected_contribution(t, h)
        assert expected_contribution(t, 2 * h) == 2 * expected_contribution(t, h)


class TestSimulate:
    def test_same_seed_same_summary(self):
        profile = SimProfile(players=6, label_dist={"happy": 0.5, "sad": 0.5},
                             games_per_player=2, snippets_per_game=3, seed=42)
        summaries = []
        for _ in range(2):
            _, summary = run_simulation(profile, corpus=synthetic_corpus(10))
            summaries.append(summary.as_dict())
        assert summaries[0] == summaries[1]

    def test_single_player_never_promotes(self):
        profile = SimProfile(players=1, label_dist={"happy": 1.0},
                             games_per_player=2, snippets_per_game=4, seed=1)
        engine, summary = run_simulation(profile, corpus=synthetic_corpus(10))
        assert summary.promotions == 0  # min responders gate

    def test_unique_key_draws_fresh_junk(self):
        profile = SimProfile(players=4, label_dist={"__unique__": 1.0},
                             games_per_player=1, snippets_per_game=5, seed=3)
        engine, summary = run_simulation(profile, corpus=synthetic_corpus(6))
        assert summary.distinct_labels == summary.responses == 20
        assert summary.promotions == 0

    def test_majority_label_promotes(self):
        profile = SimProfile(
            players=40, label_dist={"happy": 0.5, "__unique__": 0.5},
            games_per_player=1, snippets_per_game=6, seed=11)
        engine, summary = run_simulation(profile, corpus=synthetic_corpus(6))
        assert summary.promotions > 0
        assert all(r["label"] == "happy" for r in engine.export_validated())
        assert engine.reconcile() == []

    def test_invalid_profiles(self):
        good = dict(players=2, label_dist={"a": 1.0}, games_per_player=1,
                    snippets_per_game=1, seed=0)
        for bad in (dict(good, players=0),
                    dict(good, games_per_player=0),
                    dict(good, snippets_per_game=0),
                    dict(good, label_dist={}),
                    dict(good, label_dist={"a": 0.6, "b": 0.6}),
                    dict(good, label_dist={"a": 1.4, "b": -0.4})):
            with pytest.raises(InvalidProfileError):
                run_simulation(SimProfile(**bad), corpus=synthetic_corpus(2))

    def test_empty_corpus(self):
        profile = SimProfile(players=1, label_dist={"a": 1.0}, games_per_player=1,
                             snippets_per_game=1, seed=0)
        with pytest.raises(EmptyCorpusError):
            run_simulation(profile, corpus=[])

    def test_stats_report_matches_independent_recount(self):
        profile = SimProfile(
            players=10, label_dist={"happy": 0.4, "sad": 0.3, "__unique__": 0.3},
            games_per_player=2, snippets_per_game=4, seed=5)
        engine, _ = run_simulation(profile, corpus=synthetic_corpus(12))
        report = engine.stats_report()

        # independent recount over the raw journal
        users = guests = snippets = annotations = surveys = badges = 0
        labels, pairs = set(), set()
        for line in engine.store._journal.raw_lines():
            for event in json.loads(line)["txn"]:
                kind, payload = event["kind"], event["payload"]
                if kind == "account":
                    users, guests = (users, guests + 1) if payload["guest"] \
                        else (users + 1, guests)
                elif kind == "snippet":
                    snippets += 1
                elif kind == "survey":
                    surveys += 1
                elif kind == "badge_award":
                    badges += 1
                elif kind == "response" and payload["counted"]:
                    annotations += 1
                    labels.add(payload["label"])
                    pairs.add((payload["label"], payload["player"]))
        assert report.users == users
        assert report.guests == guests
        assert report.snippets == snippets
        assert report.annotations == annotations
        assert report.distinct_labels == len(labels)
        assert report.label_user_associations == len(pairs)
        assert report.surveys == surveys
        assert report.badges_awarded == badges


class TestCli:
    def test_ingest_report_simulate_export_roundtrip(self, tmp_path):
        runner = CliRunner()
        store = str(tmp_path / "events.jsonl")
        corpus = write_corpus(tmp_path, [
            {"id": f"c{i}", "text": f"passage {i}"} for i in range(8)])
        dist = tmp_path / "dist.json"
        dist.write_text(json.dumps({"happy": 0.7, "__unique__": 0.3}))

        result = runner.invoke(cli_main, ["--store", store, "ingest",
                                          "--file", corpus, "--modality", "text"])
        assert result.exit_code == 0, result.output
        assert "loaded 8 snippets" in result.output

        result = runner.invoke(cli_main, [
            "--store", store, "simulate", "--players", "12", "--games", "1",
            "--dist", str(dist), "--seed", "7", "--snippets-per-game", "4"])
        assert result.exit_code == 0, result.output
        assert "responses: 48" in result.output

        result = runner.invoke(cli_main, ["--store", store, "report",
                                          "--format", "records"])
        assert result.exit_code == 0
        stats = json.loads(result.output)
        assert stats["users"] == 12
        assert stats["annotations"] == 48

        out = str(tmp_path / "validated.jsonl")
        result = runner.invoke(cli_main, ["--store", store, "export", "--out", out])
        assert result.exit_code == 0
        lines = open(out, encoding="utf-8").read().splitlines()
        assert all(json.loads(line)["label"] == "happy" for line in lines)

    def test_ingest_error_exits_nonzero(self, tmp_path):
        runner = CliRunner()
        bad = tmp_path / "bad.jsonl"
        bad.write_text('{"id": "a", "text": ""}\n', encoding="utf-8")
        result = runner.invoke(cli_main, [
            "--store", str(tmp_path / "s.jsonl"), "ingest",
            "--file", str(bad), "--modality", "text"])
        assert result.exit_code != 0
        assert "PARSE_ERROR" in result.output

    def test_report_table_format(self, tmp_path):
        runner = CliRunner()
        result = runner.invoke(cli_main, ["--store", str(tmp_path / "s.jsonl"),
                                          "report"])
        assert result.exit_code == 0
        assert "annotations" in result.output

    def test_serve_config_builder(self, tmp_path):
        from moodgame.cli import build_engine_from_config
        from moodgame.errors import ConfigOutOfRangeError
        engine = build_engine_from_config(
            {"engine": {"consensus_threshold": 0.3}, "seed": 5,
             "store": str(tmp_path / "cfg.jsonl")}, "unused.jsonl")
        assert engine.cfg.consensus_threshold == 0.3
        engine.close()
        with pytest.raises(ConfigOutOfRangeError):
            build_engine_from_config({"engine": {"consensus_threshold": 2.0}},
                                     str(tmp_path / "x.jsonl"))


class TestStatsReportEdges:
    def test_empty_store_is_all_zeros(self):
        report = make_engine().stats_report()
        assert report.as_dict() == {
            "users": 0, "guests": 0, "snippets": 0, "distinct_labels": 0,
            "annotations": 0, "label_user_associations": 0,
            "avg_responses_per_label": 0.0, "avg_users_per_label": 0.0,
            "surveys": 0, "badges_awarded": 0, "badges_per_user": 0.0,
        }
