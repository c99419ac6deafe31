"""Corpus ingestion and validated-annotation export.

Both formats are line-delimited JSON, UTF-8. A corpus record carries
{id?, modality?, text | media_uri, title?, source?}; ids are assigned when
absent. An export record carries the validated annotation plus the most
common raw spelling of its label, with the share fixed to six decimals.
"""

from __future__ import annotations

import json
from datetime import datetime, timezone
from typing import IO, Iterable

from .core import Modality, Snippet
from .errors import ParseError, WrongModalityPayloadError
from .store import Store


def _utc(ts: float) -> str:
    return datetime.fromtimestamp(ts, timezone.utc).isoformat()


def parse_corpus_lines(lines: Iterable[str], modality: Modality,
                       next_auto_id) -> list[Snippet]:
    snippets = []
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(line_no, f"line {line_no}: invalid JSON ({exc.msg})") from None
        if not isinstance(record, dict):
            raise ParseError(line_no, f"line {line_no}: record must be an object")

        record_modality = record.get("modality", modality.value)
        try:
            record_modality = Modality.parse(record_modality)
        except WrongModalityPayloadError:
            raise ParseError(line_no, f"line {line_no}: bad modality "
                                      f"{record.get('modality')!r}") from None
        if record_modality is not modality:
            raise WrongModalityPayloadError(
                f"line {line_no}: record modality {record_modality.value!r} does not "
                f"match requested {modality.value!r}")

        payload_field = "text" if modality is Modality.TEXT else "media_uri"
        wrong_field = "media_uri" if modality is Modality.TEXT else "text"
        if wrong_field in record and payload_field not in record:
            raise WrongModalityPayloadError(
                f"line {line_no}: {modality.value} record carries only {wrong_field!r}")
        payload = record.get(payload_field)
        if not isinstance(payload, str) or not payload.strip():
            raise ParseError(line_no, f"line {line_no}: missing or empty "
                                      f"{payload_field!r}")

        snippet_id = record.get("id")
        if snippet_id is None:
            snippet_id = next_auto_id()
        snippets.append(Snippet(
            id=str(snippet_id), modality=modality, payload=payload,
            title=record.get("title"), source=record.get("source"),
        ).validate())
    return snippets


def ingest(store: Store, path: str, modality: Modality) -> int:
    """Load a corpus file; returns the number of snippets newly stored."""
    counter = {"n": store.state.snippet_seq}

    def next_auto_id() -> str:
        counter["n"] += 1
        return f"auto-{counter['n']:06d}"

    with open(path, "r", encoding="utf-8") as fh:
        snippets = parse_corpus_lines(fh, modality, next_auto_id)
    return store.add_snippets(snippets)


def export_records(store: Store, modality: Modality | str | None = None) -> list[dict]:
    """All validated annotations as export records, deterministically ordered."""
    with store.transaction():
        scope = None
        if modality is not None:
            wanted = Modality.parse(modality)
            scope = {sid for sid, s in store.state.snippets.items()
                     if s.modality is wanted}
        aggregator = store.state.aggregator
        return [
            {
                "snippet_id": ann.snippet_id,
                "label": ann.label,
                "raw_label_most_common": aggregator.most_common_raw(
                    ann.snippet_id, ann.label),
                "share": f"{ann.share:.6f}",
                "responders": ann.responders,
                "promoted_at": _utc(ann.promoted_at),
            }
            for ann in aggregator.validated(scope)
        ]


def write_export(store: Store, out: IO[str],
                 modality: Modality | str | None = None) -> int:
    records = export_records(store, modality)
    for record in records:
        out.write(json.dumps(record, sort_keys=True, separators=(",", ":")) + "\n")
    return len(records)
