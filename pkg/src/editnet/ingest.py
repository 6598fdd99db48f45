"""Ingestion of edit-event streams.

Reads CSV edit logs and MediaWiki-export XML revision histories into a
canonical in-memory form: events grouped by page and sorted by time, ready
for network construction downstream.
"""

import csv
import io
import ipaddress
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence
from xml.parsers import expat

__all__ = [
    "CSV_COLUMNS",
    "EditEvent",
    "EditStream",
    "StreamParseError",
    "canonical_csv",
    "infer_anonymous",
    "parse_csv",
    "parse_mediawiki_xml",
    "write_canonical_csv",
]

# Canonical CSV column order; `anonymous` is serialized as 0/1.
CSV_COLUMNS = ("page_id", "editor_id", "timestamp", "anonymous")

_REQUIRED_COLUMNS = ("page_id", "editor_id", "timestamp")


class StreamParseError(ValueError):
    """Raised when an input file cannot be parsed into edit events."""


@dataclass(frozen=True)
class EditEvent:
    """One revision act: who edited which page, when, and anonymously or not.

    Timestamps are integer seconds since the Unix epoch (UTC).
    """

    page_id: str
    editor_id: str
    timestamp: int
    anonymous: bool = False

    def __post_init__(self):
        if not self.page_id:
            raise ValueError("page_id must be non-empty")
        if not self.editor_id:
            raise ValueError("editor_id must be non-empty")
        if not isinstance(self.timestamp, int) or isinstance(self.timestamp, bool):
            raise ValueError(f"timestamp must be an integer, got {self.timestamp!r}")
        if self.timestamp < 0:
            raise ValueError(f"timestamp must be non-negative, got {self.timestamp}")


class EditStream:
    """Immutable collection of edit events, grouped by page.

    Within each page group events are sorted ascending by timestamp, with
    input order preserved between equal timestamps. Instances compare equal
    when they hold the same groups, regardless of page insertion order, and
    are safe to share between threads.
    """

    __slots__ = ("_pages", "_editor_count", "_event_count")

    def __init__(self, pages: Mapping[str, Sequence[EditEvent]]):
        groups: dict[str, tuple[EditEvent, ...]] = {}
        editors: set[str] = set()
        total = 0
        for page_id, events in pages.items():
            group = tuple(events)
            if not group:
                raise ValueError(f"page {page_id!r} has an empty event group")
            previous = None
            for event in group:
                if event.page_id != page_id:
                    raise ValueError(
                        f"event for page {event.page_id!r} filed under {page_id!r}"
                    )
                if previous is not None and event.timestamp < previous:
                    raise ValueError(f"page {page_id!r} events are not time-ordered")
                previous = event.timestamp
                editors.add(event.editor_id)
            groups[page_id] = group
            total += len(group)
        self._pages = groups
        self._editor_count = len(editors)
        self._event_count = total

    @classmethod
    def from_events(cls, events: Iterable[EditEvent]) -> "EditStream":
        """Group arbitrary events by page and stable-sort each group by time."""
        grouped: dict[str, list[EditEvent]] = {}
        for event in events:
            grouped.setdefault(event.page_id, []).append(event)
        for group in grouped.values():
            group.sort(key=lambda e: e.timestamp)  # stable: keeps input order on ties
        return cls(grouped)

    @property
    def pages(self) -> Mapping[str, tuple[EditEvent, ...]]:
        return self._pages

    @property
    def page_count(self) -> int:
        return len(self._pages)

    @property
    def editor_count(self) -> int:
        return self._editor_count

    @property
    def event_count(self) -> int:
        return self._event_count

    def events(self) -> Iterator[EditEvent]:
        """Iterate all events, page group by page group."""
        for group in self._pages.values():
            yield from group

    def __eq__(self, other):
        if not isinstance(other, EditStream):
            return NotImplemented
        return self._pages == other._pages

    def __repr__(self):
        return (
            f"EditStream(pages={self.page_count}, editors={self.editor_count}, "
            f"events={self.event_count})"
        )


def infer_anonymous(editor_id: str) -> bool:
    """True iff the editor id is an IPv4 or IPv6 address (unregistered editor)."""
    try:
        ipaddress.ip_address(editor_id)
    except ValueError:
        return False
    return True


def _timestamp_from_text(text: str) -> int:
    """Parse integer epoch seconds or an ISO-8601 instant into epoch seconds."""
    value = text.strip()
    if not value:
        raise ValueError("empty timestamp")
    try:
        return int(value)
    except ValueError:
        pass
    iso = value[:-1] + "+00:00" if value.endswith(("Z", "z")) else value
    try:
        moment = datetime.fromisoformat(iso)
    except ValueError as exc:
        raise ValueError(f"unparsable timestamp {text!r}") from exc
    if moment.tzinfo is None:
        moment = moment.replace(tzinfo=timezone.utc)
    return int(moment.timestamp())


def _open_text(source):
    """Return (text file, owns_handle) for a path, text file, or byte stream."""
    if isinstance(source, (str, Path)):
        return open(source, "r", encoding="utf-8", newline=""), True
    if isinstance(source, io.TextIOBase):
        return source, False
    return io.TextIOWrapper(source, encoding="utf-8", newline=""), False


def parse_csv(source, *, delimiter: str = ",") -> EditStream:
    """Parse a CSV edit log into an EditStream.

    Parameters
    ----------
    source : path, text file, or binary file
        UTF-8 CSV with a header row naming at least ``page_id``,
        ``editor_id`` and ``timestamp``; an optional ``anonymous`` column
        takes 0/1 or true/false. Timestamps are integer epoch seconds or
        ISO-8601. Without an ``anonymous`` column the flag is inferred from
        the editor id via :func:`infer_anonymous`.
    delimiter : str
        Field separator, comma by default.

    Returns
    -------
    EditStream
        Events grouped by page and stably sorted by (timestamp, input order).
        Empty input yields an empty stream.

    Raises
    ------
    StreamParseError
        On a missing required column or a malformed row; row errors name the
        offending line number.
    """
    handle, owned = _open_text(source)
    try:
        reader = csv.reader(handle, delimiter=delimiter)
        header = next(reader, None)
        if header is None:
            return EditStream({})
        columns = {name.strip(): idx for idx, name in enumerate(header)}
        missing = [name for name in _REQUIRED_COLUMNS if name not in columns]
        if missing:
            raise StreamParseError(f"missing required column(s): {', '.join(missing)}")
        anon_idx = columns.get("anonymous")
        events = []
        for row in reader:
            line = reader.line_num
            if len(row) != len(header):
                raise StreamParseError(
                    f"line {line}: expected {len(header)} fields, got {len(row)}"
                )
            page_id = row[columns["page_id"]]
            editor_id = row[columns["editor_id"]]
            try:
                timestamp = _timestamp_from_text(row[columns["timestamp"]])
                if anon_idx is None:
                    anonymous = infer_anonymous(editor_id)
                else:
                    anonymous = _parse_flag(row[anon_idx])
                events.append(EditEvent(page_id, editor_id, timestamp, anonymous))
            except ValueError as exc:
                raise StreamParseError(f"line {line}: {exc}") from exc
        return EditStream.from_events(events)
    finally:
        if owned:
            handle.close()


def _parse_flag(text: str) -> bool:
    value = text.strip().lower()
    if value in ("1", "true"):
        return True
    if value in ("0", "false"):
        return False
    raise ValueError(f"unparsable anonymous flag {text!r}")


def write_canonical_csv(stream: EditStream, out) -> None:
    """Write the canonical CSV form: pages in sorted order, flags as 0/1.

    Re-parsing the output reproduces the stream exactly.
    """
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for page_id in sorted(stream.pages):
        for event in stream.pages[page_id]:
            writer.writerow(
                [
                    event.page_id,
                    event.editor_id,
                    event.timestamp,
                    1 if event.anonymous else 0,
                ]
            )


def canonical_csv(stream: EditStream) -> str:
    """Canonical CSV form of a stream as a string."""
    buffer = io.StringIO()
    write_canonical_csv(stream, buffer)
    return buffer.getvalue()


class _ExportHandler:
    """Expat-driven state machine over a MediaWiki export document.

    Keeps at most one page's revisions in memory. Revisions whose
    contributor carries neither a username nor an ip, or whose timestamp is
    missing or unparsable, are skipped and counted rather than failing the
    whole parse (real dumps contain deleted/suppressed contributors).
    """

    def __init__(self):
        self.parser = expat.ParserCreate()
        self.parser.buffer_text = True
        self.parser.StartElementHandler = self._start
        self.parser.EndElementHandler = self._end
        self.parser.CharacterDataHandler = self._chardata
        self.skipped = 0
        self._stack: list[str] = []
        self._in_page = False
        self._in_revision = False
        self._title = None
        self._revisions: list[tuple[int, str, bool]] = []
        self._fields: dict[str, str] = {}
        self._capture: str | None = None
        self._buffer: list[str] = []
        self._pages: dict[str, list[tuple[int, str, bool]]] = {}
        self._needs_sort: set[str] = set()

    def _start(self, name, attrs):
        local = name.rsplit(":", 1)[-1]
        self._stack.append(local)
        parent = self._stack[-2] if len(self._stack) >= 2 else None
        if local == "page":
            self._in_page = True
            self._title = None
        elif local == "revision" and self._in_page:
            self._in_revision = True
            self._fields = {}
        elif (
            (local == "title" and parent == "page" and self._in_page)
            or (local == "timestamp" and parent == "revision" and self._in_revision)
            or (local in ("username", "ip") and parent == "contributor" and self._in_revision)
        ):
            self._capture = local
            self._buffer = []

    def _chardata(self, data):
        if self._capture is not None:
            self._buffer.append(data)

    def _end(self, name):
        local = name.rsplit(":", 1)[-1]
        self._stack.pop()
        if self._capture == local:
            text = "".join(self._buffer)
            if local == "title":
                self._title = text
            elif self._in_revision:
                self._fields[local] = text
            self._capture = None
        if local == "revision" and self._in_page:
            self._in_revision = False
            self._finish_revision()
        elif local == "page" and self._in_page:
            self._in_page = False
            self._finish_page()

    def _finish_revision(self):
        username = self._fields.get("username")
        ip = self._fields.get("ip")
        editor = username if username is not None else ip
        if not editor:
            self.skipped += 1
            return
        try:
            timestamp = _timestamp_from_text(self._fields.get("timestamp", ""))
            if timestamp < 0:
                raise ValueError("negative timestamp")
        except ValueError:
            self.skipped += 1
            return
        self._revisions.append((timestamp, editor, username is None))

    def _finish_page(self):
        title = (self._title or "").strip()
        if not title:
            raise StreamParseError(
                f"page without title at byte offset {self.parser.CurrentByteIndex}"
            )
        if self._revisions:
            if title in self._pages:
                self._pages[title].extend(self._revisions)
                self._needs_sort.add(title)
            else:
                self._revisions.sort(key=lambda r: r[0])  # stable: document order on ties
                self._pages[title] = self._revisions
        self._revisions = []

    def result(self) -> EditStream:
        for title in self._needs_sort:
            self._pages[title].sort(key=lambda r: r[0])
        groups = {
            title: tuple(
                EditEvent(title, editor, timestamp, anonymous)
                for timestamp, editor, anonymous in revisions
            )
            for title, revisions in self._pages.items()
        }
        return EditStream(groups)


def parse_mediawiki_xml(source) -> tuple[EditStream, int]:
    """Parse a MediaWiki export document into an EditStream.

    Accepts a path or a binary file object and parses incrementally, so
    memory use is bounded by a single page's revisions. Handles the export
    schema subset page/title and revision/timestamp plus
    revision/contributor/{username|ip}; element names may be bare or
    namespace-prefixed. The page title becomes the page id, and an event is
    anonymous exactly when the contributor was given as an ip element.

    Returns
    -------
    (EditStream, int)
        The parsed stream and the number of skipped revisions (those
        lacking an identifiable contributor or a usable timestamp).

    Raises
    ------
    StreamParseError
        For structurally invalid XML, reporting the byte offset.
    """
    handler = _ExportHandler()
    if isinstance(source, (str, Path)):
        handle = open(source, "rb")
        owned = True
    else:
        handle = source
        owned = False
    try:
        try:
            while True:
                chunk = handle.read(65536)
                if not chunk:
                    handler.parser.Parse(b"", True)
                    break
                handler.parser.Parse(chunk, False)
        except expat.ExpatError as exc:
            offset = handler.parser.ErrorByteIndex
            raise StreamParseError(
                f"invalid XML at byte offset {offset}: "
                f"{expat.errors.messages[exc.code]}"
            ) from exc
    finally:
        if owned:
            handle.close()
    return handler.result(), handler.skipped
