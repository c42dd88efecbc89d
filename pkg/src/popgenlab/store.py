"""Session storage: in-memory by default, one JSON document per id on disk
when a directory is configured. Classroom scale; no database."""

from __future__ import annotations

import json
import threading
from pathlib import Path

from .errors import CorruptPayloadError, SessionNotFoundError
from .session import ExperimentSession, session_from_document, session_to_document


class SessionStore:
    """Holds live sessions and serializes mutations per session.

    With ``directory`` set, every save also writes ``<id>.json`` and loads
    fall back to disk, so a restarted service finds its sessions again.
    """

    def __init__(self, directory: str | Path | None = None):
        self._sessions: dict[str, ExperimentSession] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()
        self.directory = Path(directory) if directory is not None else None
        if self.directory is not None:
            self.directory.mkdir(parents=True, exist_ok=True)

    def lock(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(session_id, threading.Lock())

    def save(self, session: ExperimentSession) -> None:
        self._sessions[session.id] = session
        if self.directory is not None:
            path = self.directory / f"{session.id}.json"
            tmp = path.with_suffix(".json.tmp")
            tmp.write_text(json.dumps(session_to_document(session)), encoding="utf-8")
            tmp.replace(path)

    def load(self, session_id: str) -> ExperimentSession:
        session = self._sessions.get(session_id)
        if session is not None:
            return session
        if self.directory is not None:
            path = self.directory / f"{session_id}.json"
            if path.exists():
                try:
                    doc = json.loads(path.read_text(encoding="utf-8"))
                except json.JSONDecodeError as exc:
                    raise CorruptPayloadError(f"unreadable session file: {exc}") from exc
                session = session_from_document(doc)
                self._sessions[session_id] = session
                return session
        raise SessionNotFoundError(f"no session with id {session_id!r}")

    def ids(self) -> list[str]:
        known = set(self._sessions)
        if self.directory is not None:
            known.update(p.stem for p in self.directory.glob("*.json"))
        return sorted(known)
