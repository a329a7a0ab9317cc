"""Local HTTP service: sessions over the engine, persisted as replayable logs.

Endpoints (JSON bodies, canonical-document conventions):

    POST /sessions                     create from {spectrum, formula, granularity?, tiebreak?}
    POST /sessions/import              recreate from an exported session document
    GET  /sessions/{sid}/ranking       query: limit, granularity (coarser view)
    POST /sessions/{sid}/feedback      {element, verdict}
    POST /sessions/{sid}/reanalyze     {spectrum}
    GET  /sessions/{sid}/explanation   query: element
    GET  /sessions/{sid}/export        self-contained session document

Statuses: 2xx success, 400/409 validation, 404 unknown session.  Each session
is saved to disk after every mutating request; a saved file replays to the
exact in-memory state.
"""

from __future__ import annotations

import json
import random
import threading
from dataclasses import dataclass
from pathlib import Path

from fastapi import Body, FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware

from .errors import SbflError, SessionConcluded, UnknownSession
from .formulas import resolve_formula
from .ingestion import export_canonical_obj, parse_canonical_obj
from .interactive import FeedbackAction, Session, Verdict
from .ranking import Tiebreak, aggregate, explain, formula_label, report_to_dict
from .spectrum import ElementKind

SESSION_VERSION = "sbfl-session/1"


def _parse_enum(enum_cls, name, what: str):
    try:
        return enum_cls[name]
    except KeyError:
        valid = ", ".join(member.name for member in enum_cls)
        raise SbflError(f"unknown {what} {name!r} (expected one of: {valid})") from None


@dataclass
class _Stored:
    session: Session
    spectrum_doc: dict
    seed: int


class SessionStore:
    """Maps opaque session tokens to live sessions; one JSON file per session."""

    def __init__(self, data_dir: str | Path, seed: int = 0):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.seed = seed
        self._rng = random.Random(seed)
        self._store_lock = threading.Lock()
        self._session_locks: dict[str, threading.Lock] = {}
        self._sessions: dict[str, _Stored] = {}
        for path in sorted(self.data_dir.glob("*.json")):
            doc = json.loads(path.read_text())
            sid = doc.get("session_id", path.stem)
            self._sessions[sid] = self._restore(doc)
            self._session_locks[sid] = threading.Lock()

    def _new_id(self) -> str:
        while True:
            sid = f"{self._rng.getrandbits(48):012x}"
            if sid not in self._sessions:
                return sid

    def _restore(self, doc: dict) -> _Stored:
        if doc.get("version") != SESSION_VERSION:
            raise SbflError(
                f"expected a {SESSION_VERSION!r} document, got {doc.get('version')!r}"
            )
        for key in ("spectrum", "formula", "granularity", "tiebreak"):
            if key not in doc:
                raise SbflError(f"session document is missing {key!r}")
        parsed = parse_canonical_obj(doc["spectrum"])
        session = Session(
            parsed.spectrum,
            resolve_formula(doc["formula"]),
            granularity=_parse_enum(ElementKind, doc["granularity"], "granularity"),
            tiebreak=_parse_enum(Tiebreak, doc["tiebreak"], "tiebreak"),
            call_graph=parsed.call_graph,
        )
        log = [
            FeedbackAction(
                element=rec["element"],
                verdict=_parse_enum(Verdict, rec["verdict"], "verdict"),
                seq=rec["seq"],
            )
            for rec in doc.get("feedback_log", [])
        ]
        session.load_log(log)
        return _Stored(
            session=session, spectrum_doc=doc["spectrum"], seed=doc.get("seed", 0)
        )

    def _session_doc(self, sid: str, stored: _Stored) -> dict:
        return {
            "version": SESSION_VERSION,
            "session_id": sid,
            "seed": stored.seed,
            "formula": formula_label(stored.session.formula),
            "granularity": stored.session.granularity.name,
            "tiebreak": stored.session.tiebreak.value,
            "spectrum": stored.spectrum_doc,
            "feedback_log": [
                {"seq": a.seq, "element": a.element, "verdict": a.verdict.value}
                for a in stored.session.log
            ],
        }

    def _save(self, sid: str) -> None:
        doc = self._session_doc(sid, self._sessions[sid])
        path = self.data_dir / f"{sid}.json"
        tmp = path.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(doc, indent=2) + "\n")
        tmp.replace(path)

    def create(
        self,
        spectrum_doc: dict,
        formula_text: str,
        granularity: str = "STATEMENT",
        tiebreak: str = "LINE_ASC",
        log: list[dict] | None = None,
    ) -> str:
        doc = {
            "version": SESSION_VERSION,
            "seed": self.seed,
            "formula": formula_text,
            "granularity": granularity,
            "tiebreak": tiebreak,
            "spectrum": spectrum_doc,
            "feedback_log": log or [],
        }
        stored = self._restore(doc)
        with self._store_lock:
            sid = self._new_id()
            self._sessions[sid] = stored
            self._session_locks[sid] = threading.Lock()
        self._save(sid)
        return sid

    def get(self, sid: str) -> _Stored:
        stored = self._sessions.get(sid)
        if stored is None:
            raise UnknownSession(f"no session {sid!r}")
        return stored

    def lock(self, sid: str) -> threading.Lock:
        self.get(sid)
        return self._session_locks[sid]

    def ranking_payload(
        self, sid: str, limit: int | None = None, granularity: str | None = None
    ) -> dict:
        stored = self.get(sid)
        session = stored.session
        report = session.current_report()
        if granularity is not None:
            kind = _parse_enum(ElementKind, granularity, "granularity")
            if kind != session.granularity:
                report = aggregate(report, session.spectrum, kind)
        body = report_to_dict(session.spectrum, report, limit)
        body["session_id"] = sid
        body["session_granularity"] = session.granularity.name
        body["concluded"] = session.concluded
        body["dirty"] = session.dirty
        body["available_granularities"] = [
            k.name for k in session.spectrum.kinds_present() if k >= session.granularity
        ]
        return body

    def feedback(self, sid: str, element: int, verdict: str) -> dict:
        stored = self.get(sid)
        with self._session_locks[sid]:
            stored.session.feedback(element, _parse_enum(Verdict, verdict, "verdict"))
            self._save(sid)
        return self.ranking_payload(sid)

    def reanalyze(self, sid: str, spectrum_doc: dict) -> dict:
        stored = self.get(sid)
        with self._session_locks[sid]:
            parsed = parse_canonical_obj(spectrum_doc)
            result = stored.session.reanalyze(parsed.spectrum, parsed.call_graph)
            stored.spectrum_doc = spectrum_doc
            self._save(sid)
        body = self.ranking_payload(sid)
        body["skipped_actions"] = [
            {"seq": a.seq, "element": a.element, "verdict": a.verdict.value}
            for a in result.skipped
        ]
        return body

    def explanation_payload(self, sid: str, element: int) -> dict:
        stored = self.get(sid)
        session = stored.session
        exp = explain(session.spectrum, session.formula, element)
        el = session.spectrum.element(element)
        return {
            "element": exp.element,
            "name": el.name,
            "path": el.path,
            "start_line": el.start_line,
            "end_line": el.end_line,
            "metrics": {
                "ef": exp.metrics.ef,
                "ep": exp.metrics.ep,
                "nf": exp.metrics.nf,
                "np": exp.metrics.np,
            },
            "formula": exp.formula_text,
            "trace": exp.trace,
            "score": exp.score,
            "failing_tests": [
                {"id": tid, "name": session.spectrum.tests[tid].name}
                for tid in exp.failing_tests
            ],
            "passing_covering": exp.passing_count,
        }

    def export(self, sid: str) -> dict:
        stored = self.get(sid)
        doc = self._session_doc(sid, stored)
        # refresh the embedded spectrum from the live object so the export is
        # self-contained even if the session was created before a reanalyze
        doc["spectrum"] = export_canonical_obj(
            stored.session.spectrum, stored.session.call_graph
        )
        doc["report"] = self.ranking_payload(sid)
        return doc

    def import_session(self, doc: dict) -> str:
        if not isinstance(doc, dict):
            raise SbflError("session document must be an object")
        if doc.get("version") != SESSION_VERSION:
            raise SbflError(
                f"expected a {SESSION_VERSION!r} document, got {doc.get('version')!r}"
            )
        for key in ("spectrum", "formula", "granularity", "tiebreak"):
            if key not in doc:
                raise SbflError(f"session document is missing {key!r}")
        return self.create(
            doc["spectrum"],
            doc["formula"],
            doc["granularity"],
            doc["tiebreak"],
            log=doc.get("feedback_log", []),
        )


def create_app(data_dir: str | Path, seed: int = 0, ui_dir: str | Path | None = None) -> FastAPI:
    store = SessionStore(data_dir, seed=seed)
    app = FastAPI(title="sbfl service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    app.state.store = store

    def run(fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except UnknownSession as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        except SessionConcluded as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from exc
        except SbflError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc

    @app.post("/sessions", status_code=201)
    def create_session(payload: dict = Body(...)):
        for key in ("spectrum", "formula"):
            if key not in payload:
                raise HTTPException(status_code=400, detail=f"missing {key!r}")
        sid = run(
            store.create,
            payload["spectrum"],
            payload["formula"],
            payload.get("granularity", "STATEMENT"),
            payload.get("tiebreak", "LINE_ASC"),
        )
        return {"session_id": sid}

    @app.post("/sessions/import", status_code=201)
    def import_session(payload: dict = Body(...)):
        return {"session_id": run(store.import_session, payload)}

    @app.get("/sessions/{sid}/ranking")
    def get_ranking(
        sid: str,
        limit: int | None = Query(default=None, ge=1),
        granularity: str | None = Query(default=None),
    ):
        return run(store.ranking_payload, sid, limit, granularity)

    @app.post("/sessions/{sid}/feedback")
    def post_feedback(sid: str, payload: dict = Body(...)):
        for key in ("element", "verdict"):
            if key not in payload:
                raise HTTPException(status_code=400, detail=f"missing {key!r}")
        if not isinstance(payload["element"], int):
            raise HTTPException(status_code=400, detail="'element' must be an integer id")
        return run(store.feedback, sid, payload["element"], payload["verdict"])

    @app.post("/sessions/{sid}/reanalyze")
    def post_reanalyze(sid: str, payload: dict = Body(...)):
        if "spectrum" not in payload:
            raise HTTPException(status_code=400, detail="missing 'spectrum'")
        return run(store.reanalyze, sid, payload["spectrum"])

    @app.get("/sessions/{sid}/explanation")
    def get_explanation(sid: str, element: int = Query(...)):
        return run(store.explanation_payload, sid, element)

    @app.get("/sessions/{sid}/export")
    def export_session(sid: str):
        return run(store.export, sid)

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
