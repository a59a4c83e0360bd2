"""HTTP survey backend.

Participants get a session token, then loop: fetch a random pair+prompt,
submit a choice. Every finalized choice is appended to a JSON-lines event
log and immediately folded into the live Glicko table. The log is the
only authoritative store: rankings are derived state and a restart
replays the log to reproduce them exactly. Sessions live in a small
sidecar file so tokens survive restarts; pending (unsubmitted) pairs are
memory-only and are simply lost with the browser window.

Event finalization is serialized through one lock (single-writer, in
arrival order); request handlers are plain sync functions so the server
may run them on many threads safely.
"""

from __future__ import annotations

import json
import logging
import random
import threading
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Literal

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import FileResponse, JSONResponse, StreamingResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .datasets import DatasetManifest, load_manifest
from .errors import ParameterError
from .ranking import (
    PROMPTS,
    ComparisonEvent,
    RankingTable,
    filter_by_rd,
    replay,
)

log = logging.getLogger(__name__)

AGE_RANGES = ("under-18", "18-24", "25-34", "35-44", "45-54", "55-64", "65-plus", "undisclosed")
GENDERS = ("female", "male", "non-binary", "other", "undisclosed")
EXPERTISE_LEVELS = ("none", "novice", "intermediate", "expert", "professional", "undisclosed")

PROMPT_TEXT = {
    "aesthetic": "Which one of these images do you like the most?",
    "complexity": "Which of these images is more complex?",
}

CONTINUE_CHECKPOINT = 10  # participants are asked to continue or exit here

_MEDIA_TYPES = {".png": "image/png", ".jpg": "image/jpeg", ".jpeg": "image/jpeg"}


@dataclass(frozen=True)
class SurveyConfig:
    datasets: dict[str, Path]  # name -> manifest csv
    log_path: Path
    static_dir: Path | None = None
    rng_seed: int | None = None
    high_rd_sampler: bool = False
    port: int = 8080

    @property
    def sessions_path(self) -> Path:
        return self.log_path.parent / (self.log_path.stem + ".sessions" + self.log_path.suffix)


def load_config_toml(path) -> SurveyConfig:
    """Read a survey config file (TOML)."""
    try:
        import tomllib  # py311+
    except ModuleNotFoundError:
        import tomli as tomllib
    p = Path(path)
    with open(p, "rb") as fh:
        doc = tomllib.load(fh)
    datasets = {name: (p.parent / value) for name, value in doc.get("datasets", {}).items()}
    static = doc.get("static_dir")
    return SurveyConfig(
        datasets=datasets,
        log_path=p.parent / doc.get("log", "events.jsonl"),
        static_dir=(p.parent / static) if static else None,
        rng_seed=doc.get("rng_seed"),
        high_rd_sampler=bool(doc.get("high_rd_sampler", False)),
        port=int(doc.get("port", 8080)),
    )


@dataclass
class Session:
    session_id: str
    demographics: dict[str, str]
    created_at: str
    comparisons_completed: int = 0


@dataclass(frozen=True)
class PendingComparison:
    comparison_id: str
    session_id: str
    dataset: str
    left: str
    right: str
    prompt: str


def _now_iso() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="milliseconds")


class SurveyState:
    """All mutable survey state plus its durable log files."""

    def __init__(self, config: SurveyConfig):
        self.config = config
        self.manifests: dict[str, DatasetManifest] = {}
        for name, manifest_path in sorted(config.datasets.items()):
            manifest = load_manifest(manifest_path, name=name)
            if len(manifest) < 2:
                raise ParameterError(
                    f"dataset {name!r} has {len(manifest)} images; pairwise comparison needs >= 2"
                )
            self.manifests[name] = manifest
        if not self.manifests:
            raise ParameterError("at least one dataset must be configured")
        self.rng = random.Random(config.rng_seed)
        self.lock = threading.Lock()
        self.sessions: dict[str, Session] = {}
        self.pending: dict[str, PendingComparison] = {}
        self.table = RankingTable()
        self._recover()
        self._log_fh = open(config.log_path, "a", encoding="utf-8")

    def _recover(self) -> None:
        config = self.config
        config.log_path.parent.mkdir(parents=True, exist_ok=True)
        if config.sessions_path.exists():
            with open(config.sessions_path, encoding="utf-8") as fh:
                for line in fh:
                    if not line.strip():
                        continue
                    doc = json.loads(line)
                    session = Session(
                        session_id=doc["session_id"],
                        demographics=doc["demographics"],
                        created_at=doc["created_at"],
                    )
                    self.sessions[session.session_id] = session
        if config.log_path.exists():
            with open(config.log_path, encoding="utf-8") as fh:
                self.table = replay(line for line in fh if line.strip())
            with open(config.log_path, encoding="utf-8") as fh:
                for line in fh:
                    if not line.strip():
                        continue
                    try:
                        sid = json.loads(line).get("session_id")
                    except json.JSONDecodeError:
                        continue
                    if sid in self.sessions:
                        self.sessions[sid].comparisons_completed += 1

    # -- sessions ---------------------------------------------------------

    def create_session(self, demographics: dict[str, str]) -> Session:
        session = Session(
            session_id=uuid.uuid4().hex,
            demographics=dict(demographics),
            created_at=_now_iso(),
        )
        with self.lock:
            self.sessions[session.session_id] = session
            with open(self.config.sessions_path, "a", encoding="utf-8") as fh:
                fh.write(
                    json.dumps(
                        {
                            "session_id": session.session_id,
                            "demographics": session.demographics,
                            "created_at": session.created_at,
                        },
                        separators=(",", ":"),
                    )
                    + "\n"
                )
        return session

    # -- comparison flow --------------------------------------------------

    def _sample_pair(self, manifest: DatasetManifest, dataset: str) -> tuple[str, str]:
        ids = manifest.ids()
        if not self.config.high_rd_sampler:
            pair = self.rng.sample(ids, 2)
            return pair[0], pair[1]
        # Optional mode: bias the first pick toward uncertain (high-RD) images.
        weights = [
            max(self.table.get(dataset, image_id, prompt).rd for prompt in PROMPTS)
            for image_id in ids
        ]
        first = self.rng.choices(ids, weights=weights, k=1)[0]
        second = self.rng.choice([i for i in ids if i != first])
        if self.rng.random() < 0.5:
            return first, second
        return second, first

    def next_comparison(self, session_id: str) -> dict:
        session = self.sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")
        with self.lock:
            dataset = self.rng.choice(sorted(self.manifests))
            left, right = self._sample_pair(self.manifests[dataset], dataset)
            prompt = self.rng.choice(PROMPTS)
            pending = PendingComparison(
                comparison_id=uuid.uuid4().hex,
                session_id=session_id,
                dataset=dataset,
                left=left,
                right=right,
                prompt=prompt,
            )
            self.pending[pending.comparison_id] = pending
            completed = session.comparisons_completed
        return {
            "comparison_id": pending.comparison_id,
            "dataset": dataset,
            "left_url": f"/images/{dataset}/{left}",
            "right_url": f"/images/{dataset}/{right}",
            "prompt": prompt,
            "prompt_text": PROMPT_TEXT[prompt],
            "completed": completed,
            "continue_checkpoint": CONTINUE_CHECKPOINT,
        }

    def submit_choice(self, comparison_id: str, outcome: str, duration_ms: int) -> ComparisonEvent:
        with self.lock:
            pending = self.pending.pop(comparison_id, None)
            if pending is None:
                raise HTTPException(
                    status_code=409,
                    detail=f"comparison {comparison_id!r} is unknown or already finalized",
                )
            event = ComparisonEvent(
                comparison_id=pending.comparison_id,
                session_id=pending.session_id,
                dataset=pending.dataset,
                left=pending.left,
                right=pending.right,
                prompt=pending.prompt,
                outcome=outcome,
                duration_ms=duration_ms,
                timestamp=_now_iso(),
            )
            self._log_fh.write(event.to_json() + "\n")
            self._log_fh.flush()
            self.table.apply(event)
            session = self.sessions.get(pending.session_id)
            if session is not None:
                session.comparisons_completed += 1
        return event

    # -- queries ----------------------------------------------------------

    def rankings(self, dataset: str, prompt: str, max_rd: float | None) -> dict:
        if dataset not in self.manifests:
            raise HTTPException(status_code=404, detail=f"unknown dataset {dataset!r}")
        with self.lock:
            subset = self.table.subset(
                [key for key in self.table.images() if key[0] == dataset]
            )
        if max_rd is not None:
            subset, _ = filter_by_rd(subset, max_rd)
        rows = subset.ranked(prompt, dataset=dataset)
        fraction = len(subset) / len(self.manifests[dataset])
        return {
            "rankings": [
                {
                    "image_id": image_id,
                    "rating": rating.rating,
                    "rd": rating.rd,
                    "matches": rating.matches,
                }
                for _, image_id, rating in rows
            ],
            "retained_fraction": fraction,
        }

    def export_lines(self):
        with open(self.config.log_path, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    yield line if line.endswith("\n") else line + "\n"

    def image_path(self, dataset: str, image_id: str) -> Path:
        manifest = self.manifests.get(dataset)
        if manifest is None:
            raise HTTPException(status_code=404, detail=f"unknown dataset {dataset!r}")
        try:
            return manifest.entry(image_id).path
        except KeyError:
            raise HTTPException(
                status_code=404, detail=f"unknown image {image_id!r} in {dataset!r}"
            ) from None

    def close(self) -> None:
        self._log_fh.close()


class SessionRequest(BaseModel):
    age_range: Literal[AGE_RANGES]  # type: ignore[valid-type]
    gender: Literal[GENDERS]  # type: ignore[valid-type]
    expertise: Literal[EXPERTISE_LEVELS]  # type: ignore[valid-type]


class ChoiceRequest(BaseModel):
    outcome: Literal["left", "right", "tie"]
    duration_ms: int


def create_app(config: SurveyConfig) -> FastAPI:
    state = SurveyState(config)
    app = FastAPI(title="aesthia survey")
    app.state.survey = state

    @app.post("/api/sessions", status_code=201)
    def create_session(body: SessionRequest):
        session = state.create_session(body.model_dump())
        return {"session_id": session.session_id}

    @app.get("/api/sessions/{session_id}/next")
    def next_comparison(session_id: str):
        return state.next_comparison(session_id)

    @app.post("/api/comparisons/{comparison_id}")
    def submit_choice(comparison_id: str, body: ChoiceRequest):
        if body.duration_ms < 0:
            raise HTTPException(status_code=422, detail="duration_ms must be >= 0")
        state.submit_choice(comparison_id, body.outcome, body.duration_ms)
        return {"ok": True}

    @app.get("/api/rankings")
    def rankings(
        dataset: str = Query(...),
        prompt: str = Query("aesthetic"),
        max_rd: float | None = Query(None),
    ):
        if prompt not in PROMPTS:
            raise HTTPException(status_code=422, detail=f"prompt must be one of {PROMPTS}")
        return JSONResponse(state.rankings(dataset, prompt, max_rd))

    @app.get("/api/export")
    def export():
        return StreamingResponse(state.export_lines(), media_type="application/x-ndjson")

    @app.get("/images/{dataset}/{image_id}")
    def image(dataset: str, image_id: str):
        path = state.image_path(dataset, image_id)
        media = _MEDIA_TYPES.get(path.suffix.lower(), "application/octet-stream")
        return FileResponse(path, media_type=media)

    if config.static_dir is not None and Path(config.static_dir).is_dir():
        app.mount("/", StaticFiles(directory=config.static_dir, html=True), name="ui")

    return app
