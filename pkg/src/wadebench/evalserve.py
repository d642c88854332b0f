"""HTTP session service for the human evaluation protocol.

A session picks a random task, maps its tokens to random letters (so no
language prior helps), and serves generated sequences one at a time with
the answer positions blanked.  The participant fills in the blanks; after
each submission the true (still obfuscated) sequence is revealed.  A run of
s consecutive correct answers scores an accuracy of s * 10%, attributed to
the question that started the run (a 5-streak over questions 6..10 scores
50% at question 6); ten in a row completes the task and a new task begins
with a fresh letter mapping.  The accuracy points feed the same WADE
metric used for the models.
"""

from __future__ import annotations

import itertools
import string
import threading
import uuid
from dataclasses import dataclass, field

import numpy as np
from fastapi import FastAPI
from fastapi.responses import JSONResponse

from . import metric, tasks

STREAK_TARGET = 10
_LETTERS = list(string.ascii_uppercase + string.ascii_lowercase)
_BLANK = "_"


def obfuscation_map(vocab: tasks.Vocabulary, rng) -> dict[str, str]:
    """Random bijection from task tokens to letters (pairs once 52 is exceeded)."""
    symbols = list(_LETTERS)
    if vocab.size > len(symbols):
        symbols = ["".join(p) for p in itertools.product(_LETTERS, repeat=2)]
    idx = rng.permutation(len(symbols))[: vocab.size]
    return {tok: symbols[int(i)] for tok, i in zip(vocab.tokens, idx)}


@dataclass
class Question:
    surfaces: list[str]        # original tokens
    obfuscated: list[str]      # after the session map
    hidden: list[int]          # masked positions the participant must fill


@dataclass
class EvalSession:
    session_id: str
    rng: np.random.Generator
    task_id: int = 0
    mapping: dict[str, str] = field(default_factory=dict)
    question_index: int = 0            # 1-based index of the question being asked
    streak: int = 0
    streak_start: int = 0
    points: list[tuple[int, float]] = field(default_factory=list)
    answered: int = 0
    streaks_ended: int = 0
    finished_episodes: int = 0
    current: Question | None = None
    transcript: list[dict] = field(default_factory=list)

    def start_task(self):
        self.task_id = int(self.rng.integers(1, 11))
        spec = tasks.TaskSpec(self.task_id)
        vocab = tasks.vocabulary_for(spec)
        self.mapping = obfuscation_map(vocab, self.rng)
        self._dataset = tasks.generate(spec, int(self.rng.integers(2 ** 31)), 200)
        self._cursor = 0

    def next_question(self) -> Question:
        sample = self._dataset.samples[self._cursor % len(self._dataset.samples)]
        self._cursor += 1
        surfaces = list(self._dataset.vocabulary.decode(sample.tokens))
        obfuscated = [self.mapping[t] for t in surfaces]
        hidden = [int(i) for i in np.flatnonzero(np.asarray(sample.mask, bool))]
        self.question_index += 1
        self.current = Question(surfaces, obfuscated, hidden)
        return self.current

    def blanked(self, question: Question) -> list[str]:
        return [_BLANK if i in question.hidden else tok
                for i, tok in enumerate(question.obfuscated)]

    def submit(self, answers: list[str]) -> dict:
        question = self.current
        truth = [question.obfuscated[i] for i in question.hidden]
        correct = list(answers) == truth
        self.answered += 1
        if self.streak == 0:
            self.streak_start = self.question_index
        task_switched = False
        if correct:
            self.streak += 1
            if self.streak >= STREAK_TARGET:
                self.points.append((self.streak_start, self.streak / STREAK_TARGET))
                self.streaks_ended += 1
                self.finished_episodes += 1
                self.streak = 0
                task_switched = True
                self.start_task()
        else:
            if self.streak > 0:
                self.points.append((self.streak_start, self.streak / STREAK_TARGET))
            self.streak = 0
            self.streaks_ended += 1
        self.transcript.append({
            "question": self.question_index, "answers": list(answers),
            "correct": correct, "streak": self.streak, "task_switched": task_switched,
        })
        revealed = list(question.obfuscated)
        nxt = self.next_question()
        return {
            "correct": correct,
            "revealed": revealed,
            "streak": self.streak,
            "next_sequence": self.blanked(nxt),
            "next_hidden": nxt.hidden,
            "task_switched": task_switched,
        }

    def score(self) -> dict:
        curve = metric.AccuracyCurve(tuple(self.points))
        return {
            "curve": [[q, a] for q, a in curve.points],
            "wade": metric.wade(curve),
        }


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status,
                        content={"error": {"code": code, "message": message}})


def create_app(seed: int | None = None, static_dir=None) -> FastAPI:
    """Build the service; ``seed`` makes session task draws reproducible."""
    app = FastAPI(title="human-eval service")
    sessions: dict[str, EvalSession] = {}
    lock = threading.Lock()
    root_rng = np.random.default_rng(seed)

    app.state.sessions = sessions

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.post("/session")
    def create_session():
        with lock:
            session_id = uuid.uuid4().hex
            session = EvalSession(session_id,
                                  np.random.default_rng(root_rng.integers(2 ** 63)))
            session.start_task()
            question = session.next_question()
            sessions[session_id] = session
        return {
            "session_id": session_id,
            "sequence": session.blanked(question),
            "hidden": question.hidden,
        }

    @app.post("/session/{session_id}/answer")
    def submit_answer(session_id: str, payload: dict):
        with lock:
            session = sessions.get(session_id)
            if session is None:
                return _error(404, "session_not_found", f"no session {session_id}")
            answers = payload.get("answers")
            if not isinstance(answers, list) or not all(isinstance(a, str) for a in answers):
                return _error(400, "bad_request", "body must carry answers: [tokens]")
            if len(answers) != len(session.current.hidden):
                return _error(400, "arity_mismatch",
                              f"expected {len(session.current.hidden)} answers, "
                              f"got {len(answers)}")
            return session.submit(answers)

    @app.get("/session/{session_id}/score")
    def session_score(session_id: str):
        with lock:
            session = sessions.get(session_id)
            if session is None:
                return _error(404, "session_not_found", f"no session {session_id}")
            if session.streaks_ended == 0:
                return _error(409, "no_score",
                              "no completed streaks to score yet")
            return session.score()

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app


def serve(port: int = 8000, seed: int | None = None, static_dir=None):
    """Run the service under uvicorn (blocking)."""
    import uvicorn

    uvicorn.run(create_app(seed=seed, static_dir=static_dir),
                host="127.0.0.1", port=port, log_level="warning")
