"""JSON-over-HTTP bridge for the interactive curve editor.

Sessions are in-memory and versioned; every mutating request bumps the version
by one and pushes the previous curve on a bounded undo stack.  Mutations on a
session are serialized by a per-session lock, reads see the latest committed
immutable curve.
"""
from __future__ import annotations

import threading
import uuid

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware

from .curve import MDCurve, OperatorError, elevate_degree, insert_knot, make_curve
from .documents import DocumentError, curve_from_document, curve_to_document
from .space import ConnectionMatrix, InvalidSpaceError
from .transitions import SingularSystemError

UNDO_DEPTH = 64
INVARIANCE_SAMPLES = 400


class Session:
    def __init__(self, curve: MDCurve):
        self.id = uuid.uuid4().hex[:12]
        self.curve = curve
        self.version = 1
        self.undo_stack: list[MDCurve] = []
        self.lock = threading.Lock()

    def commit(self, curve: MDCurve) -> None:
        self.undo_stack.append(self.curve)
        del self.undo_stack[:-UNDO_DEPTH]
        self.curve = curve
        self.version += 1


def _summary(session: Session) -> dict:
    curve = session.curve
    parts = curve.partitions
    return {
        "session_id": session.id,
        "version": session.version,
        "K": curve.space.dimension,
        "partitions": {
            "starts": parts.starts.tolist(),
            "ends": parts.ends.tolist(),
        },
        "breakpoints": curve.space.breakpoints.tolist(),
        "degrees": curve.space.degrees.tolist(),
        "continuities": curve.space.continuities.tolist(),
        "domain": list(curve.space.domain),
        "control_points": curve.control_points.tolist(),
    }


def create_app(ui_dir: str | None = None, check_invariance: bool = True) -> FastAPI:
    app = FastAPI(title="mdspline service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    sessions: dict[str, Session] = {}

    def get_session(session_id: str) -> Session:
        session = sessions.get(session_id)
        if session is None:
            raise HTTPException(404, f"unknown session {session_id!r}")
        return session

    @app.post("/session")
    def create_session(doc: dict):
        try:
            curve = curve_from_document(doc)
        except (DocumentError, InvalidSpaceError, OperatorError) as exc:
            raise HTTPException(400, str(exc))
        session = Session(curve)
        sessions[session.id] = session
        return _summary(session)

    @app.get("/session/{session_id}/doc")
    def get_doc(session_id: str):
        session = get_session(session_id)
        out = _summary(session)
        out["document"] = curve_to_document(session.curve)
        return out

    @app.get("/session/{session_id}/samples")
    def get_samples(session_id: str, what: str = "curve", n: int = 200):
        session = get_session(session_id)
        if n < 2 or n > 100_000:
            raise HTTPException(422, "sample count must be in 2..100000")
        curve = session.curve
        xs = np.linspace(*curve.space.domain, n)
        if what == "curve":
            data = curve.sample(xs)
            headers = ["x"] + [f"c{ax}" for ax in "xyz"[: data.shape[1]]]
        elif what == "basis":
            data = curve.basis.sample(xs)
            headers = ["x"] + [f"N{i + 1}" for i in range(curve.space.dimension)]
        elif what == "transitions":
            data = curve.transitions.sample(xs)
            headers = ["x"] + [f"f{i + 1}" for i in range(curve.space.dimension)]
        else:
            raise HTTPException(422, f"unknown sampling target {what!r}")
        return {
            "version": session.version,
            "headers": headers,
            "rows": np.column_stack([xs, data]).tolist(),
        }

    def apply_op(session: Session, body: dict) -> dict:
        op = body.get("op")
        curve = session.curve
        extra: dict = {}
        if op == "move_point":
            index, position = body.get("index"), body.get("position")
            if (
                not isinstance(index, int)
                or not 0 <= index < curve.space.dimension
                or not isinstance(position, list)
                or len(position) != curve.dim
            ):
                raise OperatorError("move_point needs a valid index and position")
            pts = np.array(curve.control_points)
            pts[index] = position
            new_curve = curve.with_control_points(pts)
        elif op == "insert_knot":
            if "x" not in body:
                raise OperatorError("insert_knot needs x")
            new_curve = insert_knot(curve, float(body["x"]))
        elif op == "elevate":
            interval = body.get("interval")
            times = body.get("times", 1)
            if not isinstance(interval, int) or not isinstance(times, int) or times < 0:
                raise OperatorError("elevate needs an interval index and times >= 0")
            new_curve = elevate_degree(curve, interval, times)
        elif op == "set_connection":
            index = body.get("index")
            if not isinstance(index, int) or not 1 <= index <= len(curve.space.breakpoints):
                raise OperatorError("set_connection needs a break-point index in 1..q")
            try:
                matrix = ConnectionMatrix(np.asarray(body.get("matrix"), dtype=float))
            except (InvalidSpaceError, TypeError, ValueError) as exc:
                raise OperatorError(f"bad connection matrix: {exc}")
            space = curve.space
            conns = (
                list(space.connections)
                if space.connections is not None
                else [ConnectionMatrix.identity(int(k) + 1) for k in space.continuities]
            )
            conns[index - 1] = matrix
            new_curve = make_curve(space.with_connections(conns), curve.control_points)
        else:
            raise OperatorError(f"unknown op {op!r}")

        if check_invariance and op in ("insert_knot", "elevate"):
            xs = np.linspace(*curve.space.domain, INVARIANCE_SAMPLES)
            dev = float(np.abs(new_curve.sample(xs) - curve.sample(xs)).max())
            extra["invariance"] = {"max_deviation": dev, "ok": dev <= 1e-10}
        session.commit(new_curve)
        return extra

    @app.post("/session/{session_id}/op")
    def post_op(session_id: str, body: dict):
        session = get_session(session_id)
        with session.lock:
            expected = body.get("expected_version")
            if expected is not None and expected != session.version:
                raise HTTPException(
                    409, f"version mismatch: expected {expected}, current {session.version}"
                )
            try:
                extra = apply_op(session, body)
            except (OperatorError, InvalidSpaceError, SingularSystemError) as exc:
                raise HTTPException(422, str(exc))
            out = _summary(session)
            out.update(extra)
            return out

    @app.post("/session/{session_id}/undo")
    def post_undo(session_id: str, body: dict | None = None):
        session = get_session(session_id)
        with session.lock:
            expected = (body or {}).get("expected_version")
            if expected is not None and expected != session.version:
                raise HTTPException(
                    409, f"version mismatch: expected {expected}, current {session.version}"
                )
            if not session.undo_stack:
                raise HTTPException(422, "nothing to undo")
            session.curve = session.undo_stack.pop()
            session.version += 1
            return _summary(session)

    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
