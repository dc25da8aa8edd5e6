"""The live console service: a WebSocket event/command channel plus an HTTP
state snapshot, in front of a pipeline running on its own thread."""

from __future__ import annotations

import asyncio
import json
import threading
from typing import List, Optional

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from .events import GameEvent
from .pipeline import GamePipeline

CLIENT_COMMANDS = {"confirm_turn", "submit_move", "ask", "correct_position", "abort"}


class PortInUse(OSError):
    pass


def event_to_message(event: GameEvent, seq: int) -> Optional[dict]:
    """Translate a pipeline event into a console protocol message."""
    kind = event.kind
    if kind == "state_change":
        return {
            "type": "state_update",
            "seq": seq,
            "fen": event.payload["fen"],
            "pose_state": event.payload["state"],
        }
    if kind == "gesture":
        return {"type": "gesture", "seq": seq, "kind": event.payload["kind"]}
    if kind == "sentence":
        return {"type": "sentence", "seq": seq, "text": event.payload["text"]}
    if kind == "halt":
        return {
            "type": "halt",
            "seq": seq,
            "reason": event.payload["reason"],
            "observed_fen": event.payload["observed_fen"],
        }
    if kind == "game_end":
        return {"type": "game_end", "seq": seq, "result": event.payload["result"]}
    return None


class ConsoleServer:
    """Bridges WebSocket clients to the pipeline's command queue and fans
    pipeline events out to every connected client in order."""

    def __init__(self, pipeline: GamePipeline, static_dir=None):
        self.pipeline = pipeline
        self.app = FastAPI(title="chessarm console")
        self._clients: List[asyncio.Queue] = []
        self._clients_lock = threading.Lock()
        self._loop: Optional[asyncio.AbstractEventLoop] = None
        self._seq = 0
        self._thread: Optional[threading.Thread] = None
        pipeline.recorder.subscribe(self._on_event)
        pipeline.recorder.subscribe_timing(self._on_timing)
        self._routes()
        if static_dir is not None:
            self._mount_static(static_dir)

    def _mount_static(self, static_dir) -> None:
        """Serve the built browser client alongside the API."""
        from pathlib import Path

        from fastapi.staticfiles import StaticFiles

        root = Path(static_dir)
        dist = root / "dist"
        public = root / "public"
        if dist.is_dir():
            self.app.mount("/dist", StaticFiles(directory=dist), name="dist")
        if public.is_dir():
            self.app.mount("/", StaticFiles(directory=public, html=True), name="public")

    # --- pipeline-side ---------------------------------------------------------

    def _broadcast(self, message: dict) -> None:
        with self._clients_lock:
            clients = list(self._clients)
            loop = self._loop
        if loop is None:
            return
        for client in clients:
            loop.call_soon_threadsafe(client.put_nowait, message)

    def _next_seq(self) -> int:
        self._seq += 1
        return self._seq

    def _on_event(self, event: GameEvent) -> None:
        message = event_to_message(event, self._next_seq())
        if message is not None:
            self._broadcast(message)

    def _on_timing(self, record) -> None:
        self._broadcast(
            {
                "type": "timing",
                "seq": self._next_seq(),
                "phase": record.phase,
                "seconds": round(record.duration, 6),
            }
        )

    # --- HTTP/WS surface ----------------------------------------------------------

    def _routes(self) -> None:
        app = self.app

        @app.get("/state")
        def state():
            return self.pipeline.snapshot()

        @app.websocket("/ws")
        async def websocket(ws: WebSocket):
            await ws.accept()
            outbox: asyncio.Queue = asyncio.Queue()
            with self._clients_lock:
                self._loop = asyncio.get_running_loop()
                self._clients.append(outbox)
            sender = asyncio.create_task(self._send_loop(ws, outbox))
            try:
                await self._receive_loop(ws, outbox)
            except WebSocketDisconnect:
                pass
            finally:
                sender.cancel()
                with self._clients_lock:
                    if outbox in self._clients:
                        self._clients.remove(outbox)

    async def _send_loop(self, ws: WebSocket, outbox: asyncio.Queue) -> None:
        while True:
            message = await outbox.get()
            await ws.send_text(json.dumps(message))

    async def _receive_loop(self, ws: WebSocket, outbox: asyncio.Queue) -> None:
        loop = asyncio.get_running_loop()
        while True:
            raw = await ws.receive_text()
            try:
                data = json.loads(raw)
            except json.JSONDecodeError:
                await outbox.put({"type": "error", "message": "commands must be JSON"})
                continue
            kind = data.pop("type", None)
            if kind not in CLIENT_COMMANDS:
                await outbox.put({"type": "error", "message": f"unknown command {kind!r}"})
                continue

            def reply(message, _outbox=outbox):
                loop.call_soon_threadsafe(_outbox.put_nowait, message)

            self.pipeline.post(kind, data, reply=reply)

    # --- lifecycle ---------------------------------------------------------------------

    def start_pipeline(self) -> threading.Thread:
        thread = threading.Thread(target=self.pipeline.run, daemon=True)
        thread.start()
        self._thread = thread
        return thread

    def serve(self, host: str, port: int) -> None:
        """Run uvicorn in the foreground; raises PortInUse when the port is
        already bound."""
        import socket

        import uvicorn

        probe = socket.socket()
        try:
            probe.bind((host, port))
        except OSError as exc:
            raise PortInUse(f"{host}:{port} is already in use") from exc
        finally:
            probe.close()
        self.start_pipeline()
        uvicorn.run(self.app, host=host, port=port, log_level="warning")


def serve_console(pipeline: GamePipeline) -> ConsoleServer:
    """Wrap a pipeline in the console service (not yet bound to a port)."""
    return ConsoleServer(pipeline)
