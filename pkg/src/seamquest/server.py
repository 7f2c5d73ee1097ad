"""WebSocket binding of the session gateway.

One websocket connection is one game session. The sync session loop
runs on its own thread; two queues carry text frames between it and the
async socket handlers. Sessions are fully isolated: each gets a fresh
engine built from the scenario.
"""

from __future__ import annotations

import asyncio
import itertools
import threading

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from .gateway import QueueTransport, serve_session
from .scenario import Scenario

_session_counter = itertools.count(1)


def create_app(scenario: Scenario, real_time: bool = True,
               debug_rssi: bool = False, run_dir: str | None = None,
               persist: bool = True) -> FastAPI:
    app = FastAPI(title="seamquest gateway")

    @app.get("/healthz")
    def healthz() -> dict:
        return {"ok": True, "scenario": scenario.name}

    @app.websocket("/session")
    async def session(ws: WebSocket) -> None:
        await ws.accept()
        transport = QueueTransport()
        session_id = f"ws{next(_session_counter)}"
        worker = threading.Thread(
            target=serve_session,
            args=(scenario, transport),
            kwargs={"real_time": real_time, "debug_rssi": debug_rssi,
                    "run_dir": run_dir, "session_id": session_id,
                    "persist": persist},
            daemon=True,
        )
        worker.start()

        async def reader() -> None:
            try:
                while True:
                    transport.inbox.put(await ws.receive_text())
            except WebSocketDisconnect:
                transport.mark_closed()

        async def writer() -> None:
            while True:
                item = await asyncio.to_thread(transport.outbox.get)
                if item is None:
                    return
                try:
                    await ws.send_text(item)
                except (WebSocketDisconnect, RuntimeError):
                    transport.mark_closed()
                    return

        reader_task = asyncio.create_task(reader())
        try:
            await writer()
        finally:
            transport.mark_closed()
            reader_task.cancel()
            try:
                await reader_task
            except (asyncio.CancelledError, WebSocketDisconnect):
                pass
            await asyncio.to_thread(worker.join, 5.0)
            try:
                await ws.close()
            except RuntimeError:
                pass  # already closed by the peer

    return app
