"""Thin client for the experiment service.

Without a server URL the client mounts the FastAPI app in-process through an
ASGI transport, so the CLI works standalone; with ``server`` it speaks plain
HTTP to a remote instance.
"""

from __future__ import annotations

import asyncio

import httpx


class ServiceError(RuntimeError):
    def __init__(self, status_code: int, detail: str):
        super().__init__(f"service returned {status_code}: {detail}")
        self.status_code = status_code
        self.detail = detail


class ServiceClient:
    def __init__(self, server: str | None = None):
        self.server = server.rstrip("/") if server else None
        self._app = None

    def get(self, path: str) -> dict:
        return self._request("GET", path)

    def post(self, path: str, payload: dict) -> dict:
        return self._request("POST", path, payload)

    def _client_kwargs(self) -> dict:
        if self.server:
            return {"base_url": self.server}
        if self._app is None:
            from .app import create_app  # deferred: keeps client import light

            self._app = create_app()
        return {
            "transport": httpx.ASGITransport(app=self._app),
            "base_url": "http://islandga.local",
        }

    def _request(self, method: str, path: str, payload: dict | None = None) -> dict:
        return asyncio.run(self._arequest(method, path, payload))

    async def _arequest(self, method: str, path: str, payload: dict | None) -> dict:
        # batches can run for minutes, so no client-side timeout
        async with httpx.AsyncClient(timeout=None, **self._client_kwargs()) as client:
            response = await client.request(method, path, json=payload)
        if response.status_code >= 400:
            try:
                detail = response.json().get("detail", response.text)
            except ValueError:
                detail = response.text
            raise ServiceError(response.status_code, str(detail))
        return response.json()
