"""Client for render workers speaking the stdio JSONL protocol.

A pool spawns N worker processes (stub or the real harness, its command is
config), shards requests round-robin, and merges responses by id. Responses
may arrive out of order; a worker dying mid-stream marks its remaining
requests as runtime errors instead of failing the stage.
"""

from __future__ import annotations

import json
import subprocess
import threading
from dataclasses import dataclass

from ..errors import RendererUnavailable


@dataclass(frozen=True)
class RenderResult:
    id: str
    status: str
    png: bytes | None = None
    error_kind: str | None = None
    error_message: str | None = None


class RendererWorker:
    def __init__(self, argv: list[str]):
        try:
            self.proc = subprocess.Popen(
                argv,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=subprocess.DEVNULL,
                text=True,
            )
        except OSError as exc:
            raise RendererUnavailable(f"cannot spawn renderer {argv!r}: {exc}") from exc

    def run(self, requests: list[dict]) -> dict[str, RenderResult]:
        """Send all requests, collect one response per request id."""
        import base64

        def feed():
            try:
                for req in requests:
                    self.proc.stdin.write(json.dumps(req) + "\n")
                self.proc.stdin.flush()
                self.proc.stdin.close()
            except (BrokenPipeError, OSError):
                pass

        writer = threading.Thread(target=feed, daemon=True)
        writer.start()

        results: dict[str, RenderResult] = {}
        pending = {req["id"] for req in requests}
        for line in self.proc.stdout:
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError:
                continue
            rid = str(raw.get("id"))
            if raw.get("status") == "ok" and raw.get("png_base64"):
                results[rid] = RenderResult(id=rid, status="ok", png=base64.b64decode(raw["png_base64"]))
            else:
                err = raw.get("error") or {}
                results[rid] = RenderResult(
                    id=rid,
                    status="error",
                    error_kind=err.get("kind", "runtime"),
                    error_message=err.get("message", ""),
                )
            pending.discard(rid)
            if not pending:
                break
        writer.join(timeout=5)
        for rid in pending:  # worker exited early
            results[rid] = RenderResult(
                id=rid, status="error", error_kind="runtime", error_message="worker exited"
            )
        self.close()
        return results

    def close(self):
        if self.proc.poll() is None:
            self.proc.terminate()
            try:
                self.proc.wait(timeout=5)
            except subprocess.TimeoutExpired:
                self.proc.kill()


def render_all(argv: list[str], requests: list[dict], workers: int = 1) -> dict[str, RenderResult]:
    """Render a batch across a worker pool; returns results keyed by id."""
    workers = max(1, min(workers, len(requests) or 1))
    shards: list[list[dict]] = [[] for _ in range(workers)]
    for i, req in enumerate(requests):
        shards[i % workers].append(req)

    results: dict[str, RenderResult] = {}
    lock = threading.Lock()
    errors: list[Exception] = []

    def run_shard(shard: list[dict]):
        if not shard:
            return
        try:
            worker = RendererWorker(argv)
            out = worker.run(shard)
            with lock:
                results.update(out)
        except Exception as exc:
            errors.append(exc)

    threads = [threading.Thread(target=run_shard, args=(s,)) for s in shards]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    if errors:
        raise errors[0]
    return results
