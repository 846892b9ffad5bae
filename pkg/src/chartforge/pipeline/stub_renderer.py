"""Stub render worker speaking the real harness protocol over stdio.

Produces deterministic synthetic chart-like PNGs (white background, colored
bars, title band) so that the whole pipeline, including the quality filter,
runs hermetically with no browser or JS runtime. Options containing an
``__fail__`` key yield scripted error responses, which tests use to exercise
pass-rate accounting.

Protocol: newline-delimited JSON requests on stdin
    {id, option|html, width?, height?, timeout_ms?}
answered by newline-delimited JSON responses on stdout
    {id, status: "ok", png_base64} | {id, status: "error", error: {kind, message}}
Diagnostics go to stderr; a malformed request line never kills the process.
"""

from __future__ import annotations

import base64
import hashlib
import io
import json
import sys

PALETTE = [
    (84, 112, 198),
    (145, 204, 117),
    (250, 200, 88),
    (238, 102, 102),
    (115, 192, 222),
    (59, 162, 114),
]


def render_synthetic_png(option_text: str, width: int, height: int) -> bytes:
    """Deterministic fake chart: bars + title band derived from the option hash."""
    from PIL import Image, ImageDraw

    digest = hashlib.sha256(option_text.encode("utf-8")).digest()
    img = Image.new("RGB", (width, height), (255, 255, 255))
    draw = ImageDraw.Draw(img)

    # title band and axis lines give every image a connected dark skeleton
    draw.rectangle([width // 16, height // 24, width - width // 16, height // 12], fill=(64, 64, 64))
    margin = width // 10
    draw.line([margin, height - margin, width - margin, height - margin], fill=(40, 40, 40), width=3)
    draw.line([margin, margin * 2, margin, height - margin], fill=(40, 40, 40), width=3)

    n_bars = 4 + digest[0] % 4
    span = (width - 2 * margin) // n_bars
    base_y = height - margin
    for i in range(n_bars):
        frac = 0.25 + (digest[1 + i] / 255) * 0.65
        bar_h = int((base_y - 2 * margin) * frac)
        x0 = margin + i * span + span // 6
        x1 = margin + (i + 1) * span - span // 6
        color = PALETTE[digest[8 + i] % len(PALETTE)]
        draw.rectangle([x0, base_y - bar_h, x1, base_y - 2], fill=color)

    buf = io.BytesIO()
    img.save(buf, format="PNG")
    return buf.getvalue()


def handle_request(raw: dict) -> dict:
    req_id = raw.get("id")
    option = raw.get("option")
    html = raw.get("html")
    if req_id is None or (option is None) == (html is None):
        return {
            "id": req_id or "unknown",
            "status": "error",
            "error": {"kind": "parse", "message": "need id and exactly one of option/html"},
        }
    width = int(raw.get("width", 512))
    height = int(raw.get("height", 512))
    text = option if option is not None else html
    if "__fail__" in text:
        return {
            "id": req_id,
            "status": "error",
            "error": {"kind": "runtime", "message": "scripted failure"},
        }
    png = render_synthetic_png(text, width, height)
    return {"id": req_id, "status": "ok", "png_base64": base64.b64encode(png).decode("ascii")}


def serve(stdin=None, stdout=None) -> None:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    counter = 0
    for line in stdin:
        counter += 1
        line = line.strip()
        if not line:
            continue
        try:
            raw = json.loads(line)
            if not isinstance(raw, dict):
                raise ValueError("request must be an object")
            response = handle_request(raw)
        except Exception as exc:  # a bad request must never kill the worker
            response = {
                "id": f"req-{counter}",
                "status": "error",
                "error": {"kind": "parse", "message": str(exc)},
            }
            print(f"stub-renderer: bad request line {counter}: {exc}", file=sys.stderr)
        stdout.write(json.dumps(response, sort_keys=True) + "\n")
        stdout.flush()


if __name__ == "__main__":
    serve()
