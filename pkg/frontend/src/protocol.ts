/**
 * Wire protocol for the render worker.
 *
 * Requests and responses travel as newline-delimited JSON over
 * stdin/stdout. A request carries exactly one of `option` (bare option
 * document text) or `html` (page containing one option assignment).
 */

export type RenderErrorKind = "parse" | "runtime" | "timeout";

export interface RenderRequest {
  id: string;
  option?: string;
  html?: string;
  width: number;
  height: number;
  timeoutMs: number;
  animationsDisabled: boolean;
}

export interface RenderResponse {
  id: string;
  status: "ok" | "error";
  png_base64?: string;
  error?: { kind: RenderErrorKind; message: string };
}

export const DEFAULT_SIZE = 512;
export const DEFAULT_TIMEOUT_MS = 10_000;
export const MIN_SIDE = 16;

export class ProtocolError extends Error {}

/** Validate a raw parsed request object and fill protocol defaults. */
export function normalizeRequest(raw: unknown): RenderRequest {
  if (typeof raw !== "object" || raw === null || Array.isArray(raw)) {
    throw new ProtocolError("request must be a JSON object");
  }
  const r = raw as Record<string, unknown>;
  if (typeof r.id !== "string" || r.id.length === 0) {
    throw new ProtocolError("request needs a non-empty string id");
  }
  const hasOption = typeof r.option === "string";
  const hasHtml = typeof r.html === "string";
  if (hasOption === hasHtml) {
    throw new ProtocolError("request must carry exactly one of option/html");
  }
  const width = r.width === undefined ? DEFAULT_SIZE : Number(r.width);
  const height = r.height === undefined ? DEFAULT_SIZE : Number(r.height);
  if (!Number.isFinite(width) || !Number.isFinite(height) || width < MIN_SIDE || height < MIN_SIDE) {
    throw new ProtocolError(`width and height must be >= ${MIN_SIDE}`);
  }
  const timeoutMs = r.timeout_ms === undefined ? DEFAULT_TIMEOUT_MS : Number(r.timeout_ms);
  if (!Number.isFinite(timeoutMs) || timeoutMs <= 0) {
    throw new ProtocolError("timeout_ms must be a positive number");
  }
  return {
    id: r.id,
    option: hasOption ? (r.option as string) : undefined,
    html: hasHtml ? (r.html as string) : undefined,
    width: Math.floor(width),
    height: Math.floor(height),
    timeoutMs,
    animationsDisabled: r.animations_disabled === undefined ? true : Boolean(r.animations_disabled),
  };
}

export function okResponse(id: string, png: Buffer): RenderResponse {
  return { id, status: "ok", png_base64: png.toString("base64") };
}

export function errorResponse(id: string, kind: RenderErrorKind, message: string): RenderResponse {
  return { id, status: "error", error: { kind, message } };
}
