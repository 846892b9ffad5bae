/**
 * Stdio server: newline-delimited JSON render requests on stdin, one
 * response per request on stdout, diagnostics on stderr only.
 *
 * A malformed request line yields an error response with a synthesized id;
 * nothing a client sends can take the process down.
 */

import * as readline from "readline";

import { RenderEngine } from "./engine";
import { errorResponse, normalizeRequest, ProtocolError, RenderResponse } from "./protocol";

function writeResponse(resp: RenderResponse): void {
  process.stdout.write(JSON.stringify(resp) + "\n");
}

async function mainLoop(): Promise<void> {
  const engine = new RenderEngine();
  const rl = readline.createInterface({ input: process.stdin, terminal: false });
  let lineNo = 0;
  let chain: Promise<void> = Promise.resolve();

  rl.on("line", (line: string) => {
    lineNo++;
    const n = lineNo;
    const trimmed = line.trim();
    if (!trimmed) return;
    chain = chain.then(async () => {
      let raw: unknown;
      try {
        raw = JSON.parse(trimmed);
      } catch (exc) {
        process.stderr.write(`render-harness: bad JSON on line ${n}\n`);
        writeResponse(errorResponse(`req-${n}`, "parse", `request line is not JSON: ${(exc as Error).message}`));
        return;
      }
      let req;
      try {
        req = normalizeRequest(raw);
      } catch (exc) {
        const id = typeof (raw as { id?: unknown })?.id === "string" ? (raw as { id: string }).id : `req-${n}`;
        const message = exc instanceof ProtocolError ? exc.message : String(exc);
        writeResponse(errorResponse(id, "parse", message));
        return;
      }
      writeResponse(await engine.render(req));
    });
  });

  await new Promise<void>((resolve) => rl.on("close", resolve));
  await chain;
  await engine.shutdown();
}

mainLoop().then(
  () => process.exit(0),
  (exc) => {
    process.stderr.write(`render-harness: fatal: ${exc}\n`);
    process.exit(1);
  },
);
