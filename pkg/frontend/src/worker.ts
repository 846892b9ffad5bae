/** Worker-thread entry: renders requests posted by the engine. */

import { parentPort } from "worker_threads";

import { errorResponse, okResponse, RenderRequest, RenderResponse } from "./protocol";
import { RenderFailure, renderOnce } from "./render";

if (!parentPort) {
  throw new Error("worker.ts must run inside a worker thread");
}

parentPort.on("message", ({ seq, req }: { seq: number; req: RenderRequest }) => {
  let resp: RenderResponse;
  try {
    resp = okResponse(req.id, renderOnce(req));
  } catch (exc) {
    if (exc instanceof RenderFailure) {
      resp = errorResponse(req.id, exc.kind, exc.message);
    } else {
      resp = errorResponse(req.id, "runtime", String((exc as Error).message ?? exc));
    }
  }
  parentPort!.postMessage({ seq, resp });
});
