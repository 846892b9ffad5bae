/**
 * Render engine: executes requests in a worker thread so that per-request
 * timeouts can be enforced on synchronous rendering work. On timeout the
 * worker is terminated and respawned; the stream keeps flowing.
 *
 * Requests are processed strictly sequentially (one worker, one in-flight
 * request), matching the protocol's one-worker-per-process model.
 */

import * as path from "path";
import { Worker } from "worker_threads";

import { errorResponse, RenderRequest, RenderResponse } from "./protocol";

export class RenderEngine {
  private worker: Worker | null = null;
  private seq = 0;
  private chain: Promise<unknown> = Promise.resolve();
  private workerPath: string;

  constructor(workerPath?: string) {
    this.workerPath = workerPath ?? path.join(__dirname, "worker.js");
  }

  private ensureWorker(): Worker {
    if (!this.worker) {
      this.worker = new Worker(this.workerPath);
      this.worker.unref();
    }
    return this.worker;
  }

  /** Render one request, resolving with a timeout error if it overruns. */
  render(req: RenderRequest): Promise<RenderResponse> {
    const run = () => this.renderNow(req);
    const next = this.chain.then(run, run);
    this.chain = next;
    return next;
  }

  private renderNow(req: RenderRequest): Promise<RenderResponse> {
    return new Promise((resolve) => {
      const worker = this.ensureWorker();
      const seq = ++this.seq;
      let settled = false;

      const finish = (resp: RenderResponse) => {
        if (settled) return;
        settled = true;
        clearTimeout(timer);
        worker.off("message", onMessage);
        worker.off("error", onError);
        worker.off("exit", onExit);
        resolve(resp);
      };

      const timer = setTimeout(() => {
        // the worker may be stuck in synchronous rendering; replace it
        void worker.terminate();
        this.worker = null;
        finish(errorResponse(req.id, "timeout", `render exceeded ${req.timeoutMs} ms`));
      }, req.timeoutMs);

      const onMessage = (msg: { seq: number; resp: RenderResponse }) => {
        if (msg.seq === seq) {
          finish(msg.resp);
        }
      };
      const onError = (err: Error) => {
        this.worker = null;
        finish(errorResponse(req.id, "runtime", `worker crashed: ${err.message}`));
      };
      const onExit = () => {
        if (!settled) {
          this.worker = null;
          finish(errorResponse(req.id, "runtime", "worker exited unexpectedly"));
        }
      };

      worker.on("message", onMessage);
      worker.on("error", onError);
      worker.on("exit", onExit);
      worker.postMessage({ seq, req });
    });
  }

  async shutdown(): Promise<void> {
    await this.chain.catch(() => undefined);
    if (this.worker) {
      await this.worker.terminate();
      this.worker = null;
    }
  }
}
