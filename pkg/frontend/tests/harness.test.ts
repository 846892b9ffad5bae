import { describe, expect, it } from "vitest";

import { BAR_OPTION, heavyOption, loadFixtures, runHarness } from "./helpers";

describe("stdio harness", () => {
  it("answers a valid request with an ok PNG response", async () => {
    const [resp] = await runHarness([{ id: "r1", option: BAR_OPTION }]);
    expect(resp.status).toBe("ok");
    expect(resp.id).toBe("r1");
    expect(resp.png_base64).toBeTruthy();
  });

  it("survives malformed lines and synthesizes ids", async () => {
    const responses = await runHarness([
      "this is not json",
      { id: "good", option: BAR_OPTION },
      { id: "badreq" }, // neither option nor html
    ]);
    expect(responses.length).toBe(3);
    const byId = new Map(responses.map((r) => [r.id, r]));
    expect(byId.get("req-1")?.status).toBe("error");
    expect(byId.get("req-1")?.error?.kind).toBe("parse");
    expect(byId.get("good")?.status).toBe("ok");
    expect(byId.get("badreq")?.status).toBe("error");
    expect(byId.get("badreq")?.error?.kind).toBe("parse");
  });

  it("reports a timeout for a heavy option and keeps serving", async () => {
    const responses = await runHarness([
      { id: "slow", option: heavyOption(), timeout_ms: 1 },
      { id: "after", option: BAR_OPTION },
    ]);
    const byId = new Map(responses.map((r) => [r.id, r]));
    expect(byId.get("slow")?.status).toBe("error");
    expect(byId.get("slow")?.error?.kind).toBe("timeout");
    expect(byId.get("after")?.status).toBe("ok");
  });

  it("response ids are a permutation of request ids over a 200-request stream", async () => {
    const fixtures = loadFixtures();
    // deterministic shuffle of fixture picks, salted with scripted failures
    const requests: Array<Record<string, unknown>> = [];
    let state = 1234567;
    const next = () => {
      state = (state * 1103515245 + 12345) & 0x7fffffff;
      return state;
    };
    for (let i = 0; i < 200; i++) {
      const pick = fixtures[next() % fixtures.length];
      if (i % 23 === 7) {
        requests.push({ id: `q${i}`, option: '{"series":[{"type":"nope","data":[1]}]}' });
      } else {
        requests.push({ id: `q${i}`, option: pick.option, width: 128, height: 128 });
      }
    }
    const responses = await runHarness(requests);
    const wanted = requests.map((r) => r.id as string).sort();
    const got = responses.map((r) => r.id).sort();
    expect(got).toEqual(wanted);
    const okCount = responses.filter((r) => r.status === "ok").length;
    expect(okCount).toBe(200 - requests.filter((_, i) => i % 23 === 7).length);
  }, 180_000);

  it("renders byte-identically across two separate invocations", async () => {
    const [a] = await runHarness([{ id: "d", option: BAR_OPTION }]);
    const [b] = await runHarness([{ id: "d", option: BAR_OPTION }]);
    expect(a.png_base64).toBe(b.png_base64);
  });
});
