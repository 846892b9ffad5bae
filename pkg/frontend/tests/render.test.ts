import { describe, expect, it } from "vitest";

import { normalizeRequest } from "../src/protocol";
import { RenderFailure, renderOnce } from "../src/render";
import { BAR_OPTION, loadCorpus, loadFixtures, pngSize } from "./helpers";

function render(option: string, extra: Record<string, unknown> = {}) {
  return renderOnce(normalizeRequest({ id: "t", option, ...extra }));
}

describe("renderOnce", () => {
  it("renders a bar option to a 512x512 PNG", () => {
    const png = render(BAR_OPTION);
    expect(pngSize(png)).toEqual({ width: 512, height: 512 });
  });

  it("honors requested dimensions", () => {
    const png = render(BAR_OPTION, { width: 256, height: 256 });
    expect(pngSize(png)).toEqual({ width: 256, height: 256 });
  });

  it("is byte-deterministic with animations disabled", () => {
    const a = render(BAR_OPTION);
    const b = render(BAR_OPTION);
    expect(Buffer.compare(a, b)).toBe(0);
  });

  it("renders html-wrapped options", () => {
    const html = `<html><script>var option = ${BAR_OPTION};</script></html>`;
    const png = renderOnce(normalizeRequest({ id: "t", html }));
    expect(pngSize(png)).toEqual({ width: 512, height: 512 });
  });

  it("classifies bad JSON as a parse failure", () => {
    try {
      render("{not json");
      expect.unreachable();
    } catch (exc) {
      expect(exc).toBeInstanceOf(RenderFailure);
      expect((exc as RenderFailure).kind).toBe("parse");
    }
  });

  it("classifies an unknown series type as a runtime failure", () => {
    const option = JSON.stringify({ series: [{ type: "definitely_not_a_chart", data: [1] }] });
    try {
      render(option);
      expect.unreachable();
    } catch (exc) {
      expect(exc).toBeInstanceOf(RenderFailure);
      expect((exc as RenderFailure).kind).toBe("runtime");
    }
  });

  it("renders all 49 subtype fixtures", () => {
    const fixtures = loadFixtures();
    expect(fixtures.length).toBe(49);
    for (const { subtype, option } of fixtures) {
      const png = render(option);
      expect(pngSize(png), subtype).toEqual({ width: 512, height: 512 });
    }
  });
});

describe("procedural corpus", () => {
  it("passes at a rate of at least 0.99 over 500 specs", () => {
    const corpus = loadCorpus();
    expect(corpus.length).toBe(500);
    let ok = 0;
    const failures: string[] = [];
    for (const record of corpus) {
      try {
        renderOnce(normalizeRequest({ id: record.id, option: record.option }));
        ok++;
      } catch (exc) {
        failures.push(`${record.id} (${record.subtype}): ${(exc as Error).message}`);
      }
    }
    const rate = ok / corpus.length;
    expect(rate, failures.slice(0, 5).join("; ")).toBeGreaterThanOrEqual(0.99);
  });
});
