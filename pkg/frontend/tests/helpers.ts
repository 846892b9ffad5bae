import { spawn } from "child_process";
import * as fs from "fs";
import * as path from "path";
import { fileURLToPath } from "url";

import type { RenderResponse } from "../src/protocol";

const here = path.dirname(fileURLToPath(import.meta.url));

export const MAIN_JS = path.join(here, "../dist/main.js");
export const FIXTURE_DIR = path.join(here, "../../src/chartforge/data/fixtures");
export const CORPUS_PATH = path.join(here, "../fixtures/corpus.jsonl");

export const BAR_OPTION = JSON.stringify({
  xAxis: { type: "category", data: ["A", "B", "C"] },
  yAxis: {},
  series: [{ type: "bar", data: [3, 1, 2] }],
  title: { text: "Smoke" },
});

export function loadFixtures(): Array<{ subtype: string; option: string }> {
  return fs
    .readdirSync(FIXTURE_DIR)
    .filter((name) => name.endsWith(".json") && name !== "index.json")
    .sort()
    .map((name) => ({
      subtype: name.replace(/\.json$/, ""),
      option: fs.readFileSync(path.join(FIXTURE_DIR, name), "utf-8").trim(),
    }));
}

export function loadCorpus(): Array<{ id: string; subtype: string; option: string }> {
  return fs
    .readFileSync(CORPUS_PATH, "utf-8")
    .trim()
    .split("\n")
    .map((line) => JSON.parse(line));
}

export function pngSize(png: Buffer): { width: number; height: number } {
  // PNG signature then IHDR: width/height at byte offsets 16/20
  if (png.readUInt32BE(0) !== 0x89504e47) {
    throw new Error("not a PNG");
  }
  return { width: png.readUInt32BE(16), height: png.readUInt32BE(20) };
}

/** Run the harness subprocess over a scripted request stream. */
export function runHarness(lines: Array<object | string>): Promise<RenderResponse[]> {
  return new Promise((resolve, reject) => {
    const proc = spawn(process.execPath, [MAIN_JS], { stdio: ["pipe", "pipe", "pipe"] });
    const responses: RenderResponse[] = [];
    let buffer = "";
    proc.stdout.on("data", (chunk: Buffer) => {
      buffer += chunk.toString("utf-8");
      let idx;
      while ((idx = buffer.indexOf("\n")) >= 0) {
        const line = buffer.slice(0, idx).trim();
        buffer = buffer.slice(idx + 1);
        if (line) {
          responses.push(JSON.parse(line));
        }
      }
    });
    proc.on("error", reject);
    proc.on("close", (code) => {
      if (code === 0) {
        resolve(responses);
      } else {
        reject(new Error(`harness exited with code ${code}`));
      }
    });
    for (const line of lines) {
      proc.stdin.write((typeof line === "string" ? line : JSON.stringify(line)) + "\n");
    }
    proc.stdin.end();
  });
}

/** An option whose rendering work is heavy enough to trip a 1 ms timeout. */
export function heavyOption(): string {
  const n = 400;
  const data: Array<[number, number, number]> = [];
  for (let x = 0; x < n; x++) {
    for (let y = 0; y < 120; y++) {
      data.push([x, y, (x * y) % 97]);
    }
  }
  return JSON.stringify({
    xAxis: { type: "category", data: Array.from({ length: n }, (_, i) => `x${i}`) },
    yAxis: { type: "category", data: Array.from({ length: 120 }, (_, i) => `y${i}`) },
    visualMap: { min: 0, max: 97 },
    series: [{ type: "heatmap", data }],
  });
}
