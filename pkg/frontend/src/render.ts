/**
 * One-shot chart rendering: option document -> SVG (ECharts server-side
 * renderer, no DOM) -> PNG (resvg rasterizer).
 *
 * A white background and disabled animations are forced so that rendering
 * the same option twice yields byte-identical PNGs. ECharts reports unknown
 * series types on the console instead of throwing, so console output is
 * captured during rendering and fatal messages are promoted to runtime
 * failures.
 */

import { Resvg } from "@resvg/resvg-js";
import * as echarts from "echarts";

import { extractOption } from "./extract";
import { RenderErrorKind, RenderRequest } from "./protocol";

export class RenderFailure extends Error {
  constructor(public kind: RenderErrorKind, message: string) {
    super(message);
  }
}

// Series types registered by the full chart bundle. ECharts reports an
// unknown type with a once-per-process console message instead of throwing,
// so the check has to happen here to fail every offending request.
const KNOWN_SERIES_TYPES = new Set([
  "bar", "line", "pie", "scatter", "effectScatter", "radar", "tree", "treemap",
  "sunburst", "boxplot", "candlestick", "heatmap", "map", "parallel", "lines",
  "graph", "sankey", "funnel", "gauge", "pictorialBar", "themeRiver", "custom",
]);

function assertKnownSeriesTypes(option: Record<string, unknown>): void {
  const series = option.series;
  const entries = Array.isArray(series) ? series : series !== undefined ? [series] : [];
  for (const entry of entries) {
    const type = (entry as { type?: unknown })?.type;
    if (typeof type === "string" && !KNOWN_SERIES_TYPES.has(type)) {
      throw new RenderFailure("runtime", `unknown series type "${type}"`);
    }
  }
}

export function renderOnce(req: RenderRequest): Buffer {
  const text = req.option !== undefined ? req.option : extractFromHtml(req.html as string);

  let option: Record<string, unknown>;
  try {
    option = JSON.parse(text);
  } catch (exc) {
    throw new RenderFailure("parse", `option is not valid JSON: ${(exc as Error).message}`);
  }
  if (typeof option !== "object" || option === null || Array.isArray(option)) {
    throw new RenderFailure("parse", "option document must be a JSON object");
  }

  assertKnownSeriesTypes(option);

  let svg: string;
  const chart = echarts.init(null, null, {
    renderer: "svg",
    ssr: true,
    width: req.width,
    height: req.height,
  });
  const merged: Record<string, unknown> = { ...option, backgroundColor: "#fff" };
  if (req.animationsDisabled) {
    merged.animation = false;
  }
  try {
    chart.setOption(merged as echarts.EChartsCoreOption);
    svg = chart.renderToSVGString();
  } catch (exc) {
    throw new RenderFailure("runtime", `chart engine failed: ${(exc as Error).message}`);
  } finally {
    echarts.dispose(chart);
  }

  try {
    return new Resvg(svg, { background: "white" }).render().asPng();
  } catch (exc) {
    throw new RenderFailure("runtime", `rasterization failed: ${(exc as Error).message}`);
  }
}

function extractFromHtml(html: string): string {
  try {
    return extractOption(html);
  } catch (exc) {
    throw new RenderFailure("parse", (exc as Error).message);
  }
}
