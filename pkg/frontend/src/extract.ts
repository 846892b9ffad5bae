/**
 * Extract the first `option = {...}` object literal from an HTML page with a
 * bracket-balanced scan. The page is never executed.
 */

const OPTION_RE = /\boption\s*=\s*/;

export function extractOption(html: string): string {
  const match = OPTION_RE.exec(html);
  if (!match) {
    throw new Error("no option assignment found in HTML document");
  }
  const start = html.indexOf("{", match.index + match[0].length);
  if (start < 0) {
    throw new Error("option assignment is not an object literal");
  }
  let depth = 0;
  let inString: string | null = null;
  let escaped = false;
  for (let i = start; i < html.length; i++) {
    const ch = html[i];
    if (inString !== null) {
      if (escaped) {
        escaped = false;
      } else if (ch === "\\") {
        escaped = true;
      } else if (ch === inString) {
        inString = null;
      }
      continue;
    }
    if (ch === '"' || ch === "'") {
      inString = ch;
    } else if (ch === "{") {
      depth++;
    } else if (ch === "}") {
      depth--;
      if (depth === 0) {
        return html.slice(start, i + 1);
      }
    }
  }
  throw new Error("unbalanced braces in option assignment");
}
