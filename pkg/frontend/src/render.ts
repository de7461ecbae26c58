/** HTML fragments for diagnostics and the event log. */

import type { Diagnostic } from "./api.js";

const TYPE_NAMES = [
  "Stencil",
  "Shape",
  "Collage",
  "LineType",
  "Color",
  "KeyState",
  "Float",
  "String",
  "Bool",
];

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Bold the language's type names inside a message. */
export function emphasizeTypes(escaped: string): string {
  let out = escaped;
  for (const name of TYPE_NAMES) {
    out = out.replace(new RegExp(`\\b${name}\\b`, "g"), `<strong>${name}</strong>`);
  }
  return out;
}

export function diagnosticHtml(d: Diagnostic): string {
  const body = emphasizeTypes(escapeHtml(d.message));
  const hint = d.hint ? ` <span class="hint">${emphasizeTypes(escapeHtml(d.hint))}</span>` : "";
  return (
    `<li class="diagnostic ${d.severity}">` +
    `<span class="pos">${d.line}:${d.column}</span> ${body}${hint}</li>`
  );
}

export function diagnosticsHtml(diagnostics: Diagnostic[]): string {
  if (diagnostics.length === 0) return "";
  return `<ul class="diagnostics">${diagnostics.map(diagnosticHtml).join("")}</ul>`;
}

export function logHtml(lines: string[]): string {
  return lines.map((line) => `<li>${escapeHtml(line)}</li>`).join("");
}
