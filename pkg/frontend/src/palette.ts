/** ShapeCreator-style palette model and snippet generation.
 *
 * A selection walks the palette top to bottom: one stencil, one styling
 * (filled with a color, or outlined with a line style), then any ordered
 * run of transformers. snippetFor turns the selection into a single
 * pipeline expression that compiles on its own inside any program.
 */

export interface StencilChoice {
  kind: "circle" | "square" | "triangle" | "rect" | "oval" | "roundedRect" | "text";
  args: number[];
  text?: string;
}

export interface LineChoice {
  kind: "solid" | "dotted" | "dashed";
  width: number;
}

export type TransformerChoice =
  | { kind: "move"; dx: number; dy: number }
  | { kind: "scale"; factor: number }
  | { kind: "rotate"; radians: number };

export interface PaletteSelection {
  stencil: StencilChoice;
  styleKind: "filled" | "outlined";
  color: string; // used when filled
  line: LineChoice; // used when outlined
  transformers: TransformerChoice[];
}

/** Color names the service accepts; mirrors GET /palette. */
export const COLOR_NAMES = [
  "red",
  "orange",
  "yellow",
  "green",
  "blue",
  "purple",
  "pink",
  "brown",
  "black",
  "white",
  "grey",
  "gray",
  "lightBlue",
  "darkGreen",
  "darkRed",
  "darkBlue",
] as const;

export const LINE_KINDS = ["solid", "dotted", "dashed"] as const;

export const STENCIL_CHOICES: StencilChoice[] = [
  { kind: "circle", args: [50] },
  { kind: "square", args: [60] },
  { kind: "triangle", args: [40] },
  { kind: "rect", args: [80, 40] },
  { kind: "oval", args: [50, 30] },
  { kind: "roundedRect", args: [70, 40, 10] },
  { kind: "text", args: [], text: "hello" },
];

function num(n: number): string {
  if (!Number.isFinite(n)) return "0";
  const text = String(Math.round(n * 1000) / 1000);
  return n < 0 ? `(${text})` : text;
}

function stencilCode(s: StencilChoice): string {
  if (s.kind === "text") return `text "${(s.text ?? "hello").replace(/["\\]/g, "")}"`;
  return [s.kind, ...s.args.map(num)].join(" ");
}

function styleCode(sel: PaletteSelection): string {
  if (sel.styleKind === "filled") return `filled ${sel.color}`;
  return `outlined (${sel.line.kind} ${num(sel.line.width)})`;
}

function transformerCode(t: TransformerChoice): string {
  switch (t.kind) {
    case "move":
      return `move (${num(t.dx)}, ${num(t.dy)})`;
    case "scale":
      return `scale ${num(t.factor)}`;
    case "rotate":
      return `rotate ${num(t.radians)}`;
  }
}

export function snippetFor(sel: PaletteSelection): string {
  const stages = [stencilCode(sel.stencil), styleCode(sel), ...sel.transformers.map(transformerCode)];
  return stages.join(" |> ");
}

/** Wraps a snippet so it can be POSTed to /compile on its own. */
export function standaloneProgram(snippet: string): string {
  return `main = graphicsApp { view = collage 400 300 [ ${snippet} ] }\n`;
}

const TRANSFORMER_POOL: TransformerChoice[] = [
  { kind: "move", dx: 10, dy: -20 },
  { kind: "scale", factor: 1.5 },
  { kind: "rotate", radians: 0.5 },
];

/** Every palette combination: stencils x stylings x ordered transformer runs.
 *
 * Transformer runs cover the empty run, each singleton, and every ordered
 * pair of distinct transformers, which exercises both "any number" and
 * "in chosen order" without exploding the grid.
 */
export function paletteGrid(): PaletteSelection[] {
  const runs: TransformerChoice[][] = [[]];
  for (const t of TRANSFORMER_POOL) runs.push([t]);
  for (const a of TRANSFORMER_POOL)
    for (const b of TRANSFORMER_POOL) if (a !== b) runs.push([a, b]);

  const stylings: Array<Pick<PaletteSelection, "styleKind" | "color" | "line">> = [];
  for (const color of COLOR_NAMES)
    stylings.push({ styleKind: "filled", color, line: { kind: "solid", width: 1 } });
  for (const kind of LINE_KINDS)
    for (const width of [1, 2.5])
      stylings.push({ styleKind: "outlined", color: "black", line: { kind, width } });

  const grid: PaletteSelection[] = [];
  for (const stencil of STENCIL_CHOICES)
    for (const styling of stylings)
      for (const transformers of runs) grid.push({ stencil, ...styling, transformers });
  return grid;
}

/** Insert a snippet at the cursor, returning the new text and cursor. */
export function insertAt(
  text: string,
  cursor: number,
  snippet: string,
): { text: string; cursor: number } {
  const at = Math.max(0, Math.min(cursor, text.length));
  return {
    text: text.slice(0, at) + snippet + text.slice(at),
    cursor: at + snippet.length,
  };
}
