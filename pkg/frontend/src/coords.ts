/** Pixel to collage coordinate mapping.
 *
 * The collage origin sits at the canvas center with y pointing up, while
 * browser pixels hang from the top-left corner with y pointing down. The
 * on-screen element may be scaled to any size, so the mapping goes through
 * the element's bounding rectangle.
 */

export interface ScreenRect {
  left: number;
  top: number;
  width: number;
  height: number;
}

export interface Point {
  x: number;
  y: number;
}

export function pixelToCollage(
  px: number,
  py: number,
  rect: ScreenRect,
  collageWidth: number,
  collageHeight: number,
): Point {
  const fx = (px - rect.left) / rect.width;
  const fy = (py - rect.top) / rect.height;
  return {
    x: fx * collageWidth - collageWidth / 2,
    y: collageHeight / 2 - fy * collageHeight,
  };
}

export function collageToPixel(
  x: number,
  y: number,
  rect: ScreenRect,
  collageWidth: number,
  collageHeight: number,
): { px: number; py: number } {
  const fx = (x + collageWidth / 2) / collageWidth;
  const fy = (collageHeight / 2 - y) / collageHeight;
  return {
    px: rect.left + fx * rect.width,
    py: rect.top + fy * rect.height,
  };
}

/** Collage size from the root svg element's width/height attributes. */
export function parseSvgSize(svg: string): { width: number; height: number } | null {
  const open = svg.slice(0, svg.indexOf(">") + 1);
  const width = /\bwidth="([0-9.eE+-]+)"/.exec(open);
  const height = /\bheight="([0-9.eE+-]+)"/.exec(open);
  if (!width || !height) return null;
  const w = Number(width[1]);
  const h = Number(height[1]);
  if (!Number.isFinite(w) || !Number.isFinite(h) || w <= 0 || h <= 0) return null;
  return { width: w, height: h };
}
