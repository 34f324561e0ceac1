/** Canvas/model coordinate conversion and polygon drawing helpers.
 *
 * The canvas is y-down; the retrieval model is y-up. The mapping flips y
 * against the canvas height and keeps units 1:1, so a round trip must
 * reproduce the original point exactly (well inside the 0.5 px budget).
 */

import { CanvasObject, CanvasPoint, ObjectDocument } from "./types.js";

export function canvasToModel(p: CanvasPoint, canvasHeight: number): CanvasPoint {
  return { x: p.x, y: canvasHeight - p.y };
}

export function modelToCanvas(p: CanvasPoint, canvasHeight: number): CanvasPoint {
  return { x: p.x, y: canvasHeight - p.y };
}

/** Distance in canvas pixels within which a click closes the polygon. */
export const CLOSE_RADIUS = 10;

export function nearFirstVertex(vertices: CanvasPoint[], p: CanvasPoint): boolean {
  if (vertices.length === 0) return false;
  const first = vertices[0];
  return Math.hypot(first.x - p.x, first.y - p.y) <= CLOSE_RADIUS;
}

const CSS_TO_RGB: Record<string, number[]> = {
  "#e2574c": [0.886, 0.341, 0.298],
  "#f2a33c": [0.949, 0.639, 0.235],
  "#f7d154": [0.969, 0.820, 0.329],
  "#57a65a": [0.341, 0.651, 0.353],
  "#4a90d9": [0.290, 0.565, 0.851],
  "#9063cd": [0.565, 0.388, 0.804],
  "#8d6e63": [0.553, 0.431, 0.388],
  "#7f8c8d": [0.498, 0.549, 0.553],
};

export const PALETTE = Object.keys(CSS_TO_RGB);

export function fillToRgb(fill: string): number[] | undefined {
  return CSS_TO_RGB[fill];
}

/** One canvas object as the server's object document, y flipped to y-up. */
export function toObjectDocument(
  object: CanvasObject,
  canvasHeight: number,
  includeColor: boolean,
): ObjectDocument {
  const doc: ObjectDocument = {
    name: object.name,
    polygon: object.vertices.map((v) => {
      const m = canvasToModel(v, canvasHeight);
      return [m.x, m.y];
    }),
  };
  if (includeColor) {
    const rgb = fillToRgb(object.fill);
    if (rgb) doc.color = rgb;
  }
  return doc;
}
