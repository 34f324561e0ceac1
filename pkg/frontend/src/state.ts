/** DOM-free application state: the sketch under construction, validation
 * rules for submission, the query controls, and result-history handling.
 *
 * Results are kept exactly in server order; nothing here re-sorts or
 * re-scores. A sequence counter guards against out-of-order responses:
 * only the newest in-flight query may render.
 */

import { CanvasObject, CanvasPoint, SearchResult, SketchQueryDocument } from "./types.js";
import { PALETTE, toObjectDocument } from "./mapping.js";

export interface SketchDraft {
  objects: CanvasObject[];
  pending: CanvasPoint[];
}

export function emptyDraft(): SketchDraft {
  return { objects: [], pending: [] };
}

export function addVertex(draft: SketchDraft, p: CanvasPoint): void {
  draft.pending.push(p);
}

export function nextFill(draft: SketchDraft): string {
  return PALETTE[draft.objects.length % PALETTE.length];
}

/** Close the pending outline into a labeled object. Returns an error
 * message instead when the outline or label cannot be accepted. */
export function closePending(draft: SketchDraft, name: string): string | null {
  const label = name.trim();
  if (draft.pending.length < 3) {
    return "an outline needs at least 3 vertices";
  }
  if (!label) {
    return "label the outline before closing it";
  }
  const folded = label.toLowerCase();
  if (draft.objects.some((o) => o.name.toLowerCase() === folded)) {
    return `an object named "${label}" is already on the canvas`;
  }
  draft.objects.push({ name: label, vertices: draft.pending.slice(), fill: nextFill(draft) });
  draft.pending = [];
  return null;
}

export function removeObject(draft: SketchDraft, name: string): void {
  draft.objects = draft.objects.filter((o) => o.name !== name);
}

/** Reasons the sketch cannot be submitted yet; empty means ready. */
export function submitBlockers(draft: SketchDraft): string[] {
  const blockers: string[] = [];
  if (draft.objects.length === 0) {
    blockers.push("draw and label at least one object");
  }
  if (draft.pending.length > 0) {
    blockers.push("finish or clear the open outline");
  }
  return blockers;
}

export function buildSketchQuery(
  draft: SketchDraft,
  canvasHeight: number,
  threshold: number,
  invariant: boolean,
  limit: number,
): SketchQueryDocument {
  // The slider value travels verbatim as an integer.
  return {
    objects: draft.objects.map((o) => toObjectDocument(o, canvasHeight, false)),
    threshold: Math.trunc(threshold),
    invariant,
    limit,
  };
}

export interface QuerySnapshot {
  kind: "sketch" | "by-image";
  payload: unknown;
  results: SearchResult[];
}

/** Latest-wins request sequencing plus a history stack for back navigation. */
export class QuerySession {
  private sequence = 0;
  private history: QuerySnapshot[] = [];
  current: QuerySnapshot | null = null;

  begin(): number {
    return ++this.sequence;
  }

  /** True iff this token still identifies the newest request. */
  isCurrent(token: number): boolean {
    return token === this.sequence;
  }

  /** Record a completed query; the previous one becomes history. */
  accept(token: number, snapshot: QuerySnapshot): boolean {
    if (!this.isCurrent(token)) return false;
    if (this.current) this.history.push(this.current);
    this.current = snapshot;
    return true;
  }

  canGoBack(): boolean {
    return this.history.length > 0;
  }

  back(): QuerySnapshot | null {
    const previous = this.history.pop();
    if (!previous) return null;
    this.sequence++; // anything still in flight is now stale
    this.current = previous;
    return previous;
  }
}
