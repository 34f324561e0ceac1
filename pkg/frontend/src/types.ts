/** Shared document types matching the server's JSON schemas. */

export interface CanvasPoint {
  x: number;
  y: number;
}

/** A labeled outline drawn on the canvas, in canvas (y-down) coordinates. */
export interface CanvasObject {
  name: string;
  vertices: CanvasPoint[];
  fill: string;
}

export interface ObjectDocument {
  name: string;
  polygon: number[][];
  color?: number[];
}

export interface SketchQueryDocument {
  objects: ObjectDocument[];
  threshold: number;
  invariant?: boolean;
  limit?: number;
}

export interface AnnotationDocument {
  original_url: string;
  objects: ObjectDocument[];
}

export interface SearchResult {
  id: string;
  similarity: number;
  matched: string[];
  thumbnail_url: string;
}

export interface BrowseEntry {
  id: string;
  thumbnail_url: string;
}

export interface ApiErrorBody {
  error: { code: string; message: string };
}
