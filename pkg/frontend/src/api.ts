/** Fetch wrappers over the retrieval service. The UI is a pure client:
 * every payload and response passes through unmodified. */

import {
  AnnotationDocument,
  ApiErrorBody,
  BrowseEntry,
  SearchResult,
  SketchQueryDocument,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

async function request<T>(base: string, path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(base + path, init);
  const text = await response.text();
  let body: unknown = null;
  try {
    body = text ? JSON.parse(text) : null;
  } catch {
    body = null;
  }
  if (!response.ok) {
    const err = body as ApiErrorBody | null;
    throw new ApiError(
      response.status,
      err?.error?.code ?? "unknown",
      err?.error?.message ?? `request failed with status ${response.status}`,
    );
  }
  return body as T;
}

function post<T>(base: string, path: string, payload: unknown): Promise<T> {
  return request<T>(base, path, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(payload),
  });
}

export function querySketch(base: string, query: SketchQueryDocument): Promise<SearchResult[]> {
  return post(base, "/api/query/sketch", query);
}

export function queryByImage(
  base: string,
  id: string,
  threshold: number,
  invariant: boolean,
  limit: number,
): Promise<SearchResult[]> {
  return post(base, "/api/query/by-image", { id, threshold: Math.trunc(threshold), invariant, limit });
}

export function insertImage(base: string, annotation: AnnotationDocument): Promise<{ id: string }> {
  return post(base, "/api/images", annotation);
}

export function browseSample(base: string, n: number): Promise<BrowseEntry[]> {
  return request(base, `/api/images?sample=${n}`);
}
