/** Click-to-add-vertex sketch pad with double-click (or first-vertex
 * click) closing. Rendering only; all bookkeeping lives in state.ts. */

import { nearFirstVertex } from "./mapping.js";
import { SketchDraft } from "./state.js";
import { CanvasPoint } from "./types.js";

export class SketchPad {
  private ctx: CanvasRenderingContext2D;
  private backdrop: HTMLImageElement | null = null;

  constructor(
    private canvas: HTMLCanvasElement,
    private draft: SketchDraft,
    private onClose: () => void,
    private onChange: () => void,
  ) {
    this.ctx = canvas.getContext("2d")!;
    canvas.addEventListener("click", (ev) => this.handleClick(ev));
    canvas.addEventListener("dblclick", (ev) => {
      ev.preventDefault();
      this.onClose();
    });
    this.render();
  }

  get height(): number {
    return this.canvas.height;
  }

  setDraft(draft: SketchDraft): void {
    this.draft = draft;
    this.render();
  }

  setBackdrop(image: HTMLImageElement | null): void {
    this.backdrop = image;
    if (image) {
      this.canvas.width = image.naturalWidth;
      this.canvas.height = image.naturalHeight;
    }
    this.render();
  }

  private eventPoint(ev: MouseEvent): CanvasPoint {
    const rect = this.canvas.getBoundingClientRect();
    const scaleX = this.canvas.width / rect.width;
    const scaleY = this.canvas.height / rect.height;
    return { x: (ev.clientX - rect.left) * scaleX, y: (ev.clientY - rect.top) * scaleY };
  }

  private handleClick(ev: MouseEvent): void {
    const p = this.eventPoint(ev);
    if (this.draft.pending.length >= 3 && nearFirstVertex(this.draft.pending, p)) {
      this.onClose();
      return;
    }
    this.draft.pending.push(p);
    this.onChange();
    this.render();
  }

  render(): void {
    const { ctx, canvas } = this;
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    if (this.backdrop) {
      ctx.drawImage(this.backdrop, 0, 0, canvas.width, canvas.height);
    } else {
      ctx.fillStyle = "#ffffff";
      ctx.fillRect(0, 0, canvas.width, canvas.height);
    }

    for (const object of this.draft.objects) {
      ctx.beginPath();
      object.vertices.forEach((v, i) => (i === 0 ? ctx.moveTo(v.x, v.y) : ctx.lineTo(v.x, v.y)));
      ctx.closePath();
      ctx.globalAlpha = 0.45;
      ctx.fillStyle = object.fill;
      ctx.fill();
      ctx.globalAlpha = 1.0;
      ctx.strokeStyle = "#333";
      ctx.lineWidth = 1.5;
      ctx.stroke();
      const anchor = object.vertices[0];
      ctx.font = "13px sans-serif";
      ctx.fillStyle = "#111";
      ctx.fillText(object.name, anchor.x + 4, anchor.y - 4);
    }

    const pending = this.draft.pending;
    if (pending.length > 0) {
      ctx.beginPath();
      pending.forEach((v, i) => (i === 0 ? ctx.moveTo(v.x, v.y) : ctx.lineTo(v.x, v.y)));
      ctx.strokeStyle = "#c0392b";
      ctx.setLineDash([5, 4]);
      ctx.lineWidth = 1.5;
      ctx.stroke();
      ctx.setLineDash([]);
      for (const v of pending) {
        ctx.beginPath();
        ctx.arc(v.x, v.y, 3, 0, Math.PI * 2);
        ctx.fillStyle = "#c0392b";
        ctx.fill();
      }
    }
  }
}
