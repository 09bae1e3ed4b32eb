/** Chart panel: renders the visual-grammar document the service returns.
 *
 * Rendering delegates to vega-embed when a drawing context exists;
 * otherwise (no canvas, e.g. DOM emulation in tests) the panel shows an
 * accessible textual fallback. Either way the served document is kept
 * verbatim so the applied conditional encoding can be inspected.
 */

import type { Predicate, VisualDoc } from "./types.js";

export class ChartView {
  private doc: VisualDoc | null = null;
  private readonly figure: HTMLElement;
  private readonly caption: HTMLElement;
  private readonly host: HTMLElement;

  constructor(container: HTMLElement) {
    this.figure = document.createElement("figure");
    this.figure.setAttribute("aria-label", "Chart");
    this.figure.tabIndex = -1;
    this.host = document.createElement("div");
    this.host.className = "chart-host";
    this.caption = document.createElement("figcaption");
    this.figure.append(this.host, this.caption);
    container.appendChild(this.figure);
  }

  focus(): void {
    this.figure.focus();
  }

  get currentDoc(): VisualDoc | null {
    return this.doc;
  }

  /** The selection recorded on the served document, if any. */
  get selection(): Predicate | null {
    const meta = this.doc?.["usermeta"] as { selection?: Predicate } | undefined;
    return meta?.selection ?? null;
  }

  /** Every conditional-opacity test expression in the served document. */
  highlightTests(): string[] {
    const out: string[] = [];
    const walk = (node: unknown): void => {
      if (Array.isArray(node)) {
        node.forEach(walk);
        return;
      }
      if (node === null || typeof node !== "object") return;
      const obj = node as Record<string, unknown>;
      const enc = obj["encoding"] as Record<string, unknown> | undefined;
      const opacity = enc?.["opacity"] as { condition?: { test?: string } } | undefined;
      if (opacity?.condition?.test) out.push(opacity.condition.test);
      for (const key of ["spec", "layer", "vconcat", "hconcat"]) {
        if (key in obj) walk(obj[key]);
      }
    };
    if (this.doc) walk(this.doc);
    return out;
  }

  setDoc(doc: VisualDoc | null): void {
    this.doc = doc;
    if (doc === null) {
      this.host.replaceChildren();
      this.caption.textContent = "No visual units in the current spec.";
      return;
    }
    this.caption.textContent = this.describe(doc);
    if (canRenderCanvas()) {
      void this.embed(doc);
    } else {
      const pre = document.createElement("pre");
      pre.className = "chart-fallback";
      pre.textContent = JSON.stringify(doc, null, 2);
      this.host.replaceChildren(pre);
    }
  }

  private describe(doc: VisualDoc): string {
    const mark = (doc["mark"] as { type?: string } | undefined)?.type;
    const enc = doc["encoding"] as Record<string, { field?: string }> | undefined;
    const channels = enc
      ? Object.entries(enc)
          .filter(([, v]) => v && v.field)
          .map(([ch, v]) => `${ch}: ${v.field}`)
          .join(", ")
      : "";
    return mark ? `${mark} chart (${channels})` : "composed chart";
  }

  private async embed(doc: VisualDoc): Promise<void> {
    try {
      const mod = await import("vega-embed");
      this.host.replaceChildren();
      await mod.default(this.host as HTMLElement, doc as never, { actions: false });
    } catch {
      const pre = document.createElement("pre");
      pre.className = "chart-fallback";
      pre.textContent = JSON.stringify(doc, null, 2);
      this.host.replaceChildren(pre);
    }
  }
}

function canRenderCanvas(): boolean {
  // Absent in DOM emulation without a canvas implementation; calling
  // getContext there would just log a not-implemented error.
  if (typeof (globalThis as { CanvasRenderingContext2D?: unknown }).CanvasRenderingContext2D === "undefined") {
    return false;
  }
  try {
    return document.createElement("canvas").getContext("2d") !== null;
  } catch {
    return false;
  }
}
