import axe from "axe-core";
import { afterEach, describe, expect, inject, it } from "vitest";

import { cleanupApp, makeApp, stocksCsv, type TestApp } from "./helpers.js";

let current: TestApp | null = null;

async function audit(scope: Element): Promise<axe.Result[]> {
  const results = await axe.run(scope, {
    rules: {
      // Contrast needs real rendering; everything else runs in emulated DOM.
      "color-contrast": { enabled: false },
    },
  });
  return results.violations.filter((v) => v.impact === "critical");
}

describe("accessibility audit", () => {
  afterEach(() => {
    if (current) cleanupApp(current);
    current = null;
    document.body.replaceChildren();
  });

  it("reports zero critical violations on every editor tab", async () => {
    current = makeApp(inject("apiBase"));
    await current.app.load(stocksCsv(), "csv");
    await current.app.whenIdle();
    const editor = current.root.querySelector('[aria-label="Editor"]')!;
    for (const tab of ["data", "fields", "visual", "audio"]) {
      (editor.querySelector(`#tab-${tab}`) as HTMLButtonElement).click();
      await current.app.whenIdle();
      const critical = await audit(editor);
      expect(critical, `${tab} tab: ${JSON.stringify(critical, null, 2)}`).toHaveLength(0);
    }
  });

  it("reports zero critical violations on the viewer", async () => {
    current = makeApp(inject("apiBase"));
    await current.app.load(stocksCsv(), "csv");
    await current.app.whenIdle();
    const viewer = current.root.querySelector('[aria-label="Viewer"]')!;
    const critical = await audit(viewer);
    expect(critical, JSON.stringify(critical, null, 2)).toHaveLength(0);
  });

  it("reports zero critical violations on the table dialog", async () => {
    current = makeApp(inject("apiBase"));
    await current.app.load(stocksCsv(), "csv");
    await current.app.whenIdle();
    current.app.openTable();
    const dialog = document.querySelector('[role="dialog"]')!;
    const critical = await audit(dialog);
    expect(critical, JSON.stringify(critical, null, 2)).toHaveLength(0);
  });
});
