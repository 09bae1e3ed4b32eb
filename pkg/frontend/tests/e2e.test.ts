/** End-to-end against the real HTTP service: load a dataset, navigate the
 * tree to a category, and verify the chart's conditional encoding and the
 * playback filter both reflect the focused node's predicate. */

import { afterEach, describe, expect, inject, it } from "vitest";

import type { Predicate } from "../src/types.js";
import { cleanupApp, makeApp, press, stocksCsv, type TestApp } from "./helpers.js";

let current: TestApp | null = null;

async function loadedApp(): Promise<TestApp> {
  current = makeApp(inject("apiBase"));
  await current.app.load(stocksCsv(), "csv");
  await current.app.whenIdle();
  return current;
}

function arrow(key: string): void {
  press(key, document.activeElement as Element);
}

/** Walk root -> legend branch -> first category, settling between moves. */
async function focusFirstCategory(t: TestApp, groupby: string): Promise<Predicate> {
  press("o");
  arrow("ArrowDown");
  await t.app.whenIdle();
  let guard = 0;
  while (t.app.tree.currentNode?.groupby !== groupby && guard++ < 10) {
    arrow("ArrowRight");
    await t.app.whenIdle();
  }
  expect(t.app.tree.currentNode?.groupby).toBe(groupby);
  arrow("ArrowDown");
  await t.app.whenIdle();
  const node = t.app.tree.currentNode!;
  expect(node.role).toBe("category");
  return node.predicate;
}

function firstConjunct(pred: Predicate): Predicate {
  return "and" in pred ? pred.and[0] : pred;
}

describe("linked interaction end to end", () => {
  afterEach(() => {
    if (current) cleanupApp(current);
    current = null;
    document.body.replaceChildren();
  });

  it("tree focus highlights the chart and filters playback to matching rows", async () => {
    const t = await loadedApp();
    const pred = await focusFirstCategory(t, "symbol");
    expect(pred).toHaveProperty("field", "symbol");
    const symbol = (pred as { equal: unknown }).equal as string;

    // Chart: the served document carries a conditional-opacity encoding
    // whose test matches the focused category, and records the selection.
    const tests = t.app.chart.highlightTests();
    expect(tests.length).toBeGreaterThan(0);
    expect(tests.every((expr) => expr.includes(`datum["symbol"] === "${symbol}"`))).toBe(true);
    expect(t.app.chart.selection).toEqual(pred);

    // Audio: every tone in the re-served schedule is scoped to the category.
    t.app.player.play();
    const plan = t.sink.lastPlan;
    expect(plan.tones.length).toBeGreaterThan(0);
    expect(plan.tones.every((tone) => {
      const first = firstConjunct(tone.predicate);
      return JSON.stringify(first) === JSON.stringify(pred);
    })).toBe(true);

    // The three views agree on the selection (coherence invariant).
    expect(t.app.selection).toEqual(pred);
    expect(t.app.tree.currentNode?.predicate).toEqual(pred);
  });

  it("focusing the root resets the selection everywhere", async () => {
    const t = await loadedApp();
    await focusFirstCategory(t, "symbol");
    // Ascend back to the root.
    arrow("ArrowUp");
    await t.app.whenIdle();
    arrow("ArrowUp");
    await t.app.whenIdle();
    expect(t.app.tree.currentNode?.role).toBe("root");
    expect(t.app.selection).toEqual({ and: [] });
    expect(t.app.chart.selection).toEqual({ and: [] });
    t.app.player.play();
    const allTones = t.sink.lastPlan.tones.length;
    expect(allTones).toBeGreaterThan(0);
  });

  it("rapid navigation settles on the last node's predicate", async () => {
    const t = await loadedApp();
    const tree = await fetchTreeIds(t);
    // Fire five selection emissions back to back without settling.
    const targets = tree.slice(0, 5);
    for (const id of targets) t.app.tree.focusNodeById(id);
    await t.app.whenIdle();
    const last = t.app.tree.currentNode!;
    expect(last.id).toBe(targets[targets.length - 1]);
    expect(t.app.selection).toEqual(last.predicate);
    expect(t.app.chart.selection).toEqual(last.predicate);
  });

  it("an edit round-trips: mark change is reflected in the served chart", async () => {
    const t = await loadedApp();
    const versionBefore = t.app.version;
    (document.getElementById("tab-visual") as HTMLButtonElement).click();
    await t.app.whenIdle();
    const mark = document.querySelector('select[id^="mark-"]') as HTMLSelectElement;
    expect(mark.value).toBe("line");
    mark.value = "area";
    mark.dispatchEvent(new Event("change", { bubbles: true }));
    await t.app.whenIdle();
    expect(t.app.version).toBeGreaterThan(versionBefore);
    expect(t.app.state?.spec.visual.units[0].mark).toBe("area");
    expect((t.app.chart.currentDoc?.["mark"] as { type: string }).type).toBe("area");
  });

  it("a rejected edit leaves the state unchanged and reports the violation", async () => {
    const t = await loadedApp();
    (document.getElementById("tab-visual") as HTMLButtonElement).click();
    await t.app.whenIdle();
    const before = JSON.stringify(t.app.state?.spec);
    // An encoding onto an already-occupied channel violates the spec's
    // invariants, so the service rejects it with a validation report.
    await t.app.dispatch({
      type: "AddEncoding",
      field: "price",
      modality: "visual",
      unit: "v0",
      channel: "y",
    });
    await t.app.whenIdle();
    expect(JSON.stringify(t.app.state?.spec)).toBe(before);
    const status = document.querySelector('[role="status"]')!;
    expect(status.textContent).toContain("Edit rejected");
  });

  it("choosing a fixed-position playback order re-filters the schedule", async () => {
    const t = await loadedApp();
    const order = document.getElementById("audio-order") as HTMLSelectElement | null;
    expect(order).not.toBeNull();
    const fixedOption = [...order!.options].find((o) => o.value.includes(" by date"));
    expect(fixedOption).toBeDefined();
    order!.value = fixedOption!.value;
    order!.dispatchEvent(new Event("change", { bubbles: true }));
    await t.app.whenIdle();
    t.app.player.play();
    const plan = t.sink.lastPlan;
    expect(plan.tones.length).toBeGreaterThan(0);
    const firsts = new Set(plan.tones.map((tone) => JSON.stringify(firstConjunct(tone.predicate))));
    expect(firsts.size).toBe(1);
    expect([...firsts][0]).toContain('"symbol"');
  });
});

async function fetchTreeIds(t: TestApp): Promise<string[]> {
  const ids: string[] = [];
  const items = t.root.querySelectorAll('[role="treeitem"]');
  items.forEach((el) => {
    const id = (el as HTMLElement).dataset.nodeId;
    if (id) ids.push(id);
  });
  return ids;
}
