import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { ApiClient } from "../src/api.js";
import { App } from "../src/app.js";
import type { PlaybackPlan, SpeechSink, ToneSink } from "../src/playback.js";
import type { Schedule, TreeNode } from "../src/types.js";

const HERE = dirname(fileURLToPath(import.meta.url));

export function fixtureText(name: string): string {
  return readFileSync(join(HERE, "..", "..", "src", "trimodal", "data", name), "utf8");
}

export const stocksCsv = () => fixtureText("stocks.csv");

/** Recording tone sink: captures plans instead of making sound. */
export class FakeSink implements ToneSink {
  started: PlaybackPlan[] = [];
  stops = 0;
  private onDone: (() => void) | null = null;

  start(plan: PlaybackPlan, onCue: (text: string) => void, onDone: () => void): void {
    this.started.push(plan);
    for (const cue of plan.cues) onCue(cue.text);
    this.onDone = onDone;
  }

  stop(): void {
    this.stops++;
    this.onDone = null;
  }

  finish(): void {
    this.onDone?.();
    this.onDone = null;
  }

  get lastPlan(): PlaybackPlan {
    if (this.started.length === 0) throw new Error("nothing played");
    return this.started[this.started.length - 1];
  }
}

export class FakeSpeech implements SpeechSink {
  utterances: { text: string; rate: number }[] = [];

  speak(text: string, rate: number): void {
    this.utterances.push({ text, rate });
  }
}

export interface TestApp {
  app: App;
  sink: FakeSink;
  speech: FakeSpeech;
  root: HTMLElement;
  setClock: (seconds: number) => void;
}

export function makeApp(apiBase: string): TestApp {
  const root = document.createElement("div");
  document.body.appendChild(root);
  const sink = new FakeSink();
  const speech = new FakeSpeech();
  let clock = 0;
  const app = new App(root, new ApiClient(apiBase), {
    sink,
    speech,
    now: () => clock,
  });
  return { app, sink, speech, root, setClock: (s) => (clock = s) };
}

export function cleanupApp(t: TestApp): void {
  t.app.destroy();
  t.root.remove();
}

export function press(key: string, target: Element | Document = document): void {
  const event = new KeyboardEvent("keydown", { key, bubbles: true, cancelable: true });
  (target instanceof Document ? target : target).dispatchEvent(event);
}

export const sampleTree: TreeNode = {
  id: "n0",
  role: "root",
  groupby: null,
  predicate: { and: [] },
  description: "A line chart. 6 rows.",
  children: [
    {
      id: "n1",
      role: "legend-level",
      groupby: "symbol",
      predicate: { and: [] },
      description: "Legend. symbol, 2 categories.",
      children: [
        {
          id: "n2",
          role: "category",
          groupby: "symbol",
          predicate: { field: "symbol", equal: "AAPL" },
          description: "symbol AAPL.",
          children: [],
        },
        {
          id: "n3",
          role: "category",
          groupby: "symbol",
          predicate: { field: "symbol", equal: "GOOG" },
          description: "symbol GOOG.",
          children: [
            {
              id: "n4",
              role: "datum-summary",
              groupby: null,
              predicate: { field: "symbol", equal: "GOOG" },
              description: "price: 100.",
              children: [],
            },
          ],
        },
      ],
    },
  ],
};

export const sampleSchedules: Schedule[] = [
  {
    unit: "a0",
    pitchField: "price",
    duration: 0.8,
    scale: { domain: [0, 100], range: [220, 880] },
    tones: [
      {
        time: 0,
        duration: 0.2,
        frequency: 220,
        value: 10,
        predicate: {
          and: [
            { field: "symbol", equal: "AAPL" },
            { field: "date", equal: "2020-01-01" },
          ],
        },
      },
      {
        time: 0.2,
        duration: 0.2,
        frequency: 440,
        value: 40,
        predicate: {
          and: [
            { field: "symbol", equal: "AAPL" },
            { field: "date", equal: "2020-02-01" },
          ],
        },
      },
      {
        time: 0.4,
        duration: 0.2,
        frequency: 660,
        value: 70,
        predicate: {
          and: [
            { field: "symbol", equal: "GOOG" },
            { field: "date", equal: "2020-01-01" },
          ],
        },
      },
      {
        time: 0.6,
        duration: 0.2,
        frequency: 880,
        value: 100,
        predicate: {
          and: [
            { field: "symbol", equal: "GOOG" },
            { field: "date", equal: "2020-02-01" },
          ],
        },
      },
    ],
    cues: [
      { time: 0, text: "symbol AAPL" },
      { time: 0.4, text: "symbol GOOG" },
    ],
  },
];
