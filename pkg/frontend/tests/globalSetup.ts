/** Starts the backing HTTP service once for the whole test run and hands
 * its base URL to the tests. */

import { spawn, type ChildProcess } from "node:child_process";
import type { TestProject } from "vitest/node";

const PORT = 8931;

declare module "vitest" {
  export interface ProvidedContext {
    apiBase: string;
  }
}

let proc: ChildProcess | null = null;

async function waitReady(base: string): Promise<void> {
  const deadline = Date.now() + 30000;
  while (Date.now() < deadline) {
    try {
      const res = await fetch(`${base}/openapi.json`);
      if (res.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 200));
  }
  throw new Error(`service did not become ready at ${base}`);
}

export default async function setup(project: TestProject): Promise<() => void> {
  const base = `http://127.0.0.1:${PORT}`;
  const code =
    "from trimodal.service import create_app; import uvicorn; " +
    `uvicorn.run(create_app(), host='127.0.0.1', port=${PORT}, log_level='warning')`;
  proc = spawn("python3", ["-c", code], { stdio: "ignore" });
  await waitReady(base);
  project.provide("apiBase", base);
  return () => {
    proc?.kill();
  };
}
