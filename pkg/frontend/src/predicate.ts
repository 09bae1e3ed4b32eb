/** Display-side helpers over the selection-predicate wire format.
 *
 * These never feed back into artifacts (the service owns all artifact
 * computation); they only label controls and filter the local row copy
 * shown by the table view.
 */

import type { Predicate } from "./types.js";

export function isTrue(pred: Predicate): boolean {
  return "and" in pred && pred.and.length === 0;
}

export function conjoin(...parts: Predicate[]): Predicate {
  const flat: Predicate[] = [];
  for (const p of parts) {
    if ("and" in p) flat.push(...p.and);
    else flat.push(p);
  }
  if (flat.length === 1) return flat[0];
  return { and: flat };
}

export function describe(pred: Predicate): string {
  if ("and" in pred) {
    return pred.and.length === 0 ? "all data" : pred.and.map(describe).join(" and ");
  }
  if ("equal" in pred) return `${pred.field} = ${String(pred.equal)}`;
  if ("range" in pred) {
    const hi = pred.inclusive ? "≤" : "<";
    return `${pred.range[0]} ≤ ${pred.field} ${hi} ${pred.range[1]}`;
  }
  return `${pred.field} in {${pred.oneOf.map(String).join(", ")}}`;
}

function asComparable(v: unknown): number | string {
  if (typeof v === "number") return v;
  const n = Number(v);
  if (!Number.isNaN(n) && String(v).trim() !== "") return n;
  return String(v);
}

/** Evaluate a predicate against one row of the locally retained dataset. */
export function matchesRow(pred: Predicate, row: Record<string, unknown>): boolean {
  if ("and" in pred) return pred.and.every((p) => matchesRow(p, row));
  const v = row[pred.field];
  if (v === null || v === undefined) return false;
  if ("equal" in pred) {
    return asComparable(v) === asComparable(pred.equal);
  }
  if ("range" in pred) {
    const x = asComparable(v);
    const lo = asComparable(pred.range[0]);
    const hi = asComparable(pred.range[1]);
    return pred.inclusive ? lo <= x && x <= hi : lo <= x && x < hi;
  }
  return pred.oneOf.some((o) => asComparable(o) === asComparable(v));
}

/**
 * Flatten a conjunction of per-field constraints into field -> shown value,
 * used to reflect playback position in the audio step controls.
 */
export function fieldValues(pred: Predicate): Map<string, string> {
  const out = new Map<string, string>();
  const walk = (p: Predicate) => {
    if ("and" in p) {
      p.and.forEach(walk);
    } else if ("equal" in p) {
      out.set(p.field, String(p.equal));
    } else if ("range" in p) {
      out.set(p.field, `${p.range[0]}–${p.range[1]}`);
    }
  };
  walk(pred);
  return out;
}
