/** Local copy of the uploaded dataset, kept only for the table view.
 *
 * The service exposes column metadata but no row endpoint; since the
 * client uploaded the raw text itself, it retains a parsed copy so the
 * `t` shortcut can show the rows matching the focused node's predicate.
 * This copy never feeds artifact computation.
 */

export type Row = Record<string, unknown>;

export function parseRows(text: string, format: string): Row[] {
  if (format === "json-records" || format === "json") {
    const doc = JSON.parse(text) as Row[];
    return Array.isArray(doc) ? doc : [];
  }
  return parseCsv(text);
}

function parseCsv(text: string): Row[] {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) return [];
  const header = splitCsvLine(lines[0]);
  return lines.slice(1).map((line) => {
    const cells = splitCsvLine(line);
    const row: Row = {};
    header.forEach((name, i) => {
      row[name] = cells[i] ?? null;
    });
    return row;
  });
}

function splitCsvLine(line: string): string[] {
  const out: string[] = [];
  let cur = "";
  let quoted = false;
  for (let i = 0; i < line.length; i++) {
    const ch = line[i];
    if (quoted) {
      if (ch === '"') {
        if (line[i + 1] === '"') {
          cur += '"';
          i++;
        } else {
          quoted = false;
        }
      } else {
        cur += ch;
      }
    } else if (ch === '"') {
      quoted = true;
    } else if (ch === ",") {
      out.push(cur);
      cur = "";
    } else {
      cur += ch;
    }
  }
  out.push(cur);
  return out;
}
