/** Modal table of the rows in the current scope (the `t` shortcut). */

import { describe, matchesRow } from "./predicate.js";
import type { Row } from "./data.js";
import type { Predicate } from "./types.js";

export class TableDialog {
  private dialog: HTMLElement | null = null;
  private restoreFocus: HTMLElement | null = null;

  constructor(private readonly container: HTMLElement) {}

  get isOpen(): boolean {
    return this.dialog !== null;
  }

  open(columns: string[], rows: Row[], scope: Predicate): void {
    this.close();
    this.restoreFocus = document.activeElement as HTMLElement | null;
    const matched = rows.filter((r) => matchesRow(scope, r));

    const dialog = document.createElement("div");
    dialog.setAttribute("role", "dialog");
    dialog.setAttribute("aria-modal", "true");
    dialog.setAttribute("aria-label", `Table of rows where ${describe(scope)}`);
    dialog.className = "table-dialog";
    dialog.addEventListener("keydown", (e) => {
      if (e.key === "Escape") {
        e.stopPropagation();
        this.close();
      }
    });

    const heading = document.createElement("h2");
    heading.textContent = `${matched.length} rows: ${describe(scope)}`;
    dialog.appendChild(heading);

    const table = document.createElement("table");
    const caption = document.createElement("caption");
    caption.textContent = describe(scope);
    table.appendChild(caption);
    const thead = document.createElement("thead");
    const headRow = document.createElement("tr");
    for (const c of columns) {
      const th = document.createElement("th");
      th.scope = "col";
      th.textContent = c;
      headRow.appendChild(th);
    }
    thead.appendChild(headRow);
    table.appendChild(thead);
    const tbody = document.createElement("tbody");
    for (const row of matched) {
      const tr = document.createElement("tr");
      for (const c of columns) {
        const td = document.createElement("td");
        td.textContent = row[c] === null || row[c] === undefined ? "" : String(row[c]);
        tr.appendChild(td);
      }
      tbody.appendChild(tr);
    }
    table.appendChild(tbody);
    dialog.appendChild(table);

    const closeBtn = document.createElement("button");
    closeBtn.type = "button";
    closeBtn.textContent = "Close table";
    closeBtn.addEventListener("click", () => this.close());
    dialog.appendChild(closeBtn);

    this.container.appendChild(dialog);
    this.dialog = dialog;
    closeBtn.focus();
  }

  close(): void {
    if (!this.dialog) return;
    this.dialog.remove();
    this.dialog = null;
    this.restoreFocus?.focus();
    this.restoreFocus = null;
  }

  get rowCount(): number {
    return this.dialog ? this.dialog.querySelectorAll("tbody tr").length : 0;
  }
}
