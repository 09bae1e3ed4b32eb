/** Structured editor: four tabs (Data, Fields, Visual, Audio) of controls
 * that each post one edit action to the service. The editor renders the
 * state the service returns and never mutates a spec locally; an invalid
 * action simply comes back as a rejection the app announces.
 */

import type { EditAction, EncodingJson, SessionState } from "./types.js";

const TABS = ["data", "fields", "visual", "audio"] as const;
const VISUAL_CHANNELS = ["x", "y", "color", "size", "facet", "order"] as const;
const AUDIO_CHANNELS = ["pitch", "volume"] as const;
const MARKS = ["point", "line", "bar", "area", "rect", "tick"];
const MEASURES = ["quantitative", "nominal", "ordinal", "temporal"];
const AGGREGATES = ["", "mean", "sum", "min", "max", "count", "median"];

export type ActionHandler = (action: EditAction) => Promise<void>;

export class Editor {
  private readonly region: HTMLElement;
  private readonly tablist: HTMLElement;
  private readonly panel: HTMLElement;
  private readonly tabs = new Map<string, HTMLButtonElement>();
  private state: SessionState | null = null;

  constructor(
    container: HTMLElement,
    private readonly onAction: ActionHandler,
  ) {
    this.region = document.createElement("section");
    this.region.setAttribute("aria-label", "Editor");
    this.region.className = "editor";

    this.tablist = document.createElement("div");
    this.tablist.setAttribute("role", "tablist");
    this.tablist.setAttribute("aria-label", "Editor sections");
    for (const tab of TABS) {
      const btn = document.createElement("button");
      btn.type = "button";
      btn.id = `tab-${tab}`;
      btn.setAttribute("role", "tab");
      btn.setAttribute("aria-selected", "false");
      btn.setAttribute("aria-controls", "editor-panel");
      btn.tabIndex = -1;
      btn.textContent = tab[0].toUpperCase() + tab.slice(1);
      btn.addEventListener("click", () => void this.onAction({ type: "SwitchTab", tab }));
      this.tablist.appendChild(btn);
      this.tabs.set(tab, btn);
    }
    this.tablist.addEventListener("keydown", (e) => this.onTablistKey(e));

    this.panel = document.createElement("div");
    this.panel.id = "editor-panel";
    this.panel.setAttribute("role", "tabpanel");

    this.region.append(this.tablist, this.panel);
    container.appendChild(this.region);
  }

  /** Move focus into the editor (the `e` shortcut target). */
  focus(): void {
    const active = this.state ? this.tabs.get(this.state.activeTab) : null;
    (active ?? this.tablist.querySelector("button"))?.focus();
  }

  contains(el: Element | null): boolean {
    return el !== null && this.region.contains(el);
  }

  render(state: SessionState): void {
    this.state = state;
    for (const [tab, btn] of this.tabs) {
      const selected = tab === state.activeTab;
      btn.setAttribute("aria-selected", String(selected));
      btn.tabIndex = selected ? 0 : -1;
    }
    this.panel.setAttribute("aria-labelledby", `tab-${state.activeTab}`);
    this.panel.replaceChildren();
    switch (state.activeTab) {
      case "data":
        this.renderData();
        break;
      case "fields":
        this.renderFields(state);
        break;
      case "visual":
        this.renderVisual(state);
        break;
      case "audio":
        this.renderAudio(state);
        break;
    }
  }

  private onTablistKey(e: KeyboardEvent): void {
    if (e.key !== "ArrowLeft" && e.key !== "ArrowRight") return;
    const order = [...TABS];
    const current = order.findIndex((t) => this.tabs.get(t) === document.activeElement);
    if (current < 0) return;
    e.preventDefault();
    const next = order[(current + (e.key === "ArrowRight" ? 1 : order.length - 1)) % order.length];
    this.tabs.get(next)?.focus();
    void this.onAction({ type: "SwitchTab", tab: next });
  }

  // -- Data tab -------------------------------------------------------------

  private renderData(): void {
    const label = document.createElement("label");
    label.textContent = "Dataset text";
    const area = document.createElement("textarea");
    area.id = "dataset-text";
    area.rows = 8;
    label.htmlFor = area.id;

    const fmtLabel = document.createElement("label");
    fmtLabel.textContent = "Format";
    const fmt = document.createElement("select");
    fmt.id = "dataset-format";
    fmtLabel.htmlFor = fmt.id;
    for (const f of ["csv", "json-records"]) {
      const opt = document.createElement("option");
      opt.value = f;
      opt.textContent = f;
      fmt.appendChild(opt);
    }

    const load = document.createElement("button");
    load.type = "button";
    load.textContent = "Load dataset";
    load.addEventListener("click", () =>
      void this.onAction({ type: "LoadDataset", data: area.value, format: fmt.value }),
    );

    const summary = document.createElement("p");
    const ds = this.state?.dataset;
    summary.textContent = ds
      ? `Loaded: ${ds.rowCount} rows, ${ds.columns.length} columns (${ds.columns
          .map((c) => `${c.name}: ${c.type ?? "?"}`)
          .join(", ")}).`
      : "No dataset loaded.";

    this.panel.append(label, area, fmtLabel, fmt, load, summary);
  }

  // -- Fields tab -----------------------------------------------------------

  private renderFields(state: SessionState): void {
    const ds = state.dataset;
    if (!ds) {
      this.panel.textContent = "Load a dataset first.";
      return;
    }
    const list = document.createElement("ul");
    list.className = "field-list";
    for (const col of ds.columns) {
      const li = document.createElement("li");
      const selected = state.selectedFields.includes(col.name);

      const box = document.createElement("input");
      box.type = "checkbox";
      box.id = `field-${col.name}`;
      box.checked = selected;
      box.addEventListener("change", () =>
        void this.onAction({ type: "ToggleField", field: col.name }),
      );
      const label = document.createElement("label");
      label.htmlFor = box.id;
      label.textContent = col.name;
      li.append(box, label);

      const fieldDef = state.spec.fields.find((f) => f.name === col.name);
      if (fieldDef) {
        li.appendChild(
          this.select(
            `measure-${col.name}`,
            `Measure type for ${col.name}`,
            MEASURES,
            fieldDef.type,
            (measure) => ({ type: "SetMeasureType", field: col.name, measure }),
          ),
        );
        li.appendChild(
          this.select(
            `aggregate-${col.name}`,
            `Aggregate for ${col.name}`,
            AGGREGATES,
            fieldDef.transform?.aggregate ?? "",
            (agg) => ({
              type: "SetTransform",
              field: col.name,
              transform: agg ? { aggregate: agg } : {},
            }),
          ),
        );
      }
      list.appendChild(li);
    }
    this.panel.appendChild(list);
  }

  // -- Visual tab -----------------------------------------------------------

  private renderVisual(state: SessionState): void {
    for (const unit of state.spec.visual.units) {
      const group = this.unitGroup(`Visual unit ${unit.unit}`, "visual", unit.unit);
      group.appendChild(
        this.select(
          `mark-${unit.unit}`,
          `Mark for ${unit.unit}`,
          MARKS,
          unit.mark,
          (mark) => ({ type: "SetMark", unit: unit.unit, mark }),
        ),
      );
      for (const channel of VISUAL_CHANNELS) {
        group.appendChild(this.encodingSelect(state, "visual", unit.unit, channel));
      }
      this.panel.appendChild(group);
    }
    this.panel.appendChild(this.addUnitButton("visual"));
    this.panel.appendChild(
      this.select(
        "visual-composition",
        "Visual composition",
        ["concat", "layer"],
        state.spec.visual.composition,
        (operator) => ({ type: "SetComposition", modality: "visual", operator }),
      ),
    );
  }

  // -- Audio tab ------------------------------------------------------------

  private renderAudio(state: SessionState): void {
    for (const unit of state.spec.audio.units) {
      const group = this.unitGroup(`Audio unit ${unit.unit}`, "audio", unit.unit);
      for (const channel of AUDIO_CHANNELS) {
        group.appendChild(this.encodingSelect(state, "audio", unit.unit, channel));
      }

      const travLabel = document.createElement("label");
      travLabel.textContent = `Traversal for ${unit.unit} (comma-separated fields)`;
      const trav = document.createElement("input");
      trav.type = "text";
      trav.id = `traversal-${unit.unit}`;
      trav.value = unit.traversal.map((s) => s.field).join(", ");
      travLabel.htmlFor = trav.id;
      const apply = document.createElement("button");
      apply.type = "button";
      apply.textContent = `Set traversal for ${unit.unit}`;
      apply.addEventListener("click", () => {
        const steps = trav.value
          .split(",")
          .map((s) => s.trim())
          .filter((s) => s.length > 0)
          .map((field) => {
            const prev = unit.traversal.find((p) => p.field === field);
            return prev ?? { field };
          });
        void this.onAction({ type: "SetTraversal", unit: unit.unit, steps });
      });
      group.append(travLabel, trav, apply);
      this.panel.appendChild(group);
    }
    this.panel.appendChild(this.addUnitButton("audio"));
    this.panel.appendChild(
      this.select(
        "audio-composition",
        "Audio composition",
        ["concat", "layer"],
        state.spec.audio.composition,
        (operator) => ({ type: "SetComposition", modality: "audio", operator }),
      ),
    );
  }

  // -- Shared widgets ---------------------------------------------------------

  private unitGroup(label: string, modality: string, unitId: string): HTMLElement {
    const group = document.createElement("fieldset");
    const legend = document.createElement("legend");
    legend.textContent = label;
    group.appendChild(legend);
    const remove = document.createElement("button");
    remove.type = "button";
    remove.textContent = `Remove ${label.toLowerCase()}`;
    remove.addEventListener("click", () =>
      void this.onAction({ type: "RemoveUnit", modality, unit: unitId }),
    );
    group.appendChild(remove);
    return group;
  }

  private addUnitButton(modality: string): HTMLElement {
    const btn = document.createElement("button");
    btn.type = "button";
    btn.textContent = `Add ${modality} unit`;
    btn.addEventListener("click", () => void this.onAction({ type: "AddUnit", modality }));
    return btn;
  }

  private encodingFor(
    state: SessionState,
    modality: string,
    unit: string,
    channel: string,
  ): { field: string; enc: EncodingJson } | null {
    for (const f of state.spec.fields) {
      for (const e of f.encodings ?? []) {
        if (e.modality === modality && e.unit === unit && e.channel === channel) {
          return { field: f.name, enc: e };
        }
      }
    }
    return null;
  }

  private encodingSelect(
    state: SessionState,
    modality: string,
    unit: string,
    channel: string,
  ): HTMLElement {
    const current = this.encodingFor(state, modality, unit, channel);
    return this.select(
      `enc-${modality}-${unit}-${channel}`,
      `${channel} field for ${unit}`,
      ["", ...state.selectedFields],
      current?.field ?? "",
      (field) => ({ type: "AddEncoding", field, modality, unit, channel }),
      async (_action, select) => {
        // Replacing a field on an occupied channel is remove-then-add.
        if (current) {
          await this.onAction({
            type: "RemoveEncoding",
            field: current.field,
            modality,
            unit,
            channel,
          });
        }
        if (select.value !== "") {
          await this.onAction({
            type: "AddEncoding",
            field: select.value,
            modality,
            unit,
            channel,
          });
        }
      },
    );
  }

  private select(
    id: string,
    label: string,
    options: string[],
    value: string,
    toAction: (value: string) => EditAction,
    handler?: (action: EditAction, select: HTMLSelectElement) => Promise<void>,
  ): HTMLElement {
    const wrap = document.createElement("span");
    const lab = document.createElement("label");
    lab.htmlFor = id;
    lab.textContent = label;
    const sel = document.createElement("select");
    sel.id = id;
    for (const opt of options) {
      const o = document.createElement("option");
      o.value = opt;
      o.textContent = opt === "" ? "(none)" : opt;
      sel.appendChild(o);
    }
    sel.value = value;
    sel.addEventListener("change", () => {
      const action = toAction(sel.value);
      if (handler) void handler(action, sel);
      else void this.onAction(action);
    });
    wrap.append(lab, sel);
    return wrap;
  }
}
