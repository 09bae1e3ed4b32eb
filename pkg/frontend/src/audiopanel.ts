/** Audio transport and position controls.
 *
 * Position dropdowns (nominal steps) and sliders (binned/temporal steps)
 * are derived from the served schedule's own tone predicates, reflect the
 * current position while paused, and emit position predicates when set.
 * The playback-order dropdown offers the full nested order plus one order
 * per step that sweeps that step while the others stay at the current
 * position; picking one emits the fixed steps' conjunction as a selection
 * so the service re-filters the schedule.
 */

import { conjoin, isTrue } from "./predicate.js";
import type { Player } from "./playback.js";
import type { Predicate, Schedule, TraversalStepJson } from "./types.js";
import { TRUE } from "./types.js";

export interface AudioPanelCallbacks {
  /** Emit a selection predicate originating from the audio modality. */
  onPositionPredicate: (predicate: Predicate) => void;
}

interface StepOption {
  label: string;
  offset: number;
  part: Predicate;
}

function predicateParts(pred: Predicate): Predicate[] {
  if ("and" in pred) return pred.and.flatMap(predicateParts);
  return [pred];
}

function partField(part: Predicate): string | null {
  return "field" in part ? part.field : null;
}

function partLabel(part: Predicate): string {
  if ("equal" in part) return String(part.equal);
  if ("range" in part) return `${part.range[0]}–${part.range[1]}`;
  return "";
}

export class AudioPanel {
  private readonly region: HTMLElement;
  private readonly transport: HTMLElement;
  private readonly steps: HTMLElement;
  private playButton: HTMLButtonElement;
  private traversal: TraversalStepJson[] = [];
  private schedules: Schedule[] = [];

  constructor(
    container: HTMLElement,
    private readonly player: Player,
    private readonly callbacks: AudioPanelCallbacks,
  ) {
    this.region = document.createElement("section");
    this.region.setAttribute("aria-label", "Audio controls");
    this.transport = document.createElement("div");
    this.steps = document.createElement("div");
    this.region.append(this.transport, this.steps);
    container.appendChild(this.region);
    this.playButton = document.createElement("button");
    this.renderTransport();
  }

  setSchedules(schedules: Schedule[], traversal: TraversalStepJson[]): void {
    this.schedules = schedules;
    this.traversal = traversal;
    this.renderSteps();
  }

  refresh(): void {
    this.playButton.textContent = this.player.isPlaying ? "Pause" : "Play";
    this.playButton.setAttribute("aria-pressed", String(this.player.isPlaying));
    this.renderSteps();
  }

  private renderTransport(): void {
    this.transport.replaceChildren();

    this.playButton = document.createElement("button");
    this.playButton.type = "button";
    this.playButton.id = "audio-play";
    this.playButton.textContent = "Play";
    this.playButton.setAttribute("aria-pressed", "false");
    this.playButton.addEventListener("click", () => this.player.toggle());
    this.transport.appendChild(this.playButton);

    this.transport.appendChild(
      this.labelled("audio-rate", "Playback rate", this.rateSelect()),
    );

    const ticks = document.createElement("input");
    ticks.type = "checkbox";
    ticks.id = "audio-ticks";
    ticks.checked = this.player.ticksEnabled;
    ticks.addEventListener("change", () => {
      this.player.ticksEnabled = ticks.checked;
    });
    this.transport.appendChild(this.labelled("audio-ticks", "Speech ticks", ticks));

    const mute = document.createElement("input");
    mute.type = "checkbox";
    mute.id = "audio-unmuted";
    mute.checked = !this.player.muted;
    mute.addEventListener("change", () => {
      this.player.muted = !mute.checked;
    });
    this.transport.appendChild(this.labelled("audio-unmuted", "Unmuted", mute));

    const speech = document.createElement("input");
    speech.type = "range";
    speech.id = "audio-speech-rate";
    speech.min = "0.5";
    speech.max = "2";
    speech.step = "0.25";
    speech.value = String(this.player.speechRate);
    speech.addEventListener("change", () => {
      this.player.speechRate = Number(speech.value);
    });
    this.transport.appendChild(this.labelled("audio-speech-rate", "Speech rate", speech));
  }

  private rateSelect(): HTMLSelectElement {
    const sel = document.createElement("select");
    sel.id = "audio-rate";
    for (const r of ["0.5", "1", "2", "4"]) {
      const opt = document.createElement("option");
      opt.value = r;
      opt.textContent = `${r}x`;
      sel.appendChild(opt);
    }
    sel.value = String(this.player.rate);
    sel.addEventListener("change", () => {
      const wasPlaying = this.player.isPlaying;
      if (wasPlaying) this.player.pause();
      this.player.rate = Number(sel.value);
      if (wasPlaying) this.player.play();
    });
    return sel;
  }

  /** Per-field position options, in first-played order. */
  private stepOptions(field: string): StepOption[] {
    const seen = new Map<string, StepOption>();
    let base = 0;
    for (const s of this.schedules) {
      for (const t of s.tones) {
        for (const part of predicateParts(t.predicate)) {
          if (partField(part) !== field) continue;
          const label = partLabel(part);
          if (!seen.has(label)) {
            seen.set(label, { label, offset: (base + t.time) / this.player.rate, part });
          }
        }
      }
      base += s.duration;
    }
    return [...seen.values()];
  }

  private renderSteps(): void {
    this.steps.replaceChildren();
    if (this.traversal.length === 0) return;
    const position = this.player.positionState();

    for (const step of this.traversal) {
      const options = this.stepOptions(step.field);
      if (options.length === 0) continue;
      const current = position.get(step.field) ?? options[0].label;
      const control = step.bin
        ? this.stepSlider(step.field, options, current)
        : this.stepDropdown(step.field, options, current);
      this.steps.appendChild(this.labelled(control.id, `Position: ${step.field}`, control));
    }

    this.steps.appendChild(
      this.labelled("audio-order", "Playback order", this.orderSelect(position)),
    );
  }

  private stepDropdown(field: string, options: StepOption[], current: string): HTMLSelectElement {
    const sel = document.createElement("select");
    sel.id = `audio-step-${field}`;
    for (const o of options) {
      const opt = document.createElement("option");
      opt.value = o.label;
      opt.textContent = o.label;
      sel.appendChild(opt);
    }
    sel.value = current;
    sel.addEventListener("change", () => {
      const chosen = options.find((o) => o.label === sel.value);
      if (chosen) this.setPosition(chosen);
    });
    return sel;
  }

  private stepSlider(field: string, options: StepOption[], current: string): HTMLInputElement {
    const slider = document.createElement("input");
    slider.type = "range";
    slider.id = `audio-step-${field}`;
    slider.min = "0";
    slider.max = String(options.length - 1);
    slider.step = "1";
    const idx = options.findIndex((o) => o.label === current);
    slider.value = String(idx >= 0 ? idx : 0);
    slider.setAttribute("aria-valuetext", current);
    slider.addEventListener("change", () => {
      const chosen = options[Number(slider.value)];
      if (chosen) {
        slider.setAttribute("aria-valuetext", chosen.label);
        this.setPosition(chosen);
      }
    });
    return slider;
  }

  private setPosition(chosen: StepOption): void {
    this.player.seek(chosen.offset);
    this.callbacks.onPositionPredicate(chosen.part);
    this.refresh();
  }

  private orderSelect(position: Map<string, string>): HTMLSelectElement {
    const sel = document.createElement("select");
    sel.id = "audio-order";
    const fields = this.traversal.map((s) => s.field);
    const orders: { label: string; fixed: Predicate }[] = [
      { label: `by ${fields.join(", then ")}`, fixed: TRUE },
    ];
    for (const f of fields) {
      const others = fields.filter((g) => g !== f);
      if (others.length === 0 || !others.every((g) => position.has(g))) continue;
      const fixedParts = others
        .map((g) => this.currentPart(g))
        .filter((p): p is Predicate => p !== null);
      if (fixedParts.length !== others.length) continue;
      const label = others.map((g) => `${g} ${position.get(g)}`).join(", ") + ` by ${f}`;
      orders.push({ label, fixed: conjoin(...fixedParts) });
    }
    for (const o of orders) {
      const opt = document.createElement("option");
      opt.value = o.label;
      opt.textContent = o.label;
      sel.appendChild(opt);
    }
    sel.addEventListener("change", () => {
      const chosen = orders.find((o) => o.label === sel.value);
      if (chosen && !isTrue(chosen.fixed)) this.callbacks.onPositionPredicate(chosen.fixed);
      else if (chosen) this.callbacks.onPositionPredicate(TRUE);
    });
    return sel;
  }

  private currentPart(field: string): Predicate | null {
    for (const part of predicateParts(this.player.positionPredicate())) {
      if (partField(part) === field) return part;
    }
    const first = this.stepOptions(field)[0];
    return first ? first.part : null;
  }

  private labelled(id: string, text: string, control: HTMLElement): HTMLElement {
    const wrap = document.createElement("span");
    const label = document.createElement("label");
    label.htmlFor = id;
    label.textContent = text;
    wrap.append(label, control);
    return wrap;
  }
}
