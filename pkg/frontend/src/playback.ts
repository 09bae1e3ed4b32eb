/** Audio playback of tone schedules plus voiced speech cues.
 *
 * The player renders exactly the tone schedule the service returned: it
 * never recomputes tones. The client-side knobs are pure playback
 * concerns — playback rate scales the clock, mute zeroes tone gain (cues
 * are still voiced), and the ticks toggle silences cue voicing.
 */

import { fieldValues } from "./predicate.js";
import type { Predicate, Schedule } from "./types.js";
import { TRUE } from "./types.js";

export interface PlannedTone {
  time: number;
  duration: number;
  frequency: number;
  gain: number;
  predicate: Predicate;
}

export interface PlannedCue {
  time: number;
  text: string;
}

export interface PlaybackPlan {
  tones: PlannedTone[];
  cues: PlannedCue[];
  duration: number;
}

/** Backend that realizes a plan (Web Audio in the browser, a fake in tests). */
export interface ToneSink {
  start(plan: PlaybackPlan, onCue: (text: string) => void, onDone: () => void): void;
  stop(): void;
}

export interface SpeechSink {
  speak(text: string, rate: number): void;
}

export interface PlayerOptions {
  sink?: ToneSink;
  speech?: SpeechSink;
  now?: () => number;
  onStateChange?: () => void;
}

const TONE_GAIN = 0.3;

export class Player {
  rate = 1;
  muted = false;
  ticksEnabled = true;
  speechRate = 1;

  private schedules: Schedule[] = [];
  private composition: "concat" | "layer" = "concat";
  private sink: ToneSink;
  private speech: SpeechSink;
  private now: () => number;
  private onStateChange: () => void;
  private playing = false;
  private startClock = 0;
  private pausedOffset = 0;

  constructor(opts: PlayerOptions = {}) {
    this.sink = opts.sink ?? new WebAudioSink();
    this.speech = opts.speech ?? new PlatformSpeech();
    this.now = opts.now ?? (() => performance.now() / 1000);
    this.onStateChange = opts.onStateChange ?? (() => {});
  }

  setSchedules(schedules: Schedule[], composition: "concat" | "layer" = "concat"): void {
    this.stop();
    this.schedules = schedules;
    this.composition = composition;
    this.onStateChange();
  }

  get isPlaying(): boolean {
    return this.playing;
  }

  get hasSchedules(): boolean {
    return this.schedules.some((s) => s.tones.length > 0 || s.cues.length > 0);
  }

  /** Scheduled events in playback time (composition offsets and rate applied). */
  plan(fromOffset = 0): PlaybackPlan {
    const tones: PlannedTone[] = [];
    const cues: PlannedCue[] = [];
    let base = 0;
    let total = 0;
    for (const s of this.schedules) {
      for (const t of s.tones) {
        tones.push({
          time: (base + t.time) / this.rate,
          duration: t.duration / this.rate,
          frequency: t.frequency,
          gain: this.muted ? 0 : TONE_GAIN,
          predicate: t.predicate,
        });
      }
      if (this.ticksEnabled) {
        for (const c of s.cues) cues.push({ time: (base + c.time) / this.rate, text: c.text });
      }
      const end = (base + s.duration) / this.rate;
      if (this.composition === "concat") base += s.duration;
      total = Math.max(total, end);
    }
    const shift = (x: number) => x - fromOffset;
    return {
      tones: tones.filter((t) => t.time >= fromOffset).map((t) => ({ ...t, time: shift(t.time) })),
      cues: cues.filter((c) => c.time >= fromOffset).map((c) => ({ ...c, time: shift(c.time) })),
      duration: Math.max(0, total - fromOffset),
    };
  }

  play(): void {
    if (this.playing || !this.hasSchedules) return;
    const plan = this.plan(this.pausedOffset);
    this.playing = true;
    this.startClock = this.now() - this.pausedOffset;
    this.sink.start(
      plan,
      (text) => this.speech.speak(text, this.speechRate),
      () => {
        this.playing = false;
        this.pausedOffset = 0;
        this.onStateChange();
      },
    );
    this.onStateChange();
  }

  pause(): void {
    if (!this.playing) return;
    this.pausedOffset = this.now() - this.startClock;
    this.playing = false;
    this.sink.stop();
    this.onStateChange();
  }

  toggle(): void {
    if (this.playing) this.pause();
    else this.play();
  }

  stop(): void {
    if (this.playing) this.sink.stop();
    this.playing = false;
    this.pausedOffset = 0;
  }

  /** Jump to a playback-time offset, continuing if currently playing. */
  seek(offset: number): void {
    const wasPlaying = this.playing;
    if (wasPlaying) this.pause();
    this.pausedOffset = offset;
    if (wasPlaying) this.play();
    else this.onStateChange();
  }

  /** Elapsed playback-time seconds (current offset while paused). */
  position(): number {
    return this.playing ? this.now() - this.startClock : this.pausedOffset;
  }

  /** Predicate of the tone at (or last before) the current position. */
  positionPredicate(): Predicate {
    const pos = this.position();
    let current: Predicate = TRUE;
    for (const t of this.plan(0).tones) {
      if (t.time <= pos) current = t.predicate;
      else break;
    }
    return current;
  }

  /** Field -> value at the current position, for the step controls. */
  positionState(): Map<string, string> {
    return fieldValues(this.positionPredicate());
  }
}

/** Web Audio realization: one oscillator per tone with 5 ms ramps. */
export class WebAudioSink implements ToneSink {
  private ctx: AudioContext | null = null;
  private timers: ReturnType<typeof setTimeout>[] = [];

  start(plan: PlaybackPlan, onCue: (text: string) => void, onDone: () => void): void {
    const Ctx = (globalThis as { AudioContext?: typeof AudioContext }).AudioContext;
    if (!Ctx) {
      onDone();
      return;
    }
    this.ctx = new Ctx();
    const t0 = this.ctx.currentTime + 0.05;
    for (const tone of plan.tones) {
      const osc = this.ctx.createOscillator();
      const gain = this.ctx.createGain();
      const start = t0 + tone.time;
      const stop = start + tone.duration;
      const ramp = Math.min(0.005, tone.duration / 2);
      osc.frequency.value = tone.frequency;
      gain.gain.setValueAtTime(0, start);
      gain.gain.linearRampToValueAtTime(tone.gain, start + ramp);
      gain.gain.setValueAtTime(tone.gain, stop - ramp);
      gain.gain.linearRampToValueAtTime(0, stop);
      osc.connect(gain).connect(this.ctx.destination);
      osc.start(start);
      osc.stop(stop);
    }
    for (const cue of plan.cues) {
      this.timers.push(setTimeout(() => onCue(cue.text), (0.05 + cue.time) * 1000));
    }
    this.timers.push(setTimeout(onDone, (0.05 + plan.duration) * 1000));
  }

  stop(): void {
    for (const t of this.timers) clearTimeout(t);
    this.timers = [];
    if (this.ctx) {
      void this.ctx.close();
      this.ctx = null;
    }
  }
}

/** Platform speech synthesis with user-settable rate. */
export class PlatformSpeech implements SpeechSink {
  speak(text: string, rate: number): void {
    const synth = (globalThis as { speechSynthesis?: SpeechSynthesis }).speechSynthesis;
    const Utt = (globalThis as { SpeechSynthesisUtterance?: typeof SpeechSynthesisUtterance })
      .SpeechSynthesisUtterance;
    if (!synth || !Utt) return;
    const u = new Utt(text);
    u.rate = rate;
    synth.speak(u);
  }
}
