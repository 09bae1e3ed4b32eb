"""Sonification: traversal linearization, tone scheduling, WAV rendering.

A traversal is an ordered list of steps over fields; linearizing it nests
the steps like grouped loops, innermost last. Each resulting selection
becomes one tone whose pitch encodes the (aggregated) pitch-field value on
a linear frequency scale. Speech ticks are zero-length cue markers in the
schedule; rendering emits them to a JSON sidecar rather than synthesizing
speech. Rendering is deterministic: the same schedule yields identical
bytes.
"""

from __future__ import annotations

import datetime
import json
import wave
from dataclasses import dataclass, field as dc_field, replace
from typing import Optional

import numpy as np

from . import ticks as tickmod
from .ingest import Dataset
from .model import MultimodalSpec, Measure, TraversalStep, unit_encodings
from .predicate import (
    FieldEqual, FieldRange, Predicate, TRUE, conjoin, evaluate, to_json,
)

TONE_SECONDS = 0.2       # tone length at rate 1.0
FREQ_LO = 220.0
FREQ_HI = 880.0
DEFAULT_BIN_COUNT = 10   # equal-width bins for a binned step with no count
SAMPLE_RATE = 44100


class EmptyAfterFilter(ValueError):
    """The traversal filter matches no rows."""


@dataclass(frozen=True)
class StepValue:
    """One traversal step fixed at a discrete value or a bin."""
    field: str
    value: object = None
    bin: Optional[tuple] = None  # (lo, hi)
    inclusive: bool = False

    def predicate(self) -> Predicate:
        if self.bin is not None:
            return FieldRange(self.field, self.bin[0], self.bin[1],
                              inclusive_hi=self.inclusive)
        return FieldEqual(self.field, self.value)

    def label(self) -> str:
        if self.bin is not None:
            return f"{self.field} {_fmt(self.bin[0])} to {_fmt(self.bin[1])}"
        return _fmt(self.value)


def _fmt(v) -> str:
    if isinstance(v, (datetime.date, datetime.datetime)):
        return v.isoformat()
    if isinstance(v, float) and v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return str(v)


def _step_values(step: TraversalStep, dataset: Dataset, scope_rows) -> list[StepValue]:
    """Ordered values of one step within the scoped rows.

    Discrete steps: temporal/quantitative ascending, nominal in dataset
    first-appearance order. Binned steps: equal-width bins over the full
    column domain, empty-in-scope bins skipped.
    """
    i = dataset.index(step.field)
    in_scope = [r[i] for r in scope_rows if r[i] is not None]
    if not step.bin:
        measure = dataset.measure(step.field)
        if measure in (Measure.QUANTITATIVE, Measure.TEMPORAL):
            vals = sorted(set(in_scope), key=_sort_key)
        else:
            seen = set()
            vals = []
            for v in dataset.values(step.field):  # global order, stable under filters
                if v is not None and v in in_scope and v not in seen:
                    seen.add(v)
                    vals.append(v)
        return [StepValue(step.field, value=v) for v in vals]
    full = [v for v in dataset.values(step.field) if v is not None]
    if not full:
        return []
    lo, hi = float(min(full)), float(max(full))
    n = step.bin_count or DEFAULT_BIN_COUNT
    if hi <= lo:
        return [StepValue(step.field, bin=(lo, hi), inclusive=True)]
    width = (hi - lo) / n
    out = []
    for k in range(n):
        b_lo, b_hi = lo + k * width, lo + (k + 1) * width
        inclusive = k == n - 1
        if any(b_lo <= v and (v <= b_hi if inclusive else v < b_hi) for v in in_scope):
            out.append(StepValue(step.field, bin=(b_lo, b_hi), inclusive=inclusive))
    return out


def _sort_key(v):
    if isinstance(v, (datetime.date, datetime.datetime)):
        return v.isoformat()
    return v


def linearize(traversal, dataset: Dataset, filt: Predicate = TRUE) -> list[tuple[StepValue, ...]]:
    """All nonempty selections of the nested traversal, in playback order."""
    rows = [r for r in dataset.rows if evaluate(filt, r, dataset)]
    if not rows:
        raise EmptyAfterFilter("no rows match the traversal filter")
    out: list[tuple[StepValue, ...]] = []

    def recurse(depth: int, scope_rows, prefix: tuple[StepValue, ...]):
        if depth == len(traversal):
            out.append(prefix)
            return
        step = traversal[depth]
        for sv in _step_values(step, dataset, scope_rows):
            sub = [r for r in scope_rows if evaluate(sv.predicate(), r, dataset)]
            if sub:
                recurse(depth + 1, sub, prefix + (sv,))

    recurse(0, rows, ())
    return out


# ---------------------------------------------------------------------------
# Scheduling


@dataclass(frozen=True)
class FrequencyScale:
    domain_lo: float
    domain_hi: float
    freq_lo: float = FREQ_LO
    freq_hi: float = FREQ_HI

    def map(self, v: float) -> float:
        if self.domain_hi <= self.domain_lo:
            return (self.freq_lo + self.freq_hi) / 2
        t = (float(v) - self.domain_lo) / (self.domain_hi - self.domain_lo)
        return self.freq_lo + t * (self.freq_hi - self.freq_lo)


@dataclass(frozen=True)
class ToneEvent:
    time_s: float
    dur_s: float
    frequency: float
    value: Optional[float] = None
    predicate: Predicate = TRUE


@dataclass(frozen=True)
class CueEvent:
    time_s: float
    text: str


@dataclass(frozen=True)
class ScheduleOptions:
    rate: float = 1.0           # playback speed multiplier
    ticks: bool = True          # include speech tick cues
    filter: Predicate = TRUE
    order: Optional[tuple[str, ...]] = None  # traversal field permutation


@dataclass(frozen=True)
class AudioSchedule:
    unit_id: str
    tones: tuple[ToneEvent, ...] = ()
    cues: tuple[CueEvent, ...] = ()
    duration_s: float = 0.0
    scale: Optional[FrequencyScale] = None
    pitch_field: Optional[str] = None


def _reorder(traversal, order):
    if order is None:
        return tuple(traversal)
    by_name = {s.field: s for s in traversal}
    if sorted(order) != sorted(by_name):
        raise ValueError("order must permute the traversal fields")
    return tuple(by_name[f] for f in order)


def _aggregate(values: list[float], aggregate: Optional[str]) -> float:
    arr = [float(v) for v in values]
    agg = aggregate or ("mean" if len(arr) > 1 else None)
    if agg is None:
        return arr[0]
    if agg == "mean":
        return float(np.mean(arr))
    if agg == "sum":
        return float(np.sum(arr))
    if agg == "count":
        return float(len(arr))
    if agg == "min":
        return float(np.min(arr))
    if agg == "max":
        return float(np.max(arr))
    raise ValueError(f"unknown aggregate {agg!r}")


def schedule(unit, spec: MultimodalSpec, dataset: Dataset,
             options: ScheduleOptions = ScheduleOptions()) -> AudioSchedule:
    """Tone and cue schedule for one audio unit."""
    enc = unit_encodings(spec, "audio", unit.unit_id)
    if "pitch" not in enc:
        return AudioSchedule(unit.unit_id)
    pitch_field, transform = enc["pitch"]
    traversal = _reorder(unit.traversal, options.order)
    try:
        selections = linearize(traversal, dataset, options.filter)
    except EmptyAfterFilter:
        return AudioSchedule(unit.unit_id, pitch_field=pitch_field)

    pi = dataset.index(pitch_field)
    tone_values = []
    preds = []
    for sel in selections:
        pred = conjoin(options.filter, *[sv.predicate() for sv in sel])
        vals = [r[pi] for r in dataset.rows
                if evaluate(pred, r, dataset) and r[pi] is not None]
        if not vals:
            continue
        tone_values.append(_aggregate(vals, transform.aggregate))
        preds.append((sel, pred))
    if not tone_values:
        return AudioSchedule(unit.unit_id, pitch_field=pitch_field)

    scale = FrequencyScale(min(tone_values), max(tone_values))
    dur = TONE_SECONDS / options.rate
    tones = []
    cues = []
    last: list = [None] * len(traversal)
    tick_values = _inner_ticks(traversal, dataset, spec)
    for k, (v, (sel, pred)) in enumerate(zip(tone_values, preds)):
        t = k * dur
        tones.append(ToneEvent(round(t, 6), round(dur, 6), scale.map(v), v, pred))
        if options.ticks:
            for d, sv in enumerate(sel):
                cur = sv.bin if sv.bin is not None else sv.value
                changed = last[d] != cur
                if changed:
                    for j in range(d, len(last)):
                        last[j] = None
                    last[d] = cur
                    is_inner = d == len(sel) - 1
                    if not is_inner:
                        cues.append(CueEvent(round(t, 6), sv.label()))
                    elif _crosses_tick(sv, tick_values):
                        cues.append(CueEvent(round(t, 6), sv.label()))
    duration = round(len(tones) * dur, 6)
    return AudioSchedule(unit.unit_id, tuple(tones), tuple(cues), duration,
                         scale, pitch_field)


def _inner_ticks(traversal, dataset: Dataset, spec: MultimodalSpec):
    """Axis tick values for the innermost step, shared with the visual axis."""
    if not traversal:
        return None
    step = traversal[-1]
    measure = dataset.measure(step.field)
    if measure == Measure.NOMINAL or measure == Measure.ORDINAL:
        return None  # every category announces itself on change
    vals = [float(v) for v in dataset.values(step.field)
            if v is not None and not isinstance(v, (datetime.date, datetime.datetime))]
    if not vals:
        return None
    count = 10 if spec.visual_units else 5
    return set(tickmod.ticks(min(vals), max(vals), count))


def _crosses_tick(sv: StepValue, tick_values) -> bool:
    if tick_values is None:
        return True  # nominal innermost step: announce each category
    if sv.bin is not None:
        lo, hi = sv.bin
        return any(lo <= t and (t <= hi if sv.inclusive else t < hi) for t in tick_values)
    try:
        return float(sv.value) in tick_values
    except (TypeError, ValueError):
        return True


# ---------------------------------------------------------------------------
# Playback orders


@dataclass(frozen=True)
class OrderDescriptor:
    label: str
    fixed: tuple[tuple[str, object], ...] = ()  # (field, value) pairs held constant
    iterate: tuple[str, ...] = ()


def enumerate_playback_orders(unit, dataset: Dataset,
                              state: Optional[dict] = None) -> list[OrderDescriptor]:
    """Available traversal orders: the full nested default, plus one order per
    step that sweeps that step while holding the others at the current state."""
    fields = [s.field for s in unit.traversal]
    out = [OrderDescriptor("by " + ", then ".join(fields), (), tuple(fields))]
    state = state or {}
    for i, f in enumerate(fields):
        others = [g for g in fields if g != f]
        if not others:
            continue
        if not all(g in state for g in others):
            continue
        fixed = tuple((g, state[g]) for g in others)
        label = ", ".join(f"{g} {_fmt(v)}" for g, v in fixed) + f" by {f}"
        out.append(OrderDescriptor(label, fixed, (f,)))
    return out


# ---------------------------------------------------------------------------
# Serialization and rendering


def schedule_to_json(s: AudioSchedule) -> dict:
    return {
        "unit": s.unit_id,
        "pitchField": s.pitch_field,
        "duration": s.duration_s,
        "scale": None if s.scale is None else {
            "domain": [s.scale.domain_lo, s.scale.domain_hi],
            "range": [s.scale.freq_lo, s.scale.freq_hi],
        },
        "tones": [{"time": t.time_s, "duration": t.dur_s,
                   "frequency": round(t.frequency, 4), "value": t.value,
                   "predicate": to_json(t.predicate)} for t in s.tones],
        "cues": [{"time": c.time_s, "text": c.text} for c in s.cues],
    }


def _synth(tones, duration_s: float, sample_rate: int, gain: float) -> np.ndarray:
    n = max(1, int(round(duration_s * sample_rate)))
    buf = np.zeros(n, dtype=np.float64)
    for t in tones:
        i0 = int(round(t.time_s * sample_rate))
        cnt = int(round(t.dur_s * sample_rate))
        if cnt <= 0:
            continue
        ts = np.arange(cnt, dtype=np.float64) / sample_rate
        wave_ = np.sin(2 * np.pi * t.frequency * ts)
        ramp = min(cnt // 2, int(0.005 * sample_rate))  # 5 ms attack/release
        if ramp > 0:
            env = np.ones(cnt)
            env[:ramp] = np.linspace(0.0, 1.0, ramp, endpoint=False)
            env[-ramp:] = np.linspace(1.0, 0.0, ramp)
            wave_ *= env
        buf[i0:i0 + cnt] += gain * wave_[:max(0, n - i0)]
    return buf


def render_wav(schedules, wav_path: str, sample_rate: int = SAMPLE_RATE,
               layered: bool = False) -> tuple[str, str]:
    """Write one 16-bit mono PCM WAV plus a cue sidecar JSON.

    `schedules` is one AudioSchedule or a list. Layered schedules mix at
    1/n gain; otherwise schedules are concatenated back to back.
    """
    if isinstance(schedules, AudioSchedule):
        schedules = [schedules]
    if layered:
        duration = max((s.duration_s for s in schedules), default=0.0)
        gain = 0.8 / max(1, len(schedules))
        parts = [_synth(s.tones, duration, sample_rate, gain) for s in schedules]
        buf = np.sum(parts, axis=0) if parts else np.zeros(1)
        cues = sorted(((c.time_s, c.text) for s in schedules for c in s.cues))
    else:
        offset = 0.0
        all_tones = []
        cue_list = []
        for s in schedules:
            for t in s.tones:
                all_tones.append(replace(t, time_s=round(t.time_s + offset, 6)))
            for c in s.cues:
                cue_list.append((round(c.time_s + offset, 6), c.text))
            offset += s.duration_s
        buf = _synth(all_tones, offset or 1e-3, sample_rate, 0.8)
        cues = cue_list
    buf = np.clip(buf, -1.0, 1.0)
    pcm = (buf * 32767.0).astype("<i2")
    with wave.open(wav_path, "wb") as w:
        w.setnchannels(1)
        w.setsampwidth(2)
        w.setframerate(sample_rate)
        w.writeframes(pcm.tobytes())
    cues_path = (wav_path[:-4] if wav_path.endswith(".wav") else wav_path) + ".cues.json"
    with open(cues_path, "w", encoding="utf-8") as f:
        json.dump([{"time_s": t, "text": txt} for t, txt in cues], f, indent=2)
    return wav_path, cues_path
