"""Nice-number tick and bin computation.

This is the single tick algorithm shared by the visual axis defaults, the
audio axis ticks, and the textual interval nodes, so that all three
modalities agree on boundary values. It follows the standard d3-array
tick-step construction (powers of ten times 1, 2, or 5).
"""

import math

_E10 = math.sqrt(50)
_E5 = math.sqrt(10)
_E2 = math.sqrt(2)


def tick_step(lo: float, hi: float, count: int) -> float:
    """Step size that splits [lo, hi] into about `count` nice intervals."""
    if hi <= lo or count <= 0:
        return 1.0
    step0 = (hi - lo) / count
    power = math.floor(math.log10(step0))
    step = 10.0 ** power
    err = step0 / step
    if err >= _E10:
        step *= 10
    elif err >= _E5:
        step *= 5
    elif err >= _E2:
        step *= 2
    return step


def ticks(lo: float, hi: float, count: int = 10) -> list[float]:
    """Nice tick values covering [lo, hi], endpoints included when aligned."""
    if lo == hi:
        return [lo]
    step = tick_step(lo, hi, count)
    start = math.ceil(lo / step - 1e-9)
    stop = math.floor(hi / step + 1e-9)
    return [_clean(i * step) for i in range(int(start), int(stop) + 1)]


def nice_bins(lo: float, hi: float, count: int = 5) -> list[tuple[float, float]]:
    """Half-open equal-width bins with nice boundaries spanning [lo, hi].

    Boundaries are aligned to multiples of the nice step, extended outward so
    the domain is fully covered. The last bin is closed at the top.
    """
    if hi <= lo:
        return [(lo, lo)]
    step = tick_step(lo, hi, count)
    start = math.floor(lo / step + 1e-9) * step
    edges = [_clean(start)]
    while edges[-1] < hi - 1e-9 * max(1.0, abs(hi)):
        edges.append(_clean(edges[-1] + step))
    return list(zip(edges[:-1], edges[1:]))


def _is_nice(width: float) -> bool:
    if width <= 0:
        return False
    mantissa = width / (10.0 ** math.floor(math.log10(width)))
    return any(abs(mantissa - m) < 1e-9 or abs(mantissa - m * 10) < 1e-8
               for m in (1.0, 2.0, 2.5, 5.0))


def zoom_bins(lo: float, hi: float, min_count: int = 4) -> list[tuple[float, float]]:
    """Equal-width bins over exactly [lo, hi]: the smallest count >= min_count
    whose width is a nice number. Used when re-scoping to a filtered domain."""
    if hi <= lo:
        return [(lo, lo)]
    span = hi - lo
    for k in range(min_count, 13):
        width = span / k
        if _is_nice(width):
            return [(_clean(lo + i * width), _clean(lo + (i + 1) * width)) for i in range(k)]
    width = span / min_count
    return [(_clean(lo + i * width), _clean(lo + (i + 1) * width)) for i in range(min_count)]


def _clean(x: float) -> float:
    """Round away accumulated float noise from step arithmetic."""
    r = round(x, 9)
    return r if r != 0 else 0.0
