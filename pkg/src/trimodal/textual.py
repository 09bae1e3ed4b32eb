"""Hierarchical textual structure: a tree of described, predicate-scoped nodes.

With a visual unit present the tree mirrors the visualization: a facet
level (or a series level for colored line charts), then one branch per
encoding (x-axis, y-axis, legend, order). Without a visual unit the tree
is flat: one grouping branch per field, described without visual
vocabulary. Every node carries the predicate that scopes it; descriptions
are recomputable from the rows matching that predicate.

Filtering re-scopes the tree with zoom semantics: interval levels re-bin to
span only the filtered domain, and empty categories drop out.
"""

from __future__ import annotations

import datetime
from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np

from . import ticks
from .ingest import Dataset
from .model import Measure, MultimodalSpec, unit_encodings
from .predicate import (
    And, FieldEqual, FieldRange, Predicate, TRUE, conjoin, evaluate, to_json,
)

DEFAULT_BIN_COUNT = 5   # nice intervals per quantitative axis level
DATUM_LIMIT = 30        # max rows that still get per-row summary leaves

_BRANCHES = (("x", "axis-level", "X-axis"),
             ("y", "axis-level", "Y-axis"),
             ("color", "legend-level", "Legend"),
             ("order", "axis-level", "Order"))


@dataclass
class TextNode:
    node_id: str
    role: str  # root | facet-level | axis-level | legend-level | field-group |
               # interval | category | datum-summary
    groupby: Optional[str]
    predicate: Predicate
    description: str
    children: list["TextNode"] = dc_field(default_factory=list)
    meta: dict = dc_field(default_factory=dict)


def fmt(v) -> str:
    """Stable human formatting; floats keep their value exactly when short."""
    if isinstance(v, bool):
        return str(v)
    if isinstance(v, (datetime.date, datetime.datetime)):
        return v.isoformat()
    if isinstance(v, float):
        if v == int(v) and abs(v) < 1e15:
            return str(int(v))
        s = f"{v:.4f}".rstrip("0").rstrip(".")
        return s
    return str(v)


def _rows(pred: Predicate, dataset: Dataset) -> list[tuple]:
    return [r for r in dataset.rows if evaluate(pred, r, dataset)]


def _field_values(rows, dataset: Dataset, field: str):
    i = dataset.index(field)
    return [r[i] for r in rows if r[i] is not None]


def _ordered_distinct(values, measure: Measure):
    if measure in (Measure.QUANTITATIVE, Measure.TEMPORAL):
        return sorted(set(values), key=_sort_key)
    seen, out = set(), []
    for v in values:
        if v not in seen:
            seen.add(v)
            out.append(v)
    return out


def _sort_key(v):
    if isinstance(v, datetime.datetime):
        return (0, v.isoformat())
    if isinstance(v, datetime.date):
        return (0, v.isoformat())
    return (1, v) if isinstance(v, (int, float)) else (2, str(v))


# ---------------------------------------------------------------------------
# Construction


def build_tree(spec: MultimodalSpec, dataset: Dataset) -> TextNode:
    visual_present = bool(spec.visual_units)
    root = TextNode("n", "root", None, TRUE, "", meta={
        "visual": visual_present,
        "key": list(spec.key),
        "fields": list(spec.field_names()),
    })
    if visual_present:
        unit = spec.visual_units[0]
        enc = unit_encodings(spec, "visual", unit.unit_id)
        root.meta["mark"] = unit.mark
        branches = [(ch, role, label, enc[ch][0])
                    for ch, role, label in _BRANCHES if ch in enc]
        summary_field = _summary_field(enc, dataset)
        facet_field = enc.get("facet", (None,))[0]
        if facet_field is not None:
            values = _ordered_distinct(_field_values(dataset.rows, dataset, facet_field),
                                       dataset.measure(facet_field))
            for i, v in enumerate(values):
                pred = FieldEqual(facet_field, v)
                facet = TextNode(f"{root.node_id}.{i}", "facet-level", facet_field, pred, "",
                                 meta={"category": v, "field": facet_field,
                                       "key": list(spec.key)})
                _add_branches(facet, branches, summary_field, dataset)
                root.children.append(facet)
        else:
            _add_branches(root, branches, summary_field, dataset)
    else:
        branches = [(None, "field-group", None, name) for name in spec.field_names()]
        _add_branches(root, branches, _first_quantitative(spec, dataset), dataset)
    _describe_all(root, dataset, visual_present)
    return root


def _summary_field(enc, dataset) -> Optional[str]:
    for ch in ("x", "y", "size"):
        if ch in enc and dataset.measure(enc[ch][0]) == Measure.QUANTITATIVE:
            return enc[ch][0]
    return None


def _first_quantitative(spec, dataset) -> Optional[str]:
    for name in spec.field_names():
        if dataset.measure(name) == Measure.QUANTITATIVE:
            return name
    return None


def _add_branches(parent: TextNode, branches, summary_field, dataset) -> None:
    for i, (channel, role, label, fname) in enumerate(branches):
        # The key rides along for datum regeneration during re-scoping.
        node = TextNode(f"{parent.node_id}.{i}", role, fname, parent.predicate, "",
                        meta={"channel": channel, "label": label, "field": fname,
                              "summary_field": summary_field,
                              "key": _root_key(parent)})
        _populate_group(node, dataset)
        parent.children.append(node)


def _root_key(node: TextNode) -> list[str]:
    return list(node.meta.get("key") or [])


def _populate_group(branch: TextNode, dataset: Dataset) -> None:
    """Fill a branch node (axis/legend/field-group) with its value children."""
    fname = branch.meta["field"]
    measure = dataset.measure(fname)
    scope_rows = _rows(branch.predicate, dataset)
    key = _root_key(branch)
    branch.children = []
    if measure == Measure.QUANTITATIVE:
        domain = branch.meta.get("zoom_domain")
        if domain is not None:
            bins = ticks.zoom_bins(domain[0], domain[1])
        else:
            values = _field_values(dataset.rows, dataset, fname)
            if not values:
                return
            bins = ticks.nice_bins(min(values), max(values), DEFAULT_BIN_COUNT)
        for j, (lo, hi) in enumerate(bins):
            inclusive = j == len(bins) - 1
            pred = conjoin(branch.predicate, FieldRange(fname, lo, hi, inclusive_hi=inclusive))
            node = TextNode(f"{branch.node_id}.{j}", "interval", fname, pred, "",
                            meta={"field": fname, "lo": lo, "hi": hi,
                                  "inclusive": inclusive, "key": key,
                                  "summary_field": branch.meta.get("summary_field")})
            _populate_leaves(node, dataset)
            branch.children.append(node)
    else:
        values = _ordered_distinct(_field_values(scope_rows, dataset, fname), measure)
        for j, v in enumerate(values):
            pred = conjoin(branch.predicate, FieldEqual(fname, v))
            node = TextNode(f"{branch.node_id}.{j}", "category", fname, pred, "",
                            meta={"field": fname, "category": v, "key": key,
                                  "legend": branch.role == "legend-level",
                                  "scope": to_json(branch.predicate),
                                  "summary_field": branch.meta.get("summary_field")})
            _populate_leaves(node, dataset)
            branch.children.append(node)


def _populate_leaves(node: TextNode, dataset: Dataset) -> None:
    rows = _rows(node.predicate, dataset)
    node.children = []
    if not rows or len(rows) > DATUM_LIMIT:
        return
    key = _root_key(node)
    seen = set()
    for r in rows:
        if key:
            constraint = conjoin(*[FieldEqual(k, r[dataset.index(k)]) for k in key])
        else:
            constraint = conjoin(*[FieldEqual(c.name, r[dataset.index(c.name)])
                                   for c in dataset.columns
                                   if r[dataset.index(c.name)] is not None])
        if constraint in seen:
            continue
        seen.add(constraint)
        pred = conjoin(node.predicate, constraint)
        node.children.append(TextNode(f"{node.node_id}.{len(node.children)}",
                                      "datum-summary", None, pred, "",
                                      meta={"key": key}))


# ---------------------------------------------------------------------------
# Descriptions


def describe_node(node: TextNode, dataset: Dataset, visual_present: bool) -> str:
    """Deterministic description; every number is recomputed from the rows
    matching the node's predicate."""
    rows = _rows(node.predicate, dataset)
    if node.role == "root":
        if visual_present:
            base = (f"A {node.meta.get('mark', 'point')} chart of {len(rows)} rows. "
                    f"Fields: {', '.join(node.meta.get('fields', []))}.")
        else:
            base = (f"A dataset with {len(rows)} rows. "
                    f"Fields: {', '.join(node.meta.get('fields', []))}.")
        if not rows:
            base += " No data matches the current selection."
        return base
    if node.role == "facet-level":
        return f"{node.meta['field']}: {fmt(node.meta['category'])}. {len(rows)} rows."
    if node.role in ("axis-level", "legend-level", "field-group"):
        fname = node.meta["field"]
        measure = dataset.measure(fname)
        if node.role == "field-group":
            head = f"Grouped by {fname} ({measure.value})."
        else:
            head = f"{node.meta['label']} is {fname} ({measure.value})."
        return head + _group_summary(rows, dataset, fname, measure)
    if node.role == "interval":
        fname = node.meta["field"]
        values = _field_values(rows, dataset, fname)
        head = f"{fname} from {fmt(node.meta['lo'])} to {fmt(node.meta['hi'])}:"
        if not values:
            return f"{head} no values."
        return (f"{head} {len(values)} values. Mean {fmt(_mean(values))}, "
                f"min {fmt(min(values))}, max {fmt(max(values))}.")
    if node.role == "category":
        fname = node.meta["field"]
        desc = f"{fname}: {fmt(node.meta['category'])}. {len(rows)} rows."
        if node.meta.get("legend") and node.meta.get("summary_field"):
            quart = _legend_quartile(node, dataset)
            if quart is not None:
                mean, ordinal, sfield = quart
                desc += (f" Mean {sfield} is {fmt(mean)}, in the {ordinal} quartile "
                         f"of {sfield} means.")
        return desc
    if node.role == "datum-summary":
        if not rows:
            return "No matching data."
        r = rows[0]
        parts = ", ".join(f"{c.name}: {fmt(r[dataset.index(c.name)])}"
                          for c in dataset.columns if r[dataset.index(c.name)] is not None)
        suffix = "" if len(rows) == 1 else f" ({len(rows)} rows)"
        return parts + suffix
    raise ValueError(f"unknown role {node.role!r}")


def _mean(values) -> float:
    return float(np.mean([float(v) for v in values]))


def _group_summary(rows, dataset, fname, measure) -> str:
    values = _field_values(rows, dataset, fname)
    if not values:
        return " No values."
    if measure == Measure.QUANTITATIVE:
        return (f" {len(values)} values. Mean {fmt(_mean(values))}, "
                f"min {fmt(min(values))}, max {fmt(max(values))}.")
    if measure == Measure.TEMPORAL:
        ordered = sorted(set(values), key=_sort_key)
        return f" Ranges from {fmt(ordered[0])} to {fmt(ordered[-1])}."
    cats = _ordered_distinct(values, measure)
    shown = ", ".join(fmt(c) for c in cats[:6]) + (", ..." if len(cats) > 6 else "")
    return f" {len(cats)} categories: {shown}."


def _legend_quartile(node: TextNode, dataset: Dataset):
    """Position of this category's mean within its siblings' means."""
    from .predicate import from_json as pred_from_json
    sfield = node.meta["summary_field"]
    fname = node.meta["field"]
    scope = pred_from_json(node.meta["scope"])
    scope_rows = _rows(scope, dataset)
    cats = _ordered_distinct(_field_values(scope_rows, dataset, fname),
                             dataset.measure(fname))
    means = {}
    for c in cats:
        vals = _field_values(_rows(conjoin(scope, FieldEqual(fname, c)), dataset),
                             dataset, sfield)
        if vals:
            means[c] = _mean(vals)
    mine = means.get(node.meta["category"])
    if mine is None or len(means) < 2:
        return None
    dist = sorted(means.values())
    q1, q2, q3 = (float(np.percentile(dist, p)) for p in (25, 50, 75))
    if mine < q1:
        ordinal = "1st"
    elif mine < q2:
        ordinal = "2nd"
    elif mine < q3:
        ordinal = "3rd"
    else:
        ordinal = "4th"
    return mine, ordinal, sfield


def _describe_all(node: TextNode, dataset: Dataset, visual_present: bool) -> None:
    node.description = describe_node(node, dataset, visual_present)
    for c in node.children:
        _describe_all(c, dataset, visual_present)


# ---------------------------------------------------------------------------
# Re-scoping (zoom)


def rescope_tree(root: TextNode, filt: Predicate, dataset: Dataset) -> TextNode:
    """Zoom the tree into the filtered data.

    Interval levels whose field is range-constrained by the filter re-bin to
    span only the filtered domain; categories with no matching rows drop;
    every node's predicate is conjoined with the filter.
    """
    new_root = _rescope_node(root, filt, dataset)
    _describe_all(new_root, dataset, bool(root.meta.get("visual")))
    return new_root


def _filter_range(filt: Predicate, fname: str):
    if isinstance(filt, FieldRange) and filt.field == fname:
        return (filt.lo, filt.hi)
    if isinstance(filt, And):
        for p in filt.parts:
            r = _filter_range(p, fname)
            if r is not None:
                return r
    return None


def _rescope_node(node: TextNode, filt: Predicate, dataset: Dataset) -> TextNode:
    pred = conjoin(node.predicate, filt)
    out = TextNode(node.node_id, node.role, node.groupby, pred, "", meta=dict(node.meta))

    if node.role in ("root", "facet-level"):
        kept = []
        for child in node.children:
            if child.role == "facet-level":
                if not _rows(conjoin(child.predicate, filt), dataset):
                    continue
            kept.append(_rescope_node(child, filt, dataset))
        for i, c in enumerate(kept):
            _renumber(c, f"{out.node_id}.{i}")
        out.children = kept
        return out

    if node.role in ("axis-level", "legend-level", "field-group"):
        fname = node.meta["field"]
        measure = dataset.measure(fname)
        if measure == Measure.QUANTITATIVE:
            rng = _filter_range(filt, fname)
            if rng is not None:
                out.meta["zoom_domain"] = (rng[0], rng[1])
            _populate_group(out, dataset)
        else:
            kept = []
            for child in node.children:
                new_child = _rescope_node(child, filt, dataset)
                if child.role == "category" and not _rows(new_child.predicate, dataset):
                    continue
                kept.append(new_child)
            for i, c in enumerate(kept):
                _renumber(c, f"{out.node_id}.{i}")
            out.children = kept
        return out

    if node.role in ("interval", "category"):
        _populate_leaves(out, dataset)
        return out

    return out  # datum-summary regenerated by its parent


def _renumber(node: TextNode, node_id: str) -> None:
    node.node_id = node_id
    for i, c in enumerate(node.children):
        _renumber(c, f"{node_id}.{i}")


# ---------------------------------------------------------------------------
# Serialization


def tree_to_json(node: TextNode) -> dict:
    return {
        "id": node.node_id,
        "role": node.role,
        "groupby": node.groupby,
        "predicate": to_json(node.predicate),
        "description": node.description,
        "children": [tree_to_json(c) for c in node.children],
    }


def tree_to_text(node: TextNode, indent: int = 0) -> str:
    lines = ["  " * indent + node.description]
    for c in node.children:
        lines.append(tree_to_text(c, indent + 1))
    return "\n".join(lines)
