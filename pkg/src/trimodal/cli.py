"""Command-line interface.

Exit codes: 0 success, 2 parse error, 3 invalid spec.
"""

from __future__ import annotations

import json
import os
import pathlib
import sys

import click

from . import artifacts, audio as audio_mod
from .ingest import ParseError, load_typed
from .model import validate
from .predicate import TRUE, from_json as pred_from_json
from .serialize import spec_from_json
from .session import new_session

EXIT_PARSE = 2
EXIT_INVALID = 3


def _fmt_for(path: str) -> str:
    return "json-records" if path.endswith(".json") else "csv"


def _load(dataset_path: str):
    try:
        data = pathlib.Path(dataset_path).read_bytes()
        return load_typed(data, _fmt_for(dataset_path))
    except FileNotFoundError as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(EXIT_PARSE)
    except ParseError as e:
        click.echo(f"parse error: {e}", err=True)
        sys.exit(EXIT_PARSE)


def _resolve_spec(dataset_path: str, spec_path, use_defaults: bool):
    dataset = _load(dataset_path)
    if use_defaults or spec_path is None:
        state = new_session(pathlib.Path(dataset_path).read_bytes(), _fmt_for(dataset_path))
        return dataset, state.spec
    try:
        doc = json.loads(pathlib.Path(spec_path).read_text())
        spec = spec_from_json(doc)
    except (OSError, ValueError, KeyError) as e:
        click.echo(f"parse error: bad spec file: {e}", err=True)
        sys.exit(EXIT_PARSE)
    violations = validate(spec)
    if violations:
        for v in violations:
            click.echo(f"invalid spec: {v.code} at {v.path}: {v.message}", err=True)
        sys.exit(EXIT_INVALID)
    return dataset, spec


def _parse_filter(filter_json):
    if not filter_json:
        return TRUE
    try:
        return pred_from_json(json.loads(filter_json))
    except ValueError as e:
        click.echo(f"parse error: bad filter: {e}", err=True)
        sys.exit(EXIT_PARSE)


@click.group()
def main():
    """Compile datasets into linked visual, textual, and audio artifacts."""


@main.command("validate")
@click.argument("spec_path", type=click.Path())
def validate_cmd(spec_path):
    """Validate a spec file; print violations if any."""
    try:
        doc = json.loads(pathlib.Path(spec_path).read_text())
        spec = spec_from_json(doc)
    except (OSError, ValueError, KeyError) as e:
        click.echo(f"parse error: {e}", err=True)
        sys.exit(EXIT_PARSE)
    violations = validate(spec)
    if violations:
        for v in violations:
            click.echo(f"{v.code} at {v.path}: {v.message}")
        sys.exit(EXIT_INVALID)
    click.echo("valid")


@main.command("compile")
@click.argument("dataset_path", type=click.Path())
@click.argument("outdir", type=click.Path())
@click.option("--spec", "spec_path", type=click.Path(), default=None,
              help="Spec JSON file (default: generate defaults).")
@click.option("--defaults", "use_defaults", is_flag=True,
              help="Generate the default spec from the dataset.")
@click.option("--filter", "filter_json", default=None,
              help="Selection predicate JSON applied to all artifacts.")
@click.option("--wav", "write_wav", is_flag=True, help="Also render WAV audio.")
def compile_cmd(dataset_path, outdir, spec_path, use_defaults, filter_json, write_wav):
    """Write visual doc, text tree (JSON + plain text), and audio schedule."""
    dataset, spec = _resolve_spec(dataset_path, spec_path, use_defaults)
    selection = _parse_filter(filter_json)
    out = pathlib.Path(outdir)
    out.mkdir(parents=True, exist_ok=True)

    doc = artifacts.visual_artifact(spec, dataset, selection)
    if doc is not None:
        (out / "visual.json").write_text(artifacts.dump_json(doc))
    (out / "tree.json").write_text(artifacts.dump_json(
        artifacts.text_artifact(spec, dataset, selection)))
    (out / "tree.txt").write_text(artifacts.text_rendering(spec, dataset, selection))
    (out / "audio.json").write_text(artifacts.dump_json(
        artifacts.audio_artifact(spec, dataset, selection)))
    if write_wav:
        schedules = artifacts.audio_schedules(spec, dataset, selection)
        for s in schedules:
            audio_mod.render_wav(s, str(out / f"audio-{s.unit_id}.wav"))
    click.echo(f"wrote artifacts to {out}")


@main.command("sonify")
@click.argument("dataset_path", type=click.Path())
@click.option("--spec", "spec_path", type=click.Path(), default=None)
@click.option("--defaults", "use_defaults", is_flag=True)
@click.option("--out", "out_path", type=click.Path(), required=True,
              help="Output WAV path (per-unit suffixes added for concat).")
@click.option("--order", default=None, help="Comma-separated traversal field order.")
@click.option("--filter", "filter_json", default=None, help="Predicate JSON.")
@click.option("--rate", type=float, default=1.0)
@click.option("--ticks", type=click.Choice(["on", "off"]), default="on")
@click.option("--unit", "unit_id", default=None, help="Render only this audio unit.")
def sonify_cmd(dataset_path, spec_path, use_defaults, out_path, order,
               filter_json, rate, ticks, unit_id):
    """Render a spec's sonification to WAV plus a speech-cue sidecar."""
    dataset, spec = _resolve_spec(dataset_path, spec_path, use_defaults)
    selection = _parse_filter(filter_json)
    order_t = tuple(order.split(",")) if order else None
    schedules = artifacts.audio_schedules(spec, dataset, selection, rate=rate,
                                          ticks=(ticks == "on"), order=order_t)
    if unit_id is not None:
        schedules = [s for s in schedules if s.unit_id == unit_id]
    if not schedules:
        click.echo("invalid spec: no audio units to render", err=True)
        sys.exit(EXIT_INVALID)
    layered = spec.composition.audio_op == "layer" and len(schedules) > 1
    if layered or len(schedules) == 1:
        wav, cues = audio_mod.render_wav(schedules, out_path, layered=layered)
        click.echo(f"wrote {wav} and {cues}")
    else:
        stem = out_path[:-4] if out_path.endswith(".wav") else out_path
        for s in schedules:
            wav, cues = audio_mod.render_wav(s, f"{stem}-{s.unit_id}.wav")
            click.echo(f"wrote {wav} and {cues}")


@main.command("serve")
@click.option("--host", default=None, help="Bind address (env TRIMODAL_HOST).")
@click.option("--port", type=int, default=None, help="Port (env TRIMODAL_PORT).")
def serve_cmd(host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service import create_app
    host = host or os.environ.get("TRIMODAL_HOST", "127.0.0.1")
    port = port or int(os.environ.get("TRIMODAL_PORT", "8777"))
    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
