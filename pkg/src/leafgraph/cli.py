"""Command-line entry point.

Subcommands cover the file workflows (validate/translate/map/fit/analyze)
and the live service (serve). Outputs are written atomically: temp file in
the target directory, then rename. Exit codes: 0 success, 1 validation
findings, 2 usage errors.
"""

from __future__ import annotations

import hashlib
import os
import sys
import tempfile
from pathlib import Path

import click

from . import analytics, coevolution, documents, exporters, keygraph
from .errors import LeafGraphError
from .model import validate as validate_entity
from .service.app import ServiceConfig, serve as run_service
from .service.store import replay_file
from .translator import Lexicon, translate as translate_jacket


def _atomic_write(path: Path, data: bytes) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load_lexicon(spec: str) -> Lexicon:
    if spec == "default":
        return Lexicon.default()
    return Lexicon.from_file(Path(spec))


@click.group()
def main():
    """Scenario-oriented dataset metadata tooling."""


@main.command("validate")
@click.option("--leaves", type=click.Path(exists=True, file_okay=False), help="Directory of leaf documents.")
@click.option("--jackets", type=click.Path(exists=True, file_okay=False), help="Directory of jacket documents.")
@click.option("--fc", type=click.Path(exists=True, dir_okay=False), help="Feature concept document.")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True)
def validate_cmd(leaves, jackets, fc, fmt):
    """Check catalog documents against every invariant; exit 1 on findings."""
    if not (leaves or jackets or fc):
        raise click.UsageError("nothing to validate: pass --leaves, --jackets, or --fc")
    findings = []
    jacket_index = {}
    try:
        if jackets:
            for jacket in documents.load_jackets(Path(jackets)):
                if jacket.id in jacket_index:
                    findings.append({"entity": jacket.id, "code": "DuplicateId", "field": "id", "message": "jacket id repeats in catalog"})
                jacket_index[jacket.id] = jacket
                for v in validate_entity(jacket):
                    findings.append({"entity": jacket.id, "code": v.code, "field": v.field, "message": v.message})
        if leaves:
            seen = set()
            for leaf in documents.load_leaves(Path(leaves)):
                if leaf.id in seen:
                    findings.append({"entity": leaf.id, "code": "DuplicateId", "field": "id", "message": "leaf id repeats in catalog"})
                seen.add(leaf.id)
                # a --jackets directory is the authoritative catalog for cross-checks
                for v in validate_entity(leaf, jackets=jacket_index if jackets else None):
                    findings.append({"entity": leaf.id, "code": v.code, "field": v.field, "message": v.message})
        if fc:
            concept = documents.load_feature_concept(Path(fc))
            for v in validate_entity(concept):
                findings.append({"entity": concept.id, "code": v.code, "field": v.field, "message": v.message})
    except LeafGraphError as exc:
        raise click.ClickException(str(exc))
    if fmt == "json":
        click.echo(documents.canonical_dumps({"findings": findings}), nl=False)
    else:
        for f in findings:
            click.echo(f"{f['entity']}: {f['code']} at {f['field']}: {f['message']}")
        click.echo(f"{len(findings)} finding(s)")
    if findings:
        sys.exit(1)


@main.command("translate")
@click.option("--jackets", "jackets_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--lexicon", "lexicon_spec", default="default", show_default=True, help="Lexicon file, or 'default' for the packaged one.")
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False))
def translate_cmd(jackets_dir, lexicon_spec, out_dir):
    """Draft scenario leaves from every jacket in a directory."""
    try:
        lexicon = _load_lexicon(lexicon_spec)
        jackets = documents.load_jackets(Path(jackets_dir))
        if not jackets:
            raise click.ClickException(f"no jacket documents in {jackets_dir}")
        for jacket in jackets:
            report = translate_jacket(jacket, lexicon)
            _atomic_write(Path(out_dir) / f"{jacket.id}.json", documents.serialize(report.leaf))
            _atomic_write(
                Path(out_dir) / f"{jacket.id}.report.json",
                report.dumps().encode("utf-8"),
            )
            click.echo(
                f"{jacket.id}: {len(report.leaf.graph.nodes)} node(s), "
                f"{len(report.unmapped_variables)} unmapped variable(s)"
            )
    except LeafGraphError as exc:
        raise click.ClickException(str(exc))


@main.command("map")
@click.option("--leaves", "entities_dir", required=True, type=click.Path(exists=True, file_okay=False), help="Directory of documents to index.")
@click.option("--jackets", "jacket_mode", is_flag=True, help="Treat the directory as jackets (variable-word map).")
@click.option("--params", "params_file", type=click.Path(exists=True, dir_okay=False), help="Map parameter file (nf/nl/nk).")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--format", "fmt", type=click.Choice(list(exporters.FORMATS)), default="json", show_default=True)
@click.option("--out", "out_file", required=True, type=click.Path(dir_okay=False))
def map_cmd(entities_dir, jacket_mode, params_file, seed, fmt, out_file):
    """Build a connectivity map over a catalog directory."""
    try:
        if jacket_mode:
            entities = documents.load_jackets(Path(entities_dir))
        else:
            entities = documents.load_leaves(Path(entities_dir))
        params = (
            keygraph.MapParams.from_file(Path(params_file))
            if params_file
            else keygraph.MapParams()
        )
        corpus = keygraph.build_corpus(entities)
        graph_map = keygraph.assemble_map(corpus, params, seed)
        _atomic_write(Path(out_file), exporters.export_map(graph_map, fmt))
    except LeafGraphError as exc:
        raise click.ClickException(str(exc))
    click.echo(f"wrote {fmt} map with {len(graph_map.nodes)} node(s) to {out_file}")


@main.command("fit")
@click.option("--fc", "fc_file", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--leaves", "leaves_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--threshold", type=float, default=coevolution.DEFAULT_THRESHOLD, show_default=True)
@click.option("--out", "out_file", required=True, type=click.Path(dir_okay=False))
def fit_cmd(fc_file, leaves_dir, threshold, out_file):
    """Wrap a feature concept with a leaf catalog and report coverage."""
    try:
        concept = documents.load_feature_concept(Path(fc_file))
        leaves = documents.load_leaves(Path(leaves_dir))
        wrapped = coevolution.wrap(concept, leaves, threshold)
        report = coevolution.fit_report_doc(wrapped, threshold)
        _atomic_write(Path(out_file), documents.canonical_dumps(report).encode("utf-8"))
    except LeafGraphError as exc:
        raise click.ClickException(str(exc))
    click.echo(
        f"coverage {report['coverage']:.3f}, {len(report['bridges'])} bridge(s), "
        f"{len(report['gap_stubs'])} gap stub(s); wrote {out_file}"
    )


@main.command("analyze")
@click.option("--map", "map_file", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--session", "session_file", type=click.Path(exists=True, dir_okay=False), help="Session log (ndjson) for tallies and proximity.")
@click.option("--lexicon", "lexicon_spec", default="default", show_default=True)
@click.option("--out", "out_file", required=True, type=click.Path(dir_okay=False))
def analyze_cmd(map_file, session_file, lexicon_spec, out_file):
    """Degree, tally, and sticker-proximity reports for a map."""
    try:
        lexicon = _load_lexicon(lexicon_spec)
        graph_map = exporters.from_json(Path(map_file).read_bytes())
        report: dict = {"degrees": analytics.degree_report(graph_map, lexicon).to_doc()}
        if session_file:
            state = replay_file(Path(session_file))
            report["tally"] = analytics.tally_doc(state)
            stickers = _stickers_for_map(state, graph_map)
            if stickers:
                report["proximity"] = analytics.sticker_proximity(
                    graph_map, stickers, lexicon
                ).to_doc()
        _atomic_write(Path(out_file), documents.canonical_dumps(report).encode("utf-8"))
    except LeafGraphError as exc:
        raise click.ClickException(str(exc))
    click.echo(f"wrote analysis to {out_file}")


def _stickers_for_map(state, graph_map):
    """Stickers belonging to this map: matched by attachment hash when
    possible, otherwise all stickers of the single active map id."""
    digest = hashlib.sha256(
        documents.canonical_dumps(exporters.map_to_doc(graph_map)).encode("utf-8")
    ).hexdigest()
    map_ids = {mid for mid, h in state.maps.items() if h == digest}
    if not map_ids:
        active = {s.map_id for s in state.stickers.values()}
        if len(active) == 1:
            map_ids = active
    return [s for s in sorted(state.stickers.values(), key=lambda s: s.sticker_id) if s.map_id in map_ids]


@main.command("serve")
@click.option("--port", type=int, default=None, help="Listen port (default: LEAFGRAPH_PORT or 8400).")
@click.option("--data-dir", type=click.Path(file_okay=False), default=None, help="Event log and map storage directory.")
@click.option("--cors-origin", "cors_origins", multiple=True, help="Allowed board origins; repeatable.")
def serve_cmd(port, data_dir, cors_origins):
    """Run the live session service."""
    try:
        config = ServiceConfig.from_env(
            port=port, data_dir=data_dir, cors_origins=cors_origins or None
        )
        run_service(config)
    except LeafGraphError as exc:
        raise click.ClickException(str(exc))


if __name__ == "__main__":
    main()
