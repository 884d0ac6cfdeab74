"""Map export and import: canonical JSON, Graphviz DOT, SVG 1.1, GraphML.

JSON and GraphML are lossless (re-import reproduces the map exactly); DOT
and SVG are drawing formats carrying positions and the black/red/anchor
color scheme.
"""

from __future__ import annotations

import json
import xml.etree.ElementTree as ET
from xml.sax.saxutils import escape, quoteattr

import jsonschema

from .documents import canonical_dumps, load_schema
from .errors import MalformedDocumentError, UnsupportedFormatError
from .keygraph import KeyGraphMap, LinkKind, MapEdge, MapNode, MapParams, NodeRole

FORMATS = ("json", "dot", "svg", "graphml")

_NODE_FILL = {"black": "#000000", "red": "#cc0000", "anchor": "#8888aa"}
_LABEL_FILL = {"black": "#ffffff", "red": "#ffffff", "anchor": "#ffffff"}


def map_to_doc(graph_map: KeyGraphMap) -> dict:
    return {
        "nodes": [
            {
                "term": n.term,
                "role": n.role.value,
                "display_color": n.display_color,
                "sources": list(n.sources),
                "position": [n.position[0], n.position[1]],
            }
            for n in graph_map.nodes
        ],
        "edges": [
            {"a": e.a, "b": e.b, "weight": e.weight, "kind": e.kind.value}
            for e in graph_map.edges
        ],
        "islands": [list(g) for g in graph_map.islands],
        "params": graph_map.params.to_doc(),
        "seed": graph_map.seed,
    }


def map_from_doc(doc: dict) -> KeyGraphMap:
    errors = sorted(
        jsonschema.Draft202012Validator(load_schema("map")).iter_errors(doc), key=str
    )
    if errors:
        raise MalformedDocumentError(f"map document invalid: {errors[0].message}")
    nodes = tuple(
        MapNode(
            term=n["term"],
            role=NodeRole(n["role"]),
            sources=tuple(n["sources"]),
            position=(float(n["position"][0]), float(n["position"][1])),
        )
        for n in doc["nodes"]
    )
    edges = tuple(
        MapEdge(a=e["a"], b=e["b"], weight=float(e["weight"]), kind=LinkKind(e["kind"]))
        for e in doc["edges"]
    )
    return KeyGraphMap(
        nodes=nodes,
        edges=edges,
        islands=tuple(tuple(g) for g in doc["islands"]),
        params=MapParams.from_doc(doc["params"]),
        seed=doc["seed"],
    )


def to_json(graph_map: KeyGraphMap) -> bytes:
    return canonical_dumps(map_to_doc(graph_map)).encode("utf-8")


def from_json(data: bytes | str) -> KeyGraphMap:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return map_from_doc(json.loads(data))


# --- DOT ---------------------------------------------------------------------


def _dot_id(term: str) -> str:
    return '"' + term.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(graph_map: KeyGraphMap) -> bytes:
    lines = ["graph leafmap {", "  layout=neato;", "  node [style=filled];"]
    for n in graph_map.nodes:
        color = _NODE_FILL[n.display_color]
        shape = "box" if n.role is NodeRole.ENTITY_ANCHOR else "ellipse"
        lines.append(
            f"  {_dot_id(n.term)} [fillcolor={quoteattr(color)}, fontcolor=white, "
            f"shape={shape}, pos=\"{n.position[0]},{n.position[1]}!\"];"
        )
    for e in graph_map.edges:
        style = "solid" if e.kind is LinkKind.ISLAND else "dashed"
        lines.append(
            f"  {_dot_id(e.a)} -- {_dot_id(e.b)} [weight={e.weight}, style={style}];"
        )
    lines.append("}")
    return ("\n".join(lines) + "\n").encode("utf-8")


# --- SVG ---------------------------------------------------------------------

_SVG_SIZE = (800.0, 600.0)
_SVG_MARGIN = 60.0


def _svg_transform(graph_map: KeyGraphMap):
    xs = [n.position[0] for n in graph_map.nodes] or [0.0]
    ys = [n.position[1] for n in graph_map.nodes] or [0.0]
    min_x, max_x = min(xs), max(xs)
    min_y, max_y = min(ys), max(ys)
    span_x = max(max_x - min_x, 1e-9)
    span_y = max(max_y - min_y, 1e-9)
    scale = min(
        (_SVG_SIZE[0] - 2 * _SVG_MARGIN) / span_x,
        (_SVG_SIZE[1] - 2 * _SVG_MARGIN) / span_y,
    )

    def tx(p: tuple[float, float]) -> tuple[float, float]:
        return (
            round(_SVG_MARGIN + (p[0] - min_x) * scale, 2),
            round(_SVG_MARGIN + (p[1] - min_y) * scale, 2),
        )

    return tx


def to_svg(graph_map: KeyGraphMap) -> bytes:
    tx = _svg_transform(graph_map)
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_SVG_SIZE[0]:.0f}" height="{_SVG_SIZE[1]:.0f}">',
        '  <g class="edges" stroke="#999999">',
    ]
    positions = {n.term: tx(n.position) for n in graph_map.nodes}
    for e in graph_map.edges:
        (x1, y1), (x2, y2) = positions[e.a], positions[e.b]
        dash = ' stroke-dasharray="4 2"' if e.kind is LinkKind.BRIDGE else ""
        parts.append(
            f'    <line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"{dash}/>'
        )
    parts.append("  </g>")
    parts.append('  <g class="nodes" font-size="10" font-family="sans-serif">')
    for n in graph_map.nodes:
        x, y = positions[n.term]
        fill = _NODE_FILL[n.display_color]
        label = escape(n.term.lstrip("#"))
        if n.role is NodeRole.ENTITY_ANCHOR:
            parts.append(
                f'    <rect x="{x - 7}" y="{y - 7}" width="14" height="14" '
                f'fill="{fill}" data-role="{n.role.value}"/>'
            )
        else:
            parts.append(
                f'    <circle cx="{x}" cy="{y}" r="7" fill="{fill}" '
                f'data-role="{n.role.value}"/>'
            )
        parts.append(f'    <text x="{x + 9}" y="{y + 3}">{label}</text>')
    parts.append("  </g>")
    parts.append("</svg>")
    return ("\n".join(parts) + "\n").encode("utf-8")


# --- GraphML -----------------------------------------------------------------

_GRAPHML_KEYS = [
    ("role", "node", "string"),
    ("color", "node", "string"),
    ("sources", "node", "string"),
    ("x", "node", "double"),
    ("y", "node", "double"),
    ("island", "node", "int"),
    ("weight", "edge", "double"),
    ("kind", "edge", "string"),
    ("params", "graph", "string"),
    ("seed", "graph", "int"),
]


def to_graphml(graph_map: KeyGraphMap) -> bytes:
    island_of = {
        term: gi for gi, group in enumerate(graph_map.islands) for term in group
    }
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<graphml xmlns="http://graphml.graphdrawing.org/xmlns">',
    ]
    for name, domain, kind in _GRAPHML_KEYS:
        lines.append(
            f'  <key id="{name}" for="{domain}" attr.name="{name}" attr.type="{kind}"/>'
        )
    lines.append('  <graph id="leafmap" edgedefault="undirected">')
    params_json = json.dumps(graph_map.params.to_doc(), sort_keys=True)
    lines.append(f'    <data key="params">{escape(params_json)}</data>')
    lines.append(f'    <data key="seed">{graph_map.seed}</data>')
    for n in graph_map.nodes:
        lines.append(f"    <node id={quoteattr(n.term)}>")
        lines.append(f'      <data key="role">{escape(n.role.value)}</data>')
        lines.append(f'      <data key="color">{escape(n.display_color)}</data>')
        lines.append(
            '      <data key="sources">'
            + escape(",".join(str(s) for s in n.sources))
            + "</data>"
        )
        lines.append(f'      <data key="x">{n.position[0]}</data>')
        lines.append(f'      <data key="y">{n.position[1]}</data>')
        if n.term in island_of:
            lines.append(f'      <data key="island">{island_of[n.term]}</data>')
        lines.append("    </node>")
    for e in graph_map.edges:
        lines.append(f"    <edge source={quoteattr(e.a)} target={quoteattr(e.b)}>")
        lines.append(f'      <data key="weight">{e.weight}</data>')
        lines.append(f'      <data key="kind">{escape(e.kind.value)}</data>')
        lines.append("    </edge>")
    lines.append("  </graph>")
    lines.append("</graphml>")
    return ("\n".join(lines) + "\n").encode("utf-8")


def from_graphml(data: bytes | str) -> KeyGraphMap:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    ns = {"g": "http://graphml.graphdrawing.org/xmlns"}
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise MalformedDocumentError(f"graphml parse error: {exc}") from exc
    graph = root.find("g:graph", ns)
    if graph is None:
        raise MalformedDocumentError("graphml has no graph element")

    def data_of(el) -> dict[str, str]:
        return {
            d.attrib["key"]: (d.text or "")
            for d in el.findall("g:data", ns)
        }

    graph_data = data_of(graph)
    params = MapParams.from_doc(json.loads(graph_data.get("params", "{}")))
    seed = int(graph_data.get("seed", "0"))

    nodes = []
    island_members: dict[int, list[str]] = {}
    for el in graph.findall("g:node", ns):
        values = data_of(el)
        term = el.attrib["id"]
        sources = tuple(int(s) for s in values.get("sources", "").split(",") if s)
        nodes.append(
            MapNode(
                term=term,
                role=NodeRole(values["role"]),
                sources=sources,
                position=(float(values["x"]), float(values["y"])),
            )
        )
        if "island" in values:
            island_members.setdefault(int(values["island"]), []).append(term)
    edges = tuple(
        MapEdge(
            a=el.attrib["source"],
            b=el.attrib["target"],
            weight=float(data_of(el)["weight"]),
            kind=LinkKind(data_of(el)["kind"]),
        )
        for el in graph.findall("g:edge", ns)
    )
    islands = tuple(
        tuple(sorted(island_members[gi])) for gi in sorted(island_members)
    )
    return KeyGraphMap(
        nodes=tuple(nodes), edges=edges, islands=islands, params=params, seed=seed
    )


def export_map(graph_map: KeyGraphMap, fmt: str) -> bytes:
    if fmt == "json":
        return to_json(graph_map)
    if fmt == "dot":
        return to_dot(graph_map)
    if fmt == "svg":
        return to_svg(graph_map)
    if fmt == "graphml":
        return to_graphml(graph_map)
    raise UnsupportedFormatError(fmt)
