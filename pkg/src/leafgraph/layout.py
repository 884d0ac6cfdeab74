"""Seeded force-directed placement with reproducible output.

Plain Fruchterman-Reingold in pure Python: seeded uniform initial
positions, a fixed iteration count, repulsion between all node pairs, and
attraction along edges proportional to edge weight. Node order, float
arithmetic, and the final 6-decimal rounding are all fixed, so the same
(map, seed) yields byte-identical positions on any platform. The layout is
recentered on its centroid, which also pins a single-node map to the
origin.
"""

from __future__ import annotations

import math
import random
from typing import TYPE_CHECKING, Mapping

if TYPE_CHECKING:
    from .keygraph import KeyGraphMap

ITERATIONS = 200
_SPREAD = 1.0  # half-width of the initial placement box


def _initial_positions(terms: list[str], seed: int) -> dict[str, list[float]]:
    rng = random.Random(seed)
    return {t: [rng.uniform(-_SPREAD, _SPREAD), rng.uniform(-_SPREAD, _SPREAD)] for t in terms}


def layout(graph_map: "KeyGraphMap", seed: int) -> "KeyGraphMap":
    """Return a copy of the map with deterministic positions."""
    terms = sorted(n.term for n in graph_map.nodes)
    n = len(terms)
    if n == 0:
        return graph_map
    pos = _initial_positions(terms, seed)
    if n == 1:
        return graph_map.with_positions({terms[0]: (0.0, 0.0)})

    k = _SPREAD * 2.0 / math.sqrt(n)
    edges = [(e.a, e.b, e.weight) for e in graph_map.edges if e.a != e.b]
    max_weight = max((w for _, _, w in edges), default=1.0) or 1.0
    temperature = _SPREAD / 2.0
    cooling = temperature / (ITERATIONS + 1)

    for _ in range(ITERATIONS):
        disp = {t: [0.0, 0.0] for t in terms}
        for i, a in enumerate(terms):
            pax, pay = pos[a]
            for b in terms[i + 1 :]:
                dx = pax - pos[b][0]
                dy = pay - pos[b][1]
                dist = math.hypot(dx, dy)
                if dist < 1e-9:
                    # identical positions: nudge along a fixed direction
                    dx, dy, dist = 1e-6, 0.0, 1e-6
                force = k * k / dist
                ux, uy = dx / dist, dy / dist
                disp[a][0] += ux * force
                disp[a][1] += uy * force
                disp[b][0] -= ux * force
                disp[b][1] -= uy * force
        for a, b, weight in edges:
            dx = pos[a][0] - pos[b][0]
            dy = pos[a][1] - pos[b][1]
            dist = math.hypot(dx, dy)
            if dist < 1e-9:
                continue
            force = (weight / max_weight) * dist * dist / k
            ux, uy = dx / dist, dy / dist
            disp[a][0] -= ux * force
            disp[a][1] -= uy * force
            disp[b][0] += ux * force
            disp[b][1] += uy * force
        for t in terms:
            dx, dy = disp[t]
            length = math.hypot(dx, dy)
            if length < 1e-12:
                continue
            step = min(length, temperature)
            pos[t][0] += dx / length * step
            pos[t][1] += dy / length * step
        temperature -= cooling

    cx = sum(p[0] for p in pos.values()) / n
    cy = sum(p[1] for p in pos.values()) / n
    final: Mapping[str, tuple[float, float]] = {
        # "+ 0.0" folds -0.0 into 0.0 so exports never differ on sign of zero
        t: (round(pos[t][0] - cx, 6) + 0.0, round(pos[t][1] - cy, 6) + 0.0)
        for t in terms
    }
    return graph_map.with_positions(final)
